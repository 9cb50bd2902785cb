#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "maca/error.hpp"
#include "maca/judge.hpp"
#include "maca/teacher.hpp"

using namespace maca;

namespace {

MetadataLabel meta(std::string topic, std::string sub, std::string intent,
                   std::set<std::string> entities) {
    MetadataLabel m;
    m.topic = std::move(topic);
    m.sub_topic = std::move(sub);
    m.intent = std::move(intent);
    m.entities = std::move(entities);
    return m;
}

FaqItem faq(std::string id, std::string question, std::string answer, MetadataLabel m) {
    FaqItem f;
    f.id = std::move(id);
    f.question = std::move(question);
    f.answer = std::move(answer);
    f.meta = std::move(m);
    return f;
}

TeacherJudgment judgment(std::string faq_id, Grade label, double score) {
    TeacherJudgment j;
    j.faq_id = std::move(faq_id);
    j.label = label;
    j.relevance_score = score;
    return j;
}

} // namespace

TEST_CASE("calibrated margin: reference value, floor and clip") {
    JudgeConfig cfg; // gamma 0.2, m_max 1.0
    CHECK(std::fabs(calibrated_margin(0.87, 0.45, cfg) - 0.42) < 1e-12);
    // Negative below the floor behaves as if it scored gamma.
    CHECK(calibrated_margin(0.9, 0.05, cfg) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(calibrated_margin(0.9, 0.0, cfg) == calibrated_margin(0.9, 0.2, cfg));
    // Clipping at both ends.
    JudgeConfig tight;
    tight.m_max = 0.5;
    CHECK(calibrated_margin(1.0, -0.7, tight) == 0.5);
    CHECK(calibrated_margin(0.0, 1.0, tight) == -0.5);
    CHECK(calibrated_margin(0.1, 0.9, cfg) == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("judge config validation") {
    JudgeConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    JudgeConfig bad = cfg;
    bad.m_max = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.gamma = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.k_s = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("positive selection prefers exact, then partial, then gives up") {
    auto pos = select_positive({
        judgment("f1", Grade::partial, 0.9),
        judgment("f2", Grade::exact, 0.6),
        judgment("f3", Grade::exact, 0.8),
        judgment("f4", Grade::less_relevant, 0.95),
    });
    REQUIRE(pos.has_value());
    CHECK(pos->faq_id == "f3"); // best exact beats better-scored partial

    auto partial_only = select_positive({
        judgment("f1", Grade::partial, 0.4),
        judgment("f2", Grade::partial, 0.7),
        judgment("f3", Grade::irrelevant, 0.9),
    });
    REQUIRE(partial_only.has_value());
    CHECK(partial_only->faq_id == "f2");

    CHECK_FALSE(select_positive({judgment("f1", Grade::less_relevant, 0.9),
                                 judgment("f2", Grade::irrelevant, 0.8)})
                    .has_value());
    CHECK_FALSE(select_positive({}).has_value());
}

TEST_CASE("positive selection breaks score ties on smaller id") {
    auto pos = select_positive({
        judgment("f9", Grade::exact, 0.8),
        judgment("f2", Grade::exact, 0.8),
    });
    REQUIRE(pos.has_value());
    CHECK(pos->faq_id == "f2");
}

namespace {

struct MiningFixture {
    std::map<std::string, FaqItem> corpus;
    std::map<std::string, TeacherJudgment> judged;
    TeacherJudgment positive;
    RankedList student;

    MiningFixture() {
        corpus["pos"] = faq("pos", "activate debit card", "app",
                            meta("cards", "activate_card", "how_to", {"debit card"}));
        corpus["nm1"] = faq("nm1", "activate credit card", "app",
                            meta("cards", "activate_card", "how_to", {"credit card"}));
        corpus["nm2"] = faq("nm2", "close card account", "branch",
                            meta("cards", "close_account", "policy_limit", {"card account"}));
        corpus["off"] = faq("off", "mortgage rates", "call",
                            meta("loans", "home_loan", "eligibility", {"mortgage"}));
        corpus["par"] = faq("par", "card fees", "list",
                            meta("cards", "fee_schedule", "how_to", {"debit card"}));

        positive = judgment("pos", Grade::exact, 0.9);
        positive.top_matching_entity = "debit card";

        judged["pos"] = positive;
        judged["nm1"] = judgment("nm1", Grade::less_relevant, 0.6);
        judged["nm2"] = judgment("nm2", Grade::less_relevant, 0.5);
        judged["off"] = judgment("off", Grade::irrelevant, 0.05);
        judged["par"] = judgment("par", Grade::partial, 0.55);

        student.query_id = "q";
        student.view = View::student;
        student.entries = {{"pos", 0.99}, {"nm1", 0.8}, {"nm2", 0.7}, {"par", 0.6}, {"off", 0.5}};
    }
};

} // namespace

TEST_CASE("near misses require student presence, bad labels and shared metadata") {
    MiningFixture fx;
    auto set = near_miss_set(fx.positive, fx.student, fx.judged, fx.corpus, 10);
    // nm1, nm2 qualify; par is partial (too relevant); off shares nothing
    // with the positive even though it is irrelevant.
    CHECK(set == std::set<std::string>{"nm1", "nm2"});

    // Tight student cutoff hides nm2.
    auto top2 = near_miss_set(fx.positive, fx.student, fx.judged, fx.corpus, 2);
    CHECK(top2 == std::set<std::string>{"nm1"});
}

TEST_CASE("near misses never include the positive itself") {
    MiningFixture fx;
    fx.judged["pos"].label = Grade::less_relevant; // pathological relabel
    auto set = near_miss_set(fx.positive, fx.student, fx.judged, fx.corpus, 10);
    CHECK(set.count("pos") == 0);
}

TEST_CASE("hard negative takes the highest-student-scored near miss") {
    MiningFixture fx;
    auto hn = select_hard_negative({"nm1", "nm2"}, fx.student, fx.judged, fx.corpus, "pos", 10);
    REQUIRE(hn.has_value());
    CHECK(hn->first == "nm1");
    CHECK(hn->second == Provenance::near_miss);
}

TEST_CASE("hard negative tie-break walks topic, intent, overlap, teacher score, id") {
    MiningFixture fx;
    fx.student.entries = {{"pos", 0.99}, {"nm1", 0.8}, {"nm2", 0.8}};
    // Same student score. nm1 shares intent with the positive (how_to),
    // nm2 does not; both share the topic.
    auto hn = select_hard_negative({"nm1", "nm2"}, fx.student, fx.judged, fx.corpus, "pos", 10);
    REQUIRE(hn.has_value());
    CHECK(hn->first == "nm1");

    // Make them identical on metadata: larger teacher score wins.
    fx.corpus["nm2"].meta.intent = "how_to";
    fx.judged["nm2"].relevance_score = 0.7;
    auto hn2 = select_hard_negative({"nm1", "nm2"}, fx.student, fx.judged, fx.corpus, "pos", 10);
    REQUIRE(hn2.has_value());
    CHECK(hn2->first == "nm2");

    // Fully tied: smaller id.
    fx.judged["nm2"].relevance_score = 0.6;
    fx.corpus["nm2"].meta.entities = fx.corpus["nm1"].meta.entities;
    auto hn3 = select_hard_negative({"nm1", "nm2"}, fx.student, fx.judged, fx.corpus, "pos", 10);
    REQUIRE(hn3.has_value());
    CHECK(hn3->first == "nm1");
}

TEST_CASE("hard negative falls back to the best-ranked non-relevant candidate") {
    MiningFixture fx;
    auto hn = select_hard_negative({}, fx.student, fx.judged, fx.corpus, "pos", 10);
    REQUIRE(hn.has_value());
    CHECK(hn->first == "nm1"); // highest student rank among non-relevant labels
    CHECK(hn->second == Provenance::fallback_nonrelevant);

    // Nothing non-relevant in the student list at all: no negative.
    fx.judged["nm1"].label = Grade::partial;
    fx.judged["nm2"].label = Grade::exact;
    fx.judged["off"].label = Grade::partial;
    auto none = select_hard_negative({}, fx.student, fx.judged, fx.corpus, "pos", 10);
    CHECK_FALSE(none.has_value());
}

namespace {

std::map<std::string, FaqItem> mining_corpus() {
    std::map<std::string, FaqItem> corpus;
    corpus["faq-a"] = faq("faq-a", "activate debit card", "use the app to activate",
                          meta("cards", "activate_card", "how_to", {"debit card"}));
    corpus["faq-b"] = faq("faq-b", "activate credit card", "visit a branch to activate",
                          meta("cards", "activate_card", "how_to", {"credit card"}));
    corpus["faq-c"] = faq("faq-c", "wire transfer fee", "see the fee table",
                          meta("transfers", "wire_fee", "policy_limit", {"wire"}));
    return corpus;
}

Query make_query(const std::string& id, const std::string& text, const MetadataLabel& m) {
    Query q;
    q.id = id;
    q.text = text;
    q.meta = m;
    return q;
}

} // namespace

TEST_CASE("mining emits calibrated triplets and judges unjudged candidates on demand") {
    auto corpus = mining_corpus();
    LexicalCoverage coverage;
    JudgeConfig cfg;

    auto q1 = make_query("q1", "activate my debit card",
                         meta("cards", "activate_card", "how_to", {"debit card"}));
    auto q2 = make_query("q2", "wire transfer fee",
                         meta("transfers", "wire_fee", "policy_limit", {"wire"}));

    // Teacher saw only faq-a for q1; the student also surfaces faq-b, which
    // must get judged on demand to qualify as a near miss.
    std::map<std::string, std::vector<TeacherJudgment>> teacher_outputs;
    {
        TeacherResult r1;
        LexicalCoverage cov;
        teacher_outputs["q1"] = {judge_candidate(*q1.meta, q1.text, corpus["faq-a"], cov)};
        teacher_outputs["q2"] = {judge_candidate(*q2.meta, q2.text, corpus["faq-c"], cov),
                                 judge_candidate(*q2.meta, q2.text, corpus["faq-a"], cov)};
    }

    StudentRankFn student = [&](const Query& q, std::size_t) {
        RankedList list;
        list.query_id = q.id;
        list.view = View::student;
        if (q.id == "q1") {
            list.entries = {{"faq-a", 0.9}, {"faq-b", 0.85}, {"faq-c", 0.1}};
        } else {
            list.entries = {{"faq-c", 0.95}, {"faq-a", 0.2}, {"faq-b", 0.15}};
        }
        return list;
    };

    auto result = mine_triplets({q2, q1}, teacher_outputs, student, corpus, coverage, cfg);
    CHECK(result.stats.queries_seen == 2);
    REQUIRE(result.triplets.size() >= 1);

    // Sorted by query id regardless of input order.
    for (std::size_t i = 1; i < result.triplets.size(); ++i) {
        CHECK(result.triplets[i - 1].query_id <= result.triplets[i].query_id);
    }
    CHECK(result.triplets.front().query_id == "q1");
    CHECK(result.triplets.front().pos_id == "faq-a");
    CHECK(result.triplets.front().neg_id == "faq-b");
    CHECK(result.triplets.front().provenance == Provenance::near_miss);

    // Every margin satisfies the calibration inequality against the teacher.
    for (const auto& t : result.triplets) {
        std::map<std::string, TeacherJudgment> judged;
        LexicalCoverage cov;
        auto qm = t.query_id == "q1" ? *q1.meta : *q2.meta;
        auto qt = t.query_id == "q1" ? q1.text : q2.text;
        double s_pos = judge_candidate(qm, qt, corpus[t.pos_id], cov).relevance_score;
        double s_neg = judge_candidate(qm, qt, corpus[t.neg_id], cov).relevance_score;
        CHECK(t.delta_t == doctest::Approx(calibrated_margin(s_pos, s_neg, cfg)).epsilon(1e-12));
        CHECK(s_pos - s_neg >= t.delta_t - 1e-9);
        CHECK(t.delta_t <= cfg.m_max);
        CHECK(t.delta_t >= -cfg.m_max);
    }
}

TEST_CASE("mining skips queries without usable teacher output") {
    auto corpus = mining_corpus();
    LexicalCoverage coverage;
    auto q = make_query("q-none", "activate my debit card",
                        meta("cards", "activate_card", "how_to", {"debit card"}));
    StudentRankFn student = [&](const Query& query, std::size_t) {
        RankedList list;
        list.query_id = query.id;
        list.view = View::student;
        list.entries = {{"faq-a", 0.9}};
        return list;
    };

    std::map<std::string, std::vector<TeacherJudgment>> empty_outputs;
    auto res = mine_triplets({q}, empty_outputs, student, corpus, coverage, {});
    CHECK(res.triplets.empty());
    CHECK(res.stats.skipped_no_teacher_output == 1);

    // Teacher output exists but has no exact/partial candidate: no positive.
    std::map<std::string, std::vector<TeacherJudgment>> bad_outputs;
    bad_outputs["q-none"] = {judgment("faq-c", Grade::irrelevant, 0.05)};
    auto res2 = mine_triplets({q}, bad_outputs, student, corpus, coverage, {});
    CHECK(res2.triplets.empty());
    CHECK(res2.stats.skipped_no_positive == 1);
}

TEST_CASE("triplets round-trip through jsonl") {
    auto dir = std::filesystem::temp_directory_path() / "maca_judge_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "triplets.jsonl";
    std::vector<Triplet> triplets{
        {"q1", "activate my card", "faq-a", "faq-b", 0.42, Provenance::near_miss},
        {"q2", "wire fee", "faq-c", "faq-a", -0.1, Provenance::fallback_nonrelevant},
    };
    save_triplets(triplets, path);
    auto back = load_triplets(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].query_id == "q1");
    CHECK(back[0].query_text == "activate my card");
    CHECK(back[0].pos_id == "faq-a");
    CHECK(back[0].neg_id == "faq-b");
    CHECK(back[0].delta_t == 0.42);
    CHECK(back[0].provenance == Provenance::near_miss);
    CHECK(back[1].provenance == Provenance::fallback_nonrelevant);
    std::filesystem::remove_all(dir);
}

TEST_CASE("provenance names round-trip") {
    CHECK(provenance_from_name(provenance_name(Provenance::near_miss)) == Provenance::near_miss);
    CHECK(provenance_from_name(provenance_name(Provenance::fallback_nonrelevant)) ==
          Provenance::fallback_nonrelevant);
    CHECK_THROWS_AS(provenance_from_name("bogus"), DataError);
}
