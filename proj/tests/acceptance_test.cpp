// Acceptance gate: every release-blocking behavior, one pass/fail line each.
// Exit status is the number of failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maca/corpus.hpp"
#include "maca/distill.hpp"
#include "maca/embed.hpp"
#include "maca/judge.hpp"
#include "maca/pipeline.hpp"
#include "maca/retrieve.hpp"
#include "maca/synth.hpp"
#include "maca/teacher.hpp"
#include "maca/text.hpp"
#include "maca/trust.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace maca;

namespace {

struct Checker {
    int failures = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            notes.push_back(what);
        }
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

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

PipelineConfig synth_pipeline_config(const fs::path& data, const fs::path& out) {
    PipelineConfig cfg;
    cfg.corpus = (data / "corpus.jsonl").string();
    cfg.queries = (data / "train_queries.jsonl").string();
    cfg.eval_queries = (data / "eval_queries.jsonl").string();
    cfg.paraphrases = (data / "paraphrases.jsonl").string();
    cfg.lexicon = (data / "lexicon.txt").string();
    cfg.out = out.string();
    return cfg;
}

// ---------------------------------------------------------------------------
// 1. Relevance card fixture: labels exact, scores to 1e-12.

void criterion_teacher_fixture(Checker& c) {
    struct Case {
        MetadataLabel qm;
        std::string qt;
        FaqItem f;
        Grade label;
        double rel;
    };
    std::vector<Case> cases = {
        {meta("cards", "activate_card", "how_to", {"debit card"}),
         "how do i activate my debit card",
         faq("f01", "how do i activate my debit card", "open the app and tap activate",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::exact, 1.0},
        {meta("cards", "activate_card", "how_to", {"debit card"}),
         "how do i activate my new debit card fast",
         faq("f02", "activate your debit card", "use the mobile app",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::exact, 0.74},
        {meta("plastic", "activate_card", "how_to", {"debit card"}), "activate debit card",
         faq("f03", "how do i activate my debit card", "tap activate in the app",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::exact, 0.9125000000000001},
        {meta("cards", "block_card", "how_to", {"debit card"}), "activate debit card",
         faq("f04", "activate debit card", "done",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::exact, 0.9299999999999999},
        {meta("cards", "activate_card", "how_to", {"credit card"}), "activate credit card",
         faq("f05", "activate debit card", "in the app",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::less_relevant, 0.7308333333333333},
        {meta("cards", "unknown", "policy_limit", {"credit card"}), "credit card fee",
         faq("f06", "debit card fees", "see fee table",
             meta("cards", "fee_schedule", "how_to", {"debit card"})),
         Grade::less_relevant, 0.5208333333333334},
        {meta("loans", "unknown", "how_to", {"mortgage"}), "get a mortgage",
         faq("f07", "activate debit card", "app",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::partial, 0.13999999999999999},
        {meta("cards", "unknown", "policy_limit", {"debit card"}), "debit card limit",
         faq("f08", "activate your debit card", "instant",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::partial, 0.5733333333333334},
        {meta("plastic", "activate_card", "policy_limit", {"prepaid card"}),
         "activate prepaid card",
         faq("f09", "activate debit card", "visit us",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::partial, 0.5033333333333333},
        {meta("loans", "unknown", "policy_limit", {"debit card"}), "debit card points",
         faq("f10", "debit card rewards", "earn points online",
             meta("cards", "activate_card", "how_to", {"debit card", "rewards"})),
         Grade::partial, 0.67625},
        {meta("loans", "home_loan", "eligibility", {"mortgage"}), "mortgage rate today",
         faq("f11", "activate debit card", "app",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::irrelevant, 0.0},
        {meta("loans", "home_loan", "eligibility", {"mortgage"}), "card mortgage",
         faq("f12", "debit card", "activate",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::irrelevant, 0.325},
        {meta("cards", "unknown", "unknown", {"debit card"}), "debit card",
         faq("f13", "debit card", "yes", meta("cards", "unknown", "unknown", {"debit card"})),
         Grade::exact, 0.9299999999999999},
        {meta("plastic", "unknown", "how_to", {"gift card"}), "gift card",
         faq("f14", "gift card balance", "check online",
             meta("cards", "unknown", "how_to", {"gift card"})),
         Grade::partial, 0.8425},
        {meta("cards", "unknown", "unknown", {}), "card help",
         faq("f15", "card support", "call us",
             meta("cards", "activate_card", "how_to", {"debit card"})),
         Grade::partial, 0.4125},
        {meta("cards", "unknown", "how_to", {}), "card",
         faq("f16", "card", "sure", meta("cards", "unknown", "how_to", {})),
         Grade::partial, 0.8775},
        {meta("cards", "unknown", "how_to", {"debit card", "pin"}), "reset debit card pin",
         faq("f17", "reset your pin", "at any atm",
             meta("cards", "reset_pin", "how_to", {"pin"})),
         Grade::exact, 0.57875},
        {meta("cards", "unknown", "unknown", {"debit card", "pin"}), "debit card pin",
         faq("f18", "debit card pin rules", "three tries",
             meta("cards", "reset_pin", "policy_limit", {"debit card", "pin", "atm"})),
         Grade::partial, 0.7725},
        {meta("cards", "fee_schedule", "unknown", {"credit card"}), "credit card fee schedule",
         faq("f19", "debit card fee schedule", "monthly",
             meta("cards", "fee_schedule", "unknown", {"debit card"})),
         Grade::less_relevant, 0.785},
        {meta("transfers", "wire_transfer", "how_to", {"wire"}), "send money abroad",
         faq("f20", "international wire", "fill form",
             meta("transfers", "wire_transfer", "how_to", {"wire"})),
         Grade::exact, 0.35},
    };

    c.expect(cases.size() == 20, "fixture must hold 20 cases");
    LexicalCoverage coverage;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        auto j = judge_candidate(cases[i].qm, cases[i].qt, cases[i].f, coverage);
        c.expect(j.label == cases[i].label,
                 "case " + std::to_string(i + 1) + ": label " + grade_name(j.label) +
                     " != " + grade_name(cases[i].label));
        c.expect(std::fabs(j.relevance_score - cases[i].rel) < 1e-12,
                 "case " + std::to_string(i + 1) + ": relevance " +
                     std::to_string(j.relevance_score) + " != " + std::to_string(cases[i].rel));
    }
}

// ---------------------------------------------------------------------------
// 2. Calibrated margins: reference value, floor, clip, and the margin
//    inequality on every mined triplet of a synthetic run.

void criterion_margins(Checker& c, const fs::path& work) {
    JudgeConfig jc;
    c.expect(std::fabs(calibrated_margin(0.87, 0.45, jc) - 0.42) < 1e-12,
             "calibrated_margin(0.87, 0.45) != 0.42");
    c.expect(calibrated_margin(0.9, 0.0, jc) == calibrated_margin(0.9, 0.2, jc),
             "negatives below gamma must be floored at gamma");
    JudgeConfig tight = jc;
    tight.m_max = 0.5;
    c.expect(calibrated_margin(1.0, -0.7, tight) == 0.5, "margin must clip at +m_max");
    c.expect(calibrated_margin(0.0, 1.0, tight) == -0.5, "margin must clip at -m_max");

    fs::path data = work / "margin_data";
    fs::path out = work / "margin_out";
    SynthConfig scfg;
    scfg.n_confusable_pairs = 20;
    save_synth(make_synth(scfg), data);
    auto cfg = synth_pipeline_config(data, out);
    cfg.dim = 64;
    cmd_index(cfg);
    cmd_taxonomy(cfg);
    cmd_rank(cfg);
    cmd_teach(cfg);
    cmd_mine(cfg);

    auto triplets = load_triplets(out / "triplets.jsonl");
    c.expect(!triplets.empty(), "synthetic mining must emit triplets");

    std::map<std::string, FaqItem> corpus;
    for (auto& f : load_corpus(out / "labeled_corpus.jsonl")) corpus[f.id] = f;
    std::map<std::string, Query> queries;
    for (auto& q : load_queries(out / "labeled_queries.jsonl")) queries[q.id] = q;

    LexicalCoverage coverage;
    std::size_t violations = 0;
    for (const auto& t : triplets) {
        const Query& q = queries.at(t.query_id);
        MetadataLabel qm = q.meta.value_or(MetadataLabel{});
        double s_pos = judge_candidate(qm, q.text, corpus.at(t.pos_id), coverage).relevance_score;
        double s_neg = judge_candidate(qm, q.text, corpus.at(t.neg_id), coverage).relevance_score;
        bool ok = s_pos - s_neg >= t.delta_t - 1e-9 && t.delta_t <= jc.m_max + 1e-12 &&
                  t.delta_t >= -jc.m_max - 1e-12 &&
                  std::fabs(t.delta_t - calibrated_margin(s_pos, s_neg, jc)) < 1e-9;
        if (!ok) ++violations;
    }
    c.expect(violations == 0, std::to_string(violations) + " of " +
                                  std::to_string(triplets.size()) +
                                  " triplets violate the margin inequality");
}

// ---------------------------------------------------------------------------
// 3. Reciprocal rank fusion: exact arithmetic and a brute-force oracle.

void criterion_rrf(Checker& c) {
    RankedList l1{"q", View::bm25, {{"a", 3.0}, {"b", 2.0}, {"c", 1.0}}};
    RankedList l2{"q", View::dense_qq, {{"a", 9.0}, {"b", 8.0}}};
    auto fused = rrf_fuse({l1, l2}, 60.0, 10);
    c.expect(fused.entries.size() == 3, "fused list must keep all three docs");
    c.expect(fused.entries[0].doc_id == "a" &&
                 std::fabs(fused.entries[0].score - 2.0 / 61.0) < 1e-15,
             "doc ranked first in both lists must score 2/61");
    c.expect(fused.entries[2].doc_id == "c" &&
                 std::fabs(fused.entries[2].score - 1.0 / 63.0) < 1e-15,
             "doc ranked third in one list must score 1/63");

    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        text::Rng rng(seed);
        auto make_list = [&](View view) {
            std::vector<std::string> pool;
            for (int d = 0; d < 12; ++d) pool.push_back("doc" + std::to_string(d));
            rng.shuffle(pool);
            std::size_t n = 3 + rng.below(8);
            RankedList list{"q", view, {}};
            for (std::size_t i = 0; i < n; ++i) {
                list.entries.push_back({pool[i], static_cast<double>(n - i)});
            }
            return list;
        };
        RankedList a = make_list(View::bm25);
        RankedList b = make_list(View::dense_qq);
        double k_rrf = 20.0 + static_cast<double>(rng.below(80));

        std::map<std::string, double> expected;
        for (const auto* list : {&a, &b}) {
            for (std::size_t i = 0; i < list->entries.size(); ++i) {
                expected[list->entries[i].doc_id] += 1.0 / (k_rrf + static_cast<double>(i + 1));
            }
        }
        std::vector<std::pair<std::string, double>> rows(expected.begin(), expected.end());
        std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second > y.second;
            return x.first < y.first;
        });

        auto got = rrf_fuse({a, b}, k_rrf, rows.size());
        bool same = got.entries.size() == rows.size();
        for (std::size_t i = 0; same && i < rows.size(); ++i) {
            same = got.entries[i].doc_id == rows[i].first &&
                   got.entries[i].score == rows[i].second;
        }
        c.expect(same, "fusion differs from the enumeration oracle at seed " +
                           std::to_string(seed));
    }
}

// ---------------------------------------------------------------------------
// 4. BM25 golden fixture.

void criterion_bm25(Checker& c) {
    auto idx = Bm25Index::build(
        {{"d1", "card fee card"}, {"d2", "card activation"}, {"d3", "atm withdrawal"}}, 1.2,
        0.75);
    c.expect(std::fabs(idx.score_doc("fee atm card", "d1") - 0.4573671282555964) < 1e-9,
             "d1 score off golden value");
    c.expect(idx.score_doc("fee atm card", "d2") == 0.0, "d2 must score exactly zero");
    c.expect(std::fabs(idx.score_doc("fee atm card", "d3") - 0.5425320417928454) < 1e-9,
             "d3 score off golden value");
    c.expect(idx.score_doc("card card fee", "d1") == idx.score_doc("fee card", "d1"),
             "repeated query terms must count once");
    auto top = idx.query("fee atm card", 10);
    c.expect(top.entries.size() == 3 && top.entries[0].doc_id == "d3" &&
                 top.entries[1].doc_id == "d1" && top.entries[2].doc_id == "d2",
             "ranking order must be d3, d1, d2");
}

// ---------------------------------------------------------------------------
// 5. Analytic gradients against central finite differences; closed-form
//    softmax values.

double fd_error(const Eigen::MatrixXd& W, const Eigen::MatrixXd& analytic,
                const std::function<double(const Eigen::MatrixXd&)>& loss_of) {
    const double h = 1e-5;
    Eigen::MatrixXd numeric(W.rows(), W.cols());
    for (int i = 0; i < W.rows(); ++i) {
        for (int j = 0; j < W.cols(); ++j) {
            Eigen::MatrixXd wp = W, wm = W;
            wp(i, j) += h;
            wm(i, j) -= h;
            numeric(i, j) = (loss_of(wp) - loss_of(wm)) / (2.0 * h);
        }
    }
    double denom = std::max(1.0, std::max(numeric.norm(), analytic.norm()));
    return (numeric - analytic).norm() / denom;
}

void criterion_gradients(Checker& c) {
    auto random_unit = [](text::Rng& rng, int d) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v(i) = rng.uniform01() * 2.0 - 1.0;
        if (v.norm() < 1e-9) v(0) = 1.0;
        return Eigen::VectorXd(v / v.norm());
    };
    auto random_batch = [&](text::Rng& rng, int d, int n) {
        std::vector<TripletVecs> batch(static_cast<std::size_t>(n));
        for (auto& t : batch) {
            t.q = random_unit(rng, d);
            t.p = random_unit(rng, d);
            t.n = random_unit(rng, d);
            t.delta_t = rng.uniform01() * 0.8 - 0.1;
        }
        return batch;
    };
    auto random_matrix = [](text::Rng& rng, int d) {
        Eigen::MatrixXd w = Eigen::MatrixXd::Identity(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) w(i, j) += 0.3 * (rng.uniform01() * 2.0 - 1.0);
        }
        return w;
    };

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        text::Rng rng(seed);
        int d = 8 + static_cast<int>(seed % 5);
        int n = 1 + static_cast<int>(rng.below(5));
        auto batch = random_batch(rng, d, n);
        auto W = random_matrix(rng, d);
        bool with_negs = (seed % 2) == 0;

        auto ranking = mnrl_loss(batch, W, 20.0, with_negs);
        double e1 = fd_error(W, ranking.grad, [&](const Eigen::MatrixXd& w) {
            return mnrl_loss(batch, w, 20.0, with_negs).loss;
        });
        c.expect(e1 < 1e-4, "ranking-loss gradient off by " + std::to_string(e1) + " at seed " +
                                std::to_string(seed));

        auto margin = rcma_loss(batch[0], W);
        double e2 = fd_error(W, margin.grad, [&](const Eigen::MatrixXd& w) {
            return rcma_loss(batch[0], w).loss;
        });
        c.expect(e2 < 1e-4, "margin-loss gradient off by " + std::to_string(e2) + " at seed " +
                                std::to_string(seed));

        TrainConfig tc;
        tc.alpha = 0.7;
        tc.beta = 1.3;
        auto fused = metafusion_loss(batch, W, tc);
        double e3 = fd_error(W, fused.grad, [&](const Eigen::MatrixXd& w) {
            return metafusion_loss(batch, w, tc).total;
        });
        c.expect(e3 < 1e-4, "fused gradient off by " + std::to_string(e3) + " at seed " +
                                std::to_string(seed));
    }

    // Closed-form values: equal similarities make the softmax uniform.
    {
        int d = 8;
        Eigen::MatrixXd W = Eigen::MatrixXd::Identity(d, d);
        TripletVecs t;
        t.q = Eigen::VectorXd::Zero(d);
        t.p = Eigen::VectorXd::Zero(d);
        t.n = Eigen::VectorXd::Zero(d);
        t.q(0) = 1.0;
        t.p(0) = t.p(1) = 1.0 / std::sqrt(2.0);
        t.n(0) = 1.0 / std::sqrt(2.0);
        t.n(1) = -1.0 / std::sqrt(2.0);
        c.expect(std::fabs(mnrl_loss({t}, W, 20.0, true).loss - std::log(2.0)) < 1e-9,
                 "single-triplet uniform softmax must cost ln 2");

        std::vector<TripletVecs> batch(4);
        Eigen::VectorXd shared = Eigen::VectorXd::Zero(d);
        shared(0) = shared(1) = shared(2) = shared(3) = 0.5;
        for (int i = 0; i < 4; ++i) {
            batch[static_cast<std::size_t>(i)].q = Eigen::VectorXd::Zero(d);
            batch[static_cast<std::size_t>(i)].q(i) = 1.0;
            batch[static_cast<std::size_t>(i)].p = shared;
            batch[static_cast<std::size_t>(i)].n = Eigen::VectorXd::Zero(d);
            batch[static_cast<std::size_t>(i)].n(7) = 1.0;
        }
        c.expect(std::fabs(mnrl_loss(batch, W, 20.0, false).loss - std::log(4.0)) < 1e-9,
                 "four-way uniform softmax must cost ln 4");
    }
}

// ---------------------------------------------------------------------------
// 6. End-to-end distillation lift on the confusable-pair benchmark.

void criterion_benchmark(Checker& c, const fs::path& work) {
    fs::path data = work / "bench_data";
    fs::path out = work / "bench_out";
    SynthConfig scfg; // 50 pairs, 100 FAQs, 300 train, 100 eval
    save_synth(make_synth(scfg), data);

    auto cfg = synth_pipeline_config(data, out);
    cmd_pipeline(cfg);

    auto eval_queries = load_queries(data / "eval_queries.jsonl");
    c.expect(eval_queries.size() == 100, "benchmark must hold 100 held-out queries");
    auto triplets = load_triplets(out / "triplets.jsonl");
    c.expect(triplets.size() >= 200,
             "mining must emit >= 200 triplets, got " + std::to_string(triplets.size()));

    auto report = json::parse(slurp(out / "report.json"));
    std::map<std::string, double> acc1;
    for (const auto& [name, series] : report["accuracy"].items()) {
        for (const auto& row : series) {
            if (row[0].get<std::size_t>() == 1) acc1[name] = row[1].get<double>();
        }
    }
    c.expect(acc1.count("baseline") && acc1.count("+MNRL") && acc1.count("+MF"),
             "report must carry baseline, +MNRL and +MF rows");
    if (c.failures == 0) {
        double base = acc1["baseline"], mnrl = acc1["+MNRL"], mf = acc1["+MF"];
        c.expect(mf >= base + 0.15 - 1e-9,
                 "fused training must lift top-1 accuracy by 15 points: baseline " +
                     std::to_string(base) + ", fused " + std::to_string(mf));
        c.expect(mf >= mnrl - 0.01 - 1e-9,
                 "fused training must stay within a point of ranking-only: ranking " +
                     std::to_string(mnrl) + ", fused " + std::to_string(mf));
    }
}

// ---------------------------------------------------------------------------
// 7. Audit metrics: teacher consistency, order-sensitivity detection,
//    robustness of constant rankers, accuracy monotonicity.

void criterion_trust(Checker& c, const fs::path& work) {
    fs::path data = work / "trust_data";
    SynthConfig scfg;
    scfg.n_confusable_pairs = 15;
    scfg.paraphrases_per_eval = 3;
    auto synth = make_synth(scfg);
    save_synth(synth, data);

    std::map<std::string, FaqItem> corpus;
    std::vector<std::string> pool;
    for (const auto& f : synth.corpus) {
        corpus[f.id] = f;
        pool.push_back(f.id);
    }
    std::sort(pool.begin(), pool.end());

    std::vector<Query> queries(synth.eval_queries.begin(),
                               synth.eval_queries.begin() + 20);

    LexicalCoverage coverage;
    Taxonomy taxonomy;
    PresetAnnotator annotator;
    RankerFn teacher = [&](const Query& q, const std::vector<std::string>& candidates) {
        MetadataLabel qm = infer_query_metadata(q, taxonomy, annotator);
        auto res = teacher_rerank(q, qm, candidates, corpus, coverage);
        return res.ranking;
    };

    TrustConfig tc;
    tc.ks = {1, 3, 5, 10, 15};
    tc.permutations = 8;

    auto teacher_consistency = consistency_profile(queries, pool, teacher, tc);
    for (const auto& [k, v] : teacher_consistency.series) {
        c.expect(v == 1.0, "teacher consistency@" + std::to_string(k) + " is " +
                               std::to_string(v) + ", expected 1.0");
    }

    RankerFn order_sensitive = [](const Query& q, const std::vector<std::string>& candidates) {
        RankedList list{q.id, View::student, {}};
        double score = static_cast<double>(candidates.size());
        for (const auto& id : candidates) list.entries.push_back({id, score--});
        return list;
    };
    auto sensitive = consistency_profile(queries, pool, order_sensitive, tc);
    c.expect(sensitive.series[1] < 1.0,
             "an order-sensitive ranker must fall below perfect consistency@1");

    RankerFn constant = [&](const Query& q, const std::vector<std::string>&) {
        RankedList list{q.id, View::student, {}};
        double score = static_cast<double>(pool.size());
        for (const auto& id : pool) list.entries.push_back({id, score--});
        return list;
    };
    auto robust = robustness_profile(synth.paraphrases, pool, constant, tc);
    for (const auto& [k, v] : robust.series) {
        c.expect(v == 1.0, "constant ranker robustness@" + std::to_string(k) + " is " +
                               std::to_string(v) + ", expected 1.0");
    }

    auto provider = std::make_shared<HashingEmbedder>(64, 42);
    auto index = StudentIndex::build(synth.corpus, *provider, View::dense_qq);
    auto model = StudentModel::identity(provider);
    StudentScorer scorer(index, model);
    std::map<std::string, RankedList> results;
    for (const auto& q : synth.eval_queries) results[q.id] = scorer.rank(q, 15);
    auto profile = accuracy_profile(synth.eval_queries, results, tc.ks);
    double prev = -1.0;
    for (const auto& [k, v] : profile) {
        c.expect(v >= prev - 1e-12, "accuracy@k must be nondecreasing in k");
        prev = v;
    }
}

// ---------------------------------------------------------------------------
// 8. Determinism: identical configs produce byte-identical artifacts.

void criterion_determinism(Checker& c, const fs::path& work) {
    fs::path data = work / "det_data";
    SynthConfig scfg;
    scfg.n_confusable_pairs = 25;
    save_synth(make_synth(scfg), data);

    auto cfg1 = synth_pipeline_config(data, work / "det_out1");
    auto cfg2 = synth_pipeline_config(data, work / "det_out2");
    cfg1.dim = 128;
    cfg2.dim = 128;
    cmd_pipeline(cfg1);
    cmd_pipeline(cfg2);

    for (const char* name : {"triplets.jsonl", "model_mnrl.bin", "model_mnrl.bin.json",
                             "model_mf.bin", "model_mf.bin.json", "report.json", "report.csv",
                             "teacher.jsonl", "taxonomy.json", "student_baseline.jsonl"}) {
        c.expect(slurp(work / "det_out1" / name) == slurp(work / "det_out2" / name),
                 std::string(name) + " differs between identical runs");
    }
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<void(Checker&)> run;
};

} // namespace

int main() {
    fs::path work = fs::temp_directory_path() / "maca_acceptance";
    std::error_code ec;
    fs::remove_all(work, ec);
    fs::create_directories(work);

    std::vector<Criterion> criteria = {
        {"teacher relevance card fixture (20 cases, 1e-12)", 1.0,
         [](Checker& c) { criterion_teacher_fixture(c); }},
        {"calibrated margins: 0.42 case, floor, clip, mined inequality", 5.0,
         [&](Checker& c) { criterion_margins(c, work); }},
        {"reciprocal rank fusion: 2/61, 1/63, enumeration oracle", 1.0,
         [](Checker& c) { criterion_rrf(c); }},
        {"bm25 golden fixture (1e-9)", 1.0, [](Checker& c) { criterion_bm25(c); }},
        {"analytic gradients vs finite differences; ln 2 / ln 4", 10.0,
         [](Checker& c) { criterion_gradients(c); }},
        {"confusable-pair benchmark: +15pp top-1 lift, fused >= ranking - 1pp", 120.0,
         [&](Checker& c) { criterion_benchmark(c, work); }},
        {"audit: teacher consistency 1.0, sensitivity detection, robustness", 30.0,
         [&](Checker& c) { criterion_trust(c, work); }},
        {"byte-identical artifacts across reruns", 300.0,
         [&](Checker& c) { criterion_determinism(c, work); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker checker;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].run(checker);
        } catch (const std::exception& e) {
            checker.failures++;
            checker.notes.push_back(std::string("exception: ") + e.what());
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criteria[i].budget_seconds) {
            checker.failures++;
            checker.notes.push_back("exceeded " + std::to_string(criteria[i].budget_seconds) +
                                    "s budget");
        }
        bool ok = checker.failures == 0;
        std::printf("%s  %zu. %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    elapsed);
        for (const auto& note : checker.notes) std::printf("      - %s\n", note.c_str());
        if (!ok) ++failed;
    }

    fs::remove_all(work, ec);
    std::printf("%d of %zu acceptance checks passed\n",
                static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
