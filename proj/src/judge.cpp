#include "maca/judge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "maca/error.hpp"

using nlohmann::json;

namespace maca {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::near_miss: return "near_miss";
        case Provenance::fallback_nonrelevant: return "fallback_nonrelevant";
    }
    throw ConfigError("bad provenance enum");
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "near_miss") return Provenance::near_miss;
    if (name == "fallback_nonrelevant") return Provenance::fallback_nonrelevant;
    throw DataError("unknown provenance: " + name);
}

void JudgeConfig::validate() const {
    if (!(gamma < m_max)) throw ConfigError("judge config requires gamma < m_max");
    if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
    if (k_t == 0 || k_s == 0) throw ConfigError("k_t and k_s must be positive");
}

std::optional<TeacherJudgment> select_positive(const std::vector<TeacherJudgment>& judgments) {
    for (Grade wanted : {Grade::exact, Grade::partial}) {
        const TeacherJudgment* best = nullptr;
        for (const auto& j : judgments) {
            if (j.label != wanted) continue;
            if (!best || j.relevance_score > best->relevance_score ||
                (j.relevance_score == best->relevance_score && j.faq_id < best->faq_id)) {
                best = &j;
            }
        }
        if (best) return *best;
    }
    return std::nullopt;
}

namespace {

bool is_non_relevant(Grade g) { return g == Grade::less_relevant || g == Grade::irrelevant; }

const FaqItem& corpus_at(const std::map<std::string, FaqItem>& corpus, const std::string& id) {
    auto it = corpus.find(id);
    if (it == corpus.end()) throw DataError("doc '" + id + "' not in corpus");
    return it->second;
}

} // namespace

std::set<std::string> near_miss_set(const TeacherJudgment& positive,
                                    const RankedList& student_list,
                                    const std::map<std::string, TeacherJudgment>& judged,
                                    const std::map<std::string, FaqItem>& corpus,
                                    std::size_t k_s) {
    const FaqItem& pos_faq = corpus_at(corpus, positive.faq_id);
    std::set<std::string> out;
    std::size_t limit = std::min(k_s, student_list.entries.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const std::string& id = student_list.entries[i].doc_id;
        if (id == positive.faq_id) continue;
        auto jit = judged.find(id);
        if (jit == judged.end() || !is_non_relevant(jit->second.label)) continue;
        const FaqItem& faq = corpus_at(corpus, id);
        if (faq.meta.topic == pos_faq.meta.topic || faq.meta.intent == pos_faq.meta.intent) {
            out.insert(id);
        }
    }
    return out;
}

std::optional<std::pair<std::string, Provenance>> select_hard_negative(
    const std::set<std::string>& near_misses, const RankedList& student_list,
    const std::map<std::string, TeacherJudgment>& judged,
    const std::map<std::string, FaqItem>& corpus, const std::string& pos_id, std::size_t k_s) {
    const FaqItem& pos_faq = corpus_at(corpus, pos_id);

    struct Candidate {
        std::string id;
        double student_score;
        int topic_match;
        int intent_match;
        int entity_overlap;
        double teacher_score;
    };
    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.student_score != b.student_score) return a.student_score > b.student_score;
        if (a.topic_match != b.topic_match) return a.topic_match > b.topic_match;
        if (a.intent_match != b.intent_match) return a.intent_match > b.intent_match;
        if (a.entity_overlap != b.entity_overlap) return a.entity_overlap > b.entity_overlap;
        if (a.teacher_score != b.teacher_score) return a.teacher_score > b.teacher_score;
        return a.id < b.id;
    };
    auto make_candidate = [&](const RankedEntry& entry) {
        const FaqItem& faq = corpus_at(corpus, entry.doc_id);
        Candidate c;
        c.id = entry.doc_id;
        c.student_score = entry.score;
        c.topic_match = faq.meta.topic == pos_faq.meta.topic ? 1 : 0;
        c.intent_match = faq.meta.intent == pos_faq.meta.intent ? 1 : 0;
        c.entity_overlap = 0;
        for (const auto& e : faq.meta.entities) c.entity_overlap += pos_faq.meta.entities.count(e);
        c.teacher_score = judged.at(entry.doc_id).relevance_score;
        return c;
    };

    std::optional<Candidate> best;
    std::size_t limit = std::min(k_s, student_list.entries.size());
    if (!near_misses.empty()) {
        for (std::size_t i = 0; i < limit; ++i) {
            const auto& entry = student_list.entries[i];
            if (!near_misses.count(entry.doc_id)) continue;
            Candidate c = make_candidate(entry);
            if (!best || better(c, *best)) best = c;
        }
        if (best) return std::make_pair(best->id, Provenance::near_miss);
    }
    for (std::size_t i = 0; i < limit; ++i) {
        const auto& entry = student_list.entries[i];
        if (entry.doc_id == pos_id) continue;
        auto jit = judged.find(entry.doc_id);
        if (jit == judged.end() || !is_non_relevant(jit->second.label)) continue;
        Candidate c = make_candidate(entry);
        if (!best || better(c, *best)) best = c;
    }
    if (best) return std::make_pair(best->id, Provenance::fallback_nonrelevant);
    return std::nullopt;
}

double calibrated_margin(double teacher_pos, double teacher_neg, const JudgeConfig& cfg) {
    cfg.validate();
    double margin = teacher_pos - std::max(teacher_neg, cfg.gamma);
    return std::clamp(margin, -cfg.m_max, cfg.m_max);
}

MiningResult mine_triplets(const std::vector<Query>& queries,
                           const std::map<std::string, std::vector<TeacherJudgment>>& teacher_outputs,
                           const StudentRankFn& student_rank,
                           const std::map<std::string, FaqItem>& corpus,
                           const CoverageScorer& coverage, const JudgeConfig& cfg) {
    cfg.validate();
    MiningResult res;

    std::vector<const Query*> ordered;
    ordered.reserve(queries.size());
    for (const auto& q : queries) ordered.push_back(&q);
    std::sort(ordered.begin(), ordered.end(),
              [](const Query* a, const Query* b) { return a->id < b->id; });

    for (const Query* q : ordered) {
        res.stats.queries_seen++;
        auto tout = teacher_outputs.find(q->id);
        if (tout == teacher_outputs.end()) {
            res.stats.skipped_no_teacher_output++;
            res.stats.diagnostics.push_back("query " + q->id + ": no teacher output");
            continue;
        }

        std::vector<TeacherJudgment> ranked = tout->second;
        std::sort(ranked.begin(), ranked.end(),
                  [](const TeacherJudgment& a, const TeacherJudgment& b) {
                      if (a.relevance_score != b.relevance_score)
                          return a.relevance_score > b.relevance_score;
                      return a.faq_id < b.faq_id;
                  });
        if (ranked.size() > cfg.k_t) ranked.resize(cfg.k_t);

        auto positive = select_positive(ranked);
        if (!positive) {
            res.stats.skipped_no_positive++;
            res.stats.diagnostics.push_back("query " + q->id + ": no exact or partial candidate");
            continue;
        }

        RankedList student_list = student_rank(*q, cfg.k_s);
        student_list.validate();

        std::map<std::string, TeacherJudgment> judged;
        for (const auto& j : tout->second) judged[j.faq_id] = j;
        const MetadataLabel query_meta = q->meta.value_or(MetadataLabel{});
        for (const auto& entry : student_list.entries) {
            if (judged.count(entry.doc_id)) continue;
            judged[entry.doc_id] =
                judge_candidate(query_meta, q->text, corpus_at(corpus, entry.doc_id), coverage);
        }

        auto misses = near_miss_set(*positive, student_list, judged, corpus, cfg.k_s);
        auto negative =
            select_hard_negative(misses, student_list, judged, corpus, positive->faq_id, cfg.k_s);
        if (!negative) {
            res.stats.skipped_no_negative++;
            res.stats.diagnostics.push_back("query " + q->id + ": no usable negative");
            continue;
        }
        if (negative->second == Provenance::fallback_nonrelevant) res.stats.fallback_negatives++;

        Triplet t;
        t.query_id = q->id;
        t.query_text = q->text;
        t.pos_id = positive->faq_id;
        t.neg_id = negative->first;
        t.delta_t = calibrated_margin(positive->relevance_score,
                                      judged.at(negative->first).relevance_score, cfg);
        t.provenance = negative->second;
        res.triplets.push_back(std::move(t));
        res.stats.triplets_emitted++;
    }
    return res;
}

void save_triplets(const std::vector<Triplet>& triplets, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& t : triplets) {
        json j;
        j["query"] = t.query_text;
        j["query_id"] = t.query_id;
        j["pos_id"] = t.pos_id;
        j["neg_id"] = t.neg_id;
        j["delta_T"] = t.delta_t;
        j["provenance"] = provenance_name(t.provenance);
        out << j.dump() << "\n";
    }
}

std::vector<Triplet> load_triplets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<Triplet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
        }
        Triplet t;
        t.query_text = j.at("query").get<std::string>();
        t.query_id = j.at("query_id").get<std::string>();
        t.pos_id = j.at("pos_id").get<std::string>();
        t.neg_id = j.at("neg_id").get<std::string>();
        t.delta_t = j.at("delta_T").get<double>();
        t.provenance = provenance_from_name(j.at("provenance").get<std::string>());
        if (!std::isfinite(t.delta_t)) {
            throw NumericError(path.string() + ":" + std::to_string(line_no) +
                               ": non-finite delta_T");
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace maca
