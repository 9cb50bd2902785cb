#include "maca/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "maca/error.hpp"
#include "maca/text.hpp"

using nlohmann::json;

namespace maca {

int grade_value(Grade g) { return static_cast<int>(g); }

std::string grade_name(Grade g) {
    switch (g) {
        case Grade::exact: return "exact";
        case Grade::partial: return "partial";
        case Grade::less_relevant: return "less_relevant";
        case Grade::irrelevant: return "irrelevant";
    }
    throw ConfigError("bad grade enum");
}

Grade grade_from_name(const std::string& name) {
    for (Grade g : {Grade::exact, Grade::partial, Grade::less_relevant, Grade::irrelevant}) {
        if (grade_name(g) == name) return g;
    }
    throw DataError("unknown grade: " + name);
}

double LexicalCoverage::score(const std::string& query_text, const FaqItem& faq) const {
    return lexical_coverage(query_text, faq);
}

double lexical_coverage(const std::string& query_text, const FaqItem& faq) {
    auto query_tokens = text::tokenize(query_text);
    std::set<std::string> query_set(query_tokens.begin(), query_tokens.end());
    if (query_set.empty()) return 0.0;
    auto doc_tokens = text::tokenize(faq.question + " " + faq.answer);
    std::set<std::string> doc_set(doc_tokens.begin(), doc_tokens.end());
    std::size_t covered = 0;
    for (const auto& t : query_set) covered += doc_set.count(t);
    return static_cast<double>(covered) / static_cast<double>(query_set.size());
}

bool is_actionable_intent(const std::string& intent) {
    static const std::set<std::string> kActionable = {"how_to", "troubleshooting", "policy_limit",
                                                      "eligibility"};
    return kActionable.count(intent) > 0;
}

MetadataLabel infer_query_metadata(const Query& query, const Taxonomy& taxonomy,
                                   const AnnotatorClient& annotator) {
    if (query.meta) return *query.meta;
    MetadataLabel label;
    try {
        label = annotator.annotate(query.text);
    } catch (const Error&) {
        return MetadataLabel{}; // all unknown, no entities
    }
    if (!taxonomy.has_sub_topic(label.topic, label.sub_topic)) label.sub_topic = "unknown";
    label.clamp_entities();
    return label;
}

TeacherJudgment judge_candidate(const MetadataLabel& query_meta, const std::string& query_text,
                                const FaqItem& faq, const CoverageScorer& coverage) {
    TeacherJudgment out;
    out.faq_id = faq.id;
    JudgmentComponents& c = out.components;

    c.intent_match = query_meta.intent == faq.meta.intent;
    c.topic_match = query_meta.topic == faq.meta.topic;
    c.subtopic_match = query_meta.sub_topic != "unknown" && faq.meta.sub_topic != "unknown" &&
                       query_meta.sub_topic == faq.meta.sub_topic;
    for (const auto& e : query_meta.entities) c.entity_overlap += faq.meta.entities.count(e);
    c.jaccard = entity_jaccard(query_meta.entities, faq.meta.entities);
    c.coverage = coverage.score(query_text, faq);
    if (c.coverage < 0.0 || c.coverage > 1.0 || !std::isfinite(c.coverage)) {
        throw NumericError("coverage out of [0, 1] for faq '" + faq.id + "'");
    }
    c.metadata_score = 0.40 * (c.intent_match ? 1.0 : 0.0) + 0.25 * (c.topic_match ? 1.0 : 0.0) +
                       0.20 * (c.subtopic_match ? 1.0 : 0.0) + 0.15 * c.jaccard;
    out.relevance_score = 0.65 * c.coverage + 0.35 * c.metadata_score;

    bool main_entity_absent = false;
    if (!query_meta.entities.empty()) {
        main_entity_absent = faq.meta.entities.count(*query_meta.entities.begin()) == 0;
    }
    bool any_signal =
        c.intent_match || c.topic_match || c.subtopic_match || c.entity_overlap >= 1;
    if (c.intent_match && (c.topic_match || c.subtopic_match) && c.entity_overlap >= 1) {
        out.label = Grade::exact;
    } else if (c.topic_match && main_entity_absent) {
        out.label = Grade::less_relevant;
    } else if (any_signal) {
        out.label = Grade::partial;
    } else {
        out.label = Grade::irrelevant;
    }

    for (const auto& e : query_meta.entities) {
        if (faq.meta.entities.count(e)) {
            out.top_matching_entity = e;
            break;
        }
    }
    return out;
}

TeacherResult teacher_rerank(const Query& query, const MetadataLabel& query_meta,
                             const std::vector<std::string>& candidate_ids,
                             const std::map<std::string, FaqItem>& corpus,
                             const CoverageScorer& coverage, const TeacherConfig& cfg) {
    std::vector<TeacherJudgment> judgments;
    judgments.reserve(candidate_ids.size());
    std::set<std::string> seen;
    for (const auto& id : candidate_ids) {
        if (!seen.insert(id).second) throw DataError("candidate list repeats doc '" + id + "'");
        auto it = corpus.find(id);
        if (it == corpus.end()) throw DataError("candidate '" + id + "' not in corpus");
        judgments.push_back(judge_candidate(query_meta, query.text, it->second, coverage));
    }
    std::sort(judgments.begin(), judgments.end(),
              [](const TeacherJudgment& a, const TeacherJudgment& b) {
                  if (a.relevance_score != b.relevance_score)
                      return a.relevance_score > b.relevance_score;
                  return a.faq_id < b.faq_id;
              });

    if (query_meta.intent == "unknown" && judgments.size() > 1) {
        // Bubble actionable-intent candidates above near-tied alternatives.
        bool changed = true;
        std::size_t guard = judgments.size() * judgments.size() + 1;
        while (changed && guard-- > 0) {
            changed = false;
            for (std::size_t i = 0; i + 1 < judgments.size(); ++i) {
                const auto& upper = corpus.at(judgments[i].faq_id);
                const auto& lower = corpus.at(judgments[i + 1].faq_id);
                bool close = std::fabs(judgments[i].relevance_score -
                                       judgments[i + 1].relevance_score) < cfg.ambiguity_band;
                if (close && !is_actionable_intent(upper.meta.intent) &&
                    is_actionable_intent(lower.meta.intent)) {
                    std::swap(judgments[i], judgments[i + 1]);
                    changed = true;
                }
            }
        }
    }

    TeacherResult res;
    res.judgments = judgments;
    res.ranking.query_id = query.id;
    res.ranking.view = View::teacher;
    for (const auto& j : judgments) res.ranking.entries.push_back({j.faq_id, j.relevance_score});
    res.ranking.validate();
    return res;
}

namespace {

json judgment_to_json(const TeacherJudgment& j) {
    json out;
    out["faq_id"] = j.faq_id;
    out["label"] = grade_name(j.label);
    out["relevance_score"] = j.relevance_score;
    if (j.top_matching_entity) {
        out["top_matching_entity"] = *j.top_matching_entity;
    } else {
        out["top_matching_entity"] = nullptr;
    }
    out["coverage"] = j.components.coverage;
    out["metadata_score"] = j.components.metadata_score;
    out["intent_match"] = j.components.intent_match;
    out["topic_match"] = j.components.topic_match;
    out["subtopic_match"] = j.components.subtopic_match;
    out["entity_overlap"] = j.components.entity_overlap;
    out["entity_jaccard"] = j.components.jaccard;
    return out;
}

TeacherJudgment judgment_from_json(const json& j) {
    TeacherJudgment out;
    out.faq_id = j.at("faq_id").get<std::string>();
    out.label = grade_from_name(j.at("label").get<std::string>());
    out.relevance_score = j.at("relevance_score").get<double>();
    if (j.contains("top_matching_entity") && !j["top_matching_entity"].is_null()) {
        out.top_matching_entity = j["top_matching_entity"].get<std::string>();
    }
    out.components.coverage = j.value("coverage", 0.0);
    out.components.metadata_score = j.value("metadata_score", 0.0);
    out.components.intent_match = j.value("intent_match", false);
    out.components.topic_match = j.value("topic_match", false);
    out.components.subtopic_match = j.value("subtopic_match", false);
    out.components.entity_overlap = j.value("entity_overlap", 0);
    out.components.jaccard = j.value("entity_jaccard", 0.0);
    return out;
}

} // namespace

void save_teacher_outputs(const std::vector<std::pair<std::string, TeacherResult>>& outputs,
                          const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& [query_id, result] : outputs) {
        json j;
        j["query_id"] = query_id;
        if (!result.judgments.empty()) {
            json top = judgment_to_json(result.judgments.front());
            j["faq_id"] = top["faq_id"];
            j["label"] = top["label"];
            j["relevance_score"] = top["relevance_score"];
            j["top_matching_entity"] = top["top_matching_entity"];
        }
        json arr = json::array();
        for (const auto& judgment : result.judgments) arr.push_back(judgment_to_json(judgment));
        j["judgments"] = arr;
        out << j.dump() << "\n";
    }
}

std::map<std::string, std::vector<TeacherJudgment>> load_teacher_outputs(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::map<std::string, std::vector<TeacherJudgment>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
        }
        std::string qid = j.at("query_id").get<std::string>();
        if (out.count(qid)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate query id '" + qid + "'");
        }
        std::vector<TeacherJudgment> judgments;
        for (const auto& row : j.at("judgments")) judgments.push_back(judgment_from_json(row));
        out[qid] = std::move(judgments);
    }
    return out;
}

} // namespace maca
