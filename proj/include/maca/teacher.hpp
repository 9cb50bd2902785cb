#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maca/corpus.hpp"
#include "maca/retrieve.hpp"

namespace maca {

enum class Grade { irrelevant = 0, less_relevant = 1, partial = 2, exact = 3 };

int grade_value(Grade g);
std::string grade_name(Grade g);
Grade grade_from_name(const std::string& name);

struct JudgmentComponents {
    double coverage = 0.0;
    double metadata_score = 0.0;
    bool intent_match = false;
    bool topic_match = false;
    bool subtopic_match = false;
    int entity_overlap = 0;
    double jaccard = 0.0;
};

struct TeacherJudgment {
    std::string faq_id;
    Grade label = Grade::irrelevant;
    double relevance_score = 0.0;
    std::optional<std::string> top_matching_entity;
    JudgmentComponents components;
};

/// How well a candidate FAQ covers the query text. Implementations must be
/// deterministic and return values in [0, 1].
class CoverageScorer {
  public:
    virtual ~CoverageScorer() = default;
    virtual double score(const std::string& query_text, const FaqItem& faq) const = 0;
};

/// Fraction of the query's content tokens present in question + answer.
class LexicalCoverage final : public CoverageScorer {
  public:
    double score(const std::string& query_text, const FaqItem& faq) const override;
};

double lexical_coverage(const std::string& query_text, const FaqItem& faq);

/// Intents the ambiguity rule prefers when the query intent is unknown.
bool is_actionable_intent(const std::string& intent);

/// Query metadata for ranking: pass through an existing label, otherwise ask
/// the annotator constrained to the taxonomy (sub_topic falls back to
/// "unknown" when not in the taxonomy; annotator failure yields an all
/// unknown label with no entities).
MetadataLabel infer_query_metadata(const Query& query, const Taxonomy& taxonomy,
                                   const AnnotatorClient& annotator);

/// Deterministic relevance card for one candidate:
///   metadata_score = 0.40 intent + 0.25 topic + 0.20 sub_topic + 0.15 jaccard
///   relevance      = 0.65 coverage + 0.35 metadata_score
/// Labels, first hit wins: exact (intent and (topic or sub_topic) match,
/// entity overlap >= 1), less_relevant (topic matches but the query's
/// lexicographically first entity is absent), partial (any signal matches),
/// irrelevant. sub_topic "unknown" never matches.
TeacherJudgment judge_candidate(const MetadataLabel& query_meta, const std::string& query_text,
                                const FaqItem& faq, const CoverageScorer& coverage);

struct TeacherConfig {
    /// Score band within which the unknown-intent ambiguity rule may prefer
    /// a candidate with an actionable intent.
    double ambiguity_band = 0.02;
};

struct TeacherResult {
    RankedList ranking; // View::teacher, scores are relevance scores
    std::vector<TeacherJudgment> judgments; // same order as ranking
};

/// Judge all candidates, sort by relevance (ties on doc id) and apply the
/// ambiguity preference when the query intent is unknown.
TeacherResult teacher_rerank(const Query& query, const MetadataLabel& query_meta,
                             const std::vector<std::string>& candidate_ids,
                             const std::map<std::string, FaqItem>& corpus,
                             const CoverageScorer& coverage, const TeacherConfig& cfg = {});

/// One JSONL line per query: the top judgment mirrored at the top level
/// ("faq_id", "label", "relevance_score", "top_matching_entity") plus the
/// full per-candidate judgments array.
void save_teacher_outputs(const std::vector<std::pair<std::string, TeacherResult>>& outputs,
                          const std::filesystem::path& path);
std::map<std::string, std::vector<TeacherJudgment>> load_teacher_outputs(
    const std::filesystem::path& path);

} // namespace maca
