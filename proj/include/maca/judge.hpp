#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "maca/corpus.hpp"
#include "maca/teacher.hpp"

namespace maca {

enum class Provenance { near_miss, fallback_nonrelevant };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct Triplet {
    std::string query_id;
    std::string query_text;
    std::string pos_id;
    std::string neg_id;
    double delta_t = 0.0;
    Provenance provenance = Provenance::near_miss;
};

struct JudgeConfig {
    double gamma = 0.2;  // relevance floor for the negative's teacher score
    double m_max = 1.0;  // margin clip
    std::size_t k_t = 10;
    std::size_t k_s = 10;

    void validate() const;
};

/// Highest-scoring exact judgment, else highest-scoring partial, else none.
/// Ties break on smaller faq id.
std::optional<TeacherJudgment> select_positive(const std::vector<TeacherJudgment>& judgments);

/// Near misses: candidates in the student's top k_s, distinct from the
/// positive, teacher-labeled less_relevant or irrelevant, sharing topic or
/// intent with the positive. Every student candidate must have a judgment.
std::set<std::string> near_miss_set(const TeacherJudgment& positive,
                                    const RankedList& student_list,
                                    const std::map<std::string, TeacherJudgment>& judged,
                                    const std::map<std::string, FaqItem>& corpus,
                                    std::size_t k_s);

/// Hardest negative: the near miss with the highest student score; ties break
/// on metadata proximity to the positive (topic, then intent, then entity
/// overlap), then larger teacher score, then smaller doc id. When the set is
/// empty, falls back to the highest-student-scored non-relevant candidate.
std::optional<std::pair<std::string, Provenance>> select_hard_negative(
    const std::set<std::string>& near_misses, const RankedList& student_list,
    const std::map<std::string, TeacherJudgment>& judged,
    const std::map<std::string, FaqItem>& corpus, const std::string& pos_id, std::size_t k_s);

/// clamp(S_pos - max(S_neg, gamma), -m_max, m_max)
double calibrated_margin(double teacher_pos, double teacher_neg, const JudgeConfig& cfg = {});

struct MiningStats {
    std::size_t queries_seen = 0;
    std::size_t triplets_emitted = 0;
    std::size_t skipped_no_positive = 0;
    std::size_t skipped_no_negative = 0;
    std::size_t skipped_no_teacher_output = 0;
    std::size_t fallback_negatives = 0;
    std::vector<std::string> diagnostics;
};

struct MiningResult {
    std::vector<Triplet> triplets; // sorted by query id
    MiningStats stats;
};

/// Ranker the miner probes for student top-k lists. Must be deterministic.
using StudentRankFn = std::function<RankedList(const Query&, std::size_t top_k)>;

/// Mine at most one (query, positive, hard negative, margin) triplet per
/// query. Student candidates the teacher has not judged are judged on the
/// fly so the near-miss predicate is decidable for all of them.
MiningResult mine_triplets(const std::vector<Query>& queries,
                           const std::map<std::string, std::vector<TeacherJudgment>>& teacher_outputs,
                           const StudentRankFn& student_rank,
                           const std::map<std::string, FaqItem>& corpus,
                           const CoverageScorer& coverage, const JudgeConfig& cfg = {});

void save_triplets(const std::vector<Triplet>& triplets, const std::filesystem::path& path);
std::vector<Triplet> load_triplets(const std::filesystem::path& path);

} // namespace maca
