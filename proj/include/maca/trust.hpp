#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "maca/corpus.hpp"
#include "maca/retrieve.hpp"

namespace maca {

/// A ranking function under audit: given a query and a candidate pool in a
/// specific order, return a ranked list over (a subset of) those candidates.
using RankerFn =
    std::function<RankedList(const Query&, const std::vector<std::string>& candidates)>;

struct TrustConfig {
    std::vector<std::size_t> ks{1, 3, 5, 10, 15};
    std::size_t permutations = 8; // candidate-order trials per query
    std::size_t paraphrases = 4;  // paraphrase variants per query
    std::uint64_t seed = 42;

    void validate() const;
};

/// Metric value per cutoff k.
using MetricSeries = std::map<std::size_t, double>;

/// Fraction of gold-labeled queries whose top-k shares at least one id with
/// the gold set. Every gold-labeled query must be present in results.
double accuracy_at_k(const std::vector<Query>& queries,
                     const std::map<std::string, RankedList>& results, std::size_t k);

MetricSeries accuracy_profile(const std::vector<Query>& queries,
                              const std::map<std::string, RankedList>& results,
                              const std::vector<std::size_t>& ks);

struct ConsistencyResult {
    MetricSeries series;
    std::size_t queries = 0;
    std::vector<std::string> diagnostics;
};

/// Re-ranks each query under distinct random orderings of the candidate pool
/// and reports, per k, the mean share of trials agreeing with the modal
/// top-k set. A ranker that throws contributes a unique failure outcome so
/// crashes depress the score instead of hiding.
ConsistencyResult consistency_profile(const std::vector<Query>& queries,
                                      const std::vector<std::string>& pool,
                                      const RankerFn& ranker, const TrustConfig& cfg);

struct RobustnessResult {
    MetricSeries series;
    std::size_t groups = 0;
    std::vector<std::string> diagnostics;
};

/// Groups queries by paraphrase_group, ranks each member against the pool,
/// and reports the mean modal agreement of top-k sets within each group.
/// Groups need at least two members; singletons are skipped with a note.
RobustnessResult robustness_profile(const std::vector<Query>& queries,
                                    const std::vector<std::string>& pool,
                                    const RankerFn& ranker, const TrustConfig& cfg);

/// Word -> replacement pairs used by the paraphrase generator.
const std::vector<std::pair<std::string, std::string>>& synonym_table();

/// Query-shaped filler prefixes. All of them tokenize away as stopwords, so
/// prefix variants leave bag-of-words embeddings unchanged.
const std::vector<std::string>& paraphrase_prefixes();

/// Deterministically generates m distinct paraphrase variants of q (prefix
/// insertion, synonym substitution, reordering of non-entity words). Entity
/// words are never moved or replaced. Variant ids are q.id + "#p1"... and
/// paraphrase_group is q.id; metadata and gold labels are copied.
std::vector<Query> gen_paraphrases(const Query& q, std::size_t m, std::uint64_t seed);

} // namespace maca
