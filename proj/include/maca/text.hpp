#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace maca::text {

/// Fixed stopword list applied by the tokenizer. Shared by the hashing
/// embedder, BM25 and lexical coverage so all lexical views agree.
const std::set<std::string>& stopwords();

/// Lowercase, split on non-alphanumeric runs, optionally drop stopwords.
std::vector<std::string> tokenize(std::string_view text, bool drop_stopwords = true);

/// Normalize free text to a metadata slug: lowercase, punctuation stripped,
/// at most max_words words joined by underscores. Empty input -> "unknown".
std::string slugify(std::string_view text, std::size_t max_words = 3);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// levenshtein(a, b) / max(len(a), len(b)); 0 when both are empty.
double normalized_edit_distance(std::string_view a, std::string_view b);

/// Seeded 64-bit FNV-1a. Used for feature hashing and per-key RNG seeding.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0);

/// Deterministic RNG helper. Draws below() by rejection sampling and
/// shuffles with Fisher-Yates so results do not depend on the standard
/// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform draw in [0, n). n must be > 0.
    std::size_t below(std::size_t n);

    double uniform01();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 eng_;
};

} // namespace maca::text
