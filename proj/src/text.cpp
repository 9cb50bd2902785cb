#include "maca/text.hpp"

#include <algorithm>
#include <cctype>

namespace maca::text {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> kStopwords = {
        "a",     "about", "am",    "an",    "and",   "are",   "as",    "at",
        "be",    "been",  "being", "by",    "can",   "could", "did",   "do",
        "does",  "for",   "from",  "he",    "her",   "him",   "his",   "how",
        "i",     "if",    "in",    "is",    "it",    "its",   "may",   "me",
        "might", "must",  "my",    "no",    "not",   "of",    "on",    "or",
        "our",   "please","shall", "she",   "should","so",    "tell",  "that",
        "the",   "their", "them",  "these", "they",  "this",  "those", "to",
        "us",    "was",   "we",    "were",  "what",  "when",  "where", "which",
        "who",   "whom",  "why",   "will",  "with",  "would", "yes",   "you",
        "your",
    };
    return kStopwords;
}

std::vector<std::string> tokenize(std::string_view text, bool drop_stopwords) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            if (!drop_stopwords || !stopwords().count(cur)) out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty() && (!drop_stopwords || !stopwords().count(cur))) out.push_back(cur);
    return out;
}

std::string slugify(std::string_view raw, std::size_t max_words) {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : raw) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if ((std::isspace(c) || c == '_' || c == '-') && !cur.empty()) {
            words.push_back(cur);
            cur.clear();
        }
        // other punctuation is stripped without splitting
    }
    if (!cur.empty()) words.push_back(cur);
    if (words.size() > max_words) words.resize(max_words);
    if (words.empty()) return "unknown";
    std::string slug = words[0];
    for (std::size_t i = 1; i < words.size(); ++i) {
        slug += '_';
        slug += words[i];
    }
    return slug;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double normalized_edit_distance(std::string_view a, std::string_view b) {
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t Rng::below(std::size_t n) {
    // rejection sampling for an unbiased draw
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

double Rng::uniform01() {
    return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
}

} // namespace maca::text
