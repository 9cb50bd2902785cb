#include <doctest.h>

#include <algorithm>
#include <set>

#include "maca/text.hpp"

using namespace maca::text;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
    CHECK(tokenize("Card FEE; atm-withdrawal!", false) ==
          std::vector<std::string>{"card", "fee", "atm", "withdrawal"});
    CHECK(tokenize("x2 3y", false) == std::vector<std::string>{"x2", "3y"});
    CHECK(tokenize("", false).empty());
    CHECK(tokenize("  -- ;; ", false).empty());
}

TEST_CASE("tokenize drops stopwords only when asked") {
    CHECK(tokenize("how do i reset my card pin") ==
          std::vector<std::string>{"reset", "card", "pin"});
    CHECK(tokenize("how do i reset my card pin", false).size() == 7);
    CHECK(tokenize("the of and to").empty());
}

TEST_CASE("slugify lowercases and truncates to max words") {
    CHECK(slugify("How do I", 3) == "how_do_i");
    CHECK(slugify("card") == "card");
    CHECK(slugify("fee limit", 3) == "fee_limit");
    CHECK(slugify("a b c d e f", 2) == "a_b");
    CHECK(slugify("Reset-PIN (now)") == "reset_pin_now");
    CHECK(slugify("") == "unknown");
    CHECK(slugify("!!! ???") == "unknown");
}

TEST_CASE("levenshtein distance") {
    CHECK(levenshtein("", "") == 0);
    CHECK(levenshtein("abc", "") == 3);
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("card", "loan") == 4);
    CHECK(levenshtein("fee", "fee") == 0);
    CHECK(levenshtein("fees", "fee") == 1);
}

TEST_CASE("normalized edit distance divides by the longer string") {
    CHECK(normalized_edit_distance("", "") == doctest::Approx(0.0));
    CHECK(normalized_edit_distance("abc", "abc") == doctest::Approx(0.0));
    CHECK(normalized_edit_distance("abcd", "abc") == doctest::Approx(0.25));
    CHECK(normalized_edit_distance("card", "loan") == doctest::Approx(1.0));
}

TEST_CASE("fnv1a64 matches the reference constants") {
    CHECK(fnv1a64("", 0) == 1469598103934665603ULL);
    CHECK(fnv1a64("a", 0) == 4953267810257967366ULL);
    CHECK(fnv1a64("card", 0) == 7762614388330502869ULL);
    CHECK(fnv1a64("card", 7) == 14100615556941737166ULL);
    CHECK(fnv1a64("card", 7) != fnv1a64("card", 8));
}

TEST_CASE("rng is deterministic per seed") {
    Rng a(42), b(42), c(43);
    std::vector<std::uint64_t> xs, ys;
    for (int i = 0; i < 16; ++i) {
        xs.push_back(a.next());
        ys.push_back(b.next());
    }
    CHECK(xs == ys);
    bool differs = false;
    for (int i = 0; i < 16; ++i) differs |= (c.next() != xs[static_cast<std::size_t>(i)]);
    CHECK(differs);
}

TEST_CASE("rng below stays in range and covers small domains") {
    Rng r(1);
    std::set<std::size_t> seen;
    for (int i = 0; i < 200; ++i) {
        std::size_t v = r.below(5);
        CHECK(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("rng uniform01 stays in the half-open unit interval") {
    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("shuffle permutes deterministically") {
    std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> v2 = v1;
    Rng a(9), b(9);
    a.shuffle(v1);
    b.shuffle(v2);
    CHECK(v1 == v2);
    std::vector<int> sorted_copy = v1;
    std::sort(sorted_copy.begin(), sorted_copy.end());
    CHECK(sorted_copy == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}
