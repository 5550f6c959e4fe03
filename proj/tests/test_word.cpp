#include "catch_amalgamated.hpp"

#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "skein/word.hpp"

using namespace skein;
using skein::testing::brute_least_rotation;
using skein::testing::naive_reduce_units;
using skein::testing::random_word;

TEST_CASE("words reduce on construction") {
  const Word w({{1, 2}, {1, -2}, {2, 1}});
  REQUIRE(w == Word({{2, 1}}));
  REQUIRE(Word({{1, 1}, {2, 1}, {2, -1}, {1, -1}}).is_identity());
  REQUIRE(Word({{3, 0}}).is_identity());
  REQUIRE_THROWS_AS(Word({{0, 1}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Word({{-2, 1}}), std::invalid_argument);
}

TEST_CASE("reduction matches the unit-letter stack oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Letter> ls;
    const int len = static_cast<int>(rng.uniform(0, 12));
    for (int i = 0; i < len; ++i)
      ls.push_back({static_cast<int>(rng.uniform(1, 3)), rng.coin() ? 1LL : -1LL});
    std::vector<UnitLetter> raw;
    for (const Letter& l : ls) raw.push_back({l.gen, l.exp > 0 ? 0 : 1});
    REQUIRE(Word(ls).expand() == naive_reduce_units(raw));
  }
}

TEST_CASE("multiply and invert satisfy group laws") {
  Rng rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const Word a = random_word(rng, 3, 8);
    const Word b = random_word(rng, 3, 8);
    const Word c = random_word(rng, 3, 8);
    REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    REQUIRE(multiply(a, invert(a)).is_identity());
    REQUIRE(invert(multiply(a, b)) == multiply(invert(b), invert(a)));
    REQUIRE(multiply(a, Word()) == a);
  }
}

TEST_CASE("word_pow agrees with repeated multiplication") {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const Word a = random_word(rng, 2, 5);
    Word acc;
    for (int e = 0; e <= 4; ++e) {
      REQUIRE(word_pow(a, e) == acc);
      acc = multiply(acc, a);
    }
    REQUIRE(word_pow(a, -3) == invert(word_pow(a, 3)));
  }
}

TEST_CASE("cyclic reduction cancels across the ends") {
  REQUIRE(cyclically_reduce(parse_word("g1^-1 g2 g1")) == parse_word("g2"));
  REQUIRE(cyclically_reduce(parse_word("g1^-2 g2 g1^2")) == parse_word("g2"));
  REQUIRE(cyclically_reduce(parse_word("g1^-1 g2 g1^3")) == parse_word("g2 g1^2"));
  REQUIRE(cyclically_reduce(parse_word("g1 g2 g2^-1 g1^-1")).is_identity());
  // Already cyclically reduced stays put.
  const Word w = parse_word("g1 g2^-1");
  REQUIRE(cyclically_reduce(w) == w);
}

TEST_CASE("cyclic reduction is idempotent and conjugation-stable on necklaces") {
  Rng rng(104);
  for (int trial = 0; trial < 200; ++trial) {
    const Word w = random_word(rng, 3, 8);
    const Word r = cyclically_reduce(w);
    REQUIRE(cyclically_reduce(r) == r);
    const Word g = random_word(rng, 3, 4);
    REQUIRE(necklace_of(multiply(multiply(g, w), invert(g))) == necklace_of(w));
  }
}

TEST_CASE("necklace representative is the least rotation") {
  Rng rng(105);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = cyclically_reduce(random_word(rng, 3, 8));
    const Necklace c = necklace_of(w);
    REQUIRE(c.word().expand() == brute_least_rotation(w.expand()));
  }
}

TEST_CASE("necklaces of all rotations coincide") {
  Rng rng(106);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w = cyclically_reduce(random_word(rng, 3, 7));
    const std::vector<UnitLetter> u = w.expand();
    for (std::size_t s = 0; s < u.size(); ++s) {
      std::vector<UnitLetter> rot;
      for (std::size_t i = 0; i < u.size(); ++i) rot.push_back(u[(s + i) % u.size()]);
      REQUIRE(necklace_of(word_from_units(rot)) == necklace_of(w));
    }
  }
}

TEST_CASE("necklace order is length first, then expansion") {
  const Necklace a = necklace_of(parse_word("g2"));
  const Necklace b = necklace_of(parse_word("g1 g1"));
  REQUIRE(a < b);  // shorter wins regardless of letters
  const Necklace c = necklace_of(parse_word("g1 g2"));
  const Necklace d = necklace_of(parse_word("g1 g1"));
  REQUIRE(d < c);  // same length, lexicographic on unit letters
  const Necklace e = necklace_of(parse_word("g1"));
  const Necklace f = necklace_of(parse_word("g1^-1"));
  REQUIRE(e < f);  // positive letter sorts before its inverse
}

TEST_CASE("positive necklace counts by maximal length") {
  // Cumulative counts of nonempty binary necklaces of length <= L.
  const std::vector<std::size_t> expected{2, 5, 9, 15, 23, 37, 57};
  for (std::size_t L = 1; L <= expected.size(); ++L) {
    const std::vector<Necklace> all = enumerate_positive_necklaces(2, static_cast<int>(L));
    REQUIRE(all.size() == expected[L - 1]);
    std::set<Necklace> dedup(all.begin(), all.end());
    REQUIRE(dedup.size() == all.size());
    REQUIRE(std::is_sorted(all.begin(), all.end()));
    for (const Necklace& c : all) {
      REQUIRE(c.word().length() <= static_cast<long long>(L));
      REQUIRE(!c.is_identity());
      for (const Letter& l : c.word().letters()) {
        REQUIRE(l.gen <= 2);
        REQUIRE(l.exp > 0);
      }
    }
  }
}

TEST_CASE("necklace enumeration rejects desk-breaking requests") {
  REQUIRE_THROWS_AS(enumerate_positive_necklaces(2, 40), std::invalid_argument);
  REQUIRE_THROWS_AS(enumerate_positive_necklaces(0, 3), std::invalid_argument);
}

TEST_CASE("parse and format round-trip") {
  Rng rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const Word w = random_word(rng, 4, 9);
    REQUIRE(parse_word(format_word(w)) == w);
  }
  REQUIRE(format_word(Word()) == "");
  REQUIRE(format_word(parse_word("g1^1")) == "g1");
  REQUIRE(format_word(parse_word("  g1   g2^-2 ")) == "g1 g2^-2");
  REQUIRE(parse_word("").is_identity());
}

TEST_CASE("parse rejects malformed words with the offending token") {
  using Catch::Matchers::ContainsSubstring;
  REQUIRE_THROWS_WITH(parse_word("h1"), ContainsSubstring("h1"));
  REQUIRE_THROWS_WITH(parse_word("g0"), ContainsSubstring("g0"));
  REQUIRE_THROWS_WITH(parse_word("g1^"), ContainsSubstring("g1^"));
  REQUIRE_THROWS_WITH(parse_word("g1^0"), ContainsSubstring("g1^0"));
  REQUIRE_THROWS_WITH(parse_word("g2^x"), ContainsSubstring("g2^x"));
  REQUIRE_THROWS_WITH(parse_word("g"), ContainsSubstring("g"));
}
