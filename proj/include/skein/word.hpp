#pragma once

// Free-group words in run-length form, and necklaces: words up to cyclic
// rotation, used as trace arguments. A word is a sequence of (generator,
// exponent) letters; the identity is the empty word. Words are kept freely
// reduced at all times. A necklace stores the cyclically reduced word whose
// unit-letter expansion is the lexicographically least among all rotations.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace skein {

struct Letter {
  int gen = 0;         // generator index, >= 1
  long long exp = 0;   // nonzero

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// One unit-exponent letter of an expansion. sign 0 encodes exponent +1 and
// sign 1 encodes -1, so that the derived order puts g_i before g_i^-1 and
// both before g_{i+1}.
struct UnitLetter {
  int gen = 0;
  int sign = 0;

  friend bool operator==(const UnitLetter&, const UnitLetter&) = default;
  friend auto operator<=>(const UnitLetter&, const UnitLetter&) = default;
};

class Word {
 public:
  Word() = default;

  // Reduces on construction: merges adjacent letters with equal generator,
  // drops zero exponents.
  explicit Word(std::vector<Letter> letters) {
    for (const Letter& l : letters) append_reduced(l);
  }

  const std::vector<Letter>& letters() const { return letters_; }
  bool is_identity() const { return letters_.empty(); }

  // Number of unit letters, i.e. the sum of |exp|.
  long long length() const {
    long long n = 0;
    for (const Letter& l : letters_) n += std::llabs(l.exp);
    return n;
  }

  std::vector<UnitLetter> expand() const {
    std::vector<UnitLetter> u;
    u.reserve(static_cast<std::size_t>(length()));
    for (const Letter& l : letters_) {
      const int sign = l.exp > 0 ? 0 : 1;
      for (long long i = 0; i < std::llabs(l.exp); ++i) u.push_back({l.gen, sign});
    }
    return u;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  friend Word multiply(const Word&, const Word&);
  friend Word invert(const Word&);
  friend Word word_from_units(const std::vector<UnitLetter>&);

  void append_reduced(const Letter& l) {
    if (l.gen < 1) throw std::invalid_argument("word letter: generator index must be >= 1");
    if (l.exp == 0) return;
    if (!letters_.empty() && letters_.back().gen == l.gen) {
      letters_.back().exp += l.exp;
      if (letters_.back().exp == 0) letters_.pop_back();
      return;
    }
    letters_.push_back(l);
  }

  std::vector<Letter> letters_;
};

// Free reduction. Word values are reduced on construction, so this is a
// restatement kept for symmetry with the other word operations.
inline Word reduce(const Word& w) { return w; }

inline Word multiply(const Word& a, const Word& b) {
  Word r = a;
  for (const Letter& l : b.letters_) r.append_reduced(l);
  return r;
}

inline Word invert(const Word& w) {
  Word r;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
    r.append_reduced({it->gen, -it->exp});
  return r;
}

inline Word word_pow(const Word& w, long long k) {
  Word base = k < 0 ? invert(w) : w;
  long long reps = std::llabs(k);
  Word r;
  for (long long i = 0; i < reps; ++i) r = multiply(r, base);
  return r;
}

inline Word word_from_units(const std::vector<UnitLetter>& units) {
  Word r;
  for (const UnitLetter& u : units) r.append_reduced({u.gen, u.sign == 0 ? 1 : -1});
  return r;
}

// Strips conjugation: cancels inverse pairs across the two ends until the
// word is cyclically reduced.
inline Word cyclically_reduce(Word w) {
  std::vector<Letter> ls(w.letters().begin(), w.letters().end());
  while (ls.size() >= 2 && ls.front().gen == ls.back().gen &&
         (ls.front().exp > 0) != (ls.back().exp > 0)) {
    const long long f = ls.front().exp, b = ls.back().exp;
    if (f + b == 0) {
      ls.erase(ls.begin());
      ls.pop_back();
    } else if (std::llabs(f) > std::llabs(b)) {
      ls.front().exp = f + b;
      ls.pop_back();
    } else {
      ls.back().exp = f + b;
      ls.erase(ls.begin());
    }
  }
  return Word(std::move(ls));
}

// A word up to cyclic rotation. The stored representative is pinned by the
// least-rotation rule, so necklace equality is plain representative equality.
class Necklace {
 public:
  Necklace() = default;  // the identity necklace

  const Word& word() const { return rep_; }
  bool is_identity() const { return rep_.is_identity(); }
  long long length() const { return rep_.length(); }

  friend bool operator==(const Necklace&, const Necklace&) = default;

  // Order: shorter first, then lexicographic on the unit expansion. The
  // representative is already the least rotation, so comparing stored
  // expansions is canonical.
  friend bool operator<(const Necklace& a, const Necklace& b) {
    if (a.rep_.length() != b.rep_.length()) return a.rep_.length() < b.rep_.length();
    return a.rep_.expand() < b.rep_.expand();
  }

 private:
  friend Necklace necklace_of(const Word&);
  explicit Necklace(Word rep) : rep_(std::move(rep)) {}

  Word rep_;
};

inline Necklace necklace_of(const Word& w) {
  const Word cyc = cyclically_reduce(w);
  if (cyc.is_identity()) return Necklace();
  const std::vector<UnitLetter> u = cyc.expand();
  const std::size_t n = u.size();
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    // Compare rotation s against rotation best, unit by unit.
    for (std::size_t i = 0; i < n; ++i) {
      const UnitLetter& x = u[(s + i) % n];
      const UnitLetter& y = u[(best + i) % n];
      if (x < y) { best = s; break; }
      if (y < x) break;
    }
  }
  std::vector<UnitLetter> rot;
  rot.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rot.push_back(u[(best + i) % n]);
  return Necklace(word_from_units(rot));
}

// All necklaces of nonempty positive words (every exponent +1) over
// generators g1..gk of length at most max_len, sorted.
inline std::vector<Necklace> enumerate_positive_necklaces(int k, int max_len) {
  if (k < 1) throw std::invalid_argument("enumerate_positive_necklaces: k must be >= 1");
  if (max_len < 1) throw std::invalid_argument("enumerate_positive_necklaces: max_len must be >= 1");
  {
    double words = 0, p = 1;
    for (int len = 1; len <= max_len; ++len) { p *= k; words += p; }
    if (words > 2e7) throw std::invalid_argument("enumerate_positive_necklaces: k^max_len beyond desk scale");
  }
  std::set<Necklace> out;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<int> digits(static_cast<std::size_t>(len), 1);
    while (true) {
      std::vector<Letter> ls;
      for (int d : digits) ls.push_back({d, 1});
      out.insert(necklace_of(Word(std::move(ls))));
      int pos = len - 1;
      while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == k) {
        digits[static_cast<std::size_t>(pos)] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++digits[static_cast<std::size_t>(pos)];
    }
  }
  return {out.begin(), out.end()};
}

// Text syntax: whitespace separated tokens g<k> or g<k>^<e>; the empty
// string is the identity.
inline Word parse_word(const std::string& text) {
  std::vector<Letter> ls;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) { ++i; continue; }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    const std::string tok = text.substr(i, j - i);
    i = j;
    const auto bad = [&tok]() {
      return std::invalid_argument("word token '" + tok + "': expected g<k> or g<k>^<e>");
    };
    if (tok.size() < 2 || tok[0] != 'g') throw bad();
    std::size_t p = 1;
    while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p;
    if (p == 1) throw bad();
    long long gen = 0;
    try {
      gen = std::stoll(tok.substr(1, p - 1));
    } catch (const std::exception&) { throw bad(); }
    if (gen < 1) throw bad();
    long long exp = 1;
    if (p < tok.size()) {
      if (tok[p] != '^' || p + 1 == tok.size()) throw bad();
      const std::string es = tok.substr(p + 1);
      if (es.find_first_not_of("-0123456789") != std::string::npos) throw bad();
      std::size_t used = 0;
      try {
        exp = std::stoll(es, &used);
      } catch (const std::exception&) { throw bad(); }
      if (used != es.size() || exp == 0) throw bad();
    }
    ls.push_back({static_cast<int>(gen), exp});
  }
  return Word(std::move(ls));
}

inline std::string format_word(const Word& w) {
  std::string s;
  for (const Letter& l : w.letters()) {
    if (!s.empty()) s += ' ';
    s += 'g';
    s += std::to_string(l.gen);
    if (l.exp != 1) {
      s += '^';
      s += std::to_string(l.exp);
    }
  }
  return s;
}

inline std::string format_necklace(const Necklace& c) { return format_word(c.word()); }

}  // namespace skein
