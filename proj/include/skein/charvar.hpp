#pragma once

// Coordinates on the space of dimension-3 evaluations of two-letter words:
// the positive binary necklaces through length seven as targets, a fixed
// nine-element generating set, and an exact fitter expressing each target
// as a polynomial in the nine generators. Fitting runs degree by degree
// over one or two word-sized primes with Montgomery arithmetic, demands a
// fully determined linear system, verifies every leftover training row and
// a held-out block by substitution, then lifts to rationals by Chinese
// remaindering plus bounded rational reconstruction with a final exact
// spot check.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skein/exact_matrix.hpp"
#include "skein/modp.hpp"
#include "skein/rng.hpp"
#include "skein/scalar.hpp"
#include "skein/trace_poly.hpp"
#include "skein/word.hpp"

namespace skein {

inline std::vector<Word> nine_generators() {
  static const char* const kSpecs[9] = {"g1",      "g2",        "g1^2",      "g2^2",    "g1 g2",
                                        "g1^2 g2", "g1 g2^2",   "g1^2 g2^2", "g1^2 g2^2 g1 g2"};
  std::vector<Word> out;
  out.reserve(9);
  for (const char* s : kSpecs) out.push_back(parse_word(s));
  return out;
}

inline std::vector<Necklace> target_necklaces(int max_len = 7) {
  return enumerate_positive_necklaces(2, max_len);
}

// C(vars + degree, vars), the number of monomials of total degree <= degree.
inline unsigned long long monomial_count(int vars, int degree) {
  unsigned long long c = 1;
  for (int i = 1; i <= vars; ++i) c = c * static_cast<unsigned long long>(degree + i) / i;
  return c;
}

// Monomials in nine variables of total degree <= bound, graded by degree.
// Each non-constant monomial stores the index of the monomial obtained by
// removing one copy of its largest variable, so a full row of monomial
// values falls out of one multiply per entry.
struct MonomialTable {
  int bound = 0;
  std::vector<std::array<int, 9>> exps;
  std::vector<int> parent;
  std::vector<int> var_of;
  std::vector<std::size_t> degree_first;  // degree_first[d] = first index of degree d

  std::size_t size() const { return exps.size(); }
  std::size_t count_up_to(int d) const { return degree_first[static_cast<std::size_t>(d) + 1]; }

  static MonomialTable build(int bound) {
    if (bound < 0) throw std::invalid_argument("monomial table: negative degree bound");
    MonomialTable t;
    t.bound = bound;
    t.exps.push_back({});
    t.parent.push_back(-1);
    t.var_of.push_back(-1);
    std::vector<int> last_var{0};
    t.degree_first = {0, 1};
    std::size_t lo = 0, hi = 1;
    for (int d = 1; d <= bound; ++d) {
      for (std::size_t i = lo; i < hi; ++i) {
        for (int v = last_var[i]; v < 9; ++v) {
          std::array<int, 9> e = t.exps[i];
          e[static_cast<std::size_t>(v)] += 1;
          t.exps.push_back(e);
          t.parent.push_back(static_cast<int>(i));
          t.var_of.push_back(v);
          last_var.push_back(v);
        }
      }
      lo = hi;
      hi = t.exps.size();
      t.degree_first.push_back(hi);
    }
    if (t.exps.size() != monomial_count(9, bound))
      throw std::logic_error("monomial table: count mismatch");
    return t;
  }
};

namespace detail {

constexpr std::uint64_t kFitSampleStream = 0x7a11bc22ULL;

inline std::uint64_t rational_residue(const Rational& q, std::uint64_t p) {
  BigInt num = boost::multiprecision::numerator(q) % p;
  if (num < 0) num += p;
  const BigInt den = boost::multiprecision::denominator(q) % p;
  if (den == 0) throw std::domain_error("rational residue: denominator divisible by the modulus");
  return mulmod(num.convert_to<std::uint64_t>(), invmod(den.convert_to<std::uint64_t>(), p), p);
}

using Mat3 = std::array<std::uint64_t, 9>;

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b, std::uint64_t p) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::uint64_t acc = 0;
      for (int k = 0; k < 3; ++k)
        acc = addmod(acc, mulmod(a[static_cast<std::size_t>(3 * i + k)],
                                 b[static_cast<std::size_t>(3 * k + j)], p),
                     p);
      r[static_cast<std::size_t>(3 * i + j)] = acc;
    }
  return r;
}

inline Mat3 reduce_matrix3(const ExactMatrix& m, std::uint64_t p) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[static_cast<std::size_t>(3 * i + j)] = rational_residue(m.at(i, j).rational(), p);
  return r;
}

inline std::uint64_t trace_word_mod(const Mat3& a, const Mat3& b, const Word& w, std::uint64_t p) {
  Mat3 m{1 % p, 0, 0, 0, 1 % p, 0, 0, 0, 1 % p};
  for (const Letter& l : w.letters()) {
    if (l.gen > 2) throw std::invalid_argument("fit sample: word uses a generator beyond g2");
    if (l.exp < 0) throw std::invalid_argument("fit sample: negative exponents are not supported");
    const Mat3& base = l.gen == 1 ? a : b;
    for (long long i = 0; i < l.exp; ++i) m = mat3_mul(m, base, p);
  }
  return addmod(addmod(m[0], m[4], p), m[8], p);
}

// All samples for one prime, in the Montgomery domain. Sample index i is a
// deterministic function of the master seed alone, so every prime sees the
// reductions of the same rational points.
struct PrimeSamples {
  std::uint64_t p = 0;
  std::vector<std::array<std::uint64_t, 9>> gen_vals;
  std::vector<std::uint64_t> target_vals;  // [i * targets + t]
};

inline Representation fit_sample_representation(std::uint64_t master_seed, std::size_t index) {
  return random_representation(3, 2, derive_seed(master_seed, kFitSampleStream,
                                                 static_cast<std::uint64_t>(index)),
                               FieldSpec::Q());
}

inline PrimeSamples build_prime_samples(std::uint64_t p, std::uint64_t master_seed, std::size_t count,
                                        const std::vector<Word>& gens,
                                        const std::vector<Necklace>& targets) {
  const Montgomery mont(p);
  PrimeSamples s;
  s.p = p;
  s.gen_vals.resize(count);
  s.target_vals.resize(count * targets.size());
  for (std::size_t i = 0; i < count; ++i) {
    const Representation rep = fit_sample_representation(master_seed, i);
    const Mat3 a = reduce_matrix3(rep.image(1), p);
    const Mat3 b = reduce_matrix3(rep.image(2), p);
    for (std::size_t g = 0; g < 9; ++g)
      s.gen_vals[i][g] = mont.to(trace_word_mod(a, b, gens[g], p));
    for (std::size_t t = 0; t < targets.size(); ++t)
      s.target_vals[i * targets.size() + t] = mont.to(trace_word_mod(a, b, targets[t].word(), p));
  }
  return s;
}

using SparseSolution = std::vector<std::pair<std::size_t, std::uint64_t>>;

struct DegreeOutcome {
  std::size_t rank = 0;
  std::size_t free_columns = 0;
  std::vector<char> fitted;              // per active target: consistent and verified
  std::vector<SparseSolution> residues;  // plain-domain residues when fitted
};

// One degree, one prime. Eliminates on the leading rows, reads a solution
// per consistent target, then verifies it against every remaining training
// row and the held-out block.
inline DegreeOutcome solve_degree(const MonomialTable& table, int degree, const PrimeSamples& s,
                                  std::size_t training, std::size_t target_stride,
                                  const std::vector<std::size_t>& active) {
  const Montgomery mont(s.p);
  const std::uint64_t p = s.p;
  const std::size_t m = table.count_up_to(degree);
  const std::size_t t_count = active.size();
  const std::size_t cols = m + t_count;
  const std::size_t rows = std::min(training, m + 64);
  if (rows < m) throw std::logic_error("fit: too few training rows for this degree");

  std::vector<std::uint64_t> mat(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::uint64_t* row = &mat[r * cols];
    row[0] = mont.one();
    for (std::size_t j = 1; j < m; ++j)
      row[j] = mont.mul(row[static_cast<std::size_t>(table.parent[j])],
                        s.gen_vals[r][static_cast<std::size_t>(table.var_of[j])]);
    for (std::size_t k = 0; k < t_count; ++k)
      row[m + k] = s.target_vals[r * target_stride + active[k]];
  }

  DegreeOutcome out;
  out.fitted.assign(t_count, 0);
  out.residues.resize(t_count);

  std::size_t prow = 0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t sel = rows;
    for (std::size_t r = prow; r < rows; ++r) {
      if (mat[r * cols + col] != 0) { sel = r; break; }
    }
    if (sel == rows) {
      ++out.free_columns;
      continue;
    }
    if (sel != prow)
      std::swap_ranges(mat.begin() + static_cast<std::ptrdiff_t>(sel * cols + col),
                       mat.begin() + static_cast<std::ptrdiff_t>(sel * cols + cols),
                       mat.begin() + static_cast<std::ptrdiff_t>(prow * cols + col));
    std::uint64_t* prow_ptr = &mat[prow * cols];
    const std::uint64_t inv = mont.to(invmod(mont.from(prow_ptr[col]), p));
    for (std::size_t k = col; k < cols; ++k) prow_ptr[k] = mont.mul(prow_ptr[k], inv);
    for (std::size_t r = prow + 1; r < rows; ++r) {
      std::uint64_t* rp = &mat[r * cols];
      const std::uint64_t f = rp[col];
      if (f == 0) continue;
      rp[col] = 0;
      for (std::size_t k = col + 1; k < cols; ++k)
        rp[k] = submod(rp[k], mont.mul(f, prow_ptr[k]), p);
    }
    ++prow;
  }
  out.rank = prow;
  if (out.free_columns > 0) return out;  // underdetermined, no certified fit

  std::vector<char> candidate(t_count, 1);
  for (std::size_t r = prow; r < rows; ++r)
    for (std::size_t k = 0; k < t_count; ++k)
      if (mat[r * cols + m + k] != 0) candidate[k] = 0;

  // Full rank: pivot row i sits on column i with a unit pivot.
  std::vector<std::vector<std::uint64_t>> sols(t_count);
  for (std::size_t k = 0; k < t_count; ++k) {
    if (!candidate[k]) continue;
    std::vector<std::uint64_t>& x = sols[k];
    x.assign(m, 0);
    for (std::size_t ii = m; ii-- > 0;) {
      const std::uint64_t* rp = &mat[ii * cols];
      std::uint64_t acc = rp[m + k];
      for (std::size_t j = ii + 1; j < m; ++j)
        if (rp[j] != 0 && x[j] != 0) acc = submod(acc, mont.mul(rp[j], x[j]), p);
      x[ii] = acc;
    }
  }

  const std::size_t total = s.gen_vals.size();
  std::vector<std::uint64_t> scratch(m);
  for (std::size_t r = rows; r < total; ++r) {
    bool any = false;
    for (std::size_t k = 0; k < t_count; ++k) any = any || candidate[k];
    if (!any) break;
    scratch[0] = mont.one();
    for (std::size_t j = 1; j < m; ++j)
      scratch[j] = mont.mul(scratch[static_cast<std::size_t>(table.parent[j])],
                            s.gen_vals[r][static_cast<std::size_t>(table.var_of[j])]);
    for (std::size_t k = 0; k < t_count; ++k) {
      if (!candidate[k]) continue;
      std::uint64_t acc = 0;
      const std::vector<std::uint64_t>& x = sols[k];
      for (std::size_t j = 0; j < m; ++j)
        if (x[j] != 0) acc = addmod(acc, mont.mul(x[j], scratch[j]), p);
      if (acc != s.target_vals[r * target_stride + active[k]]) candidate[k] = 0;
    }
  }

  for (std::size_t k = 0; k < t_count; ++k) {
    if (!candidate[k]) continue;
    out.fitted[k] = 1;
    for (std::size_t j = 0; j < m; ++j)
      if (sols[k][j] != 0) out.residues[k].push_back({j, mont.from(sols[k][j])});
  }
  return out;
}

struct PerPrimeFit {
  std::uint64_t p = 0;
  std::vector<int> degree;               // -1 while unfitted
  std::vector<SparseSolution> residues;  // plain residues
  std::size_t rank_failures = 0;
};

inline PerPrimeFit fit_under_prime(std::uint64_t p, std::uint64_t master_seed,
                                   const MonomialTable& table, std::size_t training,
                                   std::size_t heldout, const std::vector<Word>& gens,
                                   const std::vector<Necklace>& targets, bool progress) {
  PerPrimeFit st;
  st.p = p;
  st.degree.assign(targets.size(), -1);
  st.residues.resize(targets.size());
  const PrimeSamples samples = build_prime_samples(p, master_seed, training + heldout, gens, targets);
  for (int d = 0; d <= table.bound; ++d) {
    std::vector<std::size_t> active;
    for (std::size_t t = 0; t < targets.size(); ++t)
      if (st.degree[t] < 0) active.push_back(t);
    if (active.empty()) break;
    const auto t0 = std::chrono::steady_clock::now();
    const DegreeOutcome got = solve_degree(table, d, samples, training, targets.size(), active);
    if (got.free_columns > 0) {
      ++st.rank_failures;
      if (progress)
        std::fprintf(stderr, "[fit] p=%llu degree %d: %zu free columns, no certified fits\n",
                     static_cast<unsigned long long>(p), d, got.free_columns);
      continue;
    }
    std::size_t newly = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (!got.fitted[k]) continue;
      st.degree[active[k]] = d;
      st.residues[active[k]] = got.residues[k];
      ++newly;
    }
    if (progress) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::fprintf(stderr, "[fit] p=%llu degree %d: %zu monomials, %zu of %zu targets fitted (%.1fs)\n",
                   static_cast<unsigned long long>(p), d, table.count_up_to(d), newly, active.size(),
                   secs);
    }
  }
  return st;
}

inline BigInt crt_pair(std::uint64_t r0, std::uint64_t p0, std::uint64_t r1, std::uint64_t p1) {
  const std::uint64_t inv = invmod(p0 % p1, p1);
  const std::uint64_t diff = submod(r1 % p1, r0 % p1, p1);
  const std::uint64_t k = mulmod(diff, inv, p1);
  return BigInt(r0) + BigInt(p0) * k;
}

// Bounded rational reconstruction: the unique num/den with |num|, den below
// sqrt(modulus / 2) congruent to the residue, when one exists.
inline std::optional<Rational> reconstruct_rational(BigInt residue, const BigInt& modulus) {
  residue %= modulus;
  if (residue < 0) residue += modulus;
  if (residue == 0) return Rational(0);
  const BigInt half = (modulus - 1) / 2;
  const BigInt bound = boost::multiprecision::sqrt(half);
  BigInt r0 = modulus, r1 = residue;
  BigInt t0 = 0, t1 = 1;
  while (r1 > bound) {
    const BigInt q = r0 / r1;
    BigInt tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0) return std::nullopt;
  BigInt num = r1, den = t1;
  if (den < 0) { den = -den; num = -num; }
  if (den > bound) return std::nullopt;
  if (boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den) != 1) return std::nullopt;
  if (boost::multiprecision::gcd(den, modulus) != 1) return std::nullopt;
  return Rational(num, den);
}

}  // namespace detail

struct FitOptions {
  int degree_bound = 6;
  std::uint64_t seed = 0;
  std::size_t training = 0;                   // 0: twice the monomial count
  std::size_t heldout = 0;                    // 0: max(50, monomial count / 2)
  std::optional<std::uint64_t> user_prime;    // set: single-prime fit, residues only
  bool progress = false;
};

struct FittedTarget {
  Necklace target;
  bool fitted = false;
  int degree = -1;
  detail::SparseSolution residues0, residues1;  // per-prime coefficient residues
  bool reconstructed = false;                   // rational lift passed the exact spot check
  std::vector<std::pair<std::size_t, Rational>> coefficients;
};

struct FitReport {
  int degree_bound = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> primes;
  std::size_t training = 0;
  std::size_t heldout = 0;
  std::size_t rank_failures = 0;
  int prime_attempts = 1;
  MonomialTable table;
  std::vector<Word> generators;
  std::vector<FittedTarget> targets;
};

// Fit every target as a polynomial of total degree <= degree_bound in the
// nine generators. Over Q this runs two independent primes, insists they
// agree on which targets fit at which degree, and lifts the agreeing
// residues; a disagreement draws a fresh prime pair.
inline FitReport fit_targets(const std::vector<Necklace>& targets, const FitOptions& opt) {
  if (targets.empty()) throw std::invalid_argument("fit: no targets given");
  if (opt.degree_bound < 0 || opt.degree_bound > 6)
    throw std::invalid_argument("fit: degree bound must be in 0..6");
  for (const Necklace& t : targets)
    for (const Letter& l : t.word().letters())
      if (l.gen > 2 || l.exp < 0)
        throw std::invalid_argument("fit: targets must be positive words in g1, g2");
  if (opt.user_prime) {
    if (!is_prime_u64(*opt.user_prime) || *opt.user_prime < (1ULL << 20))
      throw std::invalid_argument("fit: user prime must be a prime of at least 2^20");
    if (*opt.user_prime >= (1ULL << 62))
      throw std::invalid_argument("fit: user prime must be below 2^62");
  }

  FitReport rep;
  rep.degree_bound = opt.degree_bound;
  rep.seed = opt.seed;
  rep.table = MonomialTable::build(opt.degree_bound);
  rep.generators = nine_generators();
  const std::size_t m = rep.table.size();
  rep.training = opt.training != 0 ? opt.training : 2 * m;
  if (rep.training < 2 * m)
    throw std::invalid_argument("fit: training size must be at least twice the monomial count");
  rep.heldout = opt.heldout != 0 ? opt.heldout : std::max<std::size_t>(50, m / 2);
  if (rep.heldout < 50) throw std::invalid_argument("fit: held-out size must be at least 50");

  rep.targets.resize(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) rep.targets[t].target = targets[t];

  if (opt.user_prime) {
    const detail::PerPrimeFit st =
        detail::fit_under_prime(*opt.user_prime, opt.seed, rep.table, rep.training, rep.heldout,
                                rep.generators, targets, opt.progress);
    rep.primes = {*opt.user_prime};
    rep.rank_failures = st.rank_failures;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      rep.targets[t].fitted = st.degree[t] >= 0;
      rep.targets[t].degree = st.degree[t];
      rep.targets[t].residues0 = st.residues[t];
    }
    return rep;
  }

  constexpr int kMaxAttempts = 4;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t p0 = draw_prime(opt.seed, 2 * static_cast<std::uint64_t>(attempt));
    const std::uint64_t p1 = draw_prime(opt.seed, 2 * static_cast<std::uint64_t>(attempt) + 1);
    const detail::PerPrimeFit f0 = detail::fit_under_prime(p0, opt.seed, rep.table, rep.training,
                                                           rep.heldout, rep.generators, targets,
                                                           opt.progress);
    const detail::PerPrimeFit f1 = detail::fit_under_prime(p1, opt.seed, rep.table, rep.training,
                                                           rep.heldout, rep.generators, targets,
                                                           opt.progress);
    rep.prime_attempts = attempt + 1;
    bool agree = true;
    for (std::size_t t = 0; t < targets.size() && agree; ++t) agree = f0.degree[t] == f1.degree[t];
    if (!agree) {
      if (opt.progress)
        std::fprintf(stderr, "[fit] prime pair disagreed on fitted degrees, redrawing\n");
      continue;
    }
    rep.primes = {p0, p1};
    rep.rank_failures = f0.rank_failures + f1.rank_failures;
    const BigInt modulus = BigInt(p0) * p1;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      FittedTarget& ft = rep.targets[t];
      ft.fitted = f0.degree[t] >= 0;
      ft.degree = f0.degree[t];
      ft.residues0 = f0.residues[t];
      ft.residues1 = f1.residues[t];
      if (!ft.fitted) continue;
      // Union of supports: a coefficient can reduce to zero mod one prime.
      std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> merged;
      for (const auto& [j, r] : ft.residues0) merged[j].first = r;
      for (const auto& [j, r] : ft.residues1) merged[j].second = r;
      bool all_ok = true;
      std::vector<std::pair<std::size_t, Rational>> coeffs;
      for (const auto& [j, rr] : merged) {
        const std::optional<Rational> c =
            detail::reconstruct_rational(detail::crt_pair(rr.first, p0, rr.second, p1), modulus);
        if (!c) { all_ok = false; break; }
        if (*c != 0) coeffs.push_back({j, *c});
      }
      if (all_ok) {
        ft.reconstructed = true;  // provisional until the exact spot check below
        ft.coefficients = std::move(coeffs);
      }
    }
    // Exact spot check at a fresh rational point; failures demote the lift
    // back to residues.
    const Representation fresh =
        detail::fit_sample_representation(opt.seed, rep.training + rep.heldout);
    std::array<Rational, 9> gvals;
    for (std::size_t v = 0; v < 9; ++v)
      gvals[v] = rho(fresh, rep.generators[v]).trace().rational();
    std::vector<Rational> mono(m);
    mono[0] = Rational(1);
    for (std::size_t j = 1; j < m; ++j)
      mono[j] = mono[static_cast<std::size_t>(rep.table.parent[j])] *
                gvals[static_cast<std::size_t>(rep.table.var_of[j])];
    for (FittedTarget& ft : rep.targets) {
      if (!ft.reconstructed) continue;
      Rational acc(0);
      for (const auto& [j, c] : ft.coefficients) acc += c * mono[j];
      if (acc != rho(fresh, ft.target.word()).trace().rational()) {
        ft.reconstructed = false;
        ft.coefficients.clear();
      }
    }
    return rep;
  }
  throw std::runtime_error("fit: independent primes kept disagreeing; aborting");
}

inline FitReport fit_all_targets(const FitOptions& opt) {
  return fit_targets(target_necklaces(7), opt);
}

// The fitted polynomial as a trace-ring element, for printing and JSON.
inline TracePolynomial fitted_polynomial_q(const FittedTarget& t, const MonomialTable& table,
                                           const std::vector<Word>& gens) {
  if (!t.reconstructed) throw std::invalid_argument("fitted polynomial: no rational lift available");
  TracePolynomial out = TracePolynomial::zero(3, FieldSpec::Q());
  for (const auto& [j, c] : t.coefficients) {
    TracePolynomial term = TracePolynomial::constant(ExactScalar::from_rational(c), 3);
    const std::array<int, 9>& e = table.exps[j];
    for (std::size_t v = 0; v < 9; ++v)
      for (int i = 0; i < e[v]; ++i)
        term = term * TracePolynomial::chi(necklace_of(gens[v]), 3, FieldSpec::Q());
    out = out + term;
  }
  return out;
}

inline TracePolynomial fitted_polynomial_p(const detail::SparseSolution& residues, std::uint64_t p,
                                           const MonomialTable& table,
                                           const std::vector<Word>& gens) {
  const FieldSpec f = FieldSpec::Fp(p);
  TracePolynomial out = TracePolynomial::zero(3, f);
  for (const auto& [j, r] : residues) {
    TracePolynomial term =
        TracePolynomial::constant(ExactScalar::from_int(static_cast<long long>(r), f), 3);
    const std::array<int, 9>& e = table.exps[j];
    for (std::size_t v = 0; v < 9; ++v)
      for (int i = 0; i < e[v]; ++i) term = term * TracePolynomial::chi(necklace_of(gens[v]), 3, f);
    out = out + term;
  }
  return out;
}

}  // namespace skein
