#pragma once

// Multilinear trace identities for determinant-one matrices: the cycle-type
// products phi, the fundamental scalar identity F (vanishes identically in
// dimension n when built from n+1 arguments), its matrix-valued companion G
// with Tr(G * X) = F, the expression of a determinant through power traces,
// and the low-dimensional specials: the classical dimension-2 product rule
// and the dimension-3 identity produced by sliding a trivalent vertex pair.

#include <stdexcept>
#include <string>
#include <vector>

#include "skein/exact_matrix.hpp"
#include "skein/graph.hpp"
#include "skein/perm.hpp"
#include "skein/tensor_eval.hpp"
#include "skein/trace_poly.hpp"

namespace skein {

// Product over the cycles of sigma of chi of the word product along each
// cycle. words.size() must match the degree of sigma.
inline TracePolynomial phi_sigma(const std::vector<Word>& words, const Perm& sigma, int ambient_n,
                                 const FieldSpec& f = FieldSpec::Q()) {
  if (words.size() != sigma.size())
    throw std::invalid_argument("phi_sigma: arity mismatch between words and permutation");
  TracePolynomial out = TracePolynomial::from_int(1, ambient_n, f);
  if (sigma.empty()) return out;
  for (const std::vector<int>& cycle : cycles_from(sigma, 0)) {
    Word prod;
    for (int i : cycle) prod = multiply(prod, words[static_cast<std::size_t>(i)]);
    out = out * TracePolynomial::chi(necklace_of(prod), ambient_n, f);
  }
  return out;
}

// Same, except the cycle through anchor stays an untraced word factor; the
// result is a matrix expression with the remaining cycles as coefficient.
inline MatrixExpression phi_sigma_anchored(const std::vector<Word>& words, const Perm& sigma,
                                           int anchor, int ambient_n,
                                           const FieldSpec& f = FieldSpec::Q()) {
  if (words.size() != sigma.size())
    throw std::invalid_argument("phi_sigma_anchored: arity mismatch between words and permutation");
  const std::vector<std::vector<int>> cycles = cycles_from(sigma, anchor);
  Word bare;
  for (int i : cycles.front()) bare = multiply(bare, words[static_cast<std::size_t>(i)]);
  TracePolynomial coeff = TracePolynomial::from_int(1, ambient_n, f);
  for (std::size_t c = 1; c < cycles.size(); ++c) {
    Word prod;
    for (int i : cycles[c]) prod = multiply(prod, words[static_cast<std::size_t>(i)]);
    coeff = coeff * TracePolynomial::chi(necklace_of(prod), ambient_n, f);
  }
  return MatrixExpression::term(coeff, bare);
}

// The degree-n fundamental identity in n+1 word arguments, as an element of
// the trace ring of dimension ambient_n. It vanishes under every evaluation
// at determinant-one matrices of size identity_n; at other sizes it is the
// natural negative control.
inline TracePolynomial fundamental_F(const std::vector<Word>& words, int identity_n,
                                     int ambient_n = 0, const FieldSpec& f = FieldSpec::Q()) {
  if (identity_n < 1) throw std::invalid_argument("fundamental_F: identity dimension must be >= 1");
  if (ambient_n == 0) ambient_n = identity_n;
  if (words.size() != static_cast<std::size_t>(identity_n) + 1)
    throw std::invalid_argument("fundamental_F: expected " + std::to_string(identity_n + 1) + " words");
  TracePolynomial out = TracePolynomial::zero(ambient_n, f);
  for (const Perm& sigma : enumerate_perms(identity_n + 1)) {
    const TracePolynomial t = phi_sigma(words, sigma, ambient_n, f);
    out = out + (perm_sign(sigma) > 0 ? t : -t);
  }
  return out;
}

// The matrix-valued companion: n word arguments, Tr(G * X) recovers F on
// n+1. Evaluates to the zero matrix at determinant-one matrices of size
// identity_n.
inline MatrixExpression fundamental_G(const std::vector<Word>& words, int identity_n,
                                      int ambient_n = 0, const FieldSpec& f = FieldSpec::Q()) {
  if (identity_n < 1) throw std::invalid_argument("fundamental_G: identity dimension must be >= 1");
  if (ambient_n == 0) ambient_n = identity_n;
  if (words.size() != static_cast<std::size_t>(identity_n))
    throw std::invalid_argument("fundamental_G: expected " + std::to_string(identity_n) + " words");
  MatrixExpression out = MatrixExpression::zero(ambient_n, f);
  for (const Perm& sigma : enumerate_perms(identity_n)) {
    const int sign = perm_sign(sigma);
    {
      const TracePolynomial t = phi_sigma(words, sigma, ambient_n, f);
      const MatrixExpression scalar_part = MatrixExpression::term(sign > 0 ? t : -t, Word());
      out = out + scalar_part;
    }
    for (int anchor = 0; anchor < identity_n; ++anchor) {
      const MatrixExpression t = phi_sigma_anchored(words, sigma, anchor, ambient_n, f);
      out = out + (sign > 0 ? -t : t);
    }
  }
  return out;
}

// Determinant through power traces:
// Det = (1/n!) sum_sigma sign(sigma) prod_cycles Tr(A^len). Exact division
// by n!, so prime-field moduli must exceed n!.
inline void check_det_traces_scale(int n, const FieldSpec& f) {
  if (n < 1 || n > 5)
    throw std::invalid_argument("det via traces: dimension must be in 1..5");
  long long fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (!f.is_q() && *f.p <= static_cast<std::uint64_t>(fact))
    throw std::invalid_argument("det via traces: prime-field modulus must exceed n!");
}

inline TracePolynomial det_via_traces(const Word& w, int n, const FieldSpec& f = FieldSpec::Q()) {
  check_det_traces_scale(n, f);
  long long fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  TracePolynomial out = TracePolynomial::zero(n, f);
  for (const Perm& sigma : enumerate_perms(n)) {
    TracePolynomial t = TracePolynomial::from_int(perm_sign(sigma), n, f);
    for (const std::vector<int>& cycle : cycles_from(sigma, 0))
      t = t * TracePolynomial::chi(necklace_of(word_pow(w, static_cast<long long>(cycle.size()))), n, f);
    out = out + t;
  }
  return out.scaled(ExactScalar::from_int(fact, f).inverse());
}

inline ExactScalar det_via_traces_matrix(const ExactMatrix& a) {
  const int n = a.n();
  const FieldSpec& f = a.field();
  check_det_traces_scale(n, f);
  long long fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  std::vector<ExactScalar> power_trace(static_cast<std::size_t>(n) + 1, ExactScalar::zero(f));
  ExactMatrix p = ExactMatrix::identity(n, f);
  for (int k = 1; k <= n; ++k) {
    p = p * a;
    power_trace[static_cast<std::size_t>(k)] = p.trace();
  }
  ExactScalar out = ExactScalar::zero(f);
  for (const Perm& sigma : enumerate_perms(n)) {
    ExactScalar t = ExactScalar::from_int(perm_sign(sigma), f);
    for (const std::vector<int>& cycle : cycles_from(sigma, 0))
      t = t * power_trace[cycle.size()];
    out = out + t;
  }
  return out * ExactScalar::from_int(fact, f).inverse();
}

// sum over S_n of sign(sigma) * n^(number of cycles); collapses to n!.
inline long long antisymmetrizer_sum(int n) {
  if (n < 1 || n > 8) throw std::invalid_argument("antisymmetrizer_sum: n must be in 1..8");
  long long total = 0;
  for (const Perm& sigma : enumerate_perms(n)) {
    long long term = perm_sign(sigma);
    for (int c = 0; c < cycle_count(sigma); ++c) term *= n;
    total += term;
  }
  return total;
}

// chi_a chi_b - chi_ab - chi_{a b^-1}: the dimension-2 product rule. Zero
// under every dimension-2 evaluation, generically nonzero elsewhere.
inline TracePolynomial fricke_klein(const Word& a, const Word& b, int ambient_n = 2,
                                    const FieldSpec& f = FieldSpec::Q()) {
  const auto chi = [&](const Word& w) { return TracePolynomial::chi(necklace_of(w), ambient_n, f); };
  return chi(a) * chi(b) - chi(multiply(a, b)) - chi(multiply(a, invert(b)));
}

// The dimension-3 identity in four arguments: the signed cycle products of
// (g1, g2, g3) minus those of (g1 g0, g2 g0, g3 g0). Twelve terms when the
// arguments are independent. Zero under every dimension-3 evaluation.
inline TracePolynomial sl3_slide_identity(const Word& g0, const Word& g1, const Word& g2,
                                          const Word& g3, int ambient_n = 3,
                                          const FieldSpec& f = FieldSpec::Q()) {
  const std::vector<Word> plain{g1, g2, g3};
  const std::vector<Word> shifted{multiply(g1, g0), multiply(g2, g0), multiply(g3, g0)};
  TracePolynomial out = TracePolynomial::zero(ambient_n, f);
  for (const Perm& sigma : enumerate_perms(3)) {
    const int sign = perm_sign(sigma);
    const TracePolynomial t = phi_sigma(plain, sigma, ambient_n, f) - phi_sigma(shifted, sigma, ambient_n, f);
    out = out + (sign > 0 ? t : -t);
  }
  return out;
}

// The same identity out of the graph engine: a trivalent source/sink pair
// joined by strands g1, g2, g3, minus the copy whose source slid along g0.
// Agreement with sl3_slide_identity (up to overall sign) ties the symbolic
// identity to the skein relations.
inline TracePolynomial sl3_slide_identity_from_graphs(const Word& g0, const Word& g1, const Word& g2,
                                                      const Word& g3,
                                                      const FieldSpec& f = FieldSpec::Q()) {
  SkeinGraph gamma(3);
  const int w = gamma.add_vertex(VertexKind::Source);
  const int v = gamma.add_vertex(VertexKind::Sink);
  const Word labels[3] = {g1, g2, g3};
  for (int j = 0; j < 3; ++j) gamma.add_edge({w, j}, {v, j}, labels[j]);
  // The matching move at the sink is the trivial slide: pulling the pair
  // once around the loop g0 threads each strand through g0 exactly once.
  const SkeinGraph gamma_slid = slide_vertex(gamma, w, g0);
  return normalize(gamma, ResolveOrder::LowestPair, f) - normalize(gamma_slid, ResolveOrder::LowestPair, f);
}

inline bool eval_G_vanishing(const std::vector<Word>& words, int identity_n, const Representation& r) {
  return eval_mexp(fundamental_G(words, identity_n, r.n(), r.field()), r).is_zero();
}

// Determinant of a word image recovered through traces; equals one for any
// determinant-one representation.
inline bool det_skein_unit_check(const Word& w, const Representation& r) {
  return det_via_traces_matrix(rho(r, w)) == ExactScalar::one(r.field());
}

}  // namespace skein
