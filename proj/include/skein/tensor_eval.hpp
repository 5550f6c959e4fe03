#pragma once

// Tensor-contraction evaluation of skein graphs at a representation. This is
// the independent oracle for the graph engine: it never resolves anything
// symbolically, it just contracts indices, so agreement between the two
// routes pins every sign and composition convention.
//
// Model: every vertex port carries an index in 1..n. A source whose ports
// read (i_1..i_n) weighs the sign of that pattern and 0 unless it is a
// permutation; sinks weigh the same on their side. An edge labeled w from
// source port p to sink port q contributes the matrix entry
// rho(w)[index at q][index at p] (output row at the sink end). A loop
// labeled c contributes Tr(rho(c)). The contraction sums the product over
// all assignments; restricting each vertex to genuine permutations is the
// pruning of the vanishing patterns.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "skein/exact_matrix.hpp"
#include "skein/graph.hpp"
#include "skein/trace_poly.hpp"

namespace skein {

namespace detail {

inline void require_eval_compatible(int ambient, const FieldSpec& pf, const Representation& r,
                                    const char* what) {
  if (ambient != r.n())
    throw std::invalid_argument(std::string(what) + ": ambient dimension " + std::to_string(ambient) +
                                " vs representation dimension " + std::to_string(r.n()));
  require_same_field(pf, r.field(), what);
}

inline ExactScalar contract_closed(const SkeinGraph& d, const Representation& r) {
  const FieldSpec& f = r.field();
  const int n = d.n();

  ExactScalar loop_factor = ExactScalar::one(f);
  for (const Necklace& c : d.loops()) loop_factor = loop_factor * rho(r, c.word()).trace();

  if (!d.has_vertices()) return loop_factor;

  std::vector<int> vertex_ids;
  for (const auto& [id, kind] : d.vertices()) vertex_ids.push_back(id);
  const std::vector<Perm> perms = enumerate_perms(n);
  std::vector<int> signs(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) signs[i] = perm_sign(perms[i]);

  std::vector<ExactMatrix> edge_rho;
  edge_rho.reserve(d.edges().size());
  for (const GraphEdge& e : d.edges()) edge_rho.push_back(rho(r, e.label));

  std::map<int, std::size_t> choice;  // vertex id -> index into perms
  for (int id : vertex_ids) choice[id] = 0;

  ExactScalar total = ExactScalar::zero(f);
  while (true) {
    int sign = 1;
    for (int id : vertex_ids) sign *= signs[choice[id]];
    ExactScalar term = ExactScalar::from_int(sign, f);
    bool zero = false;
    for (std::size_t i = 0; i < d.edges().size() && !zero; ++i) {
      const GraphEdge& e = d.edges()[i];
      const Perm& at_source = perms[choice[e.from.vertex]];
      const Perm& at_sink = perms[choice[e.to.vertex]];
      const ExactScalar& entry =
          edge_rho[i].at(at_sink[static_cast<std::size_t>(e.to.port)],
                         at_source[static_cast<std::size_t>(e.from.port)]);
      if (entry.is_zero()) { zero = true; break; }
      term = term * entry;
    }
    if (!zero) total = total + term;

    // odometer over the per-vertex permutation choices
    std::size_t pos = 0;
    while (pos < vertex_ids.size()) {
      std::size_t& c = choice[vertex_ids[pos]];
      if (++c < perms.size()) break;
      c = 0;
      ++pos;
    }
    if (pos == vertex_ids.size()) break;
  }
  return total * loop_factor;
}

}  // namespace detail

inline ExactScalar theta_contract(const SkeinGraph& d, const Representation& r) {
  if (d.is_relative())
    throw std::invalid_argument("theta_contract: relative graph; use theta_rel_contract");
  d.validate();
  detail::require_eval_compatible(d.n(), r.field(), r, "theta_contract");
  return detail::contract_closed(d, r);
}

// Relative version: the through-strand keeps its two indices free, so the
// value is a matrix: (closed-part contraction) * rho(through-word).
inline ExactMatrix theta_rel_contract(const SkeinGraph& d, const Representation& r) {
  if (!d.is_relative())
    throw std::invalid_argument("theta_rel_contract: graph is not relative");
  d.validate();
  detail::require_eval_compatible(d.n(), r.field(), r, "theta_rel_contract");
  return rho(r, d.through()).scaled(detail::contract_closed(d.absolute_part(), r));
}

// Substitutes chi_w -> Tr(rho(w)) and evaluates.
inline ExactScalar eval_poly(const TracePolynomial& p, const Representation& r) {
  detail::require_eval_compatible(p.ambient_n(), p.field(), r, "eval_poly");
  std::map<Necklace, ExactScalar> trace_cache;
  const auto chi_value = [&](const Necklace& c) {
    const auto it = trace_cache.find(c);
    if (it != trace_cache.end()) return it->second;
    const ExactScalar v = rho(r, c.word()).trace();
    trace_cache.emplace(c, v);
    return v;
  };
  ExactScalar total = ExactScalar::zero(r.field());
  for (const auto& [m, coeff] : p.terms()) {
    ExactScalar term = coeff;
    for (const auto& [c, e] : m.factors()) {
      const ExactScalar v = chi_value(c);
      for (int i = 0; i < e; ++i) term = term * v;
    }
    total = total + term;
  }
  return total;
}

inline ExactMatrix eval_mexp(const MatrixExpression& m, const Representation& r) {
  detail::require_eval_compatible(m.ambient_n(), m.field(), r, "eval_mexp");
  ExactMatrix total(r.n(), r.field());
  for (const auto& [w, coeff] : m.terms())
    total = total + rho(r, w).scaled(eval_poly(coeff, r));
  return total;
}

}  // namespace skein
