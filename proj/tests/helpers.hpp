#pragma once

// Shared glue for the test binaries: deterministic random objects plus
// small brute-force oracles that deliberately share no arithmetic with the
// library paths they check.

#include <algorithm>
#include <vector>

#include "skein/exact_matrix.hpp"
#include "skein/graph.hpp"
#include "skein/rng.hpp"
#include "skein/sampling.hpp"
#include "skein/word.hpp"

namespace skein::testing {

using sampling::random_graph;
using sampling::random_nonempty_word;
using sampling::random_relative_graph;
using sampling::random_word;
using sampling::shuffle_with;

// Stack cancellation over unit letters, the slow mirror of Word's merging.
inline std::vector<UnitLetter> naive_reduce_units(const std::vector<UnitLetter>& in) {
  std::vector<UnitLetter> st;
  for (const UnitLetter& u : in) {
    if (!st.empty() && st.back().gen == u.gen && st.back().sign != u.sign)
      st.pop_back();
    else
      st.push_back(u);
  }
  return st;
}

// Smallest rotation by trying each start position, for the necklace oracle.
inline std::vector<UnitLetter> brute_least_rotation(const std::vector<UnitLetter>& u) {
  if (u.empty()) return u;
  std::vector<UnitLetter> best;
  for (std::size_t s = 0; s < u.size(); ++s) {
    std::vector<UnitLetter> rot;
    for (std::size_t i = 0; i < u.size(); ++i) rot.push_back(u[(s + i) % u.size()]);
    if (best.empty() || rot < best) best = rot;
  }
  return best;
}

// Sign of an index tuple read as a pattern: zero on repeats, else the
// parity of the permutation it spells.
inline int tuple_sign(const std::vector<int>& idx) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] == idx[j]) return 0;
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] > idx[j]) sign = -sign;
  return sign;
}

// Brute-force contraction: iterates over every per-vertex index tuple, with
// the alternating tensor as the vertex weight. Exponential in vertices, so
// keep to tiny graphs. Shares no code with the library contraction.
inline ExactScalar brute_contract(const SkeinGraph& d, const Representation& r) {
  const int n = d.n();
  const FieldSpec& f = r.field();
  std::vector<int> vertex_ids;
  for (const auto& [id, kind] : d.vertices()) vertex_ids.push_back(id);
  const std::size_t v_count = vertex_ids.size();

  std::vector<ExactMatrix> edge_rho;
  for (const GraphEdge& e : d.edges()) edge_rho.push_back(rho(r, e.label));

  ExactScalar loop_factor = ExactScalar::one(f);
  for (const Necklace& c : d.loops()) loop_factor = loop_factor * rho(r, c.word()).trace();

  std::vector<std::vector<int>> tuples(v_count, std::vector<int>(static_cast<std::size_t>(n), 0));
  const auto tuple_of = [&](int id) -> const std::vector<int>& {
    const auto it = std::find(vertex_ids.begin(), vertex_ids.end(), id);
    return tuples[static_cast<std::size_t>(it - vertex_ids.begin())];
  };

  ExactScalar total = ExactScalar::zero(f);
  while (true) {
    int sign = 1;
    for (const std::vector<int>& t : tuples) sign *= tuple_sign(t);
    if (sign != 0) {
      ExactScalar term = ExactScalar::from_int(sign, f);
      for (std::size_t i = 0; i < edge_rho.size(); ++i) {
        const GraphEdge& e = d.edges()[i];
        const int row = tuple_of(e.to.vertex)[static_cast<std::size_t>(e.to.port)];
        const int col = tuple_of(e.from.vertex)[static_cast<std::size_t>(e.from.port)];
        term = term * edge_rho[i].at(row, col);
      }
      total = total + term;
    }
    // odometer over all tuples
    std::size_t vi = 0;
    while (vi < v_count) {
      std::size_t pi = 0;
      while (pi < tuples[vi].size()) {
        if (++tuples[vi][pi] < n) break;
        tuples[vi][pi] = 0;
        ++pi;
      }
      if (pi < tuples[vi].size()) break;
      ++vi;
    }
    if (vi == v_count) break;
  }
  return total * loop_factor;
}

}  // namespace skein::testing
