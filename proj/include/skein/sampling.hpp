#pragma once

// Deterministic random objects: words, graphs, representations all flow from
// an explicit Rng so every run is replayable from its seed. Shared by the
// property tests and the CLI's sampling checks.

#include <algorithm>
#include <vector>

#include "skein/graph.hpp"
#include "skein/rng.hpp"
#include "skein/word.hpp"

namespace skein::sampling {

inline Word random_word(Rng& rng, int k, int max_units, bool allow_inverse = true) {
  const int len = static_cast<int>(rng.uniform(0, static_cast<std::uint64_t>(max_units)));
  std::vector<Letter> ls;
  for (int i = 0; i < len; ++i) {
    const int gen = static_cast<int>(rng.uniform(1, static_cast<std::uint64_t>(k)));
    const long long exp = allow_inverse && rng.coin() ? -1 : 1;
    ls.push_back({gen, exp});
  }
  return Word(ls);
}

inline Word random_nonempty_word(Rng& rng, int k, int max_units, bool allow_inverse = true) {
  while (true) {
    const Word w = random_word(rng, k, max_units, allow_inverse);
    if (!w.is_identity()) return w;
  }
}

template <typename T>
inline void shuffle_with(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform(0, i - 1));
    std::swap(v[i - 1], v[j]);
  }
}

// A complete absolute graph: `pairs` sources and sinks, every port wired by
// a random bijection, random edge labels, a few random loops.
inline SkeinGraph random_graph(Rng& rng, int n, int pairs, int k, int max_units, int loops,
                               bool allow_inverse = true) {
  SkeinGraph g(n);
  std::vector<int> sources, sinks;
  for (int i = 0; i < pairs; ++i) sources.push_back(g.add_vertex(VertexKind::Source));
  for (int i = 0; i < pairs; ++i) sinks.push_back(g.add_vertex(VertexKind::Sink));
  std::vector<PortRef> from, to;
  for (int s : sources)
    for (int p = 0; p < n; ++p) from.push_back({s, p});
  for (int t : sinks)
    for (int p = 0; p < n; ++p) to.push_back({t, p});
  shuffle_with(rng, to);
  for (std::size_t i = 0; i < from.size(); ++i)
    g.add_edge(from[i], to[i], random_word(rng, k, max_units, allow_inverse));
  for (int i = 0; i < loops; ++i) {
    const Necklace c = necklace_of(random_word(rng, k, max_units, allow_inverse));
    if (!c.is_identity()) g.add_loop(c);
  }
  return g;
}

inline SkeinGraph random_relative_graph(Rng& rng, int n, int pairs, int k, int max_units, int loops,
                                        const Word& through) {
  SkeinGraph g = random_graph(rng, n, pairs, k, max_units, loops);
  SkeinGraph rel(n, through);
  for (const auto& [id, kind] : g.vertices()) rel.add_vertex_with_id(id, kind);
  for (const GraphEdge& e : g.edges()) rel.add_edge(e.from, e.to, e.label);
  for (const Necklace& c : g.loops()) rel.add_loop(c);
  return rel;
}

}  // namespace skein::sampling
