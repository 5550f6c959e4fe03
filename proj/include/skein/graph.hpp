#pragma once

// Combinatorial graphs presenting elements of the skein ring of a free
// group: n-valent source and sink vertices with ordered ports, edges running
// from a source port to a sink port labeled by free-group words, free
// floating loops labeled by necklaces, and optionally one through-strand
// word (the relative case). The engine provides the local moves:
//
//  - resolve_pair: replaces a chosen source/sink pair by the signed sum of
//    the n! ways of joining their ports,
//  - slide_vertex: pushes a vertex along a group element h (source labels
//    pick up h on the right, sink labels on the left),
//  - close_up: turns the through-strand into a loop,
//  - normalize: resolves every vertex pair and reads the result off as a
//    trace polynomial.
//
// When a join chains edges, the chain traverses the edge entering the sink
// port first and continues along the edge leaving the source port; labels
// compose so that the edge traversed first contributes the rightmost factor,
// matching how matrices applied first sit rightmost in a product. The
// tensor-contraction oracle pins this convention.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skein/perm.hpp"
#include "skein/trace_poly.hpp"

namespace skein {

enum class VertexKind { Source, Sink };

struct PortRef {
  int vertex = -1;
  int port = -1;  // 0-based; external text and JSON use 1-based ports

  friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct GraphEdge {
  PortRef from;  // at a source vertex
  PortRef to;    // at a sink vertex
  Word label;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class SkeinGraph {
 public:
  explicit SkeinGraph(int n, std::optional<Word> through = std::nullopt)
      : n_(n), through_(std::move(through)) {
    if (n < 1) throw std::invalid_argument("graph: n must be >= 1");
  }

  int n() const { return n_; }
  bool is_relative() const { return through_.has_value(); }

  const Word& through() const {
    if (!through_) throw std::invalid_argument("graph: absolute graph has no through-strand");
    return *through_;
  }

  int add_vertex(VertexKind k) {
    const int id = vertices_.empty() ? 0 : vertices_.rbegin()->first + 1;
    vertices_.emplace(id, k);
    return id;
  }

  void add_vertex_with_id(int id, VertexKind k) {
    if (id < 0) throw std::invalid_argument("graph: vertex id must be >= 0");
    if (!vertices_.emplace(id, k).second)
      throw std::invalid_argument("graph: duplicate vertex id " + std::to_string(id));
  }

  void add_edge(PortRef from, PortRef to, Word label) {
    require_port(from, VertexKind::Source);
    require_port(to, VertexKind::Sink);
    for (const GraphEdge& e : edges_) {
      if (e.from == from) throw std::invalid_argument("graph: source port already used");
      if (e.to == to) throw std::invalid_argument("graph: sink port already used");
    }
    edges_.push_back({from, to, std::move(label)});
  }

  void add_loop(Necklace c) {
    loops_.push_back(std::move(c));
    std::sort(loops_.begin(), loops_.end());
  }

  const std::map<int, VertexKind>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<Necklace>& loops() const { return loops_; }
  bool has_vertices() const { return !vertices_.empty(); }

  VertexKind vertex_kind(int id) const {
    const auto it = vertices_.find(id);
    if (it == vertices_.end())
      throw std::invalid_argument("graph: no vertex with id " + std::to_string(id));
    return it->second;
  }

  // Every source port must carry exactly one outgoing edge and every sink
  // port exactly one incoming edge; add_edge guarantees at-most-one, so only
  // coverage needs checking.
  void validate() const {
    for (const auto& [id, kind] : vertices_) {
      for (int port = 0; port < n_; ++port) {
        const PortRef ref{id, port};
        const bool covered =
            std::any_of(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
              return kind == VertexKind::Source ? e.from == ref : e.to == ref;
            });
        if (!covered)
          throw std::invalid_argument("graph: uncovered port " + std::to_string(port + 1) +
                                      " at vertex " + std::to_string(id));
      }
    }
  }

  // The same graph with the through-strand removed.
  SkeinGraph absolute_part() const {
    SkeinGraph g(n_);
    g.vertices_ = vertices_;
    g.edges_ = edges_;
    g.loops_ = loops_;
    return g;
  }

  std::string canonical_key() const;

 private:
  void require_port(const PortRef& r, VertexKind expected) const {
    const auto it = vertices_.find(r.vertex);
    if (it == vertices_.end())
      throw std::invalid_argument("graph: edge endpoint at unknown vertex " + std::to_string(r.vertex));
    if (it->second != expected)
      throw std::invalid_argument(std::string("graph: edge must run source to sink; vertex ") +
                                  std::to_string(r.vertex) + " has the wrong kind");
    if (r.port < 0 || r.port >= n_)
      throw std::invalid_argument("graph: port out of range at vertex " + std::to_string(r.vertex));
  }

  friend SkeinGraph union_impl(const SkeinGraph& a, const SkeinGraph& b, std::optional<Word> through);

  int n_;
  std::optional<Word> through_;
  std::map<int, VertexKind> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<Necklace> loops_;
};

inline SkeinGraph loop_graph(const Necklace& c, int n) {
  SkeinGraph g(n);
  g.add_loop(c);
  return g;
}

inline SkeinGraph edge_graph(const Word& w, int n) { return SkeinGraph(n, w); }

namespace detail {

// Renumbers vertices breadth-first and serializes. The BFS is seeded at the
// least edge (labels compared by unit expansion, then ports); equal-key seed
// candidates are all tried and the least serialization wins, which keeps the
// key isomorphism-invariant without a general graph-isomorphism solver.
struct Canonicalizer {
  const SkeinGraph& g;
  std::vector<std::vector<UnitLetter>> label_units;

  explicit Canonicalizer(const SkeinGraph& gr) : g(gr) {
    label_units.reserve(g.edges().size());
    for (const GraphEdge& e : g.edges()) label_units.push_back(e.label.expand());
  }

  // ordering used for seed selection; depends only on edge content
  bool seed_less(std::size_t a, std::size_t b) const {
    const GraphEdge& ea = g.edges()[a];
    const GraphEdge& eb = g.edges()[b];
    if (label_units[a] != label_units[b]) return label_units[a] < label_units[b];
    if (ea.from.port != eb.from.port) return ea.from.port < eb.from.port;
    return ea.to.port < eb.to.port;
  }

  bool seed_equal(std::size_t a, std::size_t b) const {
    return !seed_less(a, b) && !seed_less(b, a);
  }

  // edge attached at a given vertex and port
  std::size_t edge_at(int vertex, int port, VertexKind kind) const {
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const GraphEdge& e = g.edges()[i];
      const PortRef ref = kind == VertexKind::Source ? e.from : e.to;
      if (ref.vertex == vertex && ref.port == port) return i;
    }
    throw std::logic_error("canonical key: uncovered port");
  }

  void bfs_component(std::size_t seed, std::map<int, int>& newid) const {
    std::vector<int> queue;
    const auto visit = [&](int v) {
      if (newid.count(v)) return;
      const int id = static_cast<int>(newid.size());
      newid.emplace(v, id);
      queue.push_back(v);
    };
    visit(g.edges()[seed].from.vertex);
    visit(g.edges()[seed].to.vertex);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      const VertexKind kind = g.vertex_kind(v);
      for (int port = 0; port < g.n(); ++port) {
        const GraphEdge& e = g.edges()[edge_at(v, port, kind)];
        visit(kind == VertexKind::Source ? e.to.vertex : e.from.vertex);
      }
    }
  }

  std::string serialize(const std::map<int, int>& newid) const {
    std::string s = "n=" + std::to_string(g.n());
    s += ";R=";
    if (g.is_relative()) s += "<" + format_word(g.through()) + ">";
    s += ";V=";
    std::vector<std::pair<int, VertexKind>> vs;
    for (const auto& [id, kind] : g.vertices()) vs.emplace_back(newid.at(id), kind);
    std::sort(vs.begin(), vs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [id, kind] : vs)
      s += std::to_string(id) + (kind == VertexKind::Source ? "s" : "t") + ",";
    s += ";E=";
    std::vector<std::string> es;
    for (const GraphEdge& e : g.edges()) {
      std::string line;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%04d.%02d>%04d.%02d:", newid.at(e.from.vertex), e.from.port,
                    newid.at(e.to.vertex), e.to.port);
      line += buf;
      line += format_word(e.label);
      es.push_back(std::move(line));
    }
    std::sort(es.begin(), es.end());
    for (const std::string& line : es) s += line + ";";
    s += "L=";
    for (const Necklace& c : g.loops()) s += "(" + format_necklace(c) + ")";
    return s;
  }

  void run(std::map<int, int> newid, std::vector<std::string>& results, int& budget) const {
    if (newid.size() == g.vertices().size()) {
      results.push_back(serialize(newid));
      return;
    }
    // frontier: edges with at least one unnumbered endpoint
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const GraphEdge& e = g.edges()[i];
      if (!newid.count(e.from.vertex) || !newid.count(e.to.vertex)) frontier.push_back(i);
    }
    std::size_t best = frontier.front();
    for (std::size_t i : frontier)
      if (seed_less(i, best)) best = i;
    for (std::size_t i : frontier) {
      if (!seed_equal(i, best)) continue;
      if (--budget < 0) throw std::invalid_argument("canonical key: too many symmetric seedings");
      std::map<int, int> next = newid;
      bfs_component(i, next);
      run(std::move(next), results, budget);
    }
  }
};

}  // namespace detail

inline std::string SkeinGraph::canonical_key() const {
  if (vertices_.empty()) return detail::Canonicalizer(*this).serialize({});
  detail::Canonicalizer c(*this);
  std::vector<std::string> results;
  int budget = 4096;
  c.run({}, results, budget);
  return *std::min_element(results.begin(), results.end());
}

// A formal linear combination of graphs with exact coefficients. Graphs are
// merged by canonical key, so two relabelings of one graph share a term.
class GraphCombination {
 public:
  GraphCombination(int n, bool relative, const FieldSpec& f)
      : n_(n), relative_(relative), field_(f) {}

  int n() const { return n_; }
  bool relative() const { return relative_; }
  const FieldSpec& field() const { return field_; }

  void add(const SkeinGraph& g, const ExactScalar& c) {
    if (g.n() != n_)
      throw std::invalid_argument("graph combination: ambient mismatch");
    if (g.is_relative() != relative_)
      throw std::invalid_argument("graph combination: cannot mix relative and absolute graphs");
    require_same_field(field_, c.field(), "graph combination");
    const std::string key = g.canonical_key();
    const auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(key, std::pair<SkeinGraph, ExactScalar>(g, c));
      return;
    }
    it->second.second = it->second.second + c;
    if (it->second.second.is_zero()) terms_.erase(it);
  }

  const std::map<std::string, std::pair<SkeinGraph, ExactScalar>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

 private:
  int n_;
  bool relative_;
  FieldSpec field_;
  std::map<std::string, std::pair<SkeinGraph, ExactScalar>> terms_;
};

namespace detail {

struct WeightedGraph {
  SkeinGraph g;
  ExactScalar c;
};

// One join pattern: deletes the pair and stitches the incident edges along
// sigma. Chains pick up concatenated labels; closed-up chains become loops;
// a loop whose label collapses to the identity folds to a factor n.
inline WeightedGraph resolve_one(const SkeinGraph& d, int source_id, int sink_id, const Perm& sigma,
                                 const FieldSpec& f) {
  const int n = d.n();
  SkeinGraph out(n, d.is_relative() ? std::optional<Word>(d.through()) : std::nullopt);
  ExactScalar coeff = ExactScalar::from_int(perm_sign(sigma), f);

  for (const auto& [id, kind] : d.vertices())
    if (id != source_id && id != sink_id) out.add_vertex_with_id(id, kind);
  for (const Necklace& c : d.loops()) out.add_loop(c);

  const std::vector<GraphEdge>& es = d.edges();
  std::vector<int> out_edge(static_cast<std::size_t>(n), -1);  // port -> edge leaving source_id
  std::vector<int> in_edge(static_cast<std::size_t>(n), -1);   // port -> edge entering sink_id
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].from.vertex == source_id) out_edge[static_cast<std::size_t>(es[i].from.port)] = static_cast<int>(i);
    if (es[i].to.vertex == sink_id) in_edge[static_cast<std::size_t>(es[i].to.port)] = static_cast<int>(i);
  }

  // succ[e]: the edge the strand continues along after arriving at the sink
  // via edge e. Join j connects sink port sigma(j) to source port j.
  std::map<int, int> succ;
  for (int j = 0; j < n; ++j) {
    const int b = in_edge[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
    const int a = out_edge[static_cast<std::size_t>(j)];
    succ[b] = a;
  }

  const auto is_in = [&](int e) { return es[static_cast<std::size_t>(e)].to.vertex == sink_id; };
  const auto is_out = [&](int e) { return es[static_cast<std::size_t>(e)].from.vertex == source_id; };

  std::set<int> consumed;
  // open chains: start at an edge entering the sink whose begin survives
  for (const auto& [start, first_next] : succ) {
    if (is_out(start)) continue;
    Word label = es[static_cast<std::size_t>(start)].label;
    consumed.insert(start);
    int cur = first_next;
    while (true) {
      label = multiply(es[static_cast<std::size_t>(cur)].label, label);
      consumed.insert(cur);
      if (is_in(cur))
        cur = succ.at(cur);
      else
        break;
    }
    out.add_edge(es[static_cast<std::size_t>(start)].from, es[static_cast<std::size_t>(cur)].to, label);
  }
  // closed chains: everything left alternates inside the pair and closes up
  for (const auto& [start, first_next] : succ) {
    if (consumed.count(start)) continue;
    Word label = es[static_cast<std::size_t>(start)].label;
    consumed.insert(start);
    int cur = first_next;
    while (cur != start) {
      label = multiply(es[static_cast<std::size_t>(cur)].label, label);
      consumed.insert(cur);
      cur = succ.at(cur);
    }
    const Necklace c = necklace_of(label);
    if (c.is_identity())
      coeff = coeff * ExactScalar::from_int(n, f);
    else
      out.add_loop(c);
  }
  // edges untouched by the pair
  for (std::size_t i = 0; i < es.size(); ++i)
    if (!consumed.count(static_cast<int>(i)) && !is_in(static_cast<int>(i)) && !is_out(static_cast<int>(i)))
      out.add_edge(es[i].from, es[i].to, es[i].label);

  return {std::move(out), std::move(coeff)};
}

inline void require_pair(const SkeinGraph& d, int source_id, int sink_id) {
  if (d.vertex_kind(source_id) != VertexKind::Source)
    throw std::invalid_argument("resolve: vertex " + std::to_string(source_id) + " is not a source");
  if (d.vertex_kind(sink_id) != VertexKind::Sink)
    throw std::invalid_argument("resolve: vertex " + std::to_string(sink_id) + " is not a sink");
}

}  // namespace detail

// The signed sum of all n! joinings of one source/sink pair.
inline GraphCombination resolve_pair(const SkeinGraph& d, int source_id, int sink_id,
                                     const FieldSpec& f = FieldSpec::Q()) {
  d.validate();
  detail::require_pair(d, source_id, sink_id);
  GraphCombination out(d.n(), d.is_relative(), f);
  for (const Perm& sigma : enumerate_perms(d.n())) {
    detail::WeightedGraph t = detail::resolve_one(d, source_id, sink_id, sigma, f);
    out.add(t.g, t.c);
  }
  return out;
}

inline SkeinGraph slide_vertex(const SkeinGraph& d, int vertex_id, const Word& h) {
  const VertexKind kind = d.vertex_kind(vertex_id);
  SkeinGraph out(d.n(), d.is_relative() ? std::optional<Word>(d.through()) : std::nullopt);
  for (const auto& [id, k] : d.vertices()) out.add_vertex_with_id(id, k);
  for (const Necklace& c : d.loops()) out.add_loop(c);
  for (const GraphEdge& e : d.edges()) {
    Word label = e.label;
    if (kind == VertexKind::Source && e.from.vertex == vertex_id) label = multiply(label, h);
    if (kind == VertexKind::Sink && e.to.vertex == vertex_id) label = multiply(h, label);
    out.add_edge(e.from, e.to, label);
  }
  return out;
}

inline SkeinGraph close_up(const SkeinGraph& d) {
  if (!d.is_relative()) throw std::invalid_argument("close_up: graph is not relative");
  SkeinGraph out = d.absolute_part();
  out.add_loop(necklace_of(d.through()));
  return out;
}

inline SkeinGraph union_impl(const SkeinGraph& a, const SkeinGraph& b, std::optional<Word> through) {
  if (a.n() != b.n()) throw std::invalid_argument("graph union: ambient mismatch");
  SkeinGraph out(a.n(), std::move(through));
  out.vertices_ = a.vertices_;
  out.edges_ = a.edges_;
  out.loops_ = a.loops_;
  const int offset = a.vertices_.empty() ? 0 : a.vertices_.rbegin()->first + 1;
  for (const auto& [id, kind] : b.vertices_) out.add_vertex_with_id(id + offset, kind);
  for (const GraphEdge& e : b.edges_)
    out.edges_.push_back({{e.from.vertex + offset, e.from.port}, {e.to.vertex + offset, e.to.port}, e.label});
  for (const Necklace& c : b.loops_) out.add_loop(c);
  return out;
}

// Product of relative graphs: through-strands compose (left factor first),
// closed parts lie side by side.
inline SkeinGraph rel_mul(const SkeinGraph& a, const SkeinGraph& b) {
  if (!a.is_relative() || !b.is_relative())
    throw std::invalid_argument("rel_mul: both factors must be relative graphs");
  return union_impl(a, b, multiply(a.through(), b.through()));
}

// Product of absolute graphs: disjoint union.
inline SkeinGraph disjoint_union(const SkeinGraph& a, const SkeinGraph& b) {
  if (a.is_relative() || b.is_relative())
    throw std::invalid_argument("disjoint_union: both factors must be absolute graphs");
  return union_impl(a, b, std::nullopt);
}

enum class ResolveOrder { LowestPair, HighestPair };

namespace detail {

inline std::pair<int, int> choose_pair(const SkeinGraph& g, ResolveOrder order) {
  int source = -1, sink = -1;
  for (const auto& [id, kind] : g.vertices()) {
    int& slot = kind == VertexKind::Source ? source : sink;
    if (slot < 0 || (order == ResolveOrder::LowestPair ? id < slot : id > slot)) slot = id;
  }
  if (source < 0 || sink < 0)
    throw std::invalid_argument("normalize: graph has vertices but no full source/sink pair");
  return {source, sink};
}

inline void read_off_loops(const SkeinGraph& g, const ExactScalar& c, TracePolynomial& acc,
                           const FieldSpec& f) {
  TracePolynomial t = TracePolynomial::constant(c, g.n());
  for (const Necklace& loop : g.loops())
    t = t * TracePolynomial::chi(loop, g.n(), f);
  acc = acc + t;
}

inline void check_desk_scale(const SkeinGraph& d) {
  const int pairs = static_cast<int>(d.vertices().size()) / 2;
  double fact = 1;
  for (int i = 2; i <= d.n(); ++i) fact *= i;
  double leaves = 1;
  for (int i = 0; i < pairs; ++i) leaves *= fact;
  if (leaves > 2e7) throw std::invalid_argument("normalize: graph beyond desk scale");
}

}  // namespace detail

// Full resolution: repeatedly resolves a source/sink pair (chosen by the
// order policy) until no vertices remain, then maps each leaf to the product
// of its loop traces. Identity loops contribute the scalar n.
inline TracePolynomial normalize(const SkeinGraph& d, ResolveOrder order = ResolveOrder::LowestPair,
                                 const FieldSpec& f = FieldSpec::Q()) {
  if (d.is_relative())
    throw std::invalid_argument("normalize: relative graph; use normalize_relative");
  d.validate();
  detail::check_desk_scale(d);
  TracePolynomial acc = TracePolynomial::zero(d.n(), f);
  std::vector<detail::WeightedGraph> work;
  work.push_back({d, ExactScalar::one(f)});
  while (!work.empty()) {
    detail::WeightedGraph t = std::move(work.back());
    work.pop_back();
    if (!t.g.has_vertices()) {
      detail::read_off_loops(t.g, t.c, acc, f);
      continue;
    }
    const auto [source, sink] = detail::choose_pair(t.g, order);
    for (const Perm& sigma : enumerate_perms(t.g.n())) {
      detail::WeightedGraph r = detail::resolve_one(t.g, source, sink, sigma, f);
      r.c = r.c * t.c;
      work.push_back(std::move(r));
    }
  }
  return acc;
}

// Resolution along an explicit sequence of (source, sink) pair choices;
// every graph at one step shares the same remaining vertex set, so one
// sequence drives the whole combination. Exercised by the confluence tests.
inline TracePolynomial normalize_with_sequence(const SkeinGraph& d,
                                               const std::vector<std::pair<int, int>>& sequence,
                                               const FieldSpec& f = FieldSpec::Q()) {
  if (d.is_relative())
    throw std::invalid_argument("normalize: relative graph; use normalize_relative");
  d.validate();
  detail::check_desk_scale(d);
  std::vector<detail::WeightedGraph> level;
  level.push_back({d, ExactScalar::one(f)});
  for (const auto& [source, sink] : sequence) {
    std::vector<detail::WeightedGraph> next;
    for (const detail::WeightedGraph& t : level) {
      detail::require_pair(t.g, source, sink);
      for (const Perm& sigma : enumerate_perms(t.g.n())) {
        detail::WeightedGraph r = detail::resolve_one(t.g, source, sink, sigma, f);
        r.c = r.c * t.c;
        next.push_back(std::move(r));
      }
    }
    level = std::move(next);
  }
  TracePolynomial acc = TracePolynomial::zero(d.n(), f);
  for (const detail::WeightedGraph& t : level) {
    if (t.g.has_vertices())
      throw std::invalid_argument("normalize_with_sequence: sequence does not cover all pairs");
    detail::read_off_loops(t.g, t.c, acc, f);
  }
  return acc;
}

// All (p!)^2 orders in which p source/sink pairs can be resolved.
inline std::vector<std::vector<std::pair<int, int>>> all_resolution_sequences(const SkeinGraph& d) {
  std::vector<int> sources, sinks;
  for (const auto& [id, kind] : d.vertices())
    (kind == VertexKind::Source ? sources : sinks).push_back(id);
  if (sources.size() != sinks.size())
    throw std::invalid_argument("resolution sequences: unbalanced sources and sinks");
  std::vector<std::vector<std::pair<int, int>>> out;
  std::sort(sources.begin(), sources.end());
  std::sort(sinks.begin(), sinks.end());
  std::vector<int> ss = sources;
  do {
    std::vector<int> tt = sinks;
    do {
      std::vector<std::pair<int, int>> seq;
      for (std::size_t i = 0; i < ss.size(); ++i) seq.emplace_back(ss[i], tt[i]);
      out.push_back(std::move(seq));
    } while (std::next_permutation(tt.begin(), tt.end()));
  } while (std::next_permutation(ss.begin(), ss.end()));
  return out;
}

// A relative graph maps to (normalize of the closed part) * through-word.
inline MatrixExpression normalize_relative(const SkeinGraph& d, ResolveOrder order = ResolveOrder::LowestPair,
                                           const FieldSpec& f = FieldSpec::Q()) {
  if (!d.is_relative())
    throw std::invalid_argument("normalize_relative: graph is not relative");
  return MatrixExpression::term(normalize(d.absolute_part(), order, f), d.through());
}

}  // namespace skein
