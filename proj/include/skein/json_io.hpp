#pragma once

// JSON encodings of the exchange objects: trace polynomials, matrix-valued
// expressions, labeled graphs, representations, and fit reports. Readers
// validate aggressively and name the offending field; writers emit keys in
// a fixed order and sort every list, so equal objects serialize to equal
// bytes. Ports are 1-based on the wire and 0-based in memory.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "skein/charvar.hpp"
#include "skein/exact_matrix.hpp"
#include "skein/graph.hpp"
#include "skein/scalar.hpp"
#include "skein/trace_poly.hpp"
#include "skein/word.hpp"

namespace skein {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void json_fail(const std::string& where, const std::string& msg) {
  throw std::invalid_argument(where + ": " + msg);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) json_fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) json_fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string string_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_string()) json_fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

inline long long int_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_number_integer()) json_fail(where + "." + key, "expected an integer");
  return v.get<long long>();
}

}  // namespace detail

inline Json field_to_json(const FieldSpec& f) {
  if (f.is_q()) return Json("Q");
  Json j = Json::object();
  j["p"] = *f.p;
  return j;
}

inline FieldSpec field_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return FieldSpec::Q();
    detail::json_fail(where, "unknown field \"" + j.get<std::string>() + "\", expected \"Q\" or {\"p\": prime}");
  }
  if (j.is_object()) {
    const Json& p = detail::member(j, "p", where);
    if (!p.is_number_unsigned() && !p.is_number_integer())
      detail::json_fail(where + ".p", "expected a positive integer");
    const long long v = p.get<long long>();
    if (v < 2) detail::json_fail(where + ".p", "expected a prime >= 2");
    return FieldSpec::Fp(static_cast<std::uint64_t>(v));
  }
  detail::json_fail(where, "expected \"Q\" or {\"p\": prime}");
}

inline Word word_from_json(const Json& j, const std::string& where) {
  if (!j.is_string()) detail::json_fail(where, "expected a word string");
  try {
    return parse_word(j.get<std::string>());
  } catch (const std::exception& e) {
    detail::json_fail(where, e.what());
  }
}

inline Json polynomial_to_json(const TracePolynomial& poly) {
  Json j = Json::object();
  j["n"] = poly.ambient_n();
  j["field"] = field_to_json(poly.field());
  Json terms = Json::array();
  for (const auto& [mono, coeff] : poly.terms()) {
    Json t = Json::object();
    t["coeff"] = coeff.str();
    Json factors = Json::array();
    for (const auto& [neck, e] : mono.factors())
      factors.push_back(Json::array({format_necklace(neck), e}));
    t["monomial"] = std::move(factors);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline TracePolynomial polynomial_from_json(const Json& j, const std::string& where = "polynomial") {
  const long long n = detail::int_member(j, "n", where);
  if (n < 1 || n > 64) detail::json_fail(where + ".n", "expected a dimension in 1..64");
  const FieldSpec f = field_from_json(detail::member(j, "field", where), where + ".field");
  const Json& terms = detail::member(j, "terms", where);
  if (!terms.is_array()) detail::json_fail(where + ".terms", "expected an array");
  TracePolynomial out = TracePolynomial::zero(static_cast<int>(n), f);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string here = where + ".terms[" + std::to_string(i) + "]";
    const Json& t = terms[i];
    ExactScalar coeff = ExactScalar::zero(f);
    try {
      coeff = parse_scalar(detail::string_member(t, "coeff", here), f);
    } catch (const std::invalid_argument& e) {
      detail::json_fail(here + ".coeff", e.what());
    }
    const Json& factors = detail::member(t, "monomial", here);
    if (!factors.is_array()) detail::json_fail(here + ".monomial", "expected an array");
    TracePolynomial term = TracePolynomial::constant(coeff, static_cast<int>(n));
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const std::string fhere = here + ".monomial[" + std::to_string(k) + "]";
      const Json& fac = factors[k];
      if (!fac.is_array() || fac.size() != 2)
        detail::json_fail(fhere, "expected [word, exponent]");
      const Word w = word_from_json(fac[0], fhere + "[0]");
      if (!fac[1].is_number_integer() || fac[1].get<long long>() < 1)
        detail::json_fail(fhere + "[1]", "expected a positive exponent");
      const long long e = fac[1].get<long long>();
      if (e > 64) detail::json_fail(fhere + "[1]", "exponent out of range");
      const Necklace neck = necklace_of(w);
      for (long long rep = 0; rep < e; ++rep)
        term = term * TracePolynomial::chi(neck, static_cast<int>(n), f);
    }
    out = out + term;
  }
  return out;
}

inline Json mexp_to_json(const MatrixExpression& ex) {
  Json j = Json::object();
  j["n"] = ex.ambient_n();
  j["field"] = field_to_json(ex.field());
  Json terms = Json::array();
  for (const auto& [w, coeff] : ex.terms()) {
    Json t = Json::object();
    t["word"] = format_word(w);
    t["coeff"] = polynomial_to_json(coeff);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline MatrixExpression mexp_from_json(const Json& j, const std::string& where = "expression") {
  const long long n = detail::int_member(j, "n", where);
  if (n < 1 || n > 64) detail::json_fail(where + ".n", "expected a dimension in 1..64");
  const FieldSpec f = field_from_json(detail::member(j, "field", where), where + ".field");
  const Json& terms = detail::member(j, "terms", where);
  if (!terms.is_array()) detail::json_fail(where + ".terms", "expected an array");
  MatrixExpression out = MatrixExpression::zero(static_cast<int>(n), f);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string here = where + ".terms[" + std::to_string(i) + "]";
    const Word w = word_from_json(detail::member(terms[i], "word", here), here + ".word");
    const TracePolynomial c = polynomial_from_json(detail::member(terms[i], "coeff", here), here + ".coeff");
    if (c.ambient_n() != n) detail::json_fail(here + ".coeff.n", "dimension differs from the expression");
    out = out + MatrixExpression::term(c, w);
  }
  return out;
}

inline Json graph_to_json(const SkeinGraph& g) {
  Json j = Json::object();
  j["n"] = g.n();
  if (g.is_relative()) {
    Json rel = Json::object();
    rel["in_label"] = format_word(g.through());
    j["relative"] = std::move(rel);
  } else {
    j["relative"] = false;
  }
  // Vertex names are assigned in increasing id order, so equal graphs with
  // equal ids serialize identically.
  std::map<int, std::string> names;
  Json vertices = Json::array();
  for (const auto& [id, kind] : g.vertices()) {
    const std::string name = "v" + std::to_string(names.size() + 1);
    names[id] = name;
    Json v = Json::object();
    v["id"] = name;
    v["kind"] = kind == VertexKind::Source ? "source" : "sink";
    vertices.push_back(std::move(v));
  }
  j["vertices"] = std::move(vertices);
  std::vector<GraphEdge> edges = g.edges();
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::pair(a.from.vertex, a.from.port) < std::pair(b.from.vertex, b.from.port);
  });
  Json edge_list = Json::array();
  for (const GraphEdge& e : edges) {
    Json row = Json::object();
    row["from"] = Json::array({names.at(e.from.vertex), e.from.port + 1});
    row["to"] = Json::array({names.at(e.to.vertex), e.to.port + 1});
    row["label"] = format_word(e.label);
    edge_list.push_back(std::move(row));
  }
  j["edges"] = std::move(edge_list);
  Json loops = Json::array();
  for (const Necklace& c : g.loops()) loops.push_back(format_necklace(c));
  j["loops"] = std::move(loops);
  return j;
}

inline SkeinGraph graph_from_json(const Json& j, const std::string& where = "graph") {
  const long long n = detail::int_member(j, "n", where);
  if (n < 1 || n > 16) detail::json_fail(where + ".n", "expected a dimension in 1..16");
  const Json& rel = detail::member(j, "relative", where);
  std::optional<Word> through;
  if (rel.is_object()) {
    through = word_from_json(detail::member(rel, "in_label", where + ".relative"),
                             where + ".relative.in_label");
  } else if (!rel.is_boolean() || rel.get<bool>()) {
    detail::json_fail(where + ".relative", "expected false or {\"in_label\": word}");
  }
  SkeinGraph g(static_cast<int>(n), through);

  const Json& vertices = detail::member(j, "vertices", where);
  if (!vertices.is_array()) detail::json_fail(where + ".vertices", "expected an array");
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string here = where + ".vertices[" + std::to_string(i) + "]";
    const std::string name = detail::string_member(vertices[i], "id", here);
    if (name.empty()) detail::json_fail(here + ".id", "expected a nonempty id");
    if (ids.count(name)) detail::json_fail(here + ".id", "duplicate vertex id \"" + name + "\"");
    const std::string kind = detail::string_member(vertices[i], "kind", here);
    if (kind != "source" && kind != "sink")
      detail::json_fail(here + ".kind", "expected \"source\" or \"sink\"");
    const int id = static_cast<int>(ids.size());
    ids[name] = id;
    g.add_vertex_with_id(id, kind == "source" ? VertexKind::Source : VertexKind::Sink);
  }

  const auto port_ref = [&](const Json& v, const std::string& here) {
    if (!v.is_array() || v.size() != 2) detail::json_fail(here, "expected [vertex id, port]");
    if (!v[0].is_string()) detail::json_fail(here + "[0]", "expected a vertex id string");
    const auto it = ids.find(v[0].get<std::string>());
    if (it == ids.end())
      detail::json_fail(here + "[0]", "unknown vertex id \"" + v[0].get<std::string>() + "\"");
    if (!v[1].is_number_integer() || v[1].get<long long>() < 1 || v[1].get<long long>() > n)
      detail::json_fail(here + "[1]", "expected a port in 1.." + std::to_string(n));
    return PortRef{it->second, static_cast<int>(v[1].get<long long>()) - 1};
  };

  const Json& edges = detail::member(j, "edges", where);
  if (!edges.is_array()) detail::json_fail(where + ".edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string here = where + ".edges[" + std::to_string(i) + "]";
    const PortRef from = port_ref(detail::member(edges[i], "from", here), here + ".from");
    const PortRef to = port_ref(detail::member(edges[i], "to", here), here + ".to");
    const Word label = word_from_json(detail::member(edges[i], "label", here), here + ".label");
    try {
      g.add_edge(from, to, label);
    } catch (const std::invalid_argument& e) {
      detail::json_fail(here, e.what());
    }
  }

  const Json& loops = detail::member(j, "loops", where);
  if (!loops.is_array()) detail::json_fail(where + ".loops", "expected an array");
  for (std::size_t i = 0; i < loops.size(); ++i)
    g.add_loop(necklace_of(word_from_json(loops[i], where + ".loops[" + std::to_string(i) + "]")));

  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    detail::json_fail(where, e.what());
  }
  return g;
}

inline Json representation_to_json(const Representation& r) {
  Json j = Json::object();
  j["n"] = r.n();
  j["field"] = field_to_json(r.field());
  Json images = Json::object();
  for (const auto& [gen, m] : r.images()) {
    Json rows = Json::array();
    for (int i = 0; i < r.n(); ++i) {
      Json row = Json::array();
      for (int k = 0; k < r.n(); ++k) row.push_back(m.at(i, k).str());
      rows.push_back(std::move(row));
    }
    images[std::to_string(gen)] = std::move(rows);
  }
  j["images"] = std::move(images);
  return j;
}

inline Representation representation_from_json(const Json& j, bool require_unit_det = true,
                                               const std::string& where = "representation") {
  const long long n = detail::int_member(j, "n", where);
  if (n < 1 || n > 16) detail::json_fail(where + ".n", "expected a dimension in 1..16");
  const FieldSpec f = field_from_json(detail::member(j, "field", where), where + ".field");
  const Json& images = detail::member(j, "images", where);
  if (!images.is_object()) detail::json_fail(where + ".images", "expected an object");
  std::map<int, ExactMatrix> parsed;
  for (const auto& [key, rows] : images.items()) {
    const std::string here = where + ".images[\"" + key + "\"]";
    int gen = 0;
    try {
      std::size_t used = 0;
      gen = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      detail::json_fail(here, "keys must be generator numbers like \"1\"");
    }
    if (gen < 1) detail::json_fail(here, "generator numbers start at 1");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
      detail::json_fail(here, "expected " + std::to_string(n) + " rows");
    ExactMatrix m(static_cast<int>(n), f);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Json& row = rows[i];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
        detail::json_fail(here + "[" + std::to_string(i) + "]",
                          "expected " + std::to_string(n) + " entries");
      for (std::size_t k = 0; k < row.size(); ++k) {
        const std::string ehere =
            here + "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
        if (!row[k].is_string()) detail::json_fail(ehere, "expected a scalar string");
        try {
          m.at(static_cast<int>(i), static_cast<int>(k)) = parse_scalar(row[k].get<std::string>(), f);
        } catch (const std::invalid_argument& e) {
          detail::json_fail(ehere, e.what());
        }
      }
    }
    parsed.emplace(gen, std::move(m));
  }
  try {
    return require_unit_det
               ? Representation::from_images(static_cast<int>(n), f, std::move(parsed))
               : Representation::from_images_unchecked(static_cast<int>(n), f, std::move(parsed));
  } catch (const std::invalid_argument& e) {
    detail::json_fail(where, e.what());
  }
}

inline Json fit_report_to_json(const FitReport& r) {
  Json j = Json::object();
  j["note"] =
      "validated evidence, not proof: each fitted expression is exact on the training and "
      "held-out samples drawn per prime; no claim is made beyond the sampled points";
  j["seed"] = r.seed;
  j["degree_bound"] = r.degree_bound;
  Json primes = Json::array();
  for (std::uint64_t p : r.primes) primes.push_back(std::to_string(p));
  j["primes"] = std::move(primes);
  j["training"] = r.training;
  j["heldout"] = r.heldout;
  j["prime_attempts"] = r.prime_attempts;
  j["rank_failures"] = r.rank_failures;
  Json gens = Json::array();
  for (const Word& w : r.generators) gens.push_back(format_word(w));
  j["generators"] = std::move(gens);
  Json targets = Json::array();
  for (const FittedTarget& t : r.targets) {
    Json row = Json::object();
    row["target"] = format_necklace(t.target);
    row["length"] = t.target.word().length();
    row["fitted"] = t.fitted;
    row["degree"] = t.degree;
    row["reconstructed"] = t.reconstructed;
    if (t.reconstructed) {
      row["polynomial"] = polynomial_to_json(fitted_polynomial_q(t, r.table, r.generators));
    } else if (t.fitted) {
      Json mods = Json::array();
      mods.push_back(polynomial_to_json(
          fitted_polynomial_p(t.residues0, r.primes.at(0), r.table, r.generators)));
      if (r.primes.size() > 1)
        mods.push_back(polynomial_to_json(
            fitted_polynomial_p(t.residues1, r.primes.at(1), r.table, r.generators)));
      row["residue_polynomials"] = std::move(mods);
    }
    targets.push_back(std::move(row));
  }
  j["targets"] = std::move(targets);
  return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace skein
