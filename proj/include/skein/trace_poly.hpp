#pragma once

// The trace ring: commutative polynomials in formal symbols chi_w, one per
// nonidentity necklace w, with exact coefficients, tagged with the ambient
// matrix dimension n. chi_e is the constant n and is folded into coefficients
// the moment a term is built, so it never appears as a key. On top of that,
// matrix-valued expressions: finite sums  sum_i c_i * w_i  with trace-ring
// coefficients c_i and free-group words w_i.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "skein/scalar.hpp"
#include "skein/word.hpp"

namespace skein {

class TraceMonomial {
 public:
  TraceMonomial() = default;  // empty product, the monomial 1

  static TraceMonomial chi(const Necklace& c) {
    if (c.is_identity())
      throw std::invalid_argument("trace monomial: the identity necklace is not a key; fold it to the ambient dimension");
    TraceMonomial m;
    m.factors_[c] = 1;
    return m;
  }

  const std::map<Necklace, int>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [c, e] : factors_) d += e;
    return d;
  }

  friend TraceMonomial operator*(const TraceMonomial& a, const TraceMonomial& b) {
    TraceMonomial r = a;
    for (const auto& [c, e] : b.factors_) r.factors_[c] += e;
    return r;
  }

  friend bool operator==(const TraceMonomial&, const TraceMonomial&) = default;
  friend bool operator<(const TraceMonomial& a, const TraceMonomial& b) {
    return a.factors_ < b.factors_;
  }

  std::string str() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (const auto& [c, e] : factors_) {
      if (!s.empty()) s += "*";
      s += "chi[" + format_necklace(c) + "]";
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

 private:
  std::map<Necklace, int> factors_;
};

class TracePolynomial {
 public:
  TracePolynomial() : n_(1), field_(FieldSpec::Q()) {}

  static TracePolynomial zero(int n, const FieldSpec& f) {
    check_ambient(n);
    TracePolynomial p;
    p.n_ = n;
    p.field_ = f;
    return p;
  }

  static TracePolynomial constant(const ExactScalar& c, int n) {
    TracePolynomial p = zero(n, c.field());
    p.add_term(TraceMonomial(), c);
    return p;
  }

  static TracePolynomial from_int(long long v, int n, const FieldSpec& f) {
    return constant(ExactScalar::from_int(v, f), n);
  }

  // chi_w as an element of the ring; the identity necklace folds to the
  // constant n.
  static TracePolynomial chi(const Necklace& w, int n, const FieldSpec& f) {
    if (w.is_identity()) return from_int(n, n, f);
    TracePolynomial p = zero(n, f);
    p.add_term(TraceMonomial::chi(w), ExactScalar::one(f));
    return p;
  }

  int ambient_n() const { return n_; }
  const FieldSpec& field() const { return field_; }
  const std::map<TraceMonomial, ExactScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ExactScalar coefficient(const TraceMonomial& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? ExactScalar::zero(field_) : it->second;
  }

  friend TracePolynomial operator+(const TracePolynomial& a, const TracePolynomial& b) {
    a.require_compatible(b, "trace polynomial add");
    TracePolynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }

  friend TracePolynomial operator-(const TracePolynomial& a, const TracePolynomial& b) {
    return a + (-b);
  }

  TracePolynomial operator-() const {
    TracePolynomial r = zero(n_, field_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }

  friend TracePolynomial operator*(const TracePolynomial& a, const TracePolynomial& b) {
    a.require_compatible(b, "trace polynomial mul");
    TracePolynomial r = zero(a.n_, a.field_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  TracePolynomial scaled(const ExactScalar& s) const {
    require_same_field(field_, s.field(), "trace polynomial scale");
    TracePolynomial r = zero(n_, field_);
    if (s.is_zero()) return r;
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }

  friend bool operator==(const TracePolynomial&, const TracePolynomial&) = default;

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += c.str();
      if (!m.is_one()) s += "*" + m.str();
    }
    return s;
  }

 private:
  static void check_ambient(int n) {
    if (n < 1) throw std::invalid_argument("trace polynomial: ambient dimension must be >= 1");
  }

  void require_compatible(const TracePolynomial& o, const char* what) const {
    if (n_ != o.n_)
      throw std::invalid_argument(std::string(what) + ": ambient mismatch (" + std::to_string(n_) +
                                  " vs " + std::to_string(o.n_) + ")");
    require_same_field(field_, o.field_, what);
  }

  void add_term(const TraceMonomial& m, const ExactScalar& c) {
    require_same_field(field_, c.field(), "trace polynomial term");
    const auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(m, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  int n_;
  FieldSpec field_;
  std::map<TraceMonomial, ExactScalar> terms_;
};

inline TracePolynomial poly_add(const TracePolynomial& a, const TracePolynomial& b) { return a + b; }
inline TracePolynomial poly_mul(const TracePolynomial& a, const TracePolynomial& b) { return a * b; }
inline TracePolynomial poly_scale(const TracePolynomial& a, const ExactScalar& s) { return a.scaled(s); }

// sum_i c_i * w_i with trace-ring coefficients and word keys; the image of a
// relative graph, and the carrier of matrix-valued trace identities.
class MatrixExpression {
 public:
  MatrixExpression() : n_(1), field_(FieldSpec::Q()) {}

  static MatrixExpression zero(int n, const FieldSpec& f) {
    MatrixExpression e;
    e.n_ = n;
    e.field_ = f;
    (void)TracePolynomial::zero(n, f);  // validates n
    return e;
  }

  static MatrixExpression term(const TracePolynomial& c, const Word& w) {
    MatrixExpression e = zero(c.ambient_n(), c.field());
    e.add_term(c, w);
    return e;
  }

  static MatrixExpression identity(int n, const FieldSpec& f) {
    return term(TracePolynomial::from_int(1, n, f), Word());
  }

  int ambient_n() const { return n_; }
  const FieldSpec& field() const { return field_; }
  const std::map<Word, TracePolynomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend MatrixExpression operator+(const MatrixExpression& a, const MatrixExpression& b) {
    a.require_compatible(b, "matrix expression add");
    MatrixExpression r = a;
    for (const auto& [w, c] : b.terms_) r.add_term(c, w);
    return r;
  }

  MatrixExpression operator-() const {
    MatrixExpression r = zero(n_, field_);
    for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
    return r;
  }

  friend MatrixExpression operator-(const MatrixExpression& a, const MatrixExpression& b) {
    return a + (-b);
  }

  MatrixExpression scaled(const TracePolynomial& s) const {
    MatrixExpression r = zero(n_, field_);
    for (const auto& [w, c] : terms_) r.add_term(c * s, w);
    return r;
  }

  friend bool operator==(const MatrixExpression&, const MatrixExpression&) = default;

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")*[" + (w.is_identity() ? std::string("e") : format_word(w)) + "]";
    }
    return s;
  }

 private:
  friend MatrixExpression mexp_mul(const MatrixExpression&, const MatrixExpression&);
  friend TracePolynomial mexp_trace(const MatrixExpression&);

  void require_compatible(const MatrixExpression& o, const char* what) const {
    if (n_ != o.n_)
      throw std::invalid_argument(std::string(what) + ": ambient mismatch (" + std::to_string(n_) +
                                  " vs " + std::to_string(o.n_) + ")");
    require_same_field(field_, o.field_, what);
  }

  void add_term(const TracePolynomial& c, const Word& w) {
    if (c.ambient_n() != n_)
      throw std::invalid_argument("matrix expression term: coefficient ambient mismatch");
    require_same_field(field_, c.field(), "matrix expression term");
    const auto it = terms_.find(w);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(w, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  int n_;
  FieldSpec field_;
  std::map<Word, TracePolynomial> terms_;
};

// Words multiply in the free group (concatenate and reduce), coefficients in
// the trace ring.
inline MatrixExpression mexp_mul(const MatrixExpression& a, const MatrixExpression& b) {
  a.require_compatible(b, "matrix expression mul");
  MatrixExpression r = MatrixExpression::zero(a.n_, a.field_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) r.add_term(ca * cb, multiply(wa, wb));
  return r;
}

// The formal trace: c * w turns into c * chi_{necklace(w)}; a term at the
// identity word picks up the scalar-matrix trace factor n.
inline TracePolynomial mexp_trace(const MatrixExpression& m) {
  TracePolynomial r = TracePolynomial::zero(m.ambient_n(), m.field());
  for (const auto& [w, c] : m.terms())
    r = r + c * TracePolynomial::chi(necklace_of(w), m.ambient_n(), m.field());
  return r;
}

}  // namespace skein
