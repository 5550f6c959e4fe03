#pragma once

// Exact scalars: arbitrary-precision rationals, or residues modulo a prime.
// A scalar knows its field; arithmetic across fields (or across different
// primes) is a hard error, never a silent coercion.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "skein/modp.hpp"

namespace skein {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct FieldSpec {
  std::optional<std::uint64_t> p;  // engaged: F_p; empty: Q

  static FieldSpec Q() { return {}; }
  static FieldSpec Fp(std::uint64_t prime) {
    if (prime < 2 || prime >= (1ULL << 62) || !is_prime_u64(prime))
      throw std::invalid_argument("field: modulus must be a prime below 2^62");
    return {prime};
  }

  bool is_q() const { return !p.has_value(); }

  std::string str() const { return is_q() ? "Q" : "Fp(" + std::to_string(*p) + ")"; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline void require_same_field(const FieldSpec& a, const FieldSpec& b, const char* what) {
  if (!(a == b))
    throw std::invalid_argument(std::string(what) + ": field mismatch, " + a.str() + " vs " + b.str());
}

class ExactScalar {
 public:
  ExactScalar() : v_(Rational(0)) {}

  static ExactScalar from_rational(Rational r) {
    ExactScalar s;
    s.v_ = std::move(r);
    return s;
  }

  static ExactScalar mod_p(std::uint64_t value, std::uint64_t prime) {
    (void)FieldSpec::Fp(prime);  // validates the modulus
    ExactScalar s;
    s.v_ = FpVal{value % prime, prime};
    return s;
  }

  static ExactScalar from_int(long long v, const FieldSpec& f) {
    if (f.is_q()) return from_rational(Rational(v));
    const std::uint64_t p = *f.p;
    std::uint64_t r = static_cast<std::uint64_t>(v % static_cast<long long>(p));
    if (v < 0) r = (r + p) % p;
    ExactScalar s;
    s.v_ = FpVal{r, p};
    return s;
  }

  static ExactScalar zero(const FieldSpec& f) { return from_int(0, f); }
  static ExactScalar one(const FieldSpec& f) { return from_int(1, f); }

  FieldSpec field() const {
    if (std::holds_alternative<Rational>(v_)) return FieldSpec::Q();
    return FieldSpec{std::get<FpVal>(v_).p};
  }

  bool is_zero() const {
    if (const Rational* q = std::get_if<Rational>(&v_)) return *q == 0;
    return std::get<FpVal>(v_).v == 0;
  }

  const Rational& rational() const {
    if (const Rational* q = std::get_if<Rational>(&v_)) return *q;
    throw std::invalid_argument("scalar: rational value requested from a prime-field scalar");
  }

  std::uint64_t residue() const {
    if (const FpVal* m = std::get_if<FpVal>(&v_)) return m->v;
    throw std::invalid_argument("scalar: residue requested from a rational scalar");
  }

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    require_same_field(a.field(), b.field(), "scalar add");
    if (const Rational* q = std::get_if<Rational>(&a.v_))
      return from_rational(*q + std::get<Rational>(b.v_));
    const FpVal& x = std::get<FpVal>(a.v_), y = std::get<FpVal>(b.v_);
    ExactScalar s;
    s.v_ = FpVal{addmod(x.v, y.v, x.p), x.p};
    return s;
  }

  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
    require_same_field(a.field(), b.field(), "scalar sub");
    if (const Rational* q = std::get_if<Rational>(&a.v_))
      return from_rational(*q - std::get<Rational>(b.v_));
    const FpVal& x = std::get<FpVal>(a.v_), y = std::get<FpVal>(b.v_);
    ExactScalar s;
    s.v_ = FpVal{submod(x.v, y.v, x.p), x.p};
    return s;
  }

  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    require_same_field(a.field(), b.field(), "scalar mul");
    if (const Rational* q = std::get_if<Rational>(&a.v_))
      return from_rational(*q * std::get<Rational>(b.v_));
    const FpVal& x = std::get<FpVal>(a.v_), y = std::get<FpVal>(b.v_);
    ExactScalar s;
    s.v_ = FpVal{mulmod(x.v, y.v, x.p), x.p};
    return s;
  }

  ExactScalar operator-() const {
    if (const Rational* q = std::get_if<Rational>(&v_)) return from_rational(-*q);
    const FpVal& x = std::get<FpVal>(v_);
    ExactScalar s;
    s.v_ = FpVal{x.v == 0 ? 0 : x.p - x.v, x.p};
    return s;
  }

  ExactScalar inverse() const {
    if (const Rational* q = std::get_if<Rational>(&v_)) {
      if (*q == 0) throw std::domain_error("scalar: inverse of zero");
      return from_rational(1 / *q);
    }
    const FpVal& x = std::get<FpVal>(v_);
    if (x.v == 0) throw std::domain_error("scalar: inverse of zero");
    ExactScalar s;
    s.v_ = FpVal{invmod(x.v, x.p), x.p};
    return s;
  }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    if (std::holds_alternative<Rational>(a.v_) != std::holds_alternative<Rational>(b.v_)) return false;
    if (const Rational* q = std::get_if<Rational>(&a.v_)) return *q == std::get<Rational>(b.v_);
    const FpVal& x = std::get<FpVal>(a.v_), y = std::get<FpVal>(b.v_);
    return x.p == y.p && x.v == y.v;
  }

  // "num" or "num/den" for rationals, the decimal residue for prime fields.
  std::string str() const {
    if (const Rational* q = std::get_if<Rational>(&v_)) {
      std::string s = numerator(*q).str();
      if (denominator(*q) != 1) s += "/" + denominator(*q).str();
      return s;
    }
    return std::to_string(std::get<FpVal>(v_).v);
  }

 private:
  struct FpVal {
    std::uint64_t v;
    std::uint64_t p;
  };

  std::variant<Rational, FpVal> v_;
};

// Parses "num" or "num/den" into a scalar of the given field; prime-field
// values are reduced mod p (denominators inverted).
inline ExactScalar parse_scalar(const std::string& text, const FieldSpec& f) {
  const auto bad = [&text]() {
    return std::invalid_argument("scalar '" + text + "': expected num or num/den");
  };
  if (text.empty()) throw bad();
  const std::size_t slash = text.find('/');
  const std::string ns = text.substr(0, slash);
  const std::string ds = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (ns.empty() || ds.empty()) throw bad();
  BigInt num, den;
  try {
    num = BigInt(ns);
    den = BigInt(ds);
  } catch (const std::exception&) { throw bad(); }
  if (den == 0) throw std::invalid_argument("scalar '" + text + "': zero denominator");
  if (f.is_q()) return ExactScalar::from_rational(Rational(num, den));
  const std::uint64_t p = *f.p;
  const BigInt bp = p;
  auto to_residue = [&](BigInt v) {
    v %= bp;
    if (v < 0) v += bp;
    return static_cast<std::uint64_t>(v);
  };
  const std::uint64_t dn = to_residue(den);
  if (dn == 0) throw std::invalid_argument("scalar '" + text + "': denominator vanishes mod p");
  return ExactScalar::mod_p(mulmod(to_residue(num), invmod(dn, p), p), p);
}

}  // namespace skein
