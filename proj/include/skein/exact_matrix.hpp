#pragma once

// Dense matrices over an exact scalar field, representations of a free group
// by determinant-one matrices, and seeded random determinant-one samples
// built as products of elementary shears (so the determinant is 1 by
// construction, not by rounding).

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skein/rng.hpp"
#include "skein/scalar.hpp"
#include "skein/word.hpp"

namespace skein {

class ExactMatrix {
 public:
  ExactMatrix(int n, const FieldSpec& f)
      : n_(n), field_(f), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), ExactScalar::zero(f)) {
    if (n < 1) throw std::invalid_argument("matrix: dimension must be >= 1");
  }

  static ExactMatrix identity(int n, const FieldSpec& f) {
    ExactMatrix m(n, f);
    for (int i = 0; i < n; ++i) m.at(i, i) = ExactScalar::one(f);
    return m;
  }

  int n() const { return n_; }
  const FieldSpec& field() const { return field_; }

  ExactScalar& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const ExactScalar& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    x.require_compatible(y, "matrix mul");
    ExactMatrix r(x.n_, x.field_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        const ExactScalar& s = x.at(i, k);
        if (s.is_zero()) continue;
        for (int j = 0; j < x.n_; ++j) r.at(i, j) = r.at(i, j) + s * y.at(k, j);
      }
    return r;
  }

  friend ExactMatrix operator+(const ExactMatrix& x, const ExactMatrix& y) {
    x.require_compatible(y, "matrix add");
    ExactMatrix r(x.n_, x.field_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }

  friend ExactMatrix operator-(const ExactMatrix& x, const ExactMatrix& y) {
    x.require_compatible(y, "matrix sub");
    ExactMatrix r(x.n_, x.field_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
  }

  ExactMatrix scaled(const ExactScalar& s) const {
    ExactMatrix r(n_, field_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
  }

  ExactScalar trace() const {
    ExactScalar t = ExactScalar::zero(field_);
    for (int i = 0; i < n_; ++i) t = t + at(i, i);
    return t;
  }

  bool is_zero() const {
    for (const ExactScalar& s : a_)
      if (!s.is_zero()) return false;
    return true;
  }

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

  // Exact determinant by elimination with division (we are over a field).
  ExactScalar det() const {
    ExactMatrix m = *this;
    ExactScalar d = ExactScalar::one(field_);
    for (int col = 0; col < n_; ++col) {
      int pivot = -1;
      for (int row = col; row < n_; ++row)
        if (!m.at(row, col).is_zero()) { pivot = row; break; }
      if (pivot < 0) return ExactScalar::zero(field_);
      if (pivot != col) {
        for (int j = 0; j < n_; ++j) std::swap(m.at(pivot, j), m.at(col, j));
        d = -d;
      }
      d = d * m.at(col, col);
      const ExactScalar inv = m.at(col, col).inverse();
      for (int row = col + 1; row < n_; ++row) {
        if (m.at(row, col).is_zero()) continue;
        const ExactScalar factor = m.at(row, col) * inv;
        for (int j = col; j < n_; ++j) m.at(row, j) = m.at(row, j) - factor * m.at(col, j);
      }
    }
    return d;
  }

  ExactMatrix inverse() const {
    ExactMatrix m = *this;
    ExactMatrix r = identity(n_, field_);
    for (int col = 0; col < n_; ++col) {
      int pivot = -1;
      for (int row = col; row < n_; ++row)
        if (!m.at(row, col).is_zero()) { pivot = row; break; }
      if (pivot < 0) throw std::domain_error("matrix inverse: singular matrix");
      if (pivot != col)
        for (int j = 0; j < n_; ++j) {
          std::swap(m.at(pivot, j), m.at(col, j));
          std::swap(r.at(pivot, j), r.at(col, j));
        }
      const ExactScalar inv = m.at(col, col).inverse();
      for (int j = 0; j < n_; ++j) {
        m.at(col, j) = m.at(col, j) * inv;
        r.at(col, j) = r.at(col, j) * inv;
      }
      for (int row = 0; row < n_; ++row) {
        if (row == col || m.at(row, col).is_zero()) continue;
        const ExactScalar factor = m.at(row, col);
        for (int j = 0; j < n_; ++j) {
          m.at(row, j) = m.at(row, j) - factor * m.at(col, j);
          r.at(row, j) = r.at(row, j) - factor * r.at(col, j);
        }
      }
    }
    return r;
  }

  ExactMatrix pow(long long k) const {
    if (k < 0) return inverse().pow(-k);
    ExactMatrix r = identity(n_, field_);
    ExactMatrix base = *this;
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < n_; ++j) s += (j ? ", " : "") + at(i, j).str();
    }
    return s + "]";
  }

 private:
  void require_compatible(const ExactMatrix& o, const char* what) const {
    if (n_ != o.n_) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    require_same_field(field_, o.field_, what);
  }

  int n_;
  FieldSpec field_;
  std::vector<ExactScalar> a_;
};

// Images of free-group generators; every image must have determinant exactly
// one. The unchecked factory exists for negative controls that deliberately
// violate that.
class Representation {
 public:
  static Representation from_images(int n, const FieldSpec& f, std::map<int, ExactMatrix> images) {
    Representation r = from_images_unchecked(n, f, std::move(images));
    for (const auto& [gen, m] : r.images_)
      if (!(m.det() == ExactScalar::one(f)))
        throw std::invalid_argument("representation: image of g" + std::to_string(gen) +
                                    " has determinant != 1");
    return r;
  }

  static Representation from_images_unchecked(int n, const FieldSpec& f, std::map<int, ExactMatrix> images) {
    if (n < 1) throw std::invalid_argument("representation: dimension must be >= 1");
    for (const auto& [gen, m] : images) {
      if (gen < 1) throw std::invalid_argument("representation: generator index must be >= 1");
      if (m.n() != n) throw std::invalid_argument("representation: image of g" + std::to_string(gen) +
                                                  " has the wrong dimension");
      require_same_field(f, m.field(), "representation");
    }
    Representation r;
    r.n_ = n;
    r.field_ = f;
    r.images_ = std::move(images);
    return r;
  }

  int n() const { return n_; }
  const FieldSpec& field() const { return field_; }
  const std::map<int, ExactMatrix>& images() const { return images_; }

  const ExactMatrix& image(int gen) const {
    const auto it = images_.find(gen);
    if (it == images_.end())
      throw std::invalid_argument("representation: no image for generator g" + std::to_string(gen));
    return it->second;
  }

 private:
  Representation() : n_(1), field_(FieldSpec::Q()) {}

  int n_;
  FieldSpec field_;
  std::map<int, ExactMatrix> images_;
};

// The image of a word: product of generator images and their inverses.
inline ExactMatrix rho(const Representation& r, const Word& w) {
  ExactMatrix m = ExactMatrix::identity(r.n(), r.field());
  for (const Letter& l : w.letters()) {
    const ExactMatrix& g = r.image(l.gen);
    m = m * (l.exp >= 0 ? g.pow(l.exp) : g.inverse().pow(-l.exp));
  }
  return m;
}

// Product of 2n elementary shears with small rational offsets (numerators
// and denominators bounded by 7); determinant one by construction. n = 1
// collapses to the 1x1 identity.
inline ExactMatrix random_sl_matrix(int n, std::uint64_t seed, const FieldSpec& f = FieldSpec::Q()) {
  if (n < 1) throw std::invalid_argument("random_sl_matrix: dimension must be >= 1");
  ExactMatrix m = ExactMatrix::identity(n, f);
  if (n == 1) return m;
  Rng rng(derive_seed(seed, 0x51a7u));
  for (int s = 0; s < 2 * n; ++s) {
    const int i = static_cast<int>(rng.uniform(0, n - 1));
    int j = static_cast<int>(rng.uniform(0, n - 2));
    if (j >= i) ++j;
    long long num = rng.uniform(1, 7);
    if (rng.coin()) num = -num;
    const long long den = rng.uniform(1, 7);
    ExactMatrix shear = ExactMatrix::identity(n, f);
    shear.at(i, j) = ExactScalar::from_int(num, f) * ExactScalar::from_int(den, f).inverse();
    m = m * shear;
  }
  return m;
}

// Independent random determinant-one images for generators g1..gk.
inline Representation random_representation(int n, int k, std::uint64_t seed,
                                            const FieldSpec& f = FieldSpec::Q()) {
  std::map<int, ExactMatrix> images;
  for (int gen = 1; gen <= k; ++gen)
    images.emplace(gen, random_sl_matrix(n, derive_seed(seed, 0x2e9u, static_cast<std::uint64_t>(gen)), f));
  return Representation::from_images(n, f, std::move(images));
}

}  // namespace skein
