#pragma once

// Unsigned 64-bit modular arithmetic for odd primes below 2^62, plus
// deterministic Miller-Rabin and seeded prime drawing. This is the fast path
// under the prime-field scalars and the linear solver.

#include <cstdint>
#include <stdexcept>

#include "skein/rng.hpp"

namespace skein {

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;  // p < 2^62 keeps this overflow-free
  return s >= p ? s - p : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw std::domain_error("invmod: zero has no inverse");
  // Extended Euclid on (a, p); p prime.
  long long t = 0, nt = 1;
  long long r = static_cast<long long>(p), nr = static_cast<long long>(a);
  while (nr != 0) {
    const long long q = r / nr;
    long long tmp = t - q * nt; t = nt; nt = tmp;
    tmp = r - q * nr; r = nr; nr = tmp;
  }
  if (r != 1) throw std::domain_error("invmod: argument shares a factor with the modulus");
  if (t < 0) t += static_cast<long long>(p);
  return static_cast<std::uint64_t>(t);
}

// Deterministic for all 64-bit inputs with this base set.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

// Draws a prime in [2^60, 2^61); the index selects independent primes from
// one seed.
inline std::uint64_t draw_prime(std::uint64_t seed, std::uint64_t index) {
  Rng rng(derive_seed(seed, 0x9dfa3e07ULL, index));
  while (true) {
    std::uint64_t c = rng.next_u64();
    c = (c & ((1ULL << 60) - 1)) | (1ULL << 60) | 1ULL;
    if (is_prime_u64(c)) return c;
  }
}

// Montgomery multiplication domain for an odd modulus. The solver's inner
// loops run entirely in the domain; mul costs two 64x64 multiplies instead
// of a 128-by-64 division.
class Montgomery {
 public:
  explicit Montgomery(std::uint64_t p) : p_(p) {
    if (p < 3 || (p & 1) == 0) throw std::invalid_argument("Montgomery: modulus must be odd and > 2");
    std::uint64_t inv = p;  // Newton iteration; five steps reach 64 bits
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
    neg_inv_ = ~inv + 1;
    const std::uint64_t r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % p);
    r2_ = mulmod(r, r, p);
  }

  std::uint64_t modulus() const { return p_; }
  std::uint64_t to(std::uint64_t x) const { return reduce(static_cast<unsigned __int128>(x % p_) * r2_); }
  std::uint64_t from(std::uint64_t x) const { return reduce(static_cast<unsigned __int128>(x)); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce(static_cast<unsigned __int128>(a) * b);
  }
  std::uint64_t one() const { return to(1); }

 private:
  std::uint64_t reduce(unsigned __int128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const std::uint64_t r =
        static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(m) * p_) >> 64);
    return r >= p_ ? r - p_ : r;
  }

  std::uint64_t p_;
  std::uint64_t neg_inv_;  // -p^{-1} mod 2^64
  std::uint64_t r2_;       // 2^128 mod p
};

}  // namespace skein
