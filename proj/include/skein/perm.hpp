#pragma once

// Permutations of {0..m-1} as image vectors, with the cycle bookkeeping the
// trace-identity machinery needs: sign, cycle count, and the cycle partition
// anchored at a chosen first element.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace skein {

using Perm = std::vector<int>;

inline void check_perm(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("permutation: images must be a bijection on 0..m-1");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

// All m! permutations in lexicographic order. Guarded: m <= 8.
inline std::vector<Perm> enumerate_perms(int m) {
  if (m < 0 || m > 8) throw std::invalid_argument("enumerate_perms: m must be in 0..8");
  Perm p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline int perm_sign(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t j = i, len = 0;
    while (!seen[j]) {
      seen[j] = 1;
      j = static_cast<std::size_t>(p[j]);
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// Cycle partition with the cycle of first_element listed first and started at
// first_element; the remaining cycles are ordered by their smallest element
// and started there.
inline std::vector<std::vector<int>> cycles_from(const Perm& p, int first_element) {
  const int m = static_cast<int>(p.size());
  if (first_element < 0 || first_element >= m)
    throw std::invalid_argument("cycles_from: first_element out of range");
  std::vector<char> seen(p.size(), 0);
  std::vector<std::vector<int>> out;
  const auto trace_cycle = [&](int start) {
    std::vector<int> cyc;
    int j = start;
    while (!seen[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = 1;
      cyc.push_back(j);
      j = p[static_cast<std::size_t>(j)];
    }
    out.push_back(std::move(cyc));
  };
  trace_cycle(first_element);
  for (int i = 0; i < m; ++i)
    if (!seen[static_cast<std::size_t>(i)]) trace_cycle(i);
  return out;
}

inline int cycle_count(const Perm& p) {
  if (p.empty()) return 0;
  return static_cast<int>(cycles_from(p, 0).size());
}

}  // namespace skein
