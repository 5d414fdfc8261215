#pragma once

// Shell-by-shell enumeration of small integer vectors.

#include <cstdint>
#include <cstdlib>
#include <span>
#include <utility>
#include <vector>

namespace nct {

/// Coordinate constraint x == value (mod modulus); modulus 1 means free.
struct Residue {
  long modulus = 1;
  long value = 0;

  bool accepts(long x) const {
    long r = x % modulus;
    if (r < 0) r += modulus;
    long v = value % modulus;
    if (v < 0) v += modulus;
    return r == v;
  }
};

/// Visits every x in Z^n with max|x_i| == radius that satisfies the
/// residues, each exactly once, in a fixed order. The visitor returns false
/// to stop; the function then returns false.
///
/// A point is visited under its first coordinate of maximal magnitude (the
/// pivot): earlier coordinates have |x_j| < radius, later ones |x_j| <= radius.
template <class Visit>
bool for_each_in_shell(std::size_t n, long radius, std::span<const Residue> residues, Visit&& visit) {
  std::vector<Residue> res(residues.begin(), residues.end());
  res.resize(n);
  std::vector<long> x(n, 0);
  if (radius == 0) {
    for (std::size_t i = 0; i < n; ++i)
      if (!res[i].accepts(0)) return true;
    return visit(std::span<const long>(x));
  }
  // admissible values per coordinate, for a given pivot
  auto values = [&](std::size_t j, std::size_t pivot) {
    std::vector<long> v;
    if (j == pivot) {
      for (long s : {-radius, radius})
        if (res[j].accepts(s)) v.push_back(s);
      return v;
    }
    const long hi = j < pivot ? radius - 1 : radius;
    for (long s = -hi; s <= hi; ++s)
      if (res[j].accepts(s)) v.push_back(s);
    return v;
  };
  for (std::size_t pivot = 0; pivot < n; ++pivot) {
    std::vector<std::vector<long>> choice(n);
    bool empty = false;
    for (std::size_t j = 0; j < n; ++j) {
      choice[j] = values(j, pivot);
      if (choice[j].empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      for (std::size_t j = 0; j < n; ++j) x[j] = choice[j][idx[j]];
      if (!visit(std::span<const long>(x))) return false;
      std::size_t j = n;
      while (j > 0) {
        --j;
        if (++idx[j] < choice[j].size()) break;
        idx[j] = 0;
        if (j == 0) {
          j = n + 1;
          break;
        }
      }
      if (j == n + 1 || n == 0) break;
    }
  }
  return true;
}

template <class Visit>
bool for_each_in_shell(std::size_t n, long radius, const std::vector<Residue>& residues, Visit&& visit) {
  return for_each_in_shell(n, radius, std::span<const Residue>(residues), std::forward<Visit>(visit));
}

}  // namespace nct
