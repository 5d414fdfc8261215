#pragma once

// The exterior exponential of theta on the even exterior algebra of Z^d,
// the trace range it generates, and K-group ranks.

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "nct/torus.hpp"

namespace nct {

inline constexpr std::size_t kMaxExteriorDim = 16;

/// Even-cardinality subsets of {0..d-1}, ordered by size then
/// lexicographically; the empty set is first.
class EvenBasis {
 public:
  explicit EvenBasis(std::size_t d) : d_(d) {
    if (d > kMaxExteriorDim) throw ValidationError("exterior computations are limited to d <= 16");
    const std::uint32_t full = d == 0 ? 0u : ((1u << d) - 1u);
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 0;; ++m) {
      if (std::popcount(m) % 2 == 0) masks.push_back(m);
      if (m == full) break;
    }
    std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
      int pa = std::popcount(a), pb = std::popcount(b);
      if (pa != pb) return pa < pb;
      return lex_less(a, b);
    });
    masks_ = std::move(masks);
    index_.assign(std::size_t{1} << d, npos);
    for (std::size_t i = 0; i < masks_.size(); ++i) index_[masks_[i]] = i;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return masks_.size(); }
  std::uint32_t mask(std::size_t i) const { return masks_.at(i); }
  std::size_t index_of(std::uint32_t mask) const { return index_.at(mask); }

  std::vector<std::size_t> subset(std::size_t i) const { return members(masks_.at(i)); }

  static std::vector<std::size_t> members(std::uint32_t m) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; m >> b; ++b)
      if ((m >> b) & 1u) out.push_back(b);
    return out;
  }

  friend bool operator==(const EvenBasis& a, const EvenBasis& b) { return a.d_ == b.d_; }

 private:
  // Lexicographic comparison of the sorted member lists.
  static bool lex_less(std::uint32_t a, std::uint32_t b) {
    while (a != b) {
      std::uint32_t la = a & -a, lb = b & -b;
      if (la != lb) return la < lb;
      a ^= la;
      b ^= lb;
    }
    return false;
  }

  std::size_t d_;
  std::vector<std::uint32_t> masks_;
  std::vector<std::size_t> index_;
};

struct ExtFunctional {
  EvenBasis basis;
  std::vector<SymReal> values;
};

namespace detail {

// Pfaffians of all even principal submatrices, keyed by mask, by expansion
// along the smallest index:
//   Pf(S) = sum_{j>1} (-1)^j a_{s1 sj} Pf(S \ {s1, sj})   (1-based positions)
inline std::vector<std::pair<std::uint32_t, SymReal>> pfaffian_table(const SkewMatrix& theta,
                                                                      const EvenBasis& basis) {
  const std::size_t d = theta.dim();
  std::vector<SymReal> pf(std::size_t{1} << d, SymReal(theta.basis()));
  pf[0] = SymReal::rational(theta.basis(), 1);
  for (std::size_t i = 1; i < basis.size(); ++i) {
    const std::uint32_t m = basis.mask(i);
    const std::size_t first = static_cast<std::size_t>(std::countr_zero(m));
    const std::uint32_t rest = m & ~(1u << first);
    SymReal acc(theta.basis());
    std::size_t position = 2;
    for (std::uint32_t r = rest; r; r &= r - 1, ++position) {
      const std::size_t k = static_cast<std::size_t>(std::countr_zero(r));
      const SymReal& a = theta(first, k);
      if (a.is_zero()) continue;
      const SymReal& sub = pf[rest & ~(1u << k)];
      if (sub.is_zero()) continue;
      SymReal term = multiply(a, sub);
      if (position % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    pf[m] = std::move(acc);
  }
  std::vector<std::pair<std::uint32_t, SymReal>> out;
  out.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) out.emplace_back(basis.mask(i), pf[basis.mask(i)]);
  return out;
}

}  // namespace detail

/// Pfaffian by first-row expansion. Odd dimension gives 0.
inline SymReal pfaffian(const SkewMatrix& theta) {
  const std::size_t d = theta.dim();
  if (d % 2 == 1) return SymReal(theta.basis());
  if (d == 0) return SymReal::rational(theta.basis(), 1);
  EvenBasis basis(d);
  auto table = detail::pfaffian_table(theta, basis);
  return table.back().second;
}

/// values[S] = Pf(theta_S); values[{}] = 1; values[{j,k}] = theta_{j,k}.
inline ExtFunctional exterior_exp(const SkewMatrix& theta) {
  EvenBasis basis(theta.dim());
  auto table = detail::pfaffian_table(theta, basis);
  std::vector<SymReal> values;
  values.reserve(table.size());
  for (auto& [mask, v] : table) values.push_back(std::move(v));
  return {std::move(basis), std::move(values)};
}

inline RealSubgroup trace_range(const ExtFunctional& f, const RealBasis& real_basis) {
  return subgroup_from(real_basis, f.values);
}

inline RealSubgroup trace_range(const SkewMatrix& theta) {
  return trace_range(exterior_exp(theta), theta.basis());
}

struct KRanks {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
  friend bool operator==(const KRanks&, const KRanks&) = default;
};

inline KRanks k_ranks(std::size_t d) {
  if (d < 1) throw ValidationError("k_ranks needs d >= 1");
  if (d > 63) throw ValidationError("k_ranks: dimension too large");
  const std::uint64_t r = std::uint64_t{1} << (d - 1);
  return {r, r};
}

/// Matrix of the induced map on the even exterior algebra:
///   g[T][S] = det(M_{T,S}), |T| == |S|.
/// For M in GL_d(Z) this is unimodular and fixes the generator of degree 0.
inline IntMatrix even_minor_matrix(const IntMatrix& m, const EvenBasis& basis) {
  if (!m.square() || m.rows() != basis.dim()) throw ValidationError("even_minor_matrix: size mismatch");
  const std::size_t n = basis.size();
  IntMatrix g(n, n);
  std::vector<std::vector<std::size_t>> subsets(n);
  for (std::size_t i = 0; i < n; ++i) subsets[i] = basis.subset(i);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (subsets[s].size() != subsets[t].size()) continue;
      g(t, s) = det_int(m.submatrix(subsets[t], subsets[s]));
    }
  return g;
}

/// values'[S] = sum_T det(M_{T,S}) values[T]; equals exterior_exp(M^t theta M).
inline ExtFunctional pushforward(const ExtFunctional& f, const IntMatrix& m) {
  IntMatrix g = even_minor_matrix(m, f.basis);
  const RealBasis& rb = f.values.front().basis();
  std::vector<SymReal> out(f.basis.size(), SymReal(rb));
  for (std::size_t s = 0; s < out.size(); ++s)
    for (std::size_t t = 0; t < out.size(); ++t) {
      if (g(t, s) == 0) continue;
      out[s] += f.values[t] * Rational(g(t, s));
    }
  return {f.basis, std::move(out)};
}

}  // namespace nct
