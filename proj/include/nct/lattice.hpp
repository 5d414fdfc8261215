#pragma once

// LLL reduction and Babai nearest-plane rounding in exact arithmetic.

#include <vector>

#include "nct/exact_linalg.hpp"

namespace nct {

namespace detail {

struct GramSchmidt {
  std::vector<RatVector> star;
  std::vector<Rational> norm;  // |b*_i|^2
  RatMatrix mu;
};

inline Rational dot_q(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline GramSchmidt gram_schmidt(const IntMatrix& b) {
  const std::size_t n = b.rows();
  GramSchmidt g;
  g.mu = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVector v(b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) v[j] = Rational(b(i, j));
    RatVector orig = v;
    for (std::size_t k = 0; k < i; ++k) {
      if (g.norm[k] == 0) continue;
      g.mu(i, k) = dot_q(orig, g.star[k]) / g.norm[k];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= g.mu(i, k) * g.star[k][j];
    }
    g.norm.push_back(dot_q(v, v));
    g.star.push_back(std::move(v));
  }
  return g;
}

}  // namespace detail

/// LLL-reduces the rows of b (linearly independent) with parameter delta.
inline IntMatrix lll_reduce(IntMatrix b, const Rational& delta = Rational(3, 4)) {
  const std::size_t n = b.rows();
  if (rank_q(b) != n) throw ValidationError("lll_reduce: rows must be linearly independent");
  detail::GramSchmidt g = detail::gram_schmidt(b);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t jj = k; jj-- > 0;) {
      Integer q = round_of(g.mu(k, jj));
      if (q == 0) continue;
      b.add_row(k, jj, -q);
      g = detail::gram_schmidt(b);
    }
    if (g.norm[k] >= (delta - g.mu(k, k - 1) * g.mu(k, k - 1)) * g.norm[k - 1]) {
      ++k;
    } else {
      b.swap_rows(k, k - 1);
      g = detail::gram_schmidt(b);
      k = k > 1 ? k - 1 : 1;
    }
  }
  return b;
}

/// Lattice vector near target by nearest-plane rounding on the given basis.
inline IntVector babai_nearest(const IntMatrix& basis, std::span<const Rational> target) {
  if (target.size() != basis.cols()) throw ValidationError("babai_nearest: target has wrong length");
  detail::GramSchmidt g = detail::gram_schmidt(basis);
  RatVector t(target.begin(), target.end());
  IntVector v(basis.cols());
  for (std::size_t i = basis.rows(); i-- > 0;) {
    if (g.norm[i] == 0) continue;
    Integer c = round_of(detail::dot_q(t, g.star[i]) / g.norm[i]);
    if (c == 0) continue;
    for (std::size_t j = 0; j < t.size(); ++j) {
      t[j] -= Rational(c * basis(i, j));
      v[j] += c * basis(i, j);
    }
  }
  return v;
}

/// LLL followed by Babai. A heuristic: callers verify what they use.
inline IntVector cvp_nearest(const IntMatrix& basis, std::span<const Rational> target) {
  return babai_nearest(lll_reduce(basis), target);
}

}  // namespace nct
