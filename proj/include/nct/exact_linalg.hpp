#pragma once

// Exact integer / rational linear algebra: Hermite and Smith normal forms,
// integer kernels and preimages, Bareiss determinants, rational row
// reduction.

#include <optional>
#include <utility>
#include <vector>

#include "nct/matrix.hpp"

namespace nct {

struct HermiteForm {
  IntMatrix h;  ///< row-style HNF of the input
  IntMatrix u;  ///< unimodular, u * input == h
  std::size_t rank = 0;
};

/// Row-style Hermite normal form. Pivots are positive, entries above a pivot
/// lie in [0, pivot), zero rows come last.
inline HermiteForm hnf(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  const std::size_t rows = a.rows();
  std::size_t r = 0;

  // Replaces rows (r, i) by the unimodular combination
  //   [ s    t  ]
  //   [-b/g a/g ]
  auto combine = [](IntMatrix& x, std::size_t r, std::size_t i, const Integer& s, const Integer& t,
                    const Integer& p, const Integer& q) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Integer top = s * x(r, j) + t * x(i, j);
      Integer bottom = p * x(r, j) + q * x(i, j);
      x(r, j) = std::move(top);
      x(i, j) = std::move(bottom);
    }
  };

  for (std::size_t c = 0; c < a.cols() && r < rows; ++c) {
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a(i, c) == 0) continue;
      const Integer x = a(r, c);
      const Integer y = a(i, c);
      const Bezout b = xgcd(x, y);
      const Integer p = -y / b.g;
      const Integer q = x / b.g;
      combine(a, r, i, b.s, b.t, p, q);
      combine(u, r, i, b.s, b.t, p, q);
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) {
      a.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(a(i, c), a(r, c));
      if (q == 0) continue;
      a.add_row(i, r, -q);
      u.add_row(i, r, -q);
    }
    ++r;
  }
  return {std::move(a), std::move(u), r};
}

/// Nonzero rows of the HNF.
inline IntMatrix hnf_basis(const IntMatrix& m) {
  HermiteForm f = hnf(m);
  return f.h.row_block(0, f.rank);
}

struct SmithForm {
  IntMatrix s;  ///< diagonal, s_1 | s_2 | ..., nonnegative
  IntMatrix u;  ///< unimodular, rows x rows
  IntMatrix v;  ///< unimodular, cols x cols; u * m * v == s
  std::size_t rank = 0;
};

inline SmithForm snf(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());
  const std::size_t n = std::min(a.rows(), a.cols());
  std::size_t rank = 0;

  for (std::size_t t = 0; t < n; ++t) {
    bool found_any = true;
    for (;;) {
      // pivot of smallest absolute value in the trailing block
      std::size_t pi = 0, pj = 0;
      bool have = false;
      for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
          if (a(i, j) == 0) continue;
          if (!have || abs(a(i, j)) < abs(a(pi, pj))) {
            pi = i;
            pj = j;
            have = true;
          }
        }
      if (!have) {
        found_any = false;
        break;
      }
      a.swap_rows(t, pi);
      u.swap_rows(t, pi);
      a.swap_cols(t, pj);
      v.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        a.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        a.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility of the trailing block by the pivot
      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j) {
          Integer rem = a(i, j) % a(t, t);
          if (rem != 0) {
            a.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
        }
      if (divides) break;
    }
    if (!found_any) break;
    if (a(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
    ++rank;
  }
  return {std::move(a), std::move(u), std::move(v), rank};
}

/// Rows form a Z-basis (in HNF) of { x integer : m * x == 0 }.
inline IntMatrix kernel_z(const IntMatrix& m) {
  if (m.cols() == 0) return IntMatrix(0, 0);
  if (m.rows() == 0) return IntMatrix::identity(m.cols());
  HermiteForm f = hnf(m.transpose());
  IntMatrix rows = f.u.row_block(f.rank, m.cols() - f.rank);
  if (rows.rows() == 0) return IntMatrix(0, m.cols());
  return hnf_basis(rows);
}

/// Some integer x with m * x == b, or nullopt. Free coordinates under the
/// Smith transform are set to zero, so the answer is deterministic.
inline std::optional<IntVector> integer_preimage(const IntMatrix& m, std::span<const Integer> b) {
  if (b.size() != m.rows()) throw ValidationError("integer_preimage: right-hand side has wrong length");
  SmithForm f = snf(m);
  IntVector c = mat_vec<Integer>(f.u, b);
  IntVector y(m.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const bool has_pivot = i < f.rank;
    if (!has_pivot) {
      if (c[i] != 0) return std::nullopt;
      continue;
    }
    const Integer& s = f.s(i, i);
    if (c[i] % s != 0) return std::nullopt;
    y[i] = c[i] / s;
  }
  return mat_vec<Integer>(f.v, y);
}

/// Fraction-free (Bareiss) determinant over Integer or Rational entries.
template <class T>
Rational det(const Matrix<T>& m) {
  if (!m.square()) throw ValidationError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Rational(1);
  Matrix<T> a = m;
  T prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return Rational(0);
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        T val = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        a(i, j) = val / prev;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  Rational out(a(n - 1, n - 1));
  return sign < 0 ? Rational(-out) : out;
}

inline Integer det_int(const IntMatrix& m) {
  Rational d = det(m);
  return d.get_num();
}

inline bool is_unimodular(const IntMatrix& m) {
  if (!m.square()) return false;
  Integer d = det_int(m);
  return d == 1 || d == -1;
}

/// Adjugate via cofactors; fine for the small matrices used here.
inline IntMatrix adjugate(const IntMatrix& m) {
  if (!m.square()) throw ValidationError("adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rows.clear();
      cols.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      Integer minor = det_int(m.submatrix(rows, cols));
      adj(i, j) = ((i + j) % 2 == 0) ? minor : Integer(-minor);
    }
  return adj;
}

struct RowEchelon {
  RatMatrix r;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over Q.
inline RowEchelon rref(const RatMatrix& m) {
  RatMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && a(i, c) != 0) a.add_row(i, r, Rational(-a(i, c)));
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

inline std::size_t rank_q(const RatMatrix& m) { return rref(m).pivots.size(); }
inline std::size_t rank_q(const IntMatrix& m) { return rank_q(to_rational(m)); }

/// Rows form a Q-basis of { x : m * x == 0 }, one vector per free column with
/// a 1 in that column.
inline RatMatrix nullspace_q(const RatMatrix& m, std::size_t cols) {
  RowEchelon e = rref(m.rows() == 0 ? RatMatrix(0, cols) : m);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  RatMatrix out(0, cols);
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.r(i, f);
    out.append_row(v);
  }
  return out;
}

inline RatMatrix inverse_q(const RatMatrix& m) {
  if (!m.square()) throw ValidationError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = rref(aug);
  for (std::size_t i = 0; i < n; ++i)
    if (i >= e.pivots.size() || e.pivots[i] != i) throw ValidationError("matrix is singular");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.r(i, n + j);
  return inv;
}

/// Inverse of a unimodular integer matrix.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
  if (!is_unimodular(m)) throw ValidationError("matrix is not unimodular");
  return to_integer(inverse_q(to_rational(m)));
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
inline IntVector primitive_integer(std::span<const Rational> v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm_of(l, x.get_den());
  IntVector out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * l;
    out[i] = s.get_num();
    g = gcd_of(g, out[i]);
  }
  if (g == 0) return out;
  int sign = 1;
  for (const auto& x : out)
    if (x != 0) {
      sign = x < 0 ? -1 : 1;
      break;
    }
  for (auto& x : out) x = x / g * sign;
  return out;
}

}  // namespace nct
