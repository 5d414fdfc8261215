#pragma once

// Skew-symmetric parameter matrices, the nondegeneracy (simplicity)
// criterion, change of basis, restriction to subgroups of Z^d and the
// block decomposition with an integral off-diagonal block.

#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

#include "nct/symreal.hpp"

namespace nct {

class SkewMatrix {
 public:
  /// Checks exact skew-symmetry in row-major order and reports the first
  /// violating entry (0-based in the exception, 1-based in the message).
  static SkewMatrix validate(std::size_t d, const RealBasis& basis, std::vector<SymReal> entries) {
    if (entries.size() != d * d) throw ValidationError("theta must have d*d entries");
    for (const auto& e : entries)
      if (!(e.basis() == basis)) throw ValidationError("theta entry basis mismatch");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const SymReal& a = entries[i * d + j];
        const SymReal& b = entries[j * d + i];
        bool ok = (i == j) ? a.is_zero() : (a + b).is_zero();
        if (!ok) {
          std::ostringstream os;
          os << "theta is not skew-symmetric at (" << i + 1 << "," << j + 1 << ")";
          throw SkewError(i, j, os.str());
        }
      }
    SkewMatrix m;
    m.d_ = d;
    m.basis_ = basis;
    m.entries_ = std::move(entries);
    return m;
  }

  static SkewMatrix from_rational(const RatMatrix& q, const RealBasis& basis = RealBasis{}) {
    if (!q.square()) throw ValidationError("theta must be square");
    std::vector<SymReal> e;
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t j = 0; j < q.cols(); ++j) e.push_back(SymReal::rational(basis, q(i, j)));
    return validate(q.rows(), basis, std::move(e));
  }

  /// theta from its upper triangle, listed row by row: (1,2), (1,3), ..., (d-1,d).
  static SkewMatrix from_upper(std::size_t d, const RealBasis& basis, std::span<const SymReal> upper) {
    if (upper.size() != d * (d - 1) / 2) throw ValidationError("wrong number of upper-triangle entries");
    std::vector<SymReal> e(d * d, SymReal(basis));
    std::size_t t = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j, ++t) {
        e[i * d + j] = upper[t];
        e[j * d + i] = -upper[t];
      }
    return validate(d, basis, std::move(e));
  }

  std::size_t dim() const noexcept { return d_; }
  const RealBasis& basis() const noexcept { return basis_; }
  const SymReal& operator()(std::size_t i, std::size_t j) const { return entries_[i * d_ + j]; }
  const std::vector<SymReal>& entries() const noexcept { return entries_; }

  /// Rational coefficient matrix of basis label b.
  RatMatrix coefficient(std::size_t label) const {
    RatMatrix m(d_, d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) m(i, j) = (*this)(i, j).coord(label);
    return m;
  }

  bool is_rational() const {
    for (const auto& e : entries_)
      if (!e.is_rational()) return false;
    return true;
  }

  /// Principal submatrix on the given (sorted) indices.
  SkewMatrix principal(std::span<const std::size_t> idx) const {
    std::vector<SymReal> e;
    e.reserve(idx.size() * idx.size());
    for (std::size_t a : idx)
      for (std::size_t b : idx) e.push_back((*this)(a, b));
    SkewMatrix m;
    m.d_ = idx.size();
    m.basis_ = basis_;
    m.entries_ = std::move(e);
    return m;
  }

  friend bool operator==(const SkewMatrix& a, const SkewMatrix& b) {
    return a.d_ == b.d_ && a.basis_ == b.basis_ && a.entries_ == b.entries_;
  }

  /// The empty 0 x 0 matrix.
  SkewMatrix() = default;

 private:
  std::size_t d_ = 0;
  RealBasis basis_;
  std::vector<SymReal> entries_;
};

/// <x, theta y> for rational vectors.
inline SymReal pairing(const SkewMatrix& theta, std::span<const Rational> x, std::span<const Rational> y) {
  SymReal s(theta.basis());
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < theta.dim(); ++j) {
      if (y[j] == 0) continue;
      s += theta(i, j) * (x[i] * y[j]);
    }
  }
  return s;
}

inline RatVector to_rational(std::span<const Integer> v) { return RatVector(v.begin(), v.end()); }

struct Nondegeneracy {
  bool nondegenerate = false;
  /// Nonzero primitive integer x with <x, theta y> rational for all rational y;
  /// present iff degenerate.
  std::optional<IntVector> witness;
};

/// theta is degenerate iff the transposed coefficient matrices of all
/// symbolic labels share a nonzero rational kernel vector.
inline Nondegeneracy is_nondegenerate(const SkewMatrix& theta) {
  const std::size_t d = theta.dim();
  RatMatrix stacked(0, d);
  for (std::size_t b = 1; b < theta.basis().size(); ++b) {
    RatMatrix c = theta.coefficient(b).transpose();
    for (std::size_t i = 0; i < d; ++i) stacked.append_row(c.row(i));
  }
  RatMatrix kernel = nullspace_q(stacked, d);
  if (kernel.rows() == 0) return {true, std::nullopt};
  return {false, primitive_integer(kernel.row(0))};
}

/// B^t theta B for invertible rational B.
inline SkewMatrix conjugate(const SkewMatrix& theta, const RatMatrix& b) {
  const std::size_t d = theta.dim();
  if (b.rows() != d || b.cols() != d) throw ValidationError("basis change must be d x d");
  if (det(b) == 0) throw ValidationError("basis change matrix is singular");
  // (theta B) first, then B^t (theta B).
  std::vector<SymReal> tb(d * d, SymReal(theta.basis()));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) {
        if (b(j, k) == 0) continue;
        tb[i * d + k] += theta(i, j) * b(j, k);
      }
  std::vector<SymReal> out(d * d, SymReal(theta.basis()));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < d; ++i) {
        if (b(i, j) == 0) continue;
        out[j * d + k] += tb[i * d + k] * b(i, j);
      }
  return SkewMatrix::validate(d, theta.basis(), std::move(out));
}

inline SkewMatrix conjugate(const SkewMatrix& theta, const IntMatrix& b) {
  return conjugate(theta, to_rational(b));
}

/// A subgroup of Z^d given by a Z-basis (rows).
class Subgroup {
 public:
  Subgroup(std::size_t ambient, IntMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {
    if (basis_.rows() > 0 && basis_.cols() != ambient_) throw ValidationError("subgroup basis has wrong width");
    if (basis_.rows() == 0) basis_ = IntMatrix(0, ambient_);
    if (rank_q(basis_) != basis_.rows()) throw ValidationError("subgroup basis rows are linearly dependent");
  }

  /// Span of the given standard coordinates (0-based), in increasing order.
  static Subgroup coordinates(std::size_t ambient, std::span<const std::size_t> coords) {
    IntMatrix b(coords.size(), ambient);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] >= ambient) throw ValidationError("coordinate index out of range");
      b(i, coords[i]) = 1;
    }
    return Subgroup(ambient, std::move(b));
  }

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return basis_.rows(); }
  const IntMatrix& basis() const noexcept { return basis_; }

 private:
  std::size_t ambient_;
  IntMatrix basis_;
};

/// Matrix of the restricted bicharacter in the given basis of h.
inline SkewMatrix restrict(const SkewMatrix& theta, const Subgroup& h) {
  if (h.ambient() != theta.dim()) throw ValidationError("subgroup ambient dimension mismatch");
  const std::size_t m = h.rank();
  std::vector<SymReal> e;
  e.reserve(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    RatVector hj = to_rational(h.basis().row(j));
    for (std::size_t k = 0; k < m; ++k) {
      RatVector hk = to_rational(h.basis().row(k));
      e.push_back(pairing(theta, hj, hk));
    }
  }
  return SkewMatrix::validate(m, theta.basis(), std::move(e));
}

struct BlockDecomposition {
  RatMatrix transform;  ///< B, invertible
  std::size_t split = 0;  ///< r: size of the first diagonal block
  SkewMatrix result;    ///< B^t theta B
};

namespace detail {

inline bool off_diagonal_block_integral(const SkewMatrix& m, std::size_t r) {
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = r; j < m.dim(); ++j) {
      const SymReal& e = m(i, j);
      if (!e.is_rational() || e.rational_part().get_den() != 1) return false;
    }
  return true;
}

}  // namespace detail

/// Constructive block decomposition for a nondegenerate theta and a
/// subgroup H on which theta restricts nondegenerately. Complement
/// vectors are the standard basis vectors, taken greedily in increasing
/// order, that enlarge the rational span of H.
inline BlockDecomposition block_decompose(const SkewMatrix& theta, const Subgroup& h) {
  const std::size_t d = theta.dim();
  const std::size_t r = h.rank();
  if (!is_nondegenerate(theta).nondegenerate) throw ValidationError("block_decompose: theta is degenerate");
  if (!is_nondegenerate(restrict(theta, h)).nondegenerate)
    throw ValidationError("block_decompose: theta restricted to H is degenerate");

  IntMatrix span = h.basis();
  std::vector<IntVector> complement;
  for (std::size_t i = 0; i < d && span.rows() < d; ++i) {
    IntVector e(d);
    e[i] = 1;
    IntMatrix trial = span;
    trial.append_row(e);
    if (rank_q(trial) == trial.rows()) {
      span = std::move(trial);
      complement.push_back(std::move(e));
    }
  }

  std::vector<RatVector> xs;
  for (const auto& v : complement) {
    IntMatrix ext = h.basis();
    ext.append_row(v);
    SkewMatrix local = restrict(theta, Subgroup(d, ext));
    Nondegeneracy nd = is_nondegenerate(local);
    if (nd.nondegenerate) {
      std::ostringstream os;
      os << "block_decompose: theta restricted to H + Z v is nondegenerate for v = e_";
      for (std::size_t i = 0; i < d; ++i)
        if (v[i] != 0) os << i + 1;
      os << "; extend H instead";
      throw ValidationError(os.str());
    }
    const IntVector& c = *nd.witness;
    if (c.back() == 0) throw InternalError("block_decompose: degeneracy witness lies in span(H)");
    RatVector x(d);
    for (std::size_t a = 0; a <= r; ++a)
      for (std::size_t j = 0; j < d; ++j) x[j] += Rational(c[a] * ext(a, j));
    xs.push_back(std::move(x));
  }

  Integer n = 1;
  for (const auto& x : xs)
    for (std::size_t l = 0; l < r; ++l) {
      SymReal p = pairing(theta, x, to_rational(h.basis().row(l)));
      if (!p.is_rational()) throw InternalError("block_decompose: pairing with H is not rational");
      n = lcm_of(n, p.rational_part().get_den());
    }

  RatMatrix b(d, d);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < d; ++i) b(i, k) = h.basis()(k, i);
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) b(i, r + k) = xs[k][i] * n;

  SkewMatrix result = conjugate(theta, b);
  if (!detail::off_diagonal_block_integral(result, r))
    throw InternalError("block_decompose: off-diagonal block is not integral");
  return {std::move(b), r, std::move(result)};
}

/// Lower-right diagonal block of a decomposition.
inline SkewMatrix trailing_block(const BlockDecomposition& bd) {
  std::vector<std::size_t> idx;
  for (std::size_t i = bd.split; i < bd.result.dim(); ++i) idx.push_back(i);
  return bd.result.principal(idx);
}

inline SkewMatrix leading_block(const BlockDecomposition& bd) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < bd.split; ++i) idx.push_back(i);
  return bd.result.principal(idx);
}

struct CoordinateRestriction {
  std::size_t rank = 0;
  std::vector<std::size_t> coords;  ///< 0-based, increasing
};

inline constexpr std::size_t kMaxSubsetSearchDim = 16;

/// Largest set of standard coordinates on which theta restricts
/// nondegenerately; ties go to the lexicographically first set.
inline CoordinateRestriction find_nondeg_coordinate_restriction(const SkewMatrix& theta) {
  const std::size_t d = theta.dim();
  if (d > kMaxSubsetSearchDim) throw ValidationError("coordinate subset search is limited to d <= 16");
  for (std::size_t size = d; size > 0; --size) {
    // lexicographic enumeration of size-subsets
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      if (is_nondegenerate(theta.principal(idx)).nondegenerate) return {size, idx};
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == d - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return {0, {}};
}

}  // namespace nct
