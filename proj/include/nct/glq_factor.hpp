#pragma once

// Words in GL_d(Z) and positive coordinate dilations representing a given
// element of GL_d(Q).

#include <string>
#include <vector>

#include "nct/exact_linalg.hpp"

namespace nct {

/// E1_j(r): scale coordinate j by r. E2_{j,k}: swap j and k.
/// E3_{j,k}(r): identity plus r at entry (j,k).
struct Elementary {
  enum class Kind { scale, swap, transvection };
  Kind kind = Kind::scale;
  std::size_t j = 0;
  std::size_t k = 0;
  Rational r = 1;

  static Elementary scale(std::size_t j, Rational r) { return {Kind::scale, j, j, std::move(r)}; }
  static Elementary swap(std::size_t j, std::size_t k) { return {Kind::swap, j, k, Rational(1)}; }
  static Elementary transvection(std::size_t j, std::size_t k, Rational r) {
    return {Kind::transvection, j, k, std::move(r)};
  }

  RatMatrix matrix(std::size_t d) const {
    RatMatrix m = RatMatrix::identity(d);
    switch (kind) {
      case Kind::scale: m(j, j) = r; break;
      case Kind::swap:
        m(j, j) = 0;
        m(k, k) = 0;
        m(j, k) = 1;
        m(k, j) = 1;
        break;
      case Kind::transvection: m(j, k) = r; break;
    }
    return m;
  }

  friend bool operator==(const Elementary&, const Elementary&) = default;
};

/// A unimodular matrix, or diag(1,..,n,..,1) with n >= 1 at position j
/// (or its inverse).
struct Factor {
  enum class Kind { unimodular, dilation };
  Kind kind = Kind::unimodular;
  IntMatrix u;
  std::size_t j = 0;
  Integer n = 1;
  bool inverted = false;

  static Factor unimodular(IntMatrix u) { return {Kind::unimodular, std::move(u), 0, 1, false}; }
  static Factor dilation(std::size_t j, Integer n, bool inverted) {
    return {Kind::dilation, IntMatrix(), j, std::move(n), inverted};
  }

  RatMatrix matrix(std::size_t d) const {
    if (kind == Kind::unimodular) return to_rational(u);
    RatMatrix m = RatMatrix::identity(d);
    m(j, j) = inverted ? Rational(1, n) : Rational(n);
    return m;
  }
};

using GeneratorWord = std::vector<Factor>;

/// Gauss-Jordan elimination B -> I; B is the product of the inverted
/// elimination steps, in order.
inline std::vector<Elementary> elementary_decompose(const RatMatrix& b) {
  if (!b.square()) throw ValidationError("matrix must be square");
  const std::size_t d = b.rows();
  RatMatrix a = b;
  std::vector<Elementary> out;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && a(p, c) == 0) ++p;
    if (p == d) throw ValidationError("matrix is singular");
    if (p != c) {
      a.swap_rows(p, c);
      out.push_back(Elementary::swap(c, p));
    }
    const Rational pivot = a(c, c);
    if (pivot != 1) {
      for (std::size_t j = 0; j < d; ++j) a(c, j) /= pivot;
      out.push_back(Elementary::scale(c, pivot));
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (i == c || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      a.add_row(i, c, -f);
      out.push_back(Elementary::transvection(i, c, f));
    }
  }
  RatMatrix check = RatMatrix::identity(d);
  for (const auto& e : out) check = check * e.matrix(d);
  if (!(check == b)) throw InternalError("elementary decomposition does not multiply back");
  return out;
}

inline GeneratorWord elementary_to_word(const Elementary& e, std::size_t d) {
  if (e.j >= d || e.k >= d) throw ValidationError("elementary matrix index out of range");
  GeneratorWord w;
  switch (e.kind) {
    case Elementary::Kind::scale: {
      if (e.r == 0) throw ValidationError("scale factor must be nonzero");
      if (e.r < 0) {
        IntMatrix s = IntMatrix::identity(d);
        s(e.j, e.j) = -1;
        w.push_back(Factor::unimodular(std::move(s)));
      }
      const Integer p = abs(e.r.get_num());
      const Integer q = e.r.get_den();
      if (p != 1) w.push_back(Factor::dilation(e.j, p, false));
      if (q != 1) w.push_back(Factor::dilation(e.j, q, true));
      break;
    }
    case Elementary::Kind::swap: {
      if (e.j == e.k) throw ValidationError("swap needs two distinct indices");
      w.push_back(Factor::unimodular(to_integer(e.matrix(d))));
      break;
    }
    case Elementary::Kind::transvection: {
      if (e.j == e.k) throw ValidationError("transvection needs two distinct indices");
      const Integer q = e.r.get_den();
      IntMatrix t = IntMatrix::identity(d);
      t(e.j, e.k) = e.r.get_num();
      if (q != 1) w.push_back(Factor::dilation(e.j, q, true));
      w.push_back(Factor::unimodular(std::move(t)));
      if (q != 1) w.push_back(Factor::dilation(e.j, q, false));
      break;
    }
  }
  return w;
}

inline RatMatrix evaluate(const GeneratorWord& w, std::size_t d) {
  RatMatrix m = RatMatrix::identity(d);
  for (const auto& f : w) m = m * f.matrix(d);
  return m;
}

/// Every factor is unimodular or a dilation by a positive integer.
inline bool well_formed(const GeneratorWord& w, std::size_t d) {
  for (const auto& f : w) {
    if (f.kind == Factor::Kind::unimodular) {
      if (f.u.rows() != d || !is_unimodular(f.u)) return false;
    } else if (f.j >= d || f.n < 1) {
      return false;
    }
  }
  return true;
}

inline GeneratorWord factor(const RatMatrix& b) {
  const std::size_t d = b.rows();
  GeneratorWord out;
  for (const auto& e : elementary_decompose(b)) {
    GeneratorWord part = elementary_to_word(e, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  if (!(evaluate(out, d) == b) || !well_formed(out, d)) throw InternalError("generator word fails verification");
  return out;
}

/// One factor per line: "U <matrix>", "D j n" or "Dinv j n" (j 1-based).
inline std::string serialize(const Factor& f) {
  if (f.kind == Factor::Kind::unimodular) return "U " + to_string(f.u);
  return std::string(f.inverted ? "Dinv " : "D ") + std::to_string(f.j + 1) + " " + f.n.get_str();
}

inline std::string serialize(const GeneratorWord& w) {
  std::string s;
  for (const auto& f : w) s += serialize(f) + "\n";
  return s;
}

}  // namespace nct
