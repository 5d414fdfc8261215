#pragma once

// Isomorphism and Morita-equivalence decisions from the exterior
// exponential, and the constructive matching of linear functionals with a
// common range.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nct/ktheory.hpp"
#include "nct/search.hpp"

namespace nct {

/// A homomorphism Z^N -> R, column j being the value on e_j.
class LinearFunctionalZ {
 public:
  LinearFunctionalZ(RealBasis basis, std::vector<SymReal> values, std::size_t distinguished = 0)
      : basis_(std::move(basis)), values_(std::move(values)), e0_(distinguished) {
    for (const auto& v : values_)
      if (!(v.basis() == basis_)) throw ValidationError("functional value basis mismatch");
    if (!values_.empty() && e0_ >= values_.size()) throw ValidationError("distinguished index out of range");
    denom_ = 1;
    for (const auto& v : values_)
      for (const auto& c : v.coords()) denom_ = lcm_of(denom_, c.get_den());
  }

  static LinearFunctionalZ from(const ExtFunctional& f, const RealBasis& basis) {
    return LinearFunctionalZ(basis, f.values, 0);
  }

  std::size_t rank() const noexcept { return values_.size(); }
  const RealBasis& basis() const noexcept { return basis_; }
  const std::vector<SymReal>& values() const noexcept { return values_; }
  const SymReal& value(std::size_t j) const { return values_.at(j); }
  std::size_t distinguished() const noexcept { return e0_; }
  const Integer& denominator() const noexcept { return denom_; }

  /// (basis size) x N integer matrix A with f(x) = (A x) / scale, coordinate-wise.
  IntMatrix integer_matrix(const Integer& scale) const {
    IntMatrix a(basis_.size(), values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        Rational v = values_[j].coord(i) * scale;
        if (v.get_den() != 1) throw InternalError("functional scale does not clear denominators");
        a(i, j) = v.get_num();
      }
    return a;
  }

  IntVector scaled_coords(const SymReal& s, const Integer& scale) const {
    IntVector out(basis_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      Rational v = s.coord(i) * scale;
      if (v.get_den() != 1) throw InternalError("value scale does not clear denominators");
      out[i] = v.get_num();
    }
    return out;
  }

  SymReal apply(std::span<const Integer> x) const {
    SymReal s(basis_);
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (x[j] != 0) s += values_[j] * Rational(x[j]);
    return s;
  }

  /// f o g, as a functional on the domain of g.
  LinearFunctionalZ compose(const IntMatrix& g) const {
    std::vector<SymReal> out;
    for (std::size_t j = 0; j < g.cols(); ++j) out.push_back(apply(g.col_vector(j)));
    return LinearFunctionalZ(basis_, std::move(out), e0_);
  }

  RealSubgroup range() const { return subgroup_from(basis_, values_); }

 private:
  RealBasis basis_;
  std::vector<SymReal> values_;
  std::size_t e0_;
  Integer denom_;
};

struct AdaptedBasis {
  IntMatrix vectors;  ///< columns: preimages of the canonical range generators, then a kernel basis
  std::size_t range_rank = 0;
};

/// Basis of Z^N whose first k vectors map onto the canonical generators of
/// the range and whose remaining vectors span the kernel.
inline AdaptedBasis adapted_basis(const LinearFunctionalZ& f) {
  const std::size_t n = f.rank();
  RealSubgroup range = f.range();
  const Integer& scale = range.denominator();
  IntMatrix a = f.integer_matrix(scale);
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < range.rank(); ++i) {
    auto pre = integer_preimage(a, range.lattice().row(i));
    if (!pre) throw InternalError("adapted_basis: range generator has no preimage");
    cols.push_back(std::move(*pre));
  }
  IntMatrix kernel = kernel_z(a);
  for (std::size_t i = 0; i < kernel.rows(); ++i) cols.push_back(kernel.row_vector(i));
  if (cols.size() != n) throw InternalError("adapted_basis: wrong number of basis vectors");
  IntMatrix p = column_matrix(cols, n);
  if (!is_unimodular(p)) throw InternalError("adapted_basis: assembled basis is not unimodular");
  return {std::move(p), range.rank()};
}

/// f2 o g == f1 exactly.
inline bool intertwines(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2, const IntMatrix& g) {
  if (g.rows() != f2.rank() || g.cols() != f1.rank()) return false;
  for (std::size_t j = 0; j < f1.rank(); ++j)
    if (!(f2.apply(g.col_vector(j)) == f1.value(j))) return false;
  return true;
}

/// Unimodular g with f2 o g == f1, when the ranges agree.
inline std::optional<IntMatrix> eq_of_maps(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2) {
  if (f1.rank() != f2.rank()) throw ValidationError("eq_of_maps: domains of different rank");
  if (!(f1.basis() == f2.basis())) throw ValidationError("eq_of_maps: real bases differ");
  if (!(f1.range() == f2.range())) return std::nullopt;
  AdaptedBasis p1 = adapted_basis(f1);
  AdaptedBasis p2 = adapted_basis(f2);
  IntMatrix g = p2.vectors * inverse_unimodular(p1.vectors);
  if (!is_unimodular(g) || !intertwines(f1, f2, g)) throw InternalError("eq_of_maps: constructed map fails verification");
  return g;
}

enum class Verdict { positive, negative, undecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::positive: return "POSITIVE";
    case Verdict::negative: return "NEGATIVE";
    case Verdict::undecided: return "UNDECIDED";
  }
  return "?";
}

struct RangeMismatch {
  RealSubgroup first;
  RealSubgroup second;
};

/// Every admissible g has the form base + w r^t (w spanning ker f2, r_0 = 0),
/// whose determinant is constant + sum_j coefficients[j] r_j. No value of
/// that affine form is +-1 because gcd(coefficients) divides neither
/// 1 - constant nor -1 - constant.
struct UnimodularityObstruction {
  IntMatrix base;           ///< G0: particular solution with G0 e0 = e0
  IntMatrix kernel;         ///< 0 or 1 rows spanning ker f2
  Integer constant;         ///< det(G0)
  IntVector coefficients;   ///< adj(G0) w, entry 0 forced to 0 (no freedom there)
  Integer gcd;              ///< gcd of coefficients (0 if all vanish)
};

struct RankMismatch {
  std::size_t first = 0;
  std::size_t second = 0;
};

using Certificate = std::variant<std::monostate, RangeMismatch, UnimodularityObstruction, RankMismatch>;

struct DecisionOutcome {
  Verdict verdict = Verdict::undecided;
  std::optional<IntMatrix> witness;       ///< isomorphism of the even exterior algebra
  std::optional<IntMatrix> basis_change;  ///< U in GL_d(Z) with U^t theta2 U = theta1
  std::optional<Rational> scale;          ///< Morita lambda
  Certificate certificate;
  std::string method;
  std::string reason;
};

struct DecisionOptions {
  long box_radius = 8;              ///< parameter box for kernel rank >= 2
  std::uint64_t max_candidates = 1u << 20;
  bool cheap_path = true;
};

/// "2 + 5r" for one parameter, "c + a*r2 - b*r4" (1-based columns) otherwise.
inline std::string affine_form_text(const UnimodularityObstruction& c) {
  std::size_t used = 0;
  for (const auto& a : c.coefficients) used += a != 0;
  std::string s = c.constant.get_str();
  for (std::size_t j = 0; j < c.coefficients.size(); ++j) {
    const Integer& a = c.coefficients[j];
    if (a == 0) continue;
    Integer mag = abs(a);
    s += a < 0 ? " - " : " + ";
    if (used == 1) {
      s += (mag != 1 ? mag.get_str() : std::string()) + "r";
      continue;
    }
    if (mag != 1) s += mag.get_str() + "*";
    s += "r" + std::to_string(j + 1);
  }
  return s;
}

namespace detail {

// Reduces p modulo the lattice spanned by an HNF basis so that each pivot
// coordinate lies in [0, pivot).
inline void reduce_mod_hnf(IntVector& p, const IntMatrix& hnf_rows) {
  for (std::size_t i = 0; i < hnf_rows.rows(); ++i) {
    std::size_t c = 0;
    while (c < hnf_rows.cols() && hnf_rows(i, c) == 0) ++c;
    if (c == hnf_rows.cols()) continue;
    Integer q = floor_div(p[c], hnf_rows(i, c));
    if (q == 0) continue;
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= q * hnf_rows(i, j);
  }
}

struct Completion {
  IntMatrix base;    // G0
  IntMatrix kernel;  // rows, HNF
};

// Particular solution G0 (G0 e0 = e0, f2 o G0 = f1) and ker f2; nullopt
// when some column has no integer preimage.
inline std::optional<Completion> particular_solution(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2) {
  const std::size_t n = f1.rank();
  const Integer scale = lcm_of(f1.denominator(), f2.denominator());
  IntMatrix a2 = f2.integer_matrix(scale);
  IntMatrix kernel = kernel_z(a2);
  const std::size_t e0 = f1.distinguished();
  IntMatrix g0(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == e0) {
      g0(f2.distinguished(), j) = 1;
      continue;
    }
    auto pre = integer_preimage(a2, f1.scaled_coords(f1.value(j), scale));
    if (!pre) return std::nullopt;
    reduce_mod_hnf(*pre, kernel);
    for (std::size_t i = 0; i < n; ++i) g0(i, j) = (*pre)[i];
  }
  return Completion{std::move(g0), std::move(kernel)};
}

inline bool admissible(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2, const IntMatrix& g) {
  const std::size_t e0 = f1.distinguished();
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (g(i, e0) != (i == f2.distinguished() ? 1 : 0)) return false;
  return is_unimodular(g) && intertwines(f1, f2, g);
}

// Kernel rank one: det(G0 + w r^t) = det(G0) + r^t adj(G0) w.
inline DecisionOutcome decide_rank_one(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2,
                                       const Completion& c) {
  const std::size_t n = f1.rank();
  IntVector w = c.kernel.row_vector(0);
  IntVector coeff = mat_vec<Integer>(adjugate(c.base), w);
  coeff[f1.distinguished()] = 0;
  // orient the kernel generator so the first nonzero coefficient is positive
  for (const auto& a : coeff)
    if (a != 0) {
      if (a < 0) {
        for (auto& x : w) x = -x;
        for (auto& x : coeff) x = -x;
      }
      break;
    }
  IntMatrix kernel(1, n, w);
  const Integer constant = det_int(c.base);

  Integer h = 0;
  IntVector bez(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (coeff[j] == 0) continue;
    Bezout b = xgcd(h, coeff[j]);
    for (auto& x : bez) x *= b.s;
    bez[j] = b.t;
    h = b.g;
  }

  for (int target : {1, -1}) {
    Integer need = Integer(target) - constant;
    IntVector r(n);
    if (h == 0) {
      if (need != 0) continue;
    } else {
      if (need % h != 0) continue;
      Integer t = need / h;
      for (std::size_t j = 0; j < n; ++j) r[j] = bez[j] * t;
    }
    IntMatrix g = c.base;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) += w[i] * r[j];
    if (!admissible(f1, f2, g)) throw InternalError("rank-one completion failed verification");
    DecisionOutcome out;
    out.verdict = Verdict::positive;
    out.witness = std::move(g);
    out.method = "kernel rank 1: Bezout solution of the determinant form";
    return out;
  }

  DecisionOutcome out;
  out.verdict = Verdict::negative;
  out.certificate = UnimodularityObstruction{c.base, std::move(kernel), constant, std::move(coeff), h};
  out.method = "kernel rank 1: determinant form never reaches +-1";
  return out;
}

// Kernel rank >= 2: first try one kernel direction at a time (exact linear
// criterion on that slice), then a bounded box search over all parameters.
inline std::optional<IntMatrix> search_high_rank(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2,
                                                 const Completion& c, const DecisionOptions& opt) {
  const std::size_t n = f1.rank();
  const std::size_t k = c.kernel.rows();
  const std::size_t e0 = f1.distinguished();

  // slices g = G0 + w r^t for small primitive w in the kernel
  {
    std::optional<IntMatrix> hit;
    std::uint64_t visited = 0;
    for (long radius = 1; radius <= 2 && !hit; ++radius) {
      for_each_in_shell(k, radius, std::vector<Residue>(k), [&](std::span<const long> coeffs) {
        if (++visited > opt.max_candidates) return false;
        Integer gcd = 0;
        for (long x : coeffs) gcd = gcd_of(gcd, Integer(x));
        if (gcd != 1) return true;
        IntVector w(n);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t i = 0; i < n; ++i) w[i] += Integer(coeffs[a]) * c.kernel(a, i);
        Completion slice{c.base, IntMatrix(1, n, w)};
        DecisionOutcome o = decide_rank_one(f1, f2, slice);
        if (o.verdict == Verdict::positive) {
          hit = std::move(o.witness);
          return false;
        }
        return true;
      });
    }
    if (hit) return hit;
  }

  // full box search, parameters ordered column by column
  const std::size_t params = k * (n - 1);
  std::optional<IntMatrix> hit;
  std::uint64_t visited = 0;
  for (long radius = 0; radius <= opt.box_radius && !hit && visited <= opt.max_candidates; ++radius) {
    for_each_in_shell(params, radius, std::vector<Residue>(params), [&](std::span<const long> r) {
      if (++visited > opt.max_candidates) return false;
      IntMatrix g = c.base;
      std::size_t p = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == e0) continue;
        for (std::size_t a = 0; a < k; ++a, ++p) {
          if (r[p] == 0) continue;
          for (std::size_t i = 0; i < n; ++i) g(i, j) += Integer(r[p]) * c.kernel(a, i);
        }
      }
      if (is_unimodular(g)) {
        hit = std::move(g);
        return false;
      }
      return true;
    });
  }
  return hit;
}

}  // namespace detail

/// Decides whether some unimodular g with g e0 = e0 satisfies f2 o g = f1.
inline DecisionOutcome decide_equivalence(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2,
                                          const DecisionOptions& opt = {}) {
  if (f1.rank() != f2.rank()) throw ValidationError("functionals have domains of different rank");
  if (!(f1.basis() == f2.basis())) throw ValidationError("functionals use different real bases");
  const SymReal one = SymReal::rational(f1.basis(), 1);
  if (!(f1.value(f1.distinguished()) == one) || !(f2.value(f2.distinguished()) == one))
    throw ValidationError("functionals must take the value 1 on the distinguished generator");

  RealSubgroup r1 = f1.range(), r2 = f2.range();
  if (!(r1 == r2)) {
    DecisionOutcome out;
    out.verdict = Verdict::negative;
    out.certificate = RangeMismatch{std::move(r1), std::move(r2)};
    out.method = "trace ranges differ";
    return out;
  }

  auto completion = detail::particular_solution(f1, f2);
  if (!completion) throw InternalError("equal ranges but some value has no integer preimage");
  const std::size_t k = completion->kernel.rows();

  if (k == 0) {
    DecisionOutcome out;
    const Integer d = det_int(completion->base);
    if (d == 1 || d == -1) {
      out.verdict = Verdict::positive;
      out.witness = completion->base;
      out.method = "kernel rank 0: unique solution is unimodular";
    } else {
      out.verdict = Verdict::negative;
      out.certificate = UnimodularityObstruction{completion->base, IntMatrix(0, f1.rank()), d,
                                                 IntVector(f1.rank()), Integer(0)};
      out.method = "kernel rank 0: unique solution has determinant " + d.get_str();
    }
    return out;
  }
  if (k == 1) return detail::decide_rank_one(f1, f2, *completion);

  if (auto g = detail::search_high_rank(f1, f2, *completion, opt)) {
    if (!detail::admissible(f1, f2, *g)) throw InternalError("bounded search hit failed verification");
    DecisionOutcome out;
    out.verdict = Verdict::positive;
    out.witness = std::move(*g);
    out.method = "kernel rank " + std::to_string(k) + ": bounded search";
    return out;
  }
  // A witness for the reverse direction inverts to one for this direction.
  if (auto rev = detail::particular_solution(f2, f1)) {
    if (auto g = detail::search_high_rank(f2, f1, *rev, opt)) {
      IntMatrix inv = inverse_unimodular(*g);
      if (!detail::admissible(f1, f2, inv)) throw InternalError("reverse search hit failed verification");
      DecisionOutcome out;
      out.verdict = Verdict::positive;
      out.witness = std::move(inv);
      out.method = "kernel rank " + std::to_string(k) + ": bounded search (reverse direction)";
      return out;
    }
  }
  DecisionOutcome out;
  out.verdict = Verdict::undecided;
  out.method = "kernel rank " + std::to_string(k) + ": bounded search";
  out.reason = "kernel rank " + std::to_string(k) + " >= 2; no unimodular completion within box radius " +
               std::to_string(opt.box_radius);
  return out;
}

inline bool verify_isomorphism_witness(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2,
                                       const IntMatrix& g) {
  return detail::admissible(f1, f2, g);
}

/// Re-checks a NEGATIVE certificate from scratch against the functionals.
inline bool verify_certificate(const LinearFunctionalZ& f1, const LinearFunctionalZ& f2, const Certificate& cert) {
  if (const auto* rm = std::get_if<RangeMismatch>(&cert))
    return rm->first == f1.range() && rm->second == f2.range() && !(rm->first == rm->second);
  const auto* uo = std::get_if<UnimodularityObstruction>(&cert);
  if (!uo) return false;
  const std::size_t n = f1.rank();
  const std::size_t e0 = f1.distinguished();
  if (uo->base.rows() != n || uo->base.cols() != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (uo->base(i, e0) != (i == f2.distinguished() ? 1 : 0)) return false;
  if (!intertwines(f1, f2, uo->base)) return false;
  // the kernel rows must span ker f2 exactly
  const Integer scale = lcm_of(f1.denominator(), f2.denominator());
  IntMatrix kernel = kernel_z(f2.integer_matrix(scale));
  if (kernel.rows() != uo->kernel.rows()) return false;
  if (kernel.rows() > 1) return false;
  if (kernel.rows() == 1) {
    IntVector w = uo->kernel.row_vector(0);
    IntVector k = kernel.row_vector(0);
    IntVector neg(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
    if (w != k && w != neg) return false;
  }
  if (det_int(uo->base) != uo->constant) return false;
  IntVector expect(n);
  if (kernel.rows() == 1) {
    expect = mat_vec<Integer>(adjugate(uo->base), uo->kernel.row(0));
    expect[e0] = 0;
  }
  if (expect != uo->coefficients) return false;
  Integer h = 0;
  for (const auto& a : expect) h = gcd_of(h, a);
  if (h != uo->gcd) return false;
  for (int target : {1, -1}) {
    Integer need = Integer(target) - uo->constant;
    if (h == 0 ? need == 0 : need % h == 0) return false;
  }
  return true;
}

namespace detail {

inline void require_nondegenerate(const SkewMatrix& theta, const char* which) {
  if (!is_nondegenerate(theta).nondegenerate)
    throw ValidationError(std::string(which) + " is degenerate; the classification needs nondegenerate theta");
}

// Signed permutations, then transvections I + c E_{jk} with c in {-2..2}.
inline void for_each_small_unimodular(std::size_t d, const std::function<bool(const IntMatrix&)>& visit) {
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  do {
    for (std::uint32_t signs = 0; signs < (1u << d); ++signs) {
      IntMatrix u(d, d);
      for (std::size_t i = 0; i < d; ++i) u(perm[i], i) = ((signs >> i) & 1u) ? -1 : 1;
      if (!visit(u)) return;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      if (j == k) continue;
      for (int c = -2; c <= 2; ++c) {
        if (c == 0) continue;
        IntMatrix u = IntMatrix::identity(d);
        u(j, k) = c;
        if (!visit(u)) return;
      }
    }
}

inline constexpr std::size_t kCheapPathMaxDim = 6;

}  // namespace detail

/// Isomorphism decision for two nondegenerate theta of the same size.
inline DecisionOutcome decide_isomorphic(const SkewMatrix& theta1, const SkewMatrix& theta2,
                                         const DecisionOptions& opt = {}) {
  if (theta1.dim() != theta2.dim()) throw ValidationError("theta matrices have different sizes");
  if (!(theta1.basis() == theta2.basis())) throw ValidationError("theta matrices use different real bases");
  detail::require_nondegenerate(theta1, "theta1");
  detail::require_nondegenerate(theta2, "theta2");
  const std::size_t d = theta1.dim();

  ExtFunctional e1 = exterior_exp(theta1);
  ExtFunctional e2 = exterior_exp(theta2);
  LinearFunctionalZ f1 = LinearFunctionalZ::from(e1, theta1.basis());
  LinearFunctionalZ f2 = LinearFunctionalZ::from(e2, theta2.basis());

  if (opt.cheap_path && d <= detail::kCheapPathMaxDim && f1.range() == f2.range()) {
    std::optional<IntMatrix> found;
    detail::for_each_small_unimodular(d, [&](const IntMatrix& u) {
      if (conjugate(theta2, u) == theta1) {
        found = u;
        return false;
      }
      return true;
    });
    if (found) {
      IntMatrix g = even_minor_matrix(*found, e1.basis);
      if (!verify_isomorphism_witness(f1, f2, g)) throw InternalError("basis-change witness failed verification");
      DecisionOutcome out;
      out.verdict = Verdict::positive;
      out.witness = std::move(g);
      out.basis_change = std::move(found);
      out.method = "basis change in GL_d(Z) with U^t theta2 U = theta1";
      return out;
    }
  }
  return decide_equivalence(f1, f2, opt);
}

/// Morita equivalence: is lambda * range(theta2) == range(theta1) for some
/// lambda > 0. Only rational lambda can be certified.
inline DecisionOutcome decide_morita(const SkewMatrix& theta1, const SkewMatrix& theta2) {
  if (theta1.dim() != theta2.dim()) throw ValidationError("theta matrices have different sizes");
  if (!(theta1.basis() == theta2.basis())) throw ValidationError("theta matrices use different real bases");
  detail::require_nondegenerate(theta1, "theta1");
  detail::require_nondegenerate(theta2, "theta2");
  RealSubgroup r1 = trace_range(theta1);
  RealSubgroup r2 = trace_range(theta2);

  DecisionOutcome out;
  if (r1 == r2) {
    out.verdict = Verdict::positive;
    out.scale = Rational(1);
    out.method = "trace ranges are equal";
    return out;
  }
  if (r1.rank() != r2.rank()) {
    out.verdict = Verdict::negative;
    out.certificate = RankMismatch{r1.rank(), r2.rank()};
    out.method = "trace ranges have different ranks; scaling preserves rank";
    return out;
  }
  // Canonical forms scale entrywise, so a rational lambda is forced by the
  // leading pivots.
  const Rational lambda = r1.generator_matrix()(0, 0) / r2.generator_matrix()(0, 0);
  if (lambda > 0 && subgroup_scale(r2, lambda) == r1) {
    out.verdict = Verdict::positive;
    out.scale = lambda;
    out.method = "rational scale forced by leading pivots";
    return out;
  }
  out.verdict = Verdict::undecided;
  out.method = "rational scale forced by leading pivots";
  out.reason = "no rational lambda works (candidate " + lambda.get_str() +
               " fails); irrational lambda not representable";
  return out;
}

struct TorusFacts {
  bool simple = false;
  std::optional<IntVector> witness;      ///< degeneracy witness when not simple
  bool unique_trace = false;
  KRanks k_ranks;
  std::optional<RealSubgroup> trace_range;
  std::string trace_range_error;         ///< set when the range is not representable
  std::vector<std::string> derived;      ///< structural consequences of simplicity, d >= 2
};

inline TorusFacts report_facts(const SkewMatrix& theta) {
  TorusFacts f;
  Nondegeneracy nd = is_nondegenerate(theta);
  f.simple = nd.nondegenerate;
  f.witness = nd.witness;
  f.unique_trace = f.simple;
  f.k_ranks = k_ranks(theta.dim());
  try {
    f.trace_range = trace_range(theta);
  } catch (const NotRepresentable& e) {
    f.trace_range_error = e.what();
  }
  if (f.simple && theta.dim() >= 2)
    f.derived = {"tracial rank zero", "simple AT algebra with real rank zero", "isomorphic to its opposite algebra"};
  return f;
}

}  // namespace nct
