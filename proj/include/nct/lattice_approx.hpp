#pragma once

// The map n -> theta n mod Z^d and constrained searches for integer vectors
// whose image is close to the origin (or to a target), with error bounds
// certified in exact arithmetic.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nct/lattice.hpp"
#include "nct/search.hpp"
#include "nct/torus.hpp"

namespace nct {

/// Rational upper bound for pi.
inline Rational pi_upper() { return Rational(355, 113); }

/// A rational stand-in for theta, each entry within input_slack of the
/// true value.
struct NumericTheta {
  RatMatrix entries;
  Rational input_slack = 0;

  std::size_t dim() const noexcept { return entries.rows(); }

  static NumericTheta make(RatMatrix entries, Rational slack = 0) {
    if (!entries.square()) throw ValidationError("numeric theta must be square");
    if (slack < 0) throw ValidationError("input_slack must be nonnegative");
    for (std::size_t i = 0; i < entries.rows(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (entries(i, j) + entries(j, i) != 0) {
          throw SkewError(i, j, "numeric theta is not skew-symmetric at (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
        }
    return {std::move(entries), std::move(slack)};
  }

  /// Evaluates symbolic theta at rational values of its labels. Values of
  /// product labels default to the product of their factors' values.
  static NumericTheta from(const SkewMatrix& theta, std::map<std::string, Rational> values, Rational slack = 0) {
    const RealBasis& basis = theta.basis();
    for (std::size_t i = 1; i < basis.size(); ++i) {
      const std::string& label = basis.label(i);
      if (values.count(label)) continue;
      if (label.find('*') == std::string::npos) continue;
      Rational v = 1;
      std::size_t start = 0;
      bool complete = true;
      while (start <= label.size()) {
        std::size_t end = label.find('*', start);
        if (end == std::string::npos) end = label.size();
        auto it = values.find(label.substr(start, end - start));
        if (it == values.end()) {
          complete = false;
          break;
        }
        v *= it->second;
        start = end + 1;
      }
      if (complete) values[label] = v;
    }
    const std::size_t d = theta.dim();
    RatMatrix e(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) e(i, j) = theta(i, j).evaluate(values);
    return make(std::move(e), std::move(slack));
  }
};

/// Distance from x to the nearest integer.
inline Rational torus_distance(const Rational& x) {
  Rational f = x - Rational(floor_of(x));
  Rational g = 1 - f;
  return f < g ? f : g;
}

/// Fractional parts of theta * n.
inline RatVector torus_point(const NumericTheta& theta, std::span<const Integer> n) {
  if (n.size() != theta.dim()) throw ValidationError("vector length does not match theta");
  RatVector out(theta.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n.size(); ++j) s += theta.entries(i, j) * n[j];
    out[i] = s - Rational(floor_of(s));
  }
  return out;
}

/// eta = <l, theta m>.
inline Rational commutation_angle(const NumericTheta& theta, std::span<const Integer> l, std::span<const Integer> m) {
  if (l.size() != theta.dim() || m.size() != theta.dim()) throw ValidationError("vector length does not match theta");
  Rational s = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] == 0) continue;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] != 0) s += theta.entries(i, j) * (l[i] * m[j]);
  }
  return s;
}

inline SymReal commutation_angle(const SkewMatrix& theta, std::span<const Integer> l, std::span<const Integer> m) {
  if (l.size() != theta.dim() || m.size() != theta.dim()) throw ValidationError("vector length does not match theta");
  SymReal s(theta.basis());
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] == 0) continue;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] != 0) s += theta(i, j) * Rational(l[i] * m[j]);
  }
  return s;
}

struct SearchBudget {
  long max_radius = 4096;                  ///< largest sup-norm enumerated
  std::uint64_t max_points = 1ull << 27;   ///< total enumerated points across shells
  unsigned precision_bits = 64;            ///< Q = 2^precision_bits in the lattice embedding
  bool use_lattice_reduction = true;
};

struct ApproxWitness {
  IntVector l;
  RatVector l_distances;     ///< dist((theta l)_j, Z), from the rational theta
  Rational l_slack = 0;      ///< input_slack * |l|_1

  std::optional<IntVector> m;
  RatVector m_distances;
  Rational m_slack = 0;

  long modulus = 1;
  std::size_t index = 0;     ///< congruence index k (0-based)
  Integer box = 0;           ///< N: some |l_j| > N
  Rational epsilon = 0;

  std::optional<std::size_t> s;          ///< designated coordinate (pairs)
  std::optional<Rational> eta;
  std::optional<Rational> eta0;
  Rational eta_distance = 0;             ///< dist(eta - eta0, Z)
  Rational eta_slack = 0;                ///< input_slack * |l|_1 * |m|_1
  std::optional<Rational> target_distance;  ///< dist((theta m)_s - eta0 / l_s, Z)

  bool minimal = false;       ///< least in (sup-norm, 1-norm, lexicographic) order
  std::string method;
  std::uint64_t points_visited = 0;
  long radius_searched = 0;

  Rational l_certified(std::size_t j) const { return l_distances[j] + l_slack; }
  Rational m_certified(std::size_t j) const { return m_distances[j] + m_slack; }
  Rational eta_certified() const { return eta_distance + eta_slack; }
  Rational l_max_certified() const {
    Rational best = 0;
    for (std::size_t j = 0; j < l_distances.size(); ++j) best = std::max(best, l_certified(j));
    return best;
  }
};

namespace detail {

inline Integer norm1(std::span<const Integer> v) {
  Integer s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

inline Integer norm_inf(std::span<const Integer> v) {
  Integer s = 0;
  for (const auto& x : v)
    if (abs(x) > s) s = abs(x);
  return s;
}

/// (sup-norm, 1-norm, lexicographic)
inline bool witness_less(const IntVector& a, const IntVector& b) {
  Integer ia = norm_inf(a), ib = norm_inf(b);
  if (ia != ib) return ia < ib;
  Integer oa = norm1(a), ob = norm1(b);
  if (oa != ob) return oa < ob;
  return a < b;
}

inline RatVector distances(const NumericTheta& theta, std::span<const Integer> x) {
  RatVector p = torus_point(theta, x);
  for (auto& v : p) v = torus_distance(v);
  return p;
}

/// Fast necessary test dist((theta x)_j, Z) <= threshold/D for all j, with
/// theta = A / D. Uses machine integers when the entries are small enough.
class DistanceFilter {
 public:
  DistanceFilter(const NumericTheta& theta, const Rational& eps, long max_radius) : d_(theta.dim()) {
    den_ = 1;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) den_ = lcm_of(den_, theta.entries(i, j).get_den());
    a_ = IntMatrix(d_, d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) a_(i, j) = Rational(theta.entries(i, j) * den_).get_num();
    // largest admissible numerator: dist * D < eps * D
    Rational bound = eps * den_;
    thr_ = floor_of(bound);
    if (Rational(thr_) == bound) thr_ -= 1;
    const Integer limit = Integer(1) << 40;
    fast_ = den_ <= limit && max_radius <= (1L << 20) && d_ <= 64;
    for (std::size_t i = 0; i < d_ && fast_; ++i)
      for (std::size_t j = 0; j < d_; ++j)
        if (abs(a_(i, j)) > limit) fast_ = false;
    if (fast_) {
      fa_.resize(d_ * d_);
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) fa_[i * d_ + j] = a_(i, j).get_si();
      fden_ = den_.get_si();
      fthr_ = thr_ > Integer(fden_) ? fden_ : thr_.get_si();
    }
  }

  bool pass(std::span<const long> x) const {
    if (thr_ < 0) return false;
    if (fast_) {
      for (std::size_t i = 0; i < d_; ++i) {
        __int128 s = 0;
        for (std::size_t j = 0; j < d_; ++j) s += static_cast<__int128>(fa_[i * d_ + j]) * x[j];
        __int128 r = s % fden_;
        if (r < 0) r += fden_;
        __int128 dist = std::min<__int128>(r, fden_ - r);
        if (dist > fthr_) return false;
      }
      return true;
    }
    for (std::size_t i = 0; i < d_; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < d_; ++j) s += a_(i, j) * x[j];
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), s.get_mpz_t(), den_.get_mpz_t());
      Integer alt = den_ - r;
      if ((r < alt ? r : alt) > thr_) return false;
    }
    return true;
  }

 private:
  std::size_t d_;
  Integer den_;
  IntMatrix a_;
  Integer thr_;
  bool fast_ = false;
  std::vector<long> fa_;
  long fden_ = 1;
  long fthr_ = 0;
};

inline IntVector to_integer_vector(std::span<const long> x) {
  IntVector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i];
  return v;
}

/// Rows (round(Q frac(theta b)), mu b) for the generators b of
/// n Z (at k) + Z^{d-1}, then (-Q e_j, 0).
inline IntMatrix embedding_basis(const NumericTheta& theta, long n, std::size_t k, const Integer& q) {
  const std::size_t d = theta.dim();
  IntMatrix b(2 * d, 2 * d);
  for (std::size_t g = 0; g < d; ++g) {
    IntVector gen(d);
    gen[g] = g == k ? n : 1;
    RatVector p = torus_point(theta, gen);
    for (std::size_t i = 0; i < d; ++i) b(g, i) = round_of(p[i] * q);
    for (std::size_t i = 0; i < d; ++i) b(g, d + i) = gen[i];
  }
  for (std::size_t j = 0; j < d; ++j) b(d + j, j) = -q;
  return b;
}

/// Coefficient vectors read off the reduced basis and a Babai point.
inline std::vector<IntVector> lattice_candidates(const NumericTheta& theta, long n, std::size_t k,
                                                 std::span<const Rational> target_point, unsigned bits) {
  const std::size_t d = theta.dim();
  const Integer q = Integer(1) << bits;
  IntMatrix reduced = lll_reduce(embedding_basis(theta, n, k, q));
  RatVector target(2 * d);
  for (std::size_t i = 0; i < d; ++i) target[i] = target_point[i] * q;
  IntVector babai = babai_nearest(reduced, target);
  auto coeffs = [&](const IntVector& v) {
    IntVector g(d);
    for (std::size_t i = 0; i < d; ++i) g[i] = v[d + i];
    return g;
  };
  std::vector<IntVector> out;
  out.push_back(coeffs(babai));
  for (std::size_t r = 0; r < reduced.rows(); ++r) {
    IntVector row = reduced.row_vector(r);
    for (int sign : {1, -1}) {
      IntVector v = babai;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * row[i];
      out.push_back(coeffs(v));
      IntVector w(row.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = sign * row[i];
      out.push_back(coeffs(w));
    }
  }
  return out;
}

inline void validate_common(const NumericTheta& theta, long n, std::size_t k, const Rational& eps) {
  if (theta.dim() == 0) throw ValidationError("theta must have d >= 1");
  if (n < 1) throw ValidationError("modulus must be >= 1");
  if (k >= theta.dim()) throw ValidationError("congruence index out of range");
  if (eps <= 0) throw ValidationError("epsilon must be positive");
}

inline bool l_admissible(const NumericTheta& theta, const IntVector& l, long n, std::size_t k, const Integer& box,
                         const Rational& eps) {
  Integer r = l[k] % n;
  if (r < 0) r += n;
  if (r != 1 % n) return false;
  if (detail::norm_inf(l) <= box) return false;
  const Rational slack = theta.input_slack * detail::norm1(l);
  for (const auto& dist : distances(theta, l))
    if (!(dist + slack < eps)) return false;
  return true;
}

struct MPredicate {
  const NumericTheta& theta;
  const IntVector& l;
  long n;
  std::size_t k;
  Rational eps;
  Rational eta0;

  bool operator()(const IntVector& m) const {
    Integer mk = m[k] % n;
    if (mk != 0) return false;
    const Rational slack = theta.input_slack * detail::norm1(m);
    for (const auto& dist : distances(theta, m))
      if (!(dist + slack < eps)) return false;
    Rational eta = commutation_angle(theta, l, m);
    Rational eslack = theta.input_slack * detail::norm1(l) * detail::norm1(m);
    return torus_distance(eta - eta0) + eslack < eps;
  }
};

struct ShellOutcome {
  std::optional<IntVector> best;
  std::uint64_t visited = 0;
  long radius = 0;
  bool budget_hit = false;
};

// Shells first..last; stops after the first shell with an accepted point
// and returns its least element.
template <class Accept>
ShellOutcome enumerate_shells(std::size_t d, const std::vector<Residue>& residues, long first, long last,
                              std::uint64_t max_points, const DistanceFilter& filter, Accept&& accept) {
  ShellOutcome out;
  for (long r = first; r <= last; ++r) {
    out.radius = r;
    for_each_in_shell(d, r, residues, [&](std::span<const long> x) {
      if (++out.visited > max_points) {
        out.budget_hit = true;
        return false;
      }
      if (!filter.pass(x)) return true;
      IntVector v = to_integer_vector(x);
      if (!accept(v)) return true;
      if (!out.best || witness_less(v, *out.best)) out.best = std::move(v);
      return true;
    });
    if (out.best || out.budget_hit) break;
  }
  return out;
}

}  // namespace detail

/// Finds l with l_k == 1 (mod n), some |l_j| > N and
/// dist((theta l)_j, Z) + input_slack*|l|_1 < eps for every j.
inline ApproxWitness step1_search(const NumericTheta& theta, long n, std::size_t k, const Integer& box,
                                  const Rational& eps, const SearchBudget& budget = {}) {
  detail::validate_common(theta, n, k, eps);
  if (box < 0) throw ValidationError("box bound N must be nonnegative");
  const std::size_t d = theta.dim();

  std::optional<IntVector> lattice_hit;
  if (budget.use_lattice_reduction) {
    RatVector target(d);
    RatVector shift = torus_point(theta, [&] {
      IntVector e(d);
      e[k] = 1;
      return e;
    }());
    for (std::size_t i = 0; i < d; ++i) target[i] = -shift[i];
    for (IntVector g : detail::lattice_candidates(theta, n, k, target, budget.precision_bits)) {
      g[k] += 1;
      if (detail::l_admissible(theta, g, n, k, box, eps) && (!lattice_hit || detail::witness_less(g, *lattice_hit)))
        lattice_hit = g;
    }
  }

  if (!box.fits_slong_p() || box >= budget.max_radius) {
    if (!lattice_hit)
      throw SearchExhausted("step1: box bound N exceeds the enumeration radius " + std::to_string(budget.max_radius));
  }
  long last = budget.max_radius;
  if (lattice_hit && detail::norm_inf(*lattice_hit) <= Integer(last)) last = detail::norm_inf(*lattice_hit).get_si();

  ApproxWitness w;
  w.modulus = n;
  w.index = k;
  w.box = box;
  w.epsilon = eps;

  std::vector<Residue> residues(d);
  residues[k] = Residue{n, 1};
  detail::DistanceFilter filter(theta, eps, budget.max_radius);
  detail::ShellOutcome sh;
  if (box.fits_slong_p() && box < budget.max_radius) {
    sh = detail::enumerate_shells(d, residues, box.get_si() + 1, last, budget.max_points, filter,
                                  [&](const IntVector& l) { return detail::l_admissible(theta, l, n, k, box, eps); });
  }
  w.points_visited = sh.visited;
  w.radius_searched = sh.radius;
  if (sh.best) {
    w.l = std::move(*sh.best);
    w.minimal = true;
    w.method = "exhaustive shell enumeration";
  } else if (lattice_hit) {
    w.l = std::move(*lattice_hit);
    w.minimal = false;
    w.method = "lattice reduction (enumeration budget exhausted)";
  } else {
    throw SearchExhausted("step1: no admissible l with sup-norm <= " + std::to_string(sh.radius) + " (" +
                          std::to_string(sh.visited) + " points, budget radius " + std::to_string(budget.max_radius) +
                          ")");
  }
  w.l_distances = detail::distances(theta, w.l);
  w.l_slack = theta.input_slack * detail::norm1(w.l);
  return w;
}

/// The box bound used by step2_search: floor(2 pi / eps) + 1 with pi
/// replaced by a rational upper bound.
inline Integer step2_box(const Rational& eps) { return floor_of(2 * pi_upper() / eps) + 1; }

/// l as in step1_search (with N = step2_box(eps)), then m with m_k == 0
/// (mod n), dist((theta m)_j, Z) small for all j, and
/// dist(<l, theta m> - eta0, Z) + input_slack*|l|_1*|m|_1 < eps.
inline ApproxWitness step2_search(const NumericTheta& theta, long n, std::size_t k, const Rational& eta0,
                                  const Rational& eps, const SearchBudget& budget = {}) {
  detail::validate_common(theta, n, k, eps);
  const std::size_t d = theta.dim();
  const Rational e0 = eta0 - Rational(round_of(eta0));
  ApproxWitness w = step1_search(theta, n, k, step2_box(eps), eps, budget);
  std::size_t s = 0;
  for (std::size_t j = 1; j < d; ++j)
    if (abs(w.l[j]) > abs(w.l[s])) s = j;
  const Rational lambda = e0 / w.l[s];

  detail::MPredicate accept{theta, w.l, n, k, eps, e0};
  std::optional<IntVector> lattice_hit;
  if (budget.use_lattice_reduction) {
    RatVector target(d);
    target[s] = lambda;
    for (IntVector& m : detail::lattice_candidates(theta, n, k, target, budget.precision_bits))
      if (accept(m) && (!lattice_hit || detail::witness_less(m, *lattice_hit))) lattice_hit = m;
  }
  long last = budget.max_radius;
  if (lattice_hit && detail::norm_inf(*lattice_hit) <= Integer(last)) last = detail::norm_inf(*lattice_hit).get_si();

  std::vector<Residue> residues(d);
  residues[k] = Residue{n, 0};
  detail::DistanceFilter filter(theta, eps, budget.max_radius);
  detail::ShellOutcome sh = detail::enumerate_shells(d, residues, 0, last, budget.max_points, filter, accept);
  w.points_visited += sh.visited;
  if (sh.best) {
    w.m = std::move(*sh.best);
    w.method += "; m by exhaustive shell enumeration";
  } else if (lattice_hit) {
    w.m = std::move(*lattice_hit);
    w.minimal = false;
    w.method += "; m by lattice reduction (enumeration budget exhausted)";
  } else {
    throw SearchExhausted("step2: no admissible m with sup-norm <= " + std::to_string(sh.radius) + " (" +
                          std::to_string(sh.visited) + " points, budget radius " + std::to_string(budget.max_radius) +
                          ")");
  }
  w.m_distances = detail::distances(theta, *w.m);
  w.m_slack = theta.input_slack * detail::norm1(*w.m);
  w.s = s;
  w.eta = commutation_angle(theta, w.l, *w.m);
  w.eta0 = e0;
  w.eta_distance = torus_distance(*w.eta - e0);
  w.eta_slack = theta.input_slack * detail::norm1(w.l) * detail::norm1(*w.m);
  w.target_distance = torus_distance(torus_point(theta, *w.m)[s] - lambda);
  return w;
}

/// Recomputes every recorded quantity of a step1 witness and checks the
/// inequalities against eps.
inline bool verify_step1(const NumericTheta& theta, const ApproxWitness& w) {
  if (w.l.size() != theta.dim() || w.index >= theta.dim() || w.modulus < 1) return false;
  if (!detail::l_admissible(theta, w.l, w.modulus, w.index, w.box, w.epsilon)) return false;
  if (w.l_distances != detail::distances(theta, w.l)) return false;
  if (w.l_slack != theta.input_slack * detail::norm1(w.l)) return false;
  return w.l_max_certified() < w.epsilon;
}

inline bool verify_step2(const NumericTheta& theta, const ApproxWitness& w) {
  if (!verify_step1(theta, w)) return false;
  if (!w.m || !w.eta || !w.eta0 || !w.s) return false;
  if (w.m->size() != theta.dim()) return false;
  detail::MPredicate accept{theta, w.l, w.modulus, w.index, w.epsilon, *w.eta0};
  if (!accept(*w.m)) return false;
  if (*w.eta != commutation_angle(theta, w.l, *w.m)) return false;
  if (w.m_distances != detail::distances(theta, *w.m)) return false;
  if (w.m_slack != theta.input_slack * detail::norm1(*w.m)) return false;
  if (w.eta_distance != torus_distance(*w.eta - *w.eta0)) return false;
  if (w.eta_slack != theta.input_slack * detail::norm1(w.l) * detail::norm1(*w.m)) return false;
  for (std::size_t j = 0; j < theta.dim(); ++j)
    if (!(w.m_certified(j) < w.epsilon)) return false;
  return w.eta_certified() < w.epsilon;
}

/// Bound on |exp(2 pi i x) - 1| from a certified distance bound.
inline Rational norm_bound(const Rational& certified_distance) { return 2 * pi_upper() * certified_distance; }

}  // namespace nct
