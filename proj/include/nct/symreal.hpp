#pragma once

// Real numbers in a declared finite-dimensional Q-vector space, and
// canonical finitely generated subgroups of R.
//
// A basis is a list of labels whose first entry is "1". Q-linear
// independence of the labelled reals is an assumption supplied by the
// caller; nothing here can check it.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nct/exact_linalg.hpp"

namespace nct {

namespace detail {

// Product labels are '*'-joined factor names in sorted order, so that
// "gamma*beta" and "beta*gamma" name the same element.
inline std::string canonical_product_label(std::string_view label) {
  std::vector<std::string> factors;
  std::size_t start = 0;
  while (start <= label.size()) {
    std::size_t end = label.find('*', start);
    if (end == std::string_view::npos) end = label.size();
    factors.emplace_back(label.substr(start, end - start));
    start = end + 1;
  }
  std::sort(factors.begin(), factors.end());
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += '*';
    out += factors[i];
  }
  return out;
}

}  // namespace detail

class RealBasis {
 public:
  /// The one-dimensional basis {1}.
  RealBasis() : RealBasis(std::vector<std::string>{"1"}) {}

  explicit RealBasis(std::vector<std::string> labels) {
    if (labels.empty() || labels.front() != "1")
      throw ValidationError("basis must start with the label \"1\"");
    auto state = std::make_shared<State>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].empty()) throw ValidationError("basis labels must be non-empty");
      auto key = i == 0 ? labels[i] : detail::canonical_product_label(labels[i]);
      if (!state->index.emplace(key, i).second)
        throw ValidationError("duplicate basis label \"" + labels[i] + "\"");
    }
    state->labels = std::move(labels);
    state_ = std::move(state);
  }

  std::size_t size() const noexcept { return state_->labels.size(); }
  const std::string& label(std::size_t i) const { return state_->labels.at(i); }
  const std::vector<std::string>& labels() const noexcept { return state_->labels; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    auto key = label == "1" ? std::string(label) : detail::canonical_product_label(label);
    auto it = state_->index.find(key);
    if (it == state_->index.end()) return std::nullopt;
    return it->second;
  }

  /// Index of the label for the product of labels i and j, if declared.
  std::optional<std::size_t> product_index(std::size_t i, std::size_t j) const {
    if (i == 0) return j;
    if (j == 0) return i;
    return index_of(label(i) + "*" + label(j));
  }

  friend bool operator==(const RealBasis& a, const RealBasis& b) {
    return a.state_ == b.state_ || a.state_->labels == b.state_->labels;
  }

 private:
  struct State {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const State> state_;
};

class SymReal {
 public:
  SymReal() : SymReal(RealBasis{}) {}
  explicit SymReal(RealBasis basis) : basis_(std::move(basis)), coords_(basis_.size()) {}
  SymReal(RealBasis basis, RatVector coords) : basis_(std::move(basis)), coords_(std::move(coords)) {
    if (coords_.size() != basis_.size()) throw ValidationError("coordinate count does not match basis");
  }

  static SymReal rational(const RealBasis& basis, const Rational& q) {
    SymReal s(basis);
    s.coords_[0] = q;
    return s;
  }
  static SymReal unit(const RealBasis& basis, std::size_t label) {
    SymReal s(basis);
    s.coords_.at(label) = 1;
    return s;
  }

  const RealBasis& basis() const noexcept { return basis_; }
  const RatVector& coords() const noexcept { return coords_; }
  const Rational& coord(std::size_t i) const { return coords_.at(i); }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
  }
  bool is_rational() const {
    return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rational& q) { return q == 0; });
  }
  const Rational& rational_part() const { return coords_[0]; }

  SymReal& operator+=(const SymReal& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  SymReal& operator-=(const SymReal& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  SymReal& operator*=(const Rational& q) {
    for (auto& c : coords_) c *= q;
    return *this;
  }
  friend SymReal operator+(SymReal a, const SymReal& b) { return a += b; }
  friend SymReal operator-(SymReal a, const SymReal& b) { return a -= b; }
  friend SymReal operator-(SymReal a) { return a *= Rational(-1); }
  friend SymReal operator*(SymReal a, const Rational& q) { return a *= q; }
  friend SymReal operator*(const Rational& q, SymReal a) { return a *= q; }

  friend bool operator==(const SymReal& a, const SymReal& b) {
    return a.basis_ == b.basis_ && a.coords_ == b.coords_;
  }

  /// Value at rational stand-ins for the symbolic labels.
  Rational evaluate(const std::map<std::string, Rational>& values) const {
    Rational v = coords_[0];
    for (std::size_t i = 1; i < coords_.size(); ++i) {
      if (coords_[i] == 0) continue;
      auto it = values.find(basis_.label(i));
      if (it == values.end()) throw ValidationError("no numeric value for label \"" + basis_.label(i) + "\"");
      v += coords_[i] * it->second;
    }
    return v;
  }

  /// Human-readable form, e.g. "2/5 + beta - 3*gamma".
  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      const Rational& c = coords_[i];
      if (c == 0) continue;
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (i == 0) {
        os << mag.get_str();
      } else if (mag == 1) {
        os << basis_.label(i);
      } else {
        os << mag.get_str() << '*' << basis_.label(i);
      }
    }
    if (first) os << '0';
    return os.str();
  }

 private:
  void check_same(const SymReal& o) const {
    if (!(basis_ == o.basis_)) throw ValidationError("SymReal basis mismatch");
  }

  RealBasis basis_;
  RatVector coords_;
};

inline SymReal sym_add(const SymReal& a, const SymReal& b) { return a + b; }
inline SymReal sym_scale(const SymReal& a, const Rational& q) { return a * q; }
inline bool is_rational(const SymReal& a) { return a.is_rational(); }

/// Product of two symbolic reals. Defined only when every product of
/// symbolic labels that occurs is itself a declared label (for example
/// "beta*gamma"); otherwise throws NotRepresentable.
inline SymReal multiply(const SymReal& a, const SymReal& b) {
  if (!(a.basis() == b.basis())) throw ValidationError("SymReal basis mismatch");
  const RealBasis& basis = a.basis();
  RatVector out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (a.coord(i) == 0) continue;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (b.coord(j) == 0) continue;
      auto k = basis.product_index(i, j);
      if (!k)
        throw NotRepresentable("product " + basis.label(i) + "*" + basis.label(j) +
                               " is not a declared basis label");
      out[*k] += a.coord(i) * b.coord(j);
    }
  }
  return SymReal(basis, std::move(out));
}

/// A finitely generated subgroup of R inside the span of a RealBasis.
///
/// Stored canonically as (L, H): L is the lcm of all coordinate
/// denominators of the group and H the row-style HNF (zero rows dropped) of
/// the integer matrix L * coordinates. The i-th canonical generator is
/// row i of H divided by L.
class RealSubgroup {
 public:
  explicit RealSubgroup(RealBasis basis) : basis_(std::move(basis)), lattice_(0, basis_.size()), denom_(1) {}

  static RealSubgroup generated_by(const RealBasis& basis, std::span<const SymReal> gens) {
    RealSubgroup g(basis);
    Integer l = 1;
    for (const auto& s : gens) {
      if (!(s.basis() == basis)) throw ValidationError("generator basis mismatch");
      for (const auto& c : s.coords()) l = lcm_of(l, c.get_den());
    }
    IntMatrix m(gens.size(), basis.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        Rational v = gens[i].coord(j) * l;
        m(i, j) = v.get_num();
      }
    IntMatrix h = hnf_basis(m);
    g.lattice_ = h.rows() == 0 ? IntMatrix(0, basis.size()) : std::move(h);
    g.denom_ = g.lattice_.rows() == 0 ? Integer(1) : l;
    return g;
  }

  const RealBasis& basis() const noexcept { return basis_; }
  std::size_t rank() const noexcept { return lattice_.rows(); }
  const IntMatrix& lattice() const noexcept { return lattice_; }
  const Integer& denominator() const noexcept { return denom_; }
  Rational scale() const { return Rational(1, denom_); }

  SymReal generator(std::size_t i) const {
    RatVector c(basis_.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = make_rational(lattice_(i, j), denom_);
    return SymReal(basis_, std::move(c));
  }
  std::vector<SymReal> generators() const {
    std::vector<SymReal> out;
    for (std::size_t i = 0; i < rank(); ++i) out.push_back(generator(i));
    return out;
  }

  /// Canonical generator coordinates as a rational matrix.
  RatMatrix generator_matrix() const {
    RatMatrix m(rank(), basis_.size());
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < basis_.size(); ++j) m(i, j) = make_rational(lattice_(i, j), denom_);
    return m;
  }

  /// Label indices with a nonzero coordinate somewhere in the group.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < basis_.size(); ++j)
      for (std::size_t i = 0; i < rank(); ++i)
        if (lattice_(i, j) != 0) {
          out.push_back(j);
          break;
        }
    return out;
  }

  bool contains(const SymReal& a) const {
    if (!(a.basis() == basis_)) throw ValidationError("SymReal basis mismatch");
    IntVector target(basis_.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
      Rational v = a.coord(j) * denom_;
      if (v.get_den() != 1) return false;
      target[j] = v.get_num();
    }
    if (rank() == 0) return std::all_of(target.begin(), target.end(), [](const Integer& x) { return x == 0; });
    return integer_preimage(lattice_.transpose(), target).has_value();
  }

  bool contains(const RealSubgroup& other) const {
    for (std::size_t i = 0; i < other.rank(); ++i)
      if (!contains(other.generator(i))) return false;
    return true;
  }

  friend bool operator==(const RealSubgroup& a, const RealSubgroup& b) {
    return a.basis_ == b.basis_ && a.denom_ == b.denom_ && a.lattice_ == b.lattice_;
  }

 private:
  RealBasis basis_;
  IntMatrix lattice_;
  Integer denom_;
};

inline RealSubgroup subgroup_from(const RealBasis& basis, std::span<const SymReal> gens) {
  return RealSubgroup::generated_by(basis, gens);
}

inline bool subgroup_equal(const RealSubgroup& a, const RealSubgroup& b) {
  if (!(a.basis() == b.basis())) throw ValidationError("subgroup basis mismatch");
  return a == b;
}

inline RealSubgroup subgroup_scale(const RealSubgroup& a, const Rational& lambda) {
  if (lambda <= 0) throw ValidationError("subgroup scale factor must be positive");
  std::vector<SymReal> gens = a.generators();
  for (auto& g : gens) g *= lambda;
  return RealSubgroup::generated_by(a.basis(), gens);
}

}  // namespace nct
