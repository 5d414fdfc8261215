#pragma once

// JSON report fragments and their plain-text rendering. Exact numbers are
// written as decimal strings; indices are 1-based.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nct/classify.hpp"
#include "nct/document.hpp"
#include "nct/glq_factor.hpp"
#include "nct/lattice_approx.hpp"

namespace nct {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const Integer& z) { return z.get_str(); }
inline Json to_json(const Rational& q) { return q.get_str(); }

template <class T>
Json to_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

template <class T>
Json to_json(const Matrix<T>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row_vector(i)));
  return a;
}

inline Json to_json(const SymReal& s) { return {{"text", s.to_string()}, {"coords", to_json(s.coords())}}; }

inline Json to_json(const RealSubgroup& g) {
  Json gens = Json::array();
  for (const auto& x : g.generators()) gens.push_back(to_json(x));
  return {{"rank", g.rank()}, {"denominator", to_json(g.denominator())}, {"generators", gens}};
}

inline Json one_based(const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (auto i : idx) a.push_back(i + 1);
  return a;
}

inline Json theta_json(const SkewMatrix& theta) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < theta.dim(); ++j) row.push_back(theta(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

inline Json nondegeneracy_json(const SkewMatrix& theta) {
  Nondegeneracy nd = is_nondegenerate(theta);
  CoordinateRestriction cr = find_nondeg_coordinate_restriction(theta);
  Json j{{"nondegenerate", nd.nondegenerate},
         {"simple", nd.nondegenerate},
         {"witness", nd.witness ? to_json(*nd.witness) : Json(nullptr)},
         {"restriction", {{"rank", cr.rank}, {"coordinates", one_based(cr.coords)}}}};
  return j;
}

inline Json even_basis_json(const EvenBasis& b) {
  Json a = Json::array();
  for (std::size_t i = 0; i < b.size(); ++i) a.push_back(one_based(b.subset(i)));
  return a;
}

inline Json facts_json(const TorusFacts& f) {
  Json j{{"simple", f.simple},
         {"k_ranks", {{"k0", f.k_ranks.k0}, {"k1", f.k_ranks.k1}}},
         {"derived", f.derived}};
  if (f.simple) j["unique_trace"] = true;
  if (f.witness) j["witness"] = to_json(*f.witness);
  if (f.trace_range) j["trace_range"] = to_json(*f.trace_range);
  if (!f.trace_range_error.empty()) j["trace_range_error"] = f.trace_range_error;
  return j;
}

/// exterior_exp values, trace range, K-ranks and structural facts.
inline Json invariants_json(const SkewMatrix& theta) {
  ExtFunctional e = exterior_exp(theta);
  Json values = Json::array();
  for (std::size_t i = 0; i < e.basis.size(); ++i)
    values.push_back({{"subset", one_based(e.basis.subset(i))}, {"value", to_json(e.values[i])}});
  KRanks k = k_ranks(theta.dim());
  return {{"exterior_exp", values},
          {"trace_range", to_json(trace_range(e, theta.basis()))},
          {"k_ranks", {{"k0", k.k0}, {"k1", k.k1}}},
          {"facts", facts_json(report_facts(theta))}};
}

inline Json certificate_json(const Certificate& c) {
  if (const auto* rm = std::get_if<RangeMismatch>(&c))
    return {{"kind", "range_mismatch"}, {"first", to_json(rm->first)}, {"second", to_json(rm->second)}};
  if (const auto* rk = std::get_if<RankMismatch>(&c))
    return {{"kind", "rank_mismatch"}, {"first", rk->first}, {"second", rk->second}};
  if (const auto* uo = std::get_if<UnimodularityObstruction>(&c)) {
    std::size_t params = 0;
    for (const auto& a : uo->coefficients) params += a != 0;
    Json residues = Json::array();
    for (int t : {1, -1}) {
      Integer need = Integer(t) - uo->constant;
      Json r{{"target", t}};
      if (uo->gcd != 0) {
        Integer res;
        mpz_fdiv_r(res.get_mpz_t(), need.get_mpz_t(), uo->gcd.get_mpz_t());
        r["residue"] = to_json(res);
      } else {
        r["residue"] = to_json(need);
      }
      residues.push_back(r);
    }
    return {{"kind", "unimodularity_obstruction"},
            {"form", affine_form_text(*uo)},
            {"constant", to_json(uo->constant)},
            {"coefficients", to_json(uo->coefficients)},
            {"gcd", to_json(uo->gcd)},
            {"kernel_rank", uo->kernel.rows()},
            {"parameters", params},
            {"kernel", to_json(uo->kernel)},
            {"base", to_json(uo->base)},
            {"target_residues", residues}};
  }
  return nullptr;
}

inline Json outcome_json(const DecisionOutcome& o) {
  Json j{{"verdict", to_string(o.verdict)}, {"method", o.method}};
  if (o.witness) j["witness"] = to_json(*o.witness);
  if (o.basis_change) j["basis_change"] = to_json(*o.basis_change);
  if (o.scale) j["lambda"] = to_json(*o.scale);
  if (!std::holds_alternative<std::monostate>(o.certificate)) j["certificate"] = certificate_json(o.certificate);
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j;
}

inline Json factor_json(const Factor& f) {
  if (f.kind == Factor::Kind::unimodular) return {{"kind", "unimodular"}, {"matrix", to_json(f.u)}};
  return {{"kind", "dilation"}, {"index", f.j + 1}, {"n", to_json(f.n)}, {"inverted", f.inverted}};
}

inline Json word_json(const RatMatrix& b, const GeneratorWord& w) {
  Json factors = Json::array();
  Json lines = Json::array();
  for (const auto& f : w) {
    factors.push_back(factor_json(f));
    lines.push_back(serialize(f));
  }
  return {{"matrix", to_json(b)},
          {"factors", factors},
          {"word", lines},
          {"length", w.size()},
          {"verified", evaluate(w, b.rows()) == b && well_formed(w, b.rows())}};
}

/// Trust assumption attached to every report about an input document.
inline const char* const kIndependenceAssumption =
    "the basis labels are assumed linearly independent over Q; this is not verified";

inline Json approx_json(const NumericTheta& theta, const ApproxWitness& w) {
  const std::size_t d = theta.dim();
  Json certified = Json::array();
  Json norms = Json::array();
  for (std::size_t j = 0; j < d; ++j) {
    certified.push_back(to_json(w.l_certified(j)));
    norms.push_back(to_json(norm_bound(w.l_certified(j))));
  }
  Json j{{"l", to_json(w.l)},
         {"l_distances", to_json(w.l_distances)},
         {"l_slack", to_json(w.l_slack)},
         {"l_certified", certified},
         {"l_norm_bounds", norms},
         {"congruence", {{"modulus", w.modulus}, {"index", w.index + 1}, {"l_residue", 1 % w.modulus}}},
         {"box", to_json(w.box)},
         {"epsilon", to_json(w.epsilon)},
         {"input_slack", to_json(theta.input_slack)},
         {"numeric_theta", to_json(theta.entries)},
         {"minimal", w.minimal},
         {"method", w.method},
         {"points_visited", w.points_visited},
         {"radius_searched", w.radius_searched},
         {"verified", w.m ? verify_step2(theta, w) : verify_step1(theta, w)}};
  if (w.m) {
    Json mc = Json::array();
    for (std::size_t k = 0; k < d; ++k) mc.push_back(to_json(w.m_certified(k)));
    j["m"] = to_json(*w.m);
    j["m_distances"] = to_json(w.m_distances);
    j["m_slack"] = to_json(w.m_slack);
    j["m_certified"] = mc;
    j["congruence"]["m_residue"] = 0;
    j["s"] = *w.s + 1;
    j["eta"] = to_json(*w.eta);
    j["eta0"] = to_json(*w.eta0);
    j["eta_distance"] = to_json(w.eta_distance);
    j["eta_slack"] = to_json(w.eta_slack);
    j["eta_certified"] = to_json(w.eta_certified());
    j["eta_norm_bound"] = to_json(norm_bound(w.eta_certified()));
    if (w.target_distance) j["target_distance"] = to_json(*w.target_distance);
    j["notes"] = Json::array({"eta is the exact angle of the rational approximant; its irrationality is not certified",
                              "eps0 is taken equal to epsilon"});
  }
  return j;
}

// Readers used to feed report contents back into the verifiers.

inline Integer integer_from_json(const Json& j) { return Integer(j.get<std::string>(), 10); }

inline Rational rational_from_json(const Json& j) {
  Rational q(j.get<std::string>(), 10);
  q.canonicalize();
  return q;
}

inline IntVector int_vector_from_json(const Json& j) {
  IntVector v;
  for (const auto& x : j) v.push_back(integer_from_json(x));
  return v;
}

inline RatVector rat_vector_from_json(const Json& j) {
  RatVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline IntMatrix int_matrix_from_json(const Json& j, std::size_t cols_if_empty = 0) {
  std::vector<Integer> data;
  std::size_t cols = j.empty() ? cols_if_empty : j[0].size();
  for (const auto& row : j)
    for (const auto& x : row) data.push_back(integer_from_json(x));
  return IntMatrix(j.size(), cols, std::move(data));
}

inline UnimodularityObstruction obstruction_from_json(const Json& j) {
  UnimodularityObstruction u;
  u.base = int_matrix_from_json(j.at("base"));
  u.kernel = int_matrix_from_json(j.at("kernel"), u.base.cols());
  u.constant = integer_from_json(j.at("constant"));
  u.coefficients = int_vector_from_json(j.at("coefficients"));
  u.gcd = integer_from_json(j.at("gcd"));
  return u;
}

inline ApproxWitness approx_from_json(const Json& j) {
  ApproxWitness w;
  w.l = int_vector_from_json(j.at("l"));
  w.l_distances = rat_vector_from_json(j.at("l_distances"));
  w.l_slack = rational_from_json(j.at("l_slack"));
  w.modulus = j.at("congruence").at("modulus").get<long>();
  w.index = j.at("congruence").at("index").get<std::size_t>() - 1;
  w.box = integer_from_json(j.at("box"));
  w.epsilon = rational_from_json(j.at("epsilon"));
  if (j.contains("m")) {
    w.m = int_vector_from_json(j.at("m"));
    w.m_distances = rat_vector_from_json(j.at("m_distances"));
    w.m_slack = rational_from_json(j.at("m_slack"));
    w.s = j.at("s").get<std::size_t>() - 1;
    w.eta = rational_from_json(j.at("eta"));
    w.eta0 = rational_from_json(j.at("eta0"));
    w.eta_distance = rational_from_json(j.at("eta_distance"));
    w.eta_slack = rational_from_json(j.at("eta_slack"));
  }
  return w;
}

/// Indented "key: value" rendering of a JSON value, keys in sorted order.
inline void render_text(const Json& j, std::string& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [](const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v)
      if (x.is_object()) return false;
      else if (x.is_array())
        for (const auto& y : x)
          if (y.is_structured()) return false;
    return true;
  };
  auto inline_array = [&](const Json& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      if (v[i].is_array()) {
        s += "(";
        for (std::size_t k = 0; k < v[i].size(); ++k) s += (k ? ", " : "") + scalar(v[i][k]);
        s += ")";
      } else {
        s += scalar(v[i]);
      }
    }
    return s + ")";
  };
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || (value.is_array() && !flat(value))) {
        out += pad + key + ":\n";
        render_text(value, out, indent + 2);
      } else if (value.is_array()) {
        out += pad + key + ": " + inline_array(value) + "\n";
      } else {
        out += pad + key + ": " + scalar(value) + "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& value : j) {
      if (value.is_object()) {
        out += pad + "-\n";
        render_text(value, out, indent + 2);
      } else if (value.is_array()) {
        out += pad + "- " + inline_array(value) + "\n";
      } else {
        out += pad + "- " + scalar(value) + "\n";
      }
    }
  } else {
    out += pad + scalar(j) + "\n";
  }
}

}  // namespace nct
