#pragma once

// Command-line front end. run() is separate from main() so tests can drive
// it in-process.

#include <algorithm>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nct/nct.hpp"

namespace nct::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kValidation = 3,
  kUndecided = 4,
  kExhausted = 5,
};

struct Options {
  std::string command;
  std::string output = "json";
  std::string input;
  std::string input2;
  std::string matrix;
  std::string mode;
  long modulus = 1;
  std::size_t index = 1;
  std::string target = "0";
  std::string epsilon = "1/100";
  std::optional<long> box;
  unsigned precision_bits = 64;
  long budget = 4096;
  bool strict = false;
};

struct Result {
  Json body;
  std::vector<std::string> summary;
  bool undecided = false;
};

inline Rational flag_rational(const std::string& name, const std::string& value) {
  if (!std::regex_match(value, detail::rational_pattern()))
    throw ParseError(name, "flag " + name + ": malformed rational \"" + value + "\"");
  Rational q(value, 10);
  q.canonicalize();
  return q;
}

inline std::string tuple_text(const Json& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ", ";
    s += a[i].is_string() ? a[i].get<std::string>() : a[i].dump();
  }
  return s + ")";
}

inline std::string range_text(const RealSubgroup& g) {
  std::string s;
  for (const auto& x : g.generators()) {
    if (!s.empty()) s += ", ";
    s += x.to_string();
  }
  return "generated by " + (s.empty() ? std::string("nothing") : s);
}

inline SearchBudget budget_of(const Options& o) {
  if (o.budget < 1) throw ValidationError("--budget must be positive");
  if (o.precision_bits < 1 || o.precision_bits > 4096) throw ValidationError("--precision-bits must be in 1..4096");
  SearchBudget b;
  b.max_radius = o.budget;
  b.precision_bits = o.precision_bits;
  return b;
}

inline NumericTheta numeric_of(const InputDocument& doc) {
  if (!doc.has_numeric_values)
    throw ValidationError("approx needs \"numeric_values\" for every symbolic label in the input document");
  return NumericTheta::from(doc.theta, doc.numeric_values, doc.input_slack);
}

inline std::size_t index_of(const Options& o, std::size_t d) {
  if (o.index < 1 || o.index > d) throw ValidationError("--index must be between 1 and " + std::to_string(d));
  return o.index - 1;
}

inline Result do_check(const InputDocument& doc) {
  Result r;
  r.body = nondegeneracy_json(doc.theta);
  if (r.body["nondegenerate"].get<bool>())
    r.summary.push_back("theta is nondegenerate: the algebra is simple");
  else
    r.summary.push_back("theta is degenerate, not simple; witness " + tuple_text(r.body["witness"]));
  return r;
}

inline Result do_invariants(const InputDocument& doc) {
  Result r;
  r.body = invariants_json(doc.theta);
  r.summary.push_back("trace range " + range_text(trace_range(doc.theta)));
  r.summary.push_back("K-ranks (" + std::to_string(r.body["k_ranks"]["k0"].get<std::uint64_t>()) + ", " +
                      std::to_string(r.body["k_ranks"]["k1"].get<std::uint64_t>()) + ")");
  return r;
}

inline Result do_compare(const InputDocument& a, const InputDocument& b, const Options& o) {
  DecisionOptions opt;
  if (o.box) {
    if (*o.box < 0) throw ValidationError("--box must be nonnegative");
    opt.box_radius = *o.box;
  }
  DecisionOutcome iso = decide_isomorphic(a.theta, b.theta, opt);
  DecisionOutcome morita = decide_morita(a.theta, b.theta);
  Result r;
  r.body = {{"isomorphism", outcome_json(iso)},
            {"morita", outcome_json(morita)},
            {"even_basis", even_basis_json(EvenBasis(a.theta.dim()))},
            {"trace_range", {{"first", to_json(trace_range(a.theta))}, {"second", to_json(trace_range(b.theta))}}}};
  std::string line = std::string("isomorphism: ") + to_string(iso.verdict);
  if (const auto* u = std::get_if<UnimodularityObstruction>(&iso.certificate))
    line += " (determinant form " + affine_form_text(*u) + " never equals +-1)";
  else if (std::holds_alternative<RangeMismatch>(iso.certificate))
    line += " (trace ranges differ)";
  else if (!iso.reason.empty())
    line += " (" + iso.reason + ")";
  r.summary.push_back(line);
  line = std::string("Morita equivalence: ") + to_string(morita.verdict);
  if (morita.scale) line += " (lambda = " + morita.scale->get_str() + ")";
  else if (!morita.reason.empty()) line += " (" + morita.reason + ")";
  r.summary.push_back(line);
  r.undecided = iso.verdict == Verdict::undecided || morita.verdict == Verdict::undecided;
  return r;
}

inline Result do_factor(const Options& o) {
  if (o.matrix.empty()) throw ParseError("--matrix", "factor needs --matrix");
  RatMatrix b = parse_matrix_argument(o.matrix);
  if (!b.square()) throw ValidationError("matrix must be square");
  if (det(b) == 0) throw ValidationError("matrix is singular");
  GeneratorWord w = factor(b);
  Result r;
  r.body = word_json(b, w);
  for (const auto& f : w) r.summary.push_back(serialize(f));
  if (w.empty()) r.summary.push_back("(empty word: identity)");
  return r;
}

inline ApproxWitness run_approx(const InputDocument& doc, const Options& o, const std::string& mode) {
  NumericTheta nt = numeric_of(doc);
  const std::size_t k = index_of(o, nt.dim());
  const Rational eps = flag_rational("--epsilon", o.epsilon);
  if (o.modulus < 1) throw ValidationError("--modulus must be >= 1");
  SearchBudget budget = budget_of(o);
  if (mode == "step1") {
    long n_box = o.box.value_or(0);
    if (n_box < 0) throw ValidationError("--box must be nonnegative");
    return step1_search(nt, o.modulus, k, Integer(n_box), eps, budget);
  }
  return step2_search(nt, o.modulus, k, flag_rational("--target", o.target), eps, budget);
}

inline Result do_approx(const InputDocument& doc, const Options& o) {
  ApproxWitness w = run_approx(doc, o, o.mode);
  NumericTheta nt = numeric_of(doc);
  Result r;
  r.body = approx_json(nt, w);
  r.body["step"] = o.mode;
  r.summary.push_back("l = " + tuple_text(to_json(w.l)) + ", certified max distance " +
                      w.l_max_certified().get_str() + " < " + w.epsilon.get_str());
  if (w.m) {
    r.summary.push_back("m = " + tuple_text(to_json(*w.m)) + ", eta = " + w.eta->get_str());
    r.summary.push_back("certified dist(eta - eta0) = " + w.eta_certified().get_str() + " < " + w.epsilon.get_str());
  }
  return r;
}

inline Result do_report(const InputDocument& doc, const Options& o) {
  Result r;
  Result check = do_check(doc);
  r.summary = check.summary;
  r.body = {{"dim", doc.dim}, {"basis", doc.labels}, {"theta", theta_json(doc.theta)}, {"nondegeneracy", check.body}};
  TorusFacts facts = report_facts(doc.theta);
  r.body["facts"] = facts_json(facts);
  try {
    r.body["invariants"] = invariants_json(doc.theta);
    r.summary.push_back("trace range " + range_text(trace_range(doc.theta)));
  } catch (const NotRepresentable& e) {
    r.body["invariants"] = {{"error", e.what()}};
    r.summary.push_back(std::string("invariants unavailable: ") + e.what());
  }
  r.summary.push_back("K-ranks (" + std::to_string(facts.k_ranks.k0) + ", " + std::to_string(facts.k_ranks.k1) + ")");
  for (const auto& f : facts.derived) r.summary.push_back(f);
  if (doc.has_numeric_values && facts.simple) {
    try {
      ApproxWitness w = run_approx(doc, o, "step1");
      r.body["approx"] = approx_json(numeric_of(doc), w);
      r.body["approx"]["step"] = "step1";
    } catch (const SearchExhausted& e) {
      r.body["approx"] = {{"step", "step1"}, {"status", "exhausted"}, {"reason", e.what()}};
    }
  }
  return r;
}

inline std::string render(const Result& r, const Options& o) {
  const bool about_document = o.command != "factor";
  if (o.output == "json") {
    Json body = r.body;
    body["schema"] = kSchemaVersion;
    body["command"] = o.command;
    if (about_document) body["assumptions"] = Json::array({kIndependenceAssumption});
    return body.dump(2) + "\n";
  }
  std::string s;
  for (const auto& line : r.summary) s += line + "\n";
  if (about_document) s += std::string("assumption: ") + kIndependenceAssumption + "\n";
  s += "\n";
  render_text(r.body, s);
  return s;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Invariants and classification of noncommutative tori", "nct"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--output", o.output, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--modulus", o.modulus, "Congruence modulus n (approx)");
  app.add_option("--index", o.index, "Congruence index k, 1-based (approx)");
  app.add_option("--target", o.target, "Target angle eta0 (approx step2)");
  app.add_option("--epsilon", o.epsilon, "Tolerance (approx)");
  app.add_option("--box", o.box, "Excluded box N (approx) or parameter box R (compare)");
  app.add_option("--precision-bits", o.precision_bits, "Bits of the lattice embedding scale");
  app.add_option("--budget", o.budget, "Largest sup-norm enumerated by the searches");
  app.add_flag("--strict", o.strict, "Exit with status 4 on UNDECIDED");

  auto* check = app.add_subcommand("check", "Nondegeneracy (simplicity) with witness");
  check->add_option("input", o.input, "Input document")->required();
  auto* inv = app.add_subcommand("invariants", "Exterior exponential, trace range, K-ranks");
  inv->add_option("input", o.input, "Input document")->required();
  auto* cmp = app.add_subcommand("compare", "Isomorphism and Morita equivalence");
  cmp->add_option("input", o.input, "First input document")->required();
  cmp->add_option("--input2", o.input2, "Second input document")->required();
  auto* fac = app.add_subcommand("factor", "Factor a matrix in GL_d(Q)");
  fac->add_option("--matrix", o.matrix, "Matrix as JSON, or a file containing it")->required();
  auto* apx = app.add_subcommand("approx", "Constrained approximation searches");
  apx->add_option("mode", o.mode, "step1 or step2")->required()->check(CLI::IsMember({"step1", "step2"}));
  apx->add_option("input", o.input, "Input document")->required();
  auto* rep = app.add_subcommand("report", "Everything applicable to one document");
  rep->add_option("input", o.input, "Input document")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParse;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    Result r;
    if (o.command == "factor") {
      r = do_factor(o);
    } else {
      InputDocument doc = parse_document(o.input);
      if (o.command == "check") r = do_check(doc);
      else if (o.command == "invariants") r = do_invariants(doc);
      else if (o.command == "compare") r = do_compare(doc, parse_document(o.input2), o);
      else if (o.command == "approx") r = do_approx(doc, o);
      else r = do_report(doc, o);
    }
    out << render(r, o);
    if (o.strict && r.undecided) {
      err << "error: undecided verdict under --strict\n";
      return kUndecided;
    }
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const SearchExhausted& e) {
    err << "search exhausted: " << e.what() << "\n";
    return kExhausted;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace nct::cli
