#pragma once

// Strict JSON input documents describing theta, and rational matrices for
// the factor command.

#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nct/torus.hpp"

namespace nct {

struct InputDocument {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  SkewMatrix theta;
  std::map<std::string, Rational> numeric_values;
  bool has_numeric_values = false;
  Rational input_slack = 0;
};

namespace detail {

inline const std::regex& rational_pattern() {
  static const std::regex re("-?[0-9]+(/[1-9][0-9]*)?");
  return re;
}

// 1-based line of the value at a JSON pointer, found by walking the raw
// text; nullopt if the walk fails.
class LineLocator {
 public:
  explicit LineLocator(const std::string& text) : s_(text) {}

  std::optional<std::size_t> find(const std::vector<std::string>& path) {
    pos_ = 0;
    if (!locate(path, 0)) return std::nullopt;
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) line += s_[i] == '\n';
    return line;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool read_string(std::string* out) {
    if (pos_ >= s_.size() || s_[pos_] != '"') return false;
    ++pos_;
    std::string v;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v += s_[pos_++];
    }
    if (pos_ >= s_.size()) return false;
    ++pos_;
    if (out) *out = std::move(v);
    return true;
  }

  bool skip_value() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    if (c == '"') return read_string(nullptr);
    if (c == '{' || c == '[') {
      int depth = 0;
      while (pos_ < s_.size()) {
        char ch = s_[pos_];
        if (ch == '"') {
          if (!read_string(nullptr)) return false;
          continue;
        }
        if (ch == '{' || ch == '[') ++depth;
        if (ch == '}' || ch == ']') --depth;
        ++pos_;
        if (depth == 0) return true;
      }
      return false;
    }
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']') ++pos_;
    return true;
  }

  bool locate(const std::vector<std::string>& path, std::size_t depth) {
    skip_ws();
    if (depth == path.size()) return true;
    if (pos_ >= s_.size()) return false;
    const std::string& key = path[depth];
    if (s_[pos_] == '{') {
      ++pos_;
      while (true) {
        skip_ws();
        std::string k;
        if (!read_string(&k)) return false;
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ':') return false;
        ++pos_;
        if (k == key) return locate(path, depth + 1);
        if (!skip_value()) return false;
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ',') return false;
        ++pos_;
      }
    }
    if (s_[pos_] == '[') {
      std::size_t want = 0;
      try {
        want = std::stoul(key);
      } catch (...) {
        return false;
      }
      ++pos_;
      for (std::size_t i = 0;; ++i) {
        skip_ws();
        if (i == want) return locate(path, depth + 1);
        if (!skip_value()) return false;
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ',') return false;
        ++pos_;
      }
    }
    return false;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

class DocumentReader {
 public:
  explicit DocumentReader(std::string text) : text_(std::move(text)) {}

  nlohmann::json parse_json() const {
    try {
      return nlohmann::json::parse(text_);
    } catch (const nlohmann::json::parse_error& e) {
      std::size_t line = 1;
      for (std::size_t i = 0; i < e.byte && i < text_.size(); ++i) line += text_[i] == '\n';
      throw ParseError("", "line " + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
  }

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string field;
    for (const auto& p : path) field += "/" + p;
    LineLocator loc(text_);
    auto line = loc.find(path);
    std::string prefix = line ? "line " + std::to_string(*line) + ": " : std::string();
    throw ParseError(field, prefix + "field " + (field.empty() ? "/" : field) + ": " + what);
  }

  Rational rational(const nlohmann::json& v, const std::vector<std::string>& path) const {
    if (!v.is_string()) fail(path, "expected a rational string \"p\" or \"p/q\"");
    const std::string s = v.get<std::string>();
    if (!std::regex_match(s, rational_pattern())) fail(path, "malformed rational \"" + s + "\"");
    Rational q(s, 10);
    q.canonicalize();
    return q;
  }

 private:
  std::string text_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", "cannot open file \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

/// Parses a theta document. Structural problems raise ParseError, a
/// non-skew matrix raises SkewError.
inline InputDocument parse_document_text(const std::string& text) {
  detail::DocumentReader r(text);
  nlohmann::json j = r.parse_json();
  if (!j.is_object()) r.fail({}, "top level must be an object");
  static const std::set<std::string> known{"dim", "basis", "theta", "numeric_values", "input_slack"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) r.fail({key}, "unknown key");
  for (const char* req : {"dim", "basis", "theta"})
    if (!j.contains(req)) r.fail({}, std::string("missing required key \"") + req + "\"");

  InputDocument doc;
  const auto& jd = j["dim"];
  if (!jd.is_number_unsigned() || jd.get<std::uint64_t>() < 1 || jd.get<std::uint64_t>() > 64)
    r.fail({"dim"}, "must be an integer between 1 and 64");
  doc.dim = jd.get<std::size_t>();

  const auto& jb = j["basis"];
  if (!jb.is_array() || jb.empty()) r.fail({"basis"}, "must be a nonempty array of labels");
  for (std::size_t i = 0; i < jb.size(); ++i) {
    if (!jb[i].is_string()) r.fail({"basis", std::to_string(i)}, "label must be a string");
    doc.labels.push_back(jb[i].get<std::string>());
  }
  if (doc.labels[0] != "1") r.fail({"basis", "0"}, "first label must be \"1\"");
  RealBasis basis = [&] {
    try {
      return RealBasis(doc.labels);
    } catch (const ValidationError& e) {
      r.fail({"basis"}, e.what());
    }
  }();

  const auto& jt = j["theta"];
  if (!jt.is_array() || jt.size() != doc.dim) r.fail({"theta"}, "must be an array of dim rows");
  std::vector<SymReal> entries;
  for (std::size_t a = 0; a < doc.dim; ++a) {
    const auto& row = jt[a];
    const std::string sa = std::to_string(a);
    if (!row.is_array() || row.size() != doc.dim) r.fail({"theta", sa}, "row must have dim entries");
    for (std::size_t b = 0; b < doc.dim; ++b) {
      const auto& cell = row[b];
      const std::string sb = std::to_string(b);
      if (!cell.is_array() || cell.size() != basis.size())
        r.fail({"theta", sa, sb}, "entry must be an array with one rational per basis label");
      RatVector coords;
      for (std::size_t c = 0; c < cell.size(); ++c)
        coords.push_back(r.rational(cell[c], {"theta", sa, sb, std::to_string(c)}));
      entries.emplace_back(basis, std::move(coords));
    }
  }
  doc.theta = SkewMatrix::validate(doc.dim, basis, std::move(entries));

  if (j.contains("numeric_values")) {
    const auto& jn = j["numeric_values"];
    if (!jn.is_object()) r.fail({"numeric_values"}, "must be an object mapping labels to rationals");
    for (const auto& [key, value] : jn.items()) {
      if (!basis.index_of(key) || key == "1") r.fail({"numeric_values", key}, "not a symbolic basis label");
      doc.numeric_values[key] = r.rational(value, {"numeric_values", key});
    }
    for (std::size_t i = 1; i < basis.size(); ++i) {
      const std::string& label = basis.label(i);
      if (doc.numeric_values.count(label)) continue;
      // product labels may be omitted when all factors have values
      bool derivable = label.find('*') != std::string::npos;
      std::size_t start = 0;
      while (derivable && start <= label.size()) {
        std::size_t end = label.find('*', start);
        if (end == std::string::npos) end = label.size();
        derivable = doc.numeric_values.count(label.substr(start, end - start)) > 0;
        start = end + 1;
      }
      if (!derivable) r.fail({"numeric_values"}, "no value for label \"" + label + "\"");
    }
    doc.has_numeric_values = true;
  }
  if (j.contains("input_slack")) {
    doc.input_slack = r.rational(j["input_slack"], {"input_slack"});
    if (doc.input_slack < 0) r.fail({"input_slack"}, "must be nonnegative");
  }
  return doc;
}

inline InputDocument parse_document(const std::string& path) { return parse_document_text(detail::read_file(path)); }

/// A matrix given as a JSON array of rows of rational strings or integers.
inline RatMatrix parse_matrix_text(const std::string& text) {
  detail::DocumentReader r(text);
  nlohmann::json j = r.parse_json();
  if (!j.is_array() || j.empty()) r.fail({}, "matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<Rational> data;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string si = std::to_string(i);
    if (!j[i].is_array() || j[i].empty()) r.fail({si}, "row must be a nonempty array");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) r.fail({si}, "rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& v = j[i][c];
      if (v.is_number_integer()) {
        data.emplace_back(v.get<long>());
      } else {
        data.push_back(r.rational(v, {si, std::to_string(c)}));
      }
    }
  }
  return RatMatrix(rows, cols, std::move(data));
}

/// --matrix accepts inline JSON or a path to a file containing it.
inline RatMatrix parse_matrix_argument(const std::string& arg) {
  std::size_t first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '[') return parse_matrix_text(arg);
  return parse_matrix_text(detail::read_file(arg));
}

}  // namespace nct
