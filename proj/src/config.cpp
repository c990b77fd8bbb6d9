// Copyright 2026 The survproj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "survproj/config.hpp"

#include "survproj/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace survproj {

namespace {

using Value = KeyValueConfig::Value;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string where) : text_(text), where_(std::move(where)) {}

  Value parse_all() {
    Value v = parse_value();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected text after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ValidationError(where_ + ": " + what); }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  Value parse_value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    return parse_bare();
  }

  Value parse_string() {
    Value v;
    v.kind = Value::Kind::string;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char e = text_[pos_++];
        if (e == 'n') {
          c = '\n';
        } else if (e == 't') {
          c = '\t';
        } else if (e == '"' || e == '\\') {
          c = e;
        } else {
          fail(std::string("unsupported escape \\") + e);
        }
      }
      v.text.push_back(c);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value parse_array() {
    Value v;
    v.kind = Value::Kind::array;
    ++pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      Value item = parse_value();
      if (item.kind == Value::Kind::array) fail("nested arrays are not supported");
      v.items.push_back(std::move(item));
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_bare() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != ' ' &&
           text_[pos_] != '\t') {
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));
    Value v;
    if (token == "true" || token == "false") {
      v.kind = Value::Kind::boolean;
      v.boolean = token == "true";
      v.text = token;
      return v;
    }
    std::string digits;
    for (char c : token) {
      if (c != '_') digits.push_back(c);
    }
    const char* begin = digits.data();
    const char* end = digits.data() + digits.size();
    if (begin != end && *begin == '+') ++begin;
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, number);
    if (digits.empty() || ec != std::errc() || ptr != end || !std::isfinite(number)) {
      fail("cannot parse value '" + token + "' (strings must be double-quoted)");
    }
    v.kind = Value::Kind::number;
    v.number = number;
    v.text = digits;
    return v;
  }

  std::string_view text_;
  std::string where_;
  std::size_t pos_ = 0;
};

// Drops a trailing comment, ignoring '#' inside strings.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (c == '\\' && quoted) {
      ++k;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, k);
    }
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::string kind_name(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::number:
      return "a number";
    case Value::Kind::string:
      return "a string";
    case Value::Kind::boolean:
      return "a boolean";
    case Value::Kind::array:
      return "an array";
  }
  return "?";
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
  KeyValueConfig config;
  config.source_ = source;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ValidationError(where + ": malformed section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (!valid_key(section)) throw ValidationError(where + ": invalid section name '" + section + "'");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (!valid_key(key)) throw ValidationError(where + ": invalid key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (config.values_.count(full) != 0) throw ValidationError(where + ": duplicate key '" + full + "'");
    ValueParser parser(std::string_view(body).substr(eq + 1), where);
    config.values_[full] = parser.parse_all();
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::vector<std::string> KeyValueConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

const Value& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError(source_ + ": missing key '" + key + "'");
  return it->second;
}

namespace {

const Value& expect(const Value& v, Value::Kind kind, const std::string& where) {
  if (v.kind != kind) {
    throw ValidationError(where + " must be " + kind_name(kind) + ", found " + kind_name(v.kind));
  }
  return v;
}

}  // namespace

double KeyValueConfig::number(const std::string& key) const {
  return expect(get(key), Value::Kind::number, source_ + ": '" + key + "'").number;
}

std::int64_t KeyValueConfig::integer(const std::string& key) const {
  const Value& v = expect(get(key), Value::Kind::number, source_ + ": '" + key + "'");
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc() || ptr != v.text.data() + v.text.size()) {
    throw ValidationError(source_ + ": '" + key + "' must be an integer, found " + v.text);
  }
  return out;
}

std::uint64_t KeyValueConfig::unsigned_integer(const std::string& key) const {
  const Value& v = expect(get(key), Value::Kind::number, source_ + ": '" + key + "'");
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc() || ptr != v.text.data() + v.text.size()) {
    throw ValidationError(source_ + ": '" + key + "' must be a nonnegative integer, found " + v.text);
  }
  return out;
}

std::string KeyValueConfig::string(const std::string& key) const {
  return expect(get(key), Value::Kind::string, source_ + ": '" + key + "'").text;
}

bool KeyValueConfig::boolean(const std::string& key) const {
  return expect(get(key), Value::Kind::boolean, source_ + ": '" + key + "'").boolean;
}

std::vector<double> KeyValueConfig::numbers(const std::string& key) const {
  const Value& v = expect(get(key), Value::Kind::array, source_ + ": '" + key + "'");
  std::vector<double> out;
  for (const Value& item : v.items) out.push_back(expect(item, Value::Kind::number, source_ + ": items of '" + key + "'").number);
  return out;
}

std::vector<std::string> KeyValueConfig::strings(const std::string& key) const {
  const Value& v = expect(get(key), Value::Kind::array, source_ + ": '" + key + "'");
  std::vector<std::string> out;
  for (const Value& item : v.items) out.push_back(expect(item, Value::Kind::string, source_ + ": items of '" + key + "'").text);
  return out;
}

void KeyValueConfig::require_known(const std::vector<std::string>& allowed) const {
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : values_) {
    if (known.count(key) == 0) throw ValidationError(source_ + ": unknown key '" + key + "'");
  }
}

std::string to_string(Method method) {
  switch (method) {
    case Method::pl_cpe:
      return "PL/CPE";
    case Method::pl_wci:
      return "PL/wCI";
    case Method::pr_wci:
      return "PR/wCI";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != '/' && c != '-' && c != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "plcpe") return Method::pl_cpe;
  if (t == "plwci") return Method::pl_wci;
  if (t == "prwci") return Method::pr_wci;
  throw ValidationError("unknown method '" + text + "' (expected PL/CPE, PL/wCI or PR/wCI)");
}

void AnalysisConfig::validate(const SurvivalDataset& ds) const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be a finite positive time");
  if (tau > ds.max_time()) {
    std::ostringstream msg;
    msg << "tau = " << tau << " exceeds the maximum observed time " << ds.max_time();
    throw ValidationError(msg.str());
  }
  if (bootstrap_reps < 0) throw ValidationError("bootstrap_reps must be >= 0");
  if (h && !(*h > 0.0)) throw ValidationError("bandwidth h must be positive");
  if (g && !(*g > 0.0)) throw ValidationError("bandwidth g must be positive");
  if (pr_restarts < 0) throw ValidationError("pr_restarts must be >= 0");
  if (beta && beta->size() != ds.p()) {
    throw ValidationError("beta has " + std::to_string(beta->size()) + " entries but there are " +
                          std::to_string(ds.p()) + " x columns");
  }
  if (gamma && gamma->size() != ds.q()) {
    throw ValidationError("gamma has " + std::to_string(gamma->size()) + " entries but there are " +
                          std::to_string(ds.q()) + " z columns");
  }
  if (beta.has_value() != gamma.has_value()) throw ValidationError("beta and gamma must be given together");
}

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

AnalysisConfig analysis_config_from(const KeyValueConfig& config) {
  config.require_known({"columns.time", "columns.status", "columns.x", "columns.z", "analysis.tau",
                        "analysis.family", "analysis.method", "analysis.bootstrap_reps", "analysis.seed",
                        "analysis.h", "analysis.g", "analysis.anchor", "analysis.beta", "analysis.gamma",
                        "analysis.pi", "analysis.ph_transform", "analysis.pr_restarts", "analysis.zero_gamma"});
  AnalysisConfig out;
  out.columns.time = config.has("columns.time") ? config.string("columns.time") : "time";
  out.columns.status = config.has("columns.status") ? config.string("columns.status") : "status";
  out.columns.x = config.strings("columns.x");
  if (config.has("columns.z")) out.columns.z = config.strings("columns.z");
  out.tau = config.number("analysis.tau");
  if (config.has("analysis.family")) out.family = parse_family(config.string("analysis.family"));
  if (config.has("analysis.method")) out.method = parse_method(config.string("analysis.method"));
  if (config.has("analysis.bootstrap_reps")) {
    const auto reps = config.integer("analysis.bootstrap_reps");
    if (reps < 0 || reps > 1000000) throw ValidationError(config.source() + ": bootstrap_reps out of range");
    out.bootstrap_reps = static_cast<int>(reps);
  }
  if (config.has("analysis.seed")) out.seed = config.unsigned_integer("analysis.seed");
  if (config.has("analysis.h")) out.h = config.number("analysis.h");
  if (config.has("analysis.g")) out.g = config.number("analysis.g");
  if (config.has("analysis.anchor")) out.anchor = config.string("analysis.anchor");
  if (config.has("analysis.beta")) out.beta = to_vector(config.numbers("analysis.beta"));
  if (config.has("analysis.gamma")) out.gamma = to_vector(config.numbers("analysis.gamma"));
  if (config.has("analysis.pi")) out.pi = parse_pi_estimator(config.string("analysis.pi"));
  if (config.has("analysis.ph_transform")) {
    out.ph_transform = parse_time_transform(config.string("analysis.ph_transform"));
  }
  if (config.has("analysis.pr_restarts")) out.pr_restarts = static_cast<int>(config.integer("analysis.pr_restarts"));
  if (config.has("analysis.zero_gamma")) out.zero_gamma = config.boolean("analysis.zero_gamma");
  return out;
}

}  // namespace survproj
