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

#pragma once

#include "survproj/concordance.hpp"
#include "survproj/dataset.hpp"
#include "survproj/survfit.hpp"
#include "survproj/transmodel.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace survproj {

/// Flat key/value settings read from a small TOML subset: `key = value`
/// lines, `[section]` headers (keys become "section.key"), `#` comments,
/// double-quoted strings, numbers, true/false, and one-line arrays.
class KeyValueConfig {
 public:
  struct Value {
    enum class Kind { number, string, boolean, array };
    Kind kind = Kind::number;
    /// Source text for numbers (kept so 64-bit integers parse exactly), the
    /// unquoted text for strings.
    std::string text;
    double number = 0.0;
    bool boolean = false;
    std::vector<Value> items;
  };

  static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::vector<std::string> keys() const;

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  std::string string(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;

  /// Rejects keys outside `allowed`, naming the first offender.
  void require_known(const std::vector<std::string>& allowed) const;

  void set(const std::string& key, Value value) { values_[key] = std::move(value); }
  const std::string& source() const { return source_; }

 private:
  const Value& get(const std::string& key) const;
  std::map<std::string, Value> values_;
  std::string source_;
};

/// Analysis route: coefficient estimator / concordance estimator.
enum class Method { pl_cpe, pl_wci, pr_wci };

std::string to_string(Method method);
Method parse_method(const std::string& text);

struct AnalysisConfig {
  ColumnMapping columns;
  double tau = 0.0;
  Family family = Family::ph;
  Method method = Method::pl_cpe;
  int bootstrap_reps = 0;
  std::uint64_t seed = 0;
  std::optional<double> h;
  std::optional<double> g;
  /// Anchor x column name for the rank route.
  std::optional<std::string> anchor;
  /// Fixed coefficients replace the partial-likelihood fit in the PL routes,
  /// which is how PO and probit models are evaluated.
  std::optional<Eigen::VectorXd> beta;
  std::optional<Eigen::VectorXd> gamma;
  PiEstimator pi = PiEstimator::model;
  TimeTransform ph_transform = TimeTransform::identity;
  int pr_restarts = 3;
  /// Set the fitted new-factor coefficients to zero before evaluating.
  bool zero_gamma = false;

  /// tau > 0, tau <= max observed time, bootstrap_reps >= 0, positive bandwidths.
  void validate(const SurvivalDataset& ds) const;
};

/// Reads [columns] (time, status, x, z) and [analysis] keys. Unknown keys are errors.
AnalysisConfig analysis_config_from(const KeyValueConfig& config);

}  // namespace survproj
