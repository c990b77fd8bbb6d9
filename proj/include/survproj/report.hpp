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
#include "survproj/config.hpp"
#include "survproj/dataset.hpp"
#include "survproj/inference.hpp"
#include "survproj/simgen.hpp"
#include "survproj/survfit.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace survproj {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { json, csv, text };

std::string to_string(Format format);
Format parse_format(const std::string& text);

struct CoefficientRow {
  std::string name;
  /// "x" or "z".
  std::string block;
  double estimate = 0.0;
  /// Absent for coefficients without a model-based standard error.
  std::optional<double> se;
};

struct PhTestRow {
  std::string name;
  double chisq = 0.0;
  double df = 1.0;
  double p_value = 1.0;
};

struct AnalysisReport {
  std::string command;
  // input digest
  Index n = 0;
  Index p = 0;
  Index q = 0;
  Index events = 0;
  double tau = 0.0;
  std::string method;
  std::string family;

  std::string coefficient_source;
  std::vector<CoefficientRow> coefficients;
  std::optional<double> m_tau;
  std::optional<std::string> ph_transform;
  /// Per-covariate rows followed by a final "GLOBAL" row.
  std::vector<PhTestRow> ph_test;
  std::optional<ConcordanceEstimate> enhanced;
  std::optional<ConcordanceEstimate> projected;
  std::optional<ImpactEstimate> impact;
  std::string version = kVersion;
  std::uint64_t seed = 0;
};

/// Builds the report of one CLI analysis command: "fit", "ph-test",
/// "concordance" or "impact".
AnalysisReport analyze(const std::string& command, const SurvivalDataset& ds, const AnalysisConfig& config);

/// JSON keeps every double at round-trip precision and leaves absent
/// optional fields out; CSV is long format (section, key, value) with the
/// same values; text rounds to 6 significant digits.
std::string render(const AnalysisReport& report, Format format);
AnalysisReport analysis_report_from_json(const std::string& text);

std::string render(const SimReport& report, Format format);
std::string render(const SimScenario& scenario, const PopulationParams& population, Format format);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace survproj
