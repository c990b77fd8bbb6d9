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

#include "survproj/config.hpp"
#include "survproj/dataset.hpp"
#include "survproj/inference.hpp"
#include "survproj/surface.hpp"
#include "survproj/survfit.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace survproj {

/// Data-generating process: t = exp(-eta) e / w with e unit exponential and
/// w = 1 (proportional hazards) or w ~ Gamma(shape, rate) (gamma frailty).
enum class DataModel { ph, frailty };

std::string to_string(DataModel model);
DataModel parse_data_model(const std::string& text);

struct SimScenario {
  std::string name;
  DataModel model = DataModel::ph;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  double tau = 1.0;
  /// Censoring times are Uniform(0, b); b = 0 means no censoring.
  double censor_bound = 0.0;
  Index n = 300;
  Index iterations = 200;
  int bootstrap_reps = 50;
  std::uint64_t seed = 1;
  double frailty_shape = 0.25;
  double frailty_rate = 0.25;
  Index population_iterations = 2000;
  Index population_n = 2000;
  std::vector<Method> methods{Method::pl_cpe, Method::pl_wci, Method::pr_wci};
  /// Time transform of the per-iteration PH test.
  TimeTransform ph_transform = TimeTransform::km;
  /// Rank-fit restarts per cohort; see PartialRankOptions::restarts.
  int pr_restarts = 0;

  void validate() const;
};

/// Built-in parameterizations: model in {PH, frailty}, impact in {0.025,
/// 0.05, 0.10}, censoring percent in {0, 25, 50}; n = 300.
SimScenario preset_scenario(DataModel model, double impact, int censoring_percent);

/// Reads [scenario] keys; `preset`, `impact` and `censoring` select a built-in
/// starting point that the remaining keys override.
SimScenario scenario_from_config(const KeyValueConfig& config);

/// One cohort: x, z i.i.d. standard normal (two columns each, named x1 x2 z1 z2).
SurvivalDataset generate(const SimScenario& scenario, std::mt19937_64& rng);

/// True S(t | eta) of the generator.
double true_survival(const SimScenario& scenario, double eta, double t);

/// True Pr(T1 < T2, T1 < tau | eta1, eta2) of the generator.
double true_precedence(const SimScenario& scenario, double eta1, double eta2);

struct PopulationParams {
  double kappa = 0.0;
  double kappa_projected = 0.0;
  double xi = 0.0;
  /// sum I(u_i > u_j) theta_ij / sum theta_ij with the true theta: an
  /// unsmoothed check on kappa_projected.
  double kappa_projected_direct = 0.0;
  double pi = 0.0;
  double kappa_mc_se = 0.0;
  double kappa_projected_mc_se = 0.0;
  Index iterations = 0;
  Index n = 0;
};

/// Averages over uncensored cohorts of the CPE and kernel-projected CPE
/// computed with the true coefficients and the true precedence probabilities.
PopulationParams population_params(const SimScenario& scenario, std::optional<Index> iterations = std::nullopt,
                                   std::optional<Index> n = std::nullopt);

enum class Quantity { enhanced, projection, impact };
std::string to_string(Quantity quantity);

struct SimRow {
  Quantity quantity = Quantity::projection;
  Method method = Method::pl_cpe;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
  /// rMSE of this method divided by rMSE of PL/CPE (absent without PL/CPE).
  std::optional<double> relative_efficiency;
  /// Mean bootstrap SE over the simulation SD (absent without bootstrap).
  std::optional<double> se_ratio;
  std::optional<double> coverage;
  Index count = 0;
};

struct SimReport {
  SimScenario scenario;
  PopulationParams population;
  std::vector<SimRow> rows;
  Index iterations = 0;
  Index failures = 0;
  double censoring = 0.0;
  /// Share of iterations whose global proportional-hazards test rejected at 0.05.
  std::optional<double> ph_rejection;
  Index bootstrap_failures = 0;

  const SimRow& row(Quantity quantity, Method method) const;
};

/// Monte Carlo study: every iteration generates a cohort, runs the scenario's
/// methods with bootstrap SEs, and the PH test on the enhanced Cox fit.
/// Supply `truth` to skip the population computation.
SimReport run_study(const SimScenario& scenario, const std::optional<PopulationParams>& truth = std::nullopt);

}  // namespace survproj
