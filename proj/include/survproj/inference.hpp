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
#include "survproj/partialrank.hpp"
#include "survproj/survfit.hpp"
#include "survproj/transmodel.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace survproj {

inline constexpr std::array<Method, 3> kAllMethods{Method::pl_cpe, Method::pl_wci, Method::pr_wci};

inline std::size_t method_slot(Method m) { return static_cast<std::size_t>(m); }

/// Settings shared by the three routes, resolved against a dataset.
struct RouteOptions {
  Family family = Family::ph;
  double tau = 0.0;
  std::optional<double> h;
  std::optional<double> g;
  std::optional<Index> anchor;
  PiEstimator pi = PiEstimator::model;
  int pr_restarts = 3;
  std::uint64_t seed = 0;
  bool zero_gamma = false;
  std::optional<Eigen::VectorXd> beta;
  std::optional<Eigen::VectorXd> gamma;
  ProjectionPath path = ProjectionPath::fast;
};

RouteOptions route_options(const AnalysisConfig& config, const SurvivalDataset& ds);

struct RouteEstimate {
  double kappa_enhanced = 0.0;
  double kappa_projected = 0.0;
  double xi = 0.0;
};

/// Everything computed while evaluating a set of routes on one dataset.
struct RouteResults {
  std::array<std::optional<RouteEstimate>, 3> estimates;
  std::optional<CoxFit> cox;
  std::optional<TransformFit> transform;
  std::optional<Bandwidths> bandwidths;
  std::optional<CpePair> cpe;
  std::optional<ConcordanceEstimate> wci_pl;
  std::optional<ConcordanceEstimate> wci_pl_projected;
  std::optional<PartialRankFit> rank;
  std::optional<ConcordanceEstimate> wci_pr;
  std::optional<ConcordanceEstimate> wci_pr_projected;

  const RouteEstimate& at(Method m) const;
};

/// Runs the requested routes. The partial-likelihood fit of the enhanced model
/// is computed once and shared; the projected terms always reuse the enhanced
/// coefficients.
RouteResults evaluate_routes(const SurvivalDataset& ds, const std::vector<Method>& methods,
                             const RouteOptions& options);

struct Interval {
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct ImpactEstimate {
  Method method = Method::pl_cpe;
  Family family = Family::ph;
  double tau = 0.0;
  double kappa_enhanced = 0.0;
  double kappa_projected = 0.0;
  double xi = 0.0;
  /// Present only when bootstrap replicates were requested.
  std::optional<Interval> enhanced_ci;
  std::optional<Interval> projected_ci;
  std::optional<Interval> xi_ci;
  int bootstrap_reps = 0;
  int bootstrap_failures = 0;
  std::uint64_t seed = 0;
  /// Set for the nested-model difference, which compares non-nested models.
  bool baseline_misspecified = false;
};

/// Replicate estimates from resampling rows with replacement.
struct BootstrapDraws {
  /// One row per successful replicate, in replicate order.
  Eigen::MatrixXd values;
  int requested = 0;
  int failures = 0;
  std::string first_failure;
};

/// Evaluates `statistic` on `reps` resamples of `ds`. Replicate b draws from
/// the stream keyed by (seed, key, b) and receives a derived seed for any
/// randomized step inside it. Failed replicates are dropped and counted; more
/// than 10% failures raises NumericalError.
BootstrapDraws bootstrap_draws(const SurvivalDataset& ds, int reps, std::uint64_t seed, std::uint64_t key,
                               Index width,
                               const std::function<Eigen::VectorXd(const SurvivalDataset&, std::uint64_t)>& statistic);

/// Normal interval estimate +- 1.96 se from the replicate column.
Interval normal_interval(double estimate, const Eigen::Ref<const Eigen::VectorXd>& replicates);

/// Point estimate of the configured route plus bootstrap SEs and CIs.
ImpactEstimate impact(const SurvivalDataset& ds, const AnalysisConfig& config);

/// Bootstrap SE and CI for (enhanced, projected, xi) of config.method.
struct BootstrapSummary {
  RouteEstimate estimate;
  std::array<Interval, 3> intervals;
  int reps = 0;
  int failures = 0;
};
BootstrapSummary bootstrap(const SurvivalDataset& ds, const AnalysisConfig& config, int reps);

/// Difference between the concordance of the enhanced model and that of a
/// separately fitted x-only model. Flagged as a misspecified baseline.
ImpactEstimate naive_nested_impact(const SurvivalDataset& ds, const AnalysisConfig& config);

}  // namespace survproj
