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

#include "survproj/dataset.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace survproj {

/// Right-continuous, nonincreasing step function starting at 1. Holds a
/// Kaplan-Meier curve for either the event or the censoring distribution.
class StepSurvival {
 public:
  StepSurvival() = default;
  StepSurvival(std::vector<double> jump_times, std::vector<double> values, std::vector<Index> at_risk,
               std::vector<Index> events);

  /// S(t): value after every jump at or before t.
  double eval(double t) const;
  /// S(t-): value after every jump strictly before t.
  double eval_left(double t) const;

  const std::vector<double>& jump_times() const { return jump_times_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Index>& at_risk() const { return at_risk_; }
  const std::vector<Index>& events() const { return events_; }

 private:
  std::vector<double> jump_times_;
  std::vector<double> values_;
  std::vector<Index> at_risk_;
  std::vector<Index> events_;
};

/// Product-limit estimate with jumps where indicator == 1. For the censoring
/// distribution pass 1 - status.
StepSurvival km_fit(const Eigen::Ref<const Eigen::VectorXd>& times, const Eigen::Ref<const Eigen::VectorXi>& indicator);

/// Kaplan-Meier curve of the censoring times of `ds`.
StepSurvival censoring_km(const SurvivalDataset& ds);

struct CoxOptions {
  int max_iterations = 50;
  double tolerance = 1e-8;
  int max_halvings = 20;
};

struct CoxFit {
  std::vector<std::string> names;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  Eigen::VectorXd se;
  /// Inverse of the observed information at the solution.
  Eigen::MatrixXd variance;
  double loglik = 0.0;
  double loglik_null = 0.0;
  /// Partial log-likelihood after each accepted Newton step, starting at beta = 0.
  std::vector<double> loglik_trace;
  bool converged = false;
  int iterations = 0;

  /// Event times in increasing order, one entry per event (ties repeated).
  Eigen::VectorXd event_times;
  /// Left-continuous Kaplan-Meier value of the event distribution at each event time.
  Eigen::VectorXd event_km_left;
  /// Unscaled Schoenfeld residuals, one row per event, aligned with event_times.
  Eigen::MatrixXd schoenfeld_raw;
  /// Risk-set covariance of the covariates at each event: one column per event,
  /// holding the dim x dim matrix in column-major order.
  Eigen::MatrixXd risk_set_covariance;
  /// Scaled Schoenfeld residuals: raw * variance * events + coefficients.
  Eigen::MatrixXd schoenfeld;

  Eigen::VectorXd coefficients() const;
};

/// Cox partial likelihood with Breslow ties, maximized by damped Newton
/// iteration from zero on centred covariates. Covariates are x, followed by z
/// when use_z is set.
CoxFit cox_fit(const SurvivalDataset& ds, bool use_z, const CoxOptions& options = {});

enum class TimeTransform { identity, km };

std::string to_string(TimeTransform transform);
TimeTransform parse_time_transform(const std::string& text);

struct PhTestResult {
  std::vector<std::string> names;
  Eigen::VectorXd chisq;
  Eigen::VectorXd p_value;
  double global_chisq = 0.0;
  double global_p_value = 1.0;
  Index global_df = 0;
  TimeTransform transform = TimeTransform::identity;
};

/// Score test of beta(t) = beta + theta g(t) against theta = 0, where g is the
/// transformed event time. The information for theta is adjusted for the
/// estimated beta. Per covariate (1 df) and jointly (df = number of covariates).
PhTestResult ph_test(const CoxFit& fit, TimeTransform transform = TimeTransform::identity);

}  // namespace survproj
