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
#include "survproj/survfit.hpp"
#include "survproj/surface.hpp"
#include "survproj/transmodel.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>

namespace survproj {

enum class Estimator { cpe, wci, cpe_projected, wci_projected };

std::string to_string(Estimator estimator);

struct ConcordanceEstimate {
  double value = 0.0;
  Estimator estimator = Estimator::cpe;
  double tau = 0.0;
  std::optional<double> pi_hat;
  Index n_pairs_used = 0;
};

/// How the marginal precedence probability pi(tau) is estimated.
enum class PiEstimator {
  /// Mean of the fitted precedence probabilities over ordered pairs.
  model,
  /// IPCW share of comparable pairs.
  ipcw,
};

std::string to_string(PiEstimator pi);
PiEstimator parse_pi_estimator(const std::string& text);

struct Bandwidths {
  double h = 0.0;
  double g = 0.0;
};

/// IPCW concordance of `risk` over ordered pairs with y_i < y_j, y_i < tau and
/// an event at y_i, weighted by G(y_i-)^-2. Exact risk ties count 1/2.
ConcordanceEstimate weighted_c_index(const SurvivalDataset& ds, const Eigen::Ref<const Eigen::VectorXd>& risk,
                                     const StepSurvival& censoring, double tau);

/// The same statistic on the conventional-only score b'x.
ConcordanceEstimate wci_projected(const SurvivalDataset& ds, const Eigen::Ref<const Eigen::VectorXd>& risk_x,
                                  const StepSurvival& censoring, double tau);

/// Fitted precedence probabilities theta_ij for all ordered pairs (diagonal zero).
Eigen::MatrixXd precedence_matrix(const TransformFit& fit, const Eigen::Ref<const Eigen::VectorXd>& risk);

double marginal_pi(const SurvivalDataset& ds, const TransformFit& fit, PiEstimator estimator = PiEstimator::model);

/// Sum over ordered pairs i != j of c_ij * theta(i, j) / (n(n-1) pi_hat), where
/// c_ij = I(score_i > score_j) + I(score_i == score_j) / 2.
double concordance_sum(const Eigen::Ref<const Eigen::VectorXd>& score, const Eigen::MatrixXd& theta, double pi_hat);

ConcordanceEstimate cpe(const SurvivalDataset& ds, const TransformFit& fit, PiEstimator pi = PiEstimator::model);

enum class ProjectionPath {
  /// Chebyshev representation of theta with a truncated kernel, O(n^2 P).
  fast,
  /// Literal quadruple sum with the full kernel, O(n^4). Only for small n.
  direct,
};

/// Kernel projection theta^P_ij of theta_ijkl onto the conventional index.
/// The precedence function theta(eta1, eta2) may be supplied to evaluate a
/// known model instead of the fitted one.
Eigen::MatrixXd project_theta(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                              const std::function<double(double, double)>& theta, double h,
                              ProjectionPath path = ProjectionPath::fast);

/// Projection with an existing Chebyshev representation of theta; its box
/// must contain every u_i + v_k.
Eigen::MatrixXd project_theta(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                              const ChebyshevSurface& surface, double h);

Eigen::MatrixXd project_theta(const SurvivalDataset& ds, const TransformFit& fit, double h,
                              ProjectionPath path = ProjectionPath::fast);

ConcordanceEstimate cpe_projected(const SurvivalDataset& ds, const TransformFit& fit, double h,
                                  PiEstimator pi = PiEstimator::model, ProjectionPath path = ProjectionPath::fast);

/// Enhanced and projected CPE sharing one precedence matrix and one pi_hat.
struct CpePair {
  ConcordanceEstimate enhanced;
  ConcordanceEstimate projected;
};
CpePair cpe_with_projection(const SurvivalDataset& ds, const TransformFit& fit, double h,
                            PiEstimator pi = PiEstimator::model, ProjectionPath path = ProjectionPath::fast);

/// h = sd(b'x) n^{-1/3}; g = sqrt(2) sd(b'x + c'z) n^{-1/3}.
Bandwidths default_bandwidths(const SurvivalDataset& ds, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma);
Bandwidths default_bandwidths(const SurvivalDataset& ds, const TransformFit& fit);

/// Sample standard deviation.
double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace survproj
