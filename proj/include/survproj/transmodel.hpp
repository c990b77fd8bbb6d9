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
#include "survproj/normal.hpp"
#include "survproj/survfit.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

namespace survproj {

/// Error law of the transformation model g(S(t | x, z)) = m(t) + b'x + c'z.
enum class Family { ph, po, probit };

std::string to_string(Family family);
Family parse_family(const std::string& text);

inline constexpr double kSurvivalFloor = 1e-10;

inline double clamp_survival(double s) { return std::clamp(s, kSurvivalFloor, 1.0 - kSurvivalFloor); }

/// g(s): survival probability to linear predictor. Decreasing on (0, 1).
template <typename Scalar>
Scalar link(Family family, Scalar s) {
  using std::log;
  switch (family) {
    case Family::ph:
      return log(-log(s));
    case Family::po:
      return log((Scalar(1) - s) / s);
    case Family::probit:
      return -normal_quantile(s);
  }
  return Scalar(0);
}

/// g^{-1}(eta): linear predictor to survival probability.
template <typename Scalar>
Scalar link_inverse(Family family, Scalar eta) {
  using std::exp;
  switch (family) {
    case Family::ph:
      return exp(-exp(eta));
    case Family::po:
      return Scalar(1) / (Scalar(1) + exp(eta));
    case Family::probit:
      return normal_cdf(-eta);
  }
  return Scalar(0);
}

/// d g^{-1}(eta) / d eta (nonpositive).
template <typename Scalar>
Scalar link_inverse_derivative(Family family, Scalar eta) {
  using std::exp;
  switch (family) {
    case Family::ph:
      return -exp(eta - exp(eta));
    case Family::po: {
      const Scalar e = exp(-std::abs(eta));
      return -e / ((Scalar(1) + e) * (Scalar(1) + e));
    }
    case Family::probit:
      return -normal_pdf(eta);
  }
  return Scalar(0);
}

/// Pr(T1 < T2, T1 < tau) under proportional hazards. lin12 = eta1 - eta2 and
/// s1, s2 are the survival probabilities at tau.
double theta_ph(double lin12, double s1, double s2);
/// Proportional odds version; the partner's survival at tau is implied by
/// lin12 and s1. A second-order series is used for |lin12| < 1e-4.
double theta_po(double lin12, double s1);
/// Probit version: bivariate normal CDF at (lin12 / sqrt 2, g(s1)) with
/// correlation 1 / sqrt 2, by adaptive quadrature.
double theta_probit(double lin12, double s1);

/// Bivariate standard normal CDF Pr(U <= a, V <= b) with correlation rho.
double bivariate_normal_cdf(double a, double b, double rho);

/// Fitted transformation model at the horizon tau.
struct TransformFit {
  Family family = Family::ph;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  double m_tau = 0.0;
  double tau = 0.0;

  /// Clamped S_tau at linear predictor eta.
  double survival(double eta) const { return clamp_survival(link_inverse(family, m_tau + eta)); }

  /// b'x_i + c'z_i for every row.
  Eigen::VectorXd risk(const SurvivalDataset& ds) const;
  /// b'x_i only.
  Eigen::VectorXd risk_x(const SurvivalDataset& ds) const;
};

/// Precedence probability of a subject with index eta1 against one with eta2.
double precedence(Family family, double eta1, double eta2, double m_tau);
inline double precedence(const TransformFit& fit, double eta1, double eta2) {
  return precedence(fit.family, eta1, eta2, fit.m_tau);
}

/// Root in m of sum_i { I(y_i >= tau) / G(tau-) - g^{-1}(m + eta_i) } = 0.
double solve_m_tau(const SurvivalDataset& ds, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                   Family family, const StepSurvival& censoring, double tau);

/// Estimates m(tau) from the censoring Kaplan-Meier curve of `ds` and packs a TransformFit.
TransformFit make_transform_fit(const SurvivalDataset& ds, Family family, const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& gamma, double tau);

/// Precedence with conventional parts from rows (i, j) and new parts from rows
/// (k, l); S_tau is recomputed at the mixed indices.
double theta_cross(const TransformFit& fit, const SurvivalDataset& ds, Index i, Index j, Index k, Index l);

}  // namespace survproj
