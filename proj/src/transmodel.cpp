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

#include "survproj/transmodel.hpp"

#include "survproj/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace survproj {

std::string to_string(Family family) {
  switch (family) {
    case Family::ph:
      return "PH";
    case Family::po:
      return "PO";
    case Family::probit:
      return "probit";
  }
  return "?";
}

Family parse_family(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "ph") return Family::ph;
  if (t == "po") return Family::po;
  if (t == "probit") return Family::probit;
  throw ValidationError("unknown link family '" + text + "' (expected PH, PO or probit)");
}

double theta_ph(double lin12, double s1, double s2) { return (1.0 - s1 * s2) / (1.0 + std::exp(-lin12)); }

double theta_po(double lin12, double s1) {
  const double c = 1.0 - s1;
  if (std::abs(lin12) < 1e-4) {
    const double e = std::expm1(-lin12);
    const double c2 = c * c;
    const double c3 = c2 * c;
    return (c - 0.5 * c2) + e * (c3 / 3.0 - 0.5 * c2) + e * e * (c3 / 3.0 - 0.25 * c2 * c2);
  }
  const double r = std::exp(-lin12);
  const double one_minus_r = -std::expm1(-lin12);
  return (r * std::log1p((r - 1.0) * c) + one_minus_r * c) / (one_minus_r * one_minus_r);
}

double bivariate_normal_cdf(double a, double b, double rho) {
  constexpr double kTail = 12.0;
  if (a <= -kTail || b <= -kTail) return 0.0;
  if (a >= kTail) return normal_cdf(b);
  if (b >= kTail) return normal_cdf(a);
  const double root = std::sqrt(1.0 - rho * rho);
  auto integrand = [&](double u) { return normal_pdf(u) * normal_cdf((b - rho * u) / root); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, -kTail, a, 15, 1e-13);
}

double theta_probit(double lin12, double s1) {
  return bivariate_normal_cdf(lin12 / std::numbers::sqrt2, link(Family::probit, s1), 1.0 / std::numbers::sqrt2);
}

double precedence(Family family, double eta1, double eta2, double m_tau) {
  const double lin12 = eta1 - eta2;
  const double s1 = clamp_survival(link_inverse(family, m_tau + eta1));
  switch (family) {
    case Family::ph:
      return theta_ph(lin12, s1, clamp_survival(link_inverse(family, m_tau + eta2)));
    case Family::po:
      return theta_po(lin12, s1);
    case Family::probit:
      return theta_probit(lin12, s1);
  }
  return 0.0;
}

Eigen::VectorXd TransformFit::risk(const SurvivalDataset& ds) const {
  Eigen::VectorXd r = ds.x() * beta;
  if (gamma.size() > 0) r += ds.z() * gamma;
  return r;
}

Eigen::VectorXd TransformFit::risk_x(const SurvivalDataset& ds) const { return ds.x() * beta; }

double solve_m_tau(const SurvivalDataset& ds, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                   Family family, const StepSurvival& censoring, double tau) {
  if (beta.size() != ds.p() || gamma.size() != ds.q()) {
    throw ValidationError("solve_m_tau: coefficient lengths do not match the dataset");
  }
  if (!beta.allFinite() || !gamma.allFinite()) throw ValidationError("solve_m_tau: non-finite coefficients");
  const double g_tau = censoring.eval_left(tau);
  if (!(g_tau > 0.0)) {
    throw NumericalError("solve_m_tau: censoring survival is zero before tau; horizon beyond censoring support");
  }
  Eigen::VectorXd eta = ds.x() * beta;
  if (ds.q() > 0) eta += ds.z() * gamma;
  const double target = static_cast<double>((ds.time().array() >= tau).count()) / g_tau;
  const Index n = ds.n();

  auto residual = [&](double m) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += link_inverse(family, m + eta(i));
    return target - s;
  };
  auto slope = [&](double m) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s -= link_inverse_derivative(family, m + eta(i));
    return s;
  };

  double lo = -40.0, hi = 40.0;
  double f_lo = residual(lo), f_hi = residual(hi);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    std::ostringstream msg;
    msg << "solve_m_tau: no sign change on [-40, 40] (weighted survivors " << target << " of " << n << ")";
    throw NumericalError(msg.str());
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double f = residual(mid);
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double m = 0.5 * (lo + hi);
  const double limit = 1e-9 * static_cast<double>(n);
  for (int iter = 0; iter < 50; ++iter) {
    const double f = residual(m);
    if (std::abs(f) < limit) return m;
    const double d = slope(m);
    double next = d > 0.0 ? m - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (f < 0.0) {
      lo = m;
    } else {
      hi = m;
    }
    m = next;
  }
  if (std::abs(residual(m)) < limit) return m;
  throw NumericalError("solve_m_tau: root polish did not reach the residual tolerance");
}

TransformFit make_transform_fit(const SurvivalDataset& ds, Family family, const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& gamma, double tau) {
  TransformFit fit;
  fit.family = family;
  fit.beta = beta;
  fit.gamma = gamma;
  fit.tau = tau;
  fit.m_tau = solve_m_tau(ds, beta, gamma, family, censoring_km(ds), tau);
  return fit;
}

double theta_cross(const TransformFit& fit, const SurvivalDataset& ds, Index i, Index j, Index k, Index l) {
  double eta1 = ds.x().row(i).dot(fit.beta);
  double eta2 = ds.x().row(j).dot(fit.beta);
  if (fit.gamma.size() > 0) {
    eta1 += ds.z().row(k).dot(fit.gamma);
    eta2 += ds.z().row(l).dot(fit.gamma);
  }
  return precedence(fit, eta1, eta2);
}

}  // namespace survproj
