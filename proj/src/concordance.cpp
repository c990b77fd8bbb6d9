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

#include "survproj/concordance.hpp"

#include "survproj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace survproj {

std::string to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::cpe:
      return "CPE";
    case Estimator::wci:
      return "wCI";
    case Estimator::cpe_projected:
      return "CPE-projected";
    case Estimator::wci_projected:
      return "wCI-projected";
  }
  return "?";
}

std::string to_string(PiEstimator pi) { return pi == PiEstimator::ipcw ? "ipcw" : "model"; }

PiEstimator parse_pi_estimator(const std::string& text) {
  if (text == "model") return PiEstimator::model;
  if (text == "ipcw") return PiEstimator::ipcw;
  throw ValidationError("unknown pi estimator '" + text + "' (expected model or ipcw)");
}

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& values) {
  const Index n = values.size();
  if (n < 2) return 0.0;
  const double mean = values.mean();
  return std::sqrt((values.array() - mean).square().sum() / static_cast<double>(n - 1));
}

namespace {

void check_risk_length(const SurvivalDataset& ds, Index length) {
  if (length != ds.n()) throw ValidationError("risk score length does not match the dataset");
}

double ordered_weight(double a, double b) { return a > b ? 1.0 : (a == b ? 0.5 : 0.0); }

}  // namespace

ConcordanceEstimate weighted_c_index(const SurvivalDataset& ds, const Eigen::Ref<const Eigen::VectorXd>& risk,
                                     const StepSurvival& censoring, double tau) {
  check_risk_length(ds, risk.size());
  const Index n = ds.n();
  const auto& y = ds.time();
  const auto& d = ds.status();
  double num = 0.0, den = 0.0;
  Index pairs = 0;
  for (Index i = 0; i < n; ++i) {
    if (d(i) == 0 || !(y(i) < tau)) continue;
    const double g = censoring.eval_left(y(i));
    if (!(g > 0.0)) {
      throw NumericalError("weighted c-index: censoring survival is zero before time " + std::to_string(y(i)));
    }
    const double w = 1.0 / (g * g);
    double concordant = 0.0;
    Index comparable = 0;
    for (Index j = 0; j < n; ++j) {
      if (!(y(i) < y(j))) continue;
      ++comparable;
      concordant += ordered_weight(risk(i), risk(j));
    }
    num += w * concordant;
    den += w * static_cast<double>(comparable);
    pairs += comparable;
  }
  if (!(den > 0.0)) throw NumericalError("weighted c-index: no comparable pairs before tau");
  ConcordanceEstimate out;
  out.value = num / den;
  out.estimator = Estimator::wci;
  out.tau = tau;
  out.n_pairs_used = pairs;
  return out;
}

ConcordanceEstimate wci_projected(const SurvivalDataset& ds, const Eigen::Ref<const Eigen::VectorXd>& risk_x,
                                  const StepSurvival& censoring, double tau) {
  ConcordanceEstimate out = weighted_c_index(ds, risk_x, censoring, tau);
  out.estimator = Estimator::wci_projected;
  return out;
}

Eigen::MatrixXd precedence_matrix(const TransformFit& fit, const Eigen::Ref<const Eigen::VectorXd>& risk) {
  const Index n = risk.size();
  Eigen::MatrixXd theta(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) theta(i, j) = i == j ? 0.0 : precedence(fit, risk(i), risk(j));
  }
  return theta;
}

namespace {

double pi_from(const SurvivalDataset& ds, const TransformFit& fit, const Eigen::MatrixXd& theta, PiEstimator pi) {
  const auto n = static_cast<double>(ds.n());
  double value = 0.0;
  if (pi == PiEstimator::model) {
    value = theta.sum() / (n * (n - 1.0));
  } else {
    const StepSurvival g = censoring_km(ds);
    const auto& y = ds.time();
    double total = 0.0;
    for (Index i = 0; i < ds.n(); ++i) {
      if (ds.status()(i) == 0 || !(y(i) < fit.tau)) continue;
      const double gi = g.eval_left(y(i));
      if (!(gi > 0.0)) throw NumericalError("IPCW pi: censoring survival is zero before an event");
      total += static_cast<double>((y.array() > y(i)).count()) / (gi * gi);
    }
    value = total / (n * (n - 1.0));
  }
  if (!(value > 0.0)) throw NumericalError("marginal precedence probability estimate is zero");
  return value;
}

}  // namespace

double marginal_pi(const SurvivalDataset& ds, const TransformFit& fit, PiEstimator estimator) {
  if (estimator == PiEstimator::ipcw) return pi_from(ds, fit, Eigen::MatrixXd(), estimator);
  return pi_from(ds, fit, precedence_matrix(fit, fit.risk(ds)), estimator);
}

namespace {

double ordered_total(const Eigen::Ref<const Eigen::VectorXd>& score, const Eigen::MatrixXd& theta) {
  const Index n = score.size();
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j) total += ordered_weight(score(i), score(j)) * theta(i, j);
    }
  }
  return total;
}

// n(n-1) pi_hat; for the model-based pi, the off-diagonal sum of theta taken in
// the same order as ordered_total, so a constant score gives exactly 1/2.
double pair_denominator(const Eigen::MatrixXd& theta, double pi_hat, PiEstimator pi) {
  const Index n = theta.rows();
  if (pi != PiEstimator::model) return static_cast<double>(n) * static_cast<double>(n - 1) * pi_hat;
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j) total += theta(i, j);
    }
  }
  if (!(total > 0.0)) throw NumericalError("CPE: all precedence probabilities are zero");
  return total;
}

}  // namespace

double concordance_sum(const Eigen::Ref<const Eigen::VectorXd>& score, const Eigen::MatrixXd& theta, double pi_hat) {
  const auto nn = static_cast<double>(score.size());
  return ordered_total(score, theta) / (nn * (nn - 1.0) * pi_hat);
}


ConcordanceEstimate cpe(const SurvivalDataset& ds, const TransformFit& fit, PiEstimator pi) {
  const Eigen::VectorXd risk = fit.risk(ds);
  const Eigen::MatrixXd theta = precedence_matrix(fit, risk);
  ConcordanceEstimate out;
  out.pi_hat = pi_from(ds, fit, theta, pi);
  out.value = ordered_total(risk, theta) / pair_denominator(theta, *out.pi_hat, pi);
  out.estimator = Estimator::cpe;
  out.tau = fit.tau;
  out.n_pairs_used = ds.n() * (ds.n() - 1);
  return out;
}

namespace {

void check_projection_inputs(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                             double h) {
  if (u.size() != v.size()) throw ValidationError("projection: index vectors differ in length");
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("projection: bandwidth h must be positive");
  if (u.size() < 2 || u.maxCoeff() == u.minCoeff()) {
    throw NumericalError("projection undefined: the conventional risk index is constant");
  }
}

// Constant new-factor index: nothing to average over.
bool constant_index(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.size() == 0 || (v.array() == v(0)).all();
}

Eigen::MatrixXd exact_pairs(const Eigen::Ref<const Eigen::VectorXd>& u, double shift,
                            const std::function<double(double, double)>& theta) {
  const Index n = u.size();
  Eigen::MatrixXd out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) out(i, j) = i == j ? 0.0 : theta(u(i) + shift, u(j) + shift);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd project_theta(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                              const std::function<double(double, double)>& theta, double h, ProjectionPath path) {
  check_projection_inputs(u, v, h);
  if (constant_index(v)) return exact_pairs(u, v.size() == 0 ? 0.0 : v(0), theta);
  const Index n = u.size();

  if (path == ProjectionPath::direct) {
    Eigen::MatrixXd w(n, n);
    for (Index k = 0; k < n; ++k) {
      for (Index i = 0; i < n; ++i) w(i, k) = normal_pdf((u(i) - u(k)) / h);
    }
    const Eigen::VectorXd wsum = w.rowwise().sum();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        if (i == j) continue;
        double total = 0.0;
        for (Index l = 0; l < n; ++l) {
          for (Index k = 0; k < n; ++k) total += theta(u(i) + v(k), u(j) + v(l)) * w(i, k) * w(j, l);
        }
        out(i, j) = total / (wsum(i) * wsum(j));
      }
    }
    return out;
  }

  const double lo = u.minCoeff() + v.minCoeff();
  const double hi = u.maxCoeff() + v.maxCoeff();
  const double pad = 1e-9 * std::max(1.0, hi - lo);
  const ChebyshevSurface surface(theta, lo - pad, hi + pad);
  return project_theta(u, v, surface, h);
}

Eigen::MatrixXd project_theta(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v,
                              const ChebyshevSurface& surface, double h) {
  check_projection_inputs(u, v, h);
  const Index n = u.size();
  if (!surface.contains(u.minCoeff() + v.minCoeff()) || !surface.contains(u.maxCoeff() + v.maxCoeff())) {
    throw ValidationError("projection: Chebyshev box does not cover the index range");
  }

  // Kernel weights are negligible (below e^-32 relative) beyond 8h.
  constexpr double kRadius = 8.0;
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return u(a) < u(b); });
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) sorted[static_cast<std::size_t>(r)] = u(order[static_cast<std::size_t>(r)]);

  const Index m = surface.size();
  Eigen::MatrixXd a(n, m);
  Eigen::VectorXd points, weights;
  for (Index i = 0; i < n; ++i) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), u(i) - kRadius * h) - sorted.begin();
    const auto last = std::upper_bound(sorted.begin(), sorted.end(), u(i) + kRadius * h) - sorted.begin();
    const Index count = last - first;
    points.resize(count);
    weights.resize(count);
    for (Index r = 0; r < count; ++r) {
      const Index k = order[static_cast<std::size_t>(first + r)];
      points(r) = u(i) + v(k);
      const double z = (u(i) - u(k)) / h;
      weights(r) = std::exp(-0.5 * z * z);
    }
    a.row(i) = weights.transpose() * surface.basis(points) / weights.sum();
  }
  Eigen::MatrixXd out = a * surface.coefficients() * a.transpose();
  out.diagonal().setZero();
  return out;
}

namespace {

Eigen::VectorXd new_factor_index(const SurvivalDataset& ds, const TransformFit& fit) {
  if (fit.gamma.size() == 0) return Eigen::VectorXd::Zero(ds.n());
  return ds.z() * fit.gamma;
}

std::function<double(double, double)> fitted_precedence(const TransformFit& fit) {
  return [&fit](double a, double b) { return precedence(fit, a, b); };
}

}  // namespace

Eigen::MatrixXd project_theta(const SurvivalDataset& ds, const TransformFit& fit, double h, ProjectionPath path) {
  return project_theta(fit.risk_x(ds), new_factor_index(ds, fit), fitted_precedence(fit), h, path);
}

CpePair cpe_with_projection(const SurvivalDataset& ds, const TransformFit& fit, double h, PiEstimator pi,
                            ProjectionPath path) {
  const Eigen::VectorXd risk = fit.risk(ds);
  const Eigen::VectorXd risk_x = fit.risk_x(ds);
  const Eigen::VectorXd v = new_factor_index(ds, fit);
  const Eigen::MatrixXd theta = precedence_matrix(fit, risk);

  CpePair out;
  const double pi_hat = pi_from(ds, fit, theta, pi);
  const Index pairs = ds.n() * (ds.n() - 1);
  const double denominator = pair_denominator(theta, pi_hat, pi);
  out.enhanced = ConcordanceEstimate{ordered_total(risk, theta) / denominator, Estimator::cpe, fit.tau, pi_hat, pairs};
  double projected = 0.0;
  if ((v.array() == 0.0).all()) {
    check_projection_inputs(risk_x, v, h);
    projected = ordered_total(risk_x, theta) / denominator;
  } else {
    projected = ordered_total(risk_x, project_theta(risk_x, v, fitted_precedence(fit), h, path)) / denominator;
  }
  out.projected = ConcordanceEstimate{projected, Estimator::cpe_projected, fit.tau, pi_hat, pairs};
  return out;
}

ConcordanceEstimate cpe_projected(const SurvivalDataset& ds, const TransformFit& fit, double h, PiEstimator pi,
                                  ProjectionPath path) {
  return cpe_with_projection(ds, fit, h, pi, path).projected;
}

Bandwidths default_bandwidths(const SurvivalDataset& ds, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma) {
  const Eigen::VectorXd u = ds.x() * beta;
  Eigen::VectorXd eta = u;
  if (gamma.size() > 0) eta += ds.z() * gamma;
  const double shrink = std::cbrt(1.0 / static_cast<double>(ds.n()));
  const double su = sample_sd(u);
  const double se = sample_sd(eta);
  if (!(su > 0.0) || !(se > 0.0)) throw NumericalError("default bandwidths: risk index has zero spread");
  return Bandwidths{su * shrink, std::sqrt(2.0) * se * shrink};
}

Bandwidths default_bandwidths(const SurvivalDataset& ds, const TransformFit& fit) {
  return default_bandwidths(ds, fit.beta, fit.gamma);
}

}  // namespace survproj
