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

#include "survproj/survfit.hpp"

#include "survproj/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace survproj {

StepSurvival::StepSurvival(std::vector<double> jump_times, std::vector<double> values, std::vector<Index> at_risk,
                           std::vector<Index> events)
    : jump_times_(std::move(jump_times)),
      values_(std::move(values)),
      at_risk_(std::move(at_risk)),
      events_(std::move(events)) {}

double StepSurvival::eval(double t) const {
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 1.0;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepSurvival::eval_left(double t) const {
  const auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 1.0;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

StepSurvival km_fit(const Eigen::Ref<const Eigen::VectorXd>& times, const Eigen::Ref<const Eigen::VectorXi>& indicator) {
  const Index n = times.size();
  if (n == 0) throw ValidationError("km_fit: empty input");
  if (indicator.size() != n) throw ValidationError("km_fit: times and indicator differ in length");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return times(a) < times(b); });

  std::vector<double> jumps, values;
  std::vector<Index> at_risk, events;
  double s = 1.0;
  Index remaining = n;
  std::size_t k = 0;
  while (k < order.size()) {
    const double t = times(order[k]);
    Index d = 0, m = 0;
    while (k + static_cast<std::size_t>(m) < order.size() && times(order[k + static_cast<std::size_t>(m)]) == t) {
      d += indicator(order[k + static_cast<std::size_t>(m)]) != 0 ? 1 : 0;
      ++m;
    }
    if (d > 0) {
      s *= 1.0 - static_cast<double>(d) / static_cast<double>(remaining);
      jumps.push_back(t);
      values.push_back(s);
      at_risk.push_back(remaining);
      events.push_back(d);
    }
    remaining -= m;
    k += static_cast<std::size_t>(m);
  }
  return StepSurvival(std::move(jumps), std::move(values), std::move(at_risk), std::move(events));
}

StepSurvival censoring_km(const SurvivalDataset& ds) {
  const Eigen::VectorXi censored = (1 - ds.status().array()).matrix();
  return km_fit(ds.time(), censored);
}

Eigen::VectorXd CoxFit::coefficients() const {
  Eigen::VectorXd all(beta.size() + gamma.size());
  all << beta, gamma;
  return all;
}

namespace {

struct CoxData {
  Eigen::MatrixXd x;          // centred covariates, rows sorted by decreasing time
  Eigen::VectorXd time;       // sorted decreasing
  Eigen::VectorXi status;
  std::vector<Index> blocks;  // start offsets of equal-time blocks, plus end sentinel
};

struct CoxEval {
  double loglik = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};

// Breslow partial likelihood. Rows are visited from the latest time backwards
// so the risk-set sums accumulate; all rows of a tied block enter the risk set
// before any of its events contribute.
CoxEval evaluate(const CoxData& data, const Eigen::VectorXd& beta, bool derivatives) {
  const Index p = data.x.cols();
  CoxEval out;
  out.gradient = Eigen::VectorXd::Zero(p);
  out.information = Eigen::MatrixXd::Zero(p, p);
  const Eigen::VectorXd eta = data.x * beta;
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t b = 0; b + 1 < data.blocks.size(); ++b) {
    const Index lo = data.blocks[b];
    const Index hi = data.blocks[b + 1];
    for (Index i = lo; i < hi; ++i) {
      const double w = std::exp(eta(i));
      s0 += w;
      if (derivatives) {
        s1.noalias() += w * data.x.row(i).transpose();
        s2.noalias() += w * data.x.row(i).transpose() * data.x.row(i);
      }
    }
    Index d = 0;
    for (Index i = lo; i < hi; ++i) {
      if (data.status(i) == 0) continue;
      ++d;
      out.loglik += eta(i);
      if (derivatives) out.gradient += data.x.row(i).transpose();
    }
    if (d == 0) continue;
    out.loglik -= static_cast<double>(d) * std::log(s0);
    if (derivatives) {
      const Eigen::VectorXd mean = s1 / s0;
      out.gradient -= static_cast<double>(d) * mean;
      out.information += static_cast<double>(d) * (s2 / s0 - mean * mean.transpose());
    }
  }
  return out;
}

}  // namespace

CoxFit cox_fit(const SurvivalDataset& ds, bool use_z, const CoxOptions& options) {
  const Index n = ds.n();
  const Index p = ds.p();
  const Index q = use_z ? ds.q() : 0;
  const Index dim = p + q;

  Eigen::MatrixXd raw(n, dim);
  raw.leftCols(p) = ds.x();
  if (q > 0) raw.rightCols(q) = ds.z();
  std::vector<std::string> names = ds.x_names();
  if (q > 0) names.insert(names.end(), ds.z_names().begin(), ds.z_names().end());
  for (Index k = 0; k < dim; ++k) {
    if ((raw.col(k).array() == raw(0, k)).all()) {
      throw ValidationError("cox_fit: covariate '" + names[static_cast<std::size_t>(k)] + "' is constant");
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return ds.time()(a) > ds.time()(b); });

  CoxData data;
  data.x.resize(n, dim);
  data.time.resize(n);
  data.status.resize(n);
  const Eigen::RowVectorXd centre = raw.colwise().mean();
  for (Index r = 0; r < n; ++r) {
    const Index i = order[static_cast<std::size_t>(r)];
    data.x.row(r) = raw.row(i) - centre;
    data.time(r) = ds.time()(i);
    data.status(r) = ds.status()(i);
  }
  for (Index r = 0; r < n; ++r) {
    if (r == 0 || data.time(r) != data.time(r - 1)) data.blocks.push_back(r);
  }
  data.blocks.push_back(n);

  CoxFit fit;
  fit.names = names;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(dim);
  CoxEval current = evaluate(data, beta, true);
  fit.loglik_null = current.loglik;
  fit.loglik_trace.push_back(current.loglik);

  for (int iter = 0;; ++iter) {
    if (current.gradient.lpNorm<Eigen::Infinity>() < options.tolerance) {
      fit.converged = true;
      fit.iterations = iter;
      break;
    }
    if (iter >= options.max_iterations) {
      throw NumericalError("cox_fit: no convergence after " + std::to_string(options.max_iterations) +
                           " Newton iterations (gradient max-norm " +
                           std::to_string(current.gradient.lpNorm<Eigen::Infinity>()) + ")");
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(current.information);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("cox_fit: information matrix is singular (collinear covariates?)");
    }
    Eigen::VectorXd step = llt.solve(current.gradient);
    // Predicted gain below the rounding level of the log-likelihood: no step
    // can improve it further.
    const double gain = 0.5 * current.gradient.dot(step);
    if (gain < 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(current.loglik))) {
      fit.converged = true;
      fit.iterations = iter;
      break;
    }
    bool accepted = false;
    for (int half = 0; half <= options.max_halvings; ++half) {
      const Eigen::VectorXd trial = beta + step;
      CoxEval next = evaluate(data, trial, true);
      if (std::isfinite(next.loglik) && next.loglik >= current.loglik) {
        beta = trial;
        current = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      throw NumericalError("cox_fit: step halving failed to increase the partial likelihood");
    }
    fit.loglik_trace.push_back(current.loglik);
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(current.information);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("cox_fit: information matrix is singular at the solution");
  }
  fit.variance = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  fit.se = fit.variance.diagonal().cwiseSqrt();
  if (!(fit.se.array() > 0.0).all() || !fit.se.allFinite()) {
    throw NumericalError("cox_fit: nonpositive standard error");
  }
  fit.loglik = current.loglik;
  fit.beta = beta.head(p);
  fit.gamma = beta.tail(q);

  // Schoenfeld residuals, in increasing event-time order.
  const Index d_total = ds.events();
  fit.event_times.resize(d_total);
  fit.schoenfeld_raw.resize(d_total, dim);
  fit.risk_set_covariance.resize(dim * dim, d_total);
  {
    const Eigen::VectorXd eta = data.x * beta;
    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(dim, dim);
    Index row = d_total;
    for (std::size_t b = 0; b + 1 < data.blocks.size(); ++b) {
      const Index lo = data.blocks[b];
      const Index hi = data.blocks[b + 1];
      for (Index i = lo; i < hi; ++i) {
        const double w = std::exp(eta(i));
        s0 += w;
        s1.noalias() += w * data.x.row(i).transpose();
        s2.noalias() += w * data.x.row(i).transpose() * data.x.row(i);
      }
      const Eigen::VectorXd mean = s1 / s0;
      Eigen::MatrixXd cov = s2 / s0 - mean * mean.transpose();
      const Eigen::Map<const Eigen::VectorXd> flat(cov.data(), dim * dim);
      for (Index i = hi - 1; i >= lo; --i) {
        if (data.status(i) == 0) continue;
        --row;
        fit.event_times(row) = data.time(i);
        fit.schoenfeld_raw.row(row) = data.x.row(i) - mean.transpose();
        fit.risk_set_covariance.col(row) = flat;
      }
    }
  }
  fit.schoenfeld = (fit.schoenfeld_raw * fit.variance * static_cast<double>(d_total)).rowwise() +
                   beta.transpose();

  const StepSurvival km = km_fit(ds.time(), ds.status());
  fit.event_km_left.resize(d_total);
  for (Index k = 0; k < d_total; ++k) fit.event_km_left(k) = km.eval_left(fit.event_times(k));
  return fit;
}

std::string to_string(TimeTransform transform) { return transform == TimeTransform::km ? "km" : "identity"; }

TimeTransform parse_time_transform(const std::string& text) {
  if (text == "identity") return TimeTransform::identity;
  if (text == "km") return TimeTransform::km;
  throw ValidationError("unknown time transform '" + text + "' (expected identity or km)");
}

PhTestResult ph_test(const CoxFit& fit, TimeTransform transform) {
  const Index d = fit.event_times.size();
  if (d < 2) throw ValidationError("ph_test: needs at least 2 events, found " + std::to_string(d));
  if (!fit.converged) throw NumericalError("ph_test: Cox fit did not converge");
  const Index dim = fit.schoenfeld_raw.cols();

  Eigen::VectorXd g = transform == TimeTransform::km ? (1.0 - fit.event_km_left.array()).matrix() : fit.event_times;
  g.array() -= g.mean();
  const double sxx = g.squaredNorm();
  if (!(sxx > 0.0)) throw NumericalError("ph_test: transformed event times are all equal");

  // Score test of beta(t) = beta + theta g(t) at theta = 0, with the
  // information for theta adjusted for the estimated beta.
  const Eigen::VectorXd u = fit.schoenfeld_raw.transpose() * g;
  Eigen::MatrixXd i_bb = Eigen::MatrixXd::Zero(dim, dim), i_tb = i_bb, i_tt = i_bb;
  for (Index k = 0; k < d; ++k) {
    const Eigen::Map<const Eigen::MatrixXd> v(fit.risk_set_covariance.col(k).data(), dim, dim);
    i_bb += v;
    i_tb += g(k) * v;
    i_tt += g(k) * g(k) * v;
  }
  const Eigen::LDLT<Eigen::MatrixXd> bb(i_bb);
  const Eigen::MatrixXd info = i_tt - i_tb * bb.solve(i_tb.transpose());
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
    throw NumericalError("ph_test: information for the time interaction is singular");
  }

  PhTestResult out;
  out.names = fit.names;
  out.transform = transform;
  out.chisq.resize(dim);
  out.p_value.resize(dim);
  const boost::math::chi_squared one_df(1.0);
  for (Index k = 0; k < dim; ++k) {
    out.chisq(k) = u(k) * u(k) / info(k, k);
    out.p_value(k) = boost::math::cdf(boost::math::complement(one_df, out.chisq(k)));
  }
  out.global_df = dim;
  out.global_chisq = u.dot(ldlt.solve(u));
  out.global_p_value =
      boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(dim)), out.global_chisq));
  return out;
}

}  // namespace survproj
