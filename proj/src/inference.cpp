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

#include "survproj/inference.hpp"

#include "survproj/errors.hpp"
#include "survproj/parallel.hpp"
#include "survproj/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace survproj {

const RouteEstimate& RouteResults::at(Method m) const {
  const auto& slot = estimates[method_slot(m)];
  if (!slot) throw ValidationError("route " + to_string(m) + " was not evaluated");
  return *slot;
}

RouteOptions route_options(const AnalysisConfig& config, const SurvivalDataset& ds) {
  config.validate(ds);
  RouteOptions out;
  out.family = config.family;
  out.tau = config.tau;
  out.h = config.h;
  out.g = config.g;
  out.pi = config.pi;
  out.pr_restarts = config.pr_restarts;
  out.seed = config.seed;
  out.zero_gamma = config.zero_gamma;
  out.beta = config.beta;
  out.gamma = config.gamma;
  if (config.anchor) {
    const auto& names = ds.x_names();
    const auto it = std::find(names.begin(), names.end(), *config.anchor);
    if (it == names.end()) throw ValidationError("anchor '" + *config.anchor + "' is not an x column");
    out.anchor = it - names.begin();
  }
  return out;
}

namespace {

RouteEstimate make_estimate(double enhanced, double projected) {
  return RouteEstimate{enhanced, projected, enhanced - projected};
}

bool wants(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

}  // namespace

RouteResults evaluate_routes(const SurvivalDataset& ds, const std::vector<Method>& methods,
                             const RouteOptions& options) {
  RouteResults out;
  const bool pl_cpe = wants(methods, Method::pl_cpe);
  const bool pl_wci = wants(methods, Method::pl_wci);
  const bool pr_wci = wants(methods, Method::pr_wci);
  const bool fixed = options.beta.has_value();

  if ((pl_cpe || pl_wci) && !fixed && options.family != Family::ph) {
    throw ValidationError("partial-likelihood routes estimate proportional hazards coefficients; family " +
                          to_string(options.family) + " needs fixed beta/gamma");
  }
  // tau <= max time is checked on the original cohort, not on resamples
  if (!(options.tau > 0.0) || !std::isfinite(options.tau)) throw ValidationError("tau must be a finite positive time");

  Eigen::VectorXd beta, gamma;
  if ((pl_cpe || pl_wci || pr_wci) && !(fixed && !pr_wci)) out.cox = cox_fit(ds, true);
  if (fixed) {
    beta = *options.beta;
    gamma = options.gamma ? *options.gamma : Eigen::VectorXd::Zero(ds.q());
  } else if (out.cox) {
    beta = out.cox->beta;
    gamma = out.cox->gamma;
  }
  if (options.zero_gamma) gamma.setZero();

  std::optional<StepSurvival> censoring;
  if (pl_wci || pr_wci) censoring = censoring_km(ds);

  if (pl_cpe) {
    out.transform = make_transform_fit(ds, options.family, beta, gamma, options.tau);
    Bandwidths bw = default_bandwidths(ds, beta, gamma);
    if (options.h) bw.h = *options.h;
    if (options.g) bw.g = *options.g;
    out.bandwidths = bw;
    out.cpe = cpe_with_projection(ds, *out.transform, bw.h, options.pi, options.path);
    out.estimates[method_slot(Method::pl_cpe)] = make_estimate(out.cpe->enhanced.value, out.cpe->projected.value);
  }
  if (pl_wci) {
    Eigen::VectorXd risk = ds.x() * beta;
    const Eigen::VectorXd risk_x = risk;
    if (ds.q() > 0) risk += ds.z() * gamma;
    out.wci_pl = weighted_c_index(ds, risk, *censoring, options.tau);
    out.wci_pl_projected = wci_projected(ds, risk_x, *censoring, options.tau);
    out.estimates[method_slot(Method::pl_wci)] = make_estimate(out.wci_pl->value, out.wci_pl_projected->value);
  }
  if (pr_wci) {
    PartialRankOptions pro;
    pro.anchor = options.anchor;
    pro.g = options.g;
    pro.restarts = options.pr_restarts;
    pro.seed = options.seed;
    out.rank = pr_fit(ds, pro, &*out.cox);
    const Eigen::VectorXd b = out.rank->beta();
    Eigen::VectorXd c = out.rank->gamma;
    if (options.zero_gamma) c.setZero();
    Eigen::VectorXd risk = ds.x() * b;
    const Eigen::VectorXd risk_x = risk;
    if (ds.q() > 0) risk += ds.z() * c;
    out.wci_pr = weighted_c_index(ds, risk, *censoring, options.tau);
    out.wci_pr_projected = wci_projected(ds, risk_x, *censoring, options.tau);
    out.estimates[method_slot(Method::pr_wci)] = make_estimate(out.wci_pr->value, out.wci_pr_projected->value);
  }
  return out;
}

BootstrapDraws bootstrap_draws(const SurvivalDataset& ds, int reps, std::uint64_t seed, std::uint64_t key,
                               Index width,
                               const std::function<Eigen::VectorXd(const SurvivalDataset&, std::uint64_t)>& statistic) {
  if (reps < 2) throw ValidationError("bootstrap needs at least 2 replicates, got " + std::to_string(reps));
  const Index n = ds.n();
  std::vector<std::optional<Eigen::VectorXd>> results(static_cast<std::size_t>(reps));
  std::vector<std::string> errors(static_cast<std::size_t>(reps));
  parallel_for(reps, [&](Index b) {
    std::mt19937_64 rng = make_stream(seed, StreamPurpose::bootstrap, key, static_cast<std::uint64_t>(b));
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (auto& r : rows) r = pick(rng);
    const std::uint64_t inner_seed = rng();
    try {
      const SurvivalDataset sample = ds.resample(rows);
      Eigen::VectorXd value = statistic(sample, inner_seed);
      if (value.size() != width || !value.allFinite()) throw NumericalError("non-finite replicate statistic");
      results[static_cast<std::size_t>(b)] = std::move(value);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(b)] = e.what();
    }
  });

  BootstrapDraws out;
  out.requested = reps;
  Index ok = 0;
  for (const auto& r : results) ok += r ? 1 : 0;
  out.failures = reps - static_cast<int>(ok);
  out.values.resize(ok, width);
  Index row = 0;
  for (std::size_t b = 0; b < results.size(); ++b) {
    if (results[b]) {
      out.values.row(row++) = results[b]->transpose();
    } else if (out.first_failure.empty()) {
      out.first_failure = "replicate " + std::to_string(b) + ": " + errors[b];
    }
  }
  if (out.failures * 10 > reps || ok < 2) {
    std::ostringstream msg;
    msg << "bootstrap aborted: " << out.failures << " of " << reps
        << " replicates failed (degenerate resamples); first failure: " << out.first_failure;
    throw NumericalError(msg.str());
  }
  return out;
}

Interval normal_interval(double estimate, const Eigen::Ref<const Eigen::VectorXd>& replicates) {
  const double se = sample_sd(replicates);
  return Interval{se, estimate - 1.96 * se, estimate + 1.96 * se};
}

namespace {

Eigen::VectorXd as_vector(const RouteEstimate& e) {
  Eigen::VectorXd v(3);
  v << e.kappa_enhanced, e.kappa_projected, e.xi;
  return v;
}

}  // namespace

BootstrapSummary bootstrap(const SurvivalDataset& ds, const AnalysisConfig& config, int reps) {
  const RouteOptions options = route_options(config, ds);
  BootstrapSummary out;
  out.estimate = evaluate_routes(ds, {config.method}, options).at(config.method);
  const BootstrapDraws draws =
      bootstrap_draws(ds, reps, config.seed, 0, 3, [&](const SurvivalDataset& sample, std::uint64_t inner) {
        RouteOptions o = options;
        o.seed = inner;
        return as_vector(evaluate_routes(sample, {config.method}, o).at(config.method));
      });
  const Eigen::VectorXd point = as_vector(out.estimate);
  for (Index k = 0; k < 3; ++k) out.intervals[static_cast<std::size_t>(k)] = normal_interval(point(k), draws.values.col(k));
  out.reps = reps;
  out.failures = draws.failures;
  return out;
}

ImpactEstimate impact(const SurvivalDataset& ds, const AnalysisConfig& config) {
  ImpactEstimate out;
  out.method = config.method;
  out.family = config.family;
  out.tau = config.tau;
  out.seed = config.seed;
  out.bootstrap_reps = config.bootstrap_reps;
  if (config.bootstrap_reps > 0) {
    const BootstrapSummary boot = bootstrap(ds, config, config.bootstrap_reps);
    out.kappa_enhanced = boot.estimate.kappa_enhanced;
    out.kappa_projected = boot.estimate.kappa_projected;
    out.xi = boot.estimate.xi;
    out.enhanced_ci = boot.intervals[0];
    out.projected_ci = boot.intervals[1];
    out.xi_ci = boot.intervals[2];
    out.bootstrap_failures = boot.failures;
  } else {
    const RouteEstimate e = evaluate_routes(ds, {config.method}, route_options(config, ds)).at(config.method);
    out.kappa_enhanced = e.kappa_enhanced;
    out.kappa_projected = e.kappa_projected;
    out.xi = e.xi;
  }
  return out;
}

namespace {

// Enhanced versus reduced-model concordance for a PL method.
RouteEstimate nested_difference(const SurvivalDataset& ds, const AnalysisConfig& config) {
  const CoxFit full = cox_fit(ds, true);
  const SurvivalDataset reduced_ds = ds.without_z();
  const CoxFit reduced = ds.q() == 0 ? full : cox_fit(reduced_ds, false);
  if (config.method == Method::pl_cpe) {
    const TransformFit enhanced = make_transform_fit(ds, Family::ph, full.beta, full.gamma, config.tau);
    const TransformFit small = make_transform_fit(reduced_ds, Family::ph, reduced.beta, Eigen::VectorXd(0), config.tau);
    return make_estimate(cpe(ds, enhanced, config.pi).value, cpe(reduced_ds, small, config.pi).value);
  }
  const StepSurvival censoring = censoring_km(ds);
  Eigen::VectorXd risk = ds.x() * full.beta;
  if (ds.q() > 0) risk += ds.z() * full.gamma;
  const Eigen::VectorXd risk_reduced = ds.x() * reduced.beta;
  return make_estimate(weighted_c_index(ds, risk, censoring, config.tau).value,
                       weighted_c_index(ds, risk_reduced, censoring, config.tau).value);
}

}  // namespace

ImpactEstimate naive_nested_impact(const SurvivalDataset& ds, const AnalysisConfig& config) {
  config.validate(ds);
  if (config.method == Method::pr_wci) throw ValidationError("naive nested impact is defined for the PL routes only");
  if (config.family != Family::ph) throw ValidationError("naive nested impact fits proportional hazards models only");
  ImpactEstimate out;
  out.method = config.method;
  out.family = config.family;
  out.tau = config.tau;
  out.seed = config.seed;
  out.baseline_misspecified = true;
  const RouteEstimate e = nested_difference(ds, config);
  out.kappa_enhanced = e.kappa_enhanced;
  out.kappa_projected = e.kappa_projected;
  out.xi = e.xi;
  out.bootstrap_reps = config.bootstrap_reps;
  if (config.bootstrap_reps > 0) {
    const BootstrapDraws draws = bootstrap_draws(ds, config.bootstrap_reps, config.seed, 0, 3,
                                                 [&](const SurvivalDataset& sample, std::uint64_t) {
                                                   return as_vector(nested_difference(sample, config));
                                                 });
    out.enhanced_ci = normal_interval(e.kappa_enhanced, draws.values.col(0));
    out.projected_ci = normal_interval(e.kappa_projected, draws.values.col(1));
    out.xi_ci = normal_interval(e.xi, draws.values.col(2));
    out.bootstrap_failures = draws.failures;
  }
  return out;
}

}  // namespace survproj
