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

#include "survproj/simgen.hpp"

#include "survproj/concordance.hpp"
#include "survproj/errors.hpp"
#include "survproj/parallel.hpp"
#include "survproj/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace survproj {

std::string to_string(DataModel model) { return model == DataModel::frailty ? "frailty" : "PH"; }

DataModel parse_data_model(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "ph") return DataModel::ph;
  if (t == "frailty") return DataModel::frailty;
  throw ValidationError("unknown data model '" + text + "' (expected PH or frailty)");
}

std::string to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::enhanced:
      return "enhanced";
    case Quantity::projection:
      return "projection";
    case Quantity::impact:
      return "impact";
  }
  return "?";
}

void SimScenario::validate() const {
  if (beta.size() < 1 || !beta.allFinite() || !gamma.allFinite()) {
    throw ValidationError("scenario: coefficients must be finite with at least one beta");
  }
  if (!(tau > 0.0)) throw ValidationError("scenario: tau must be positive");
  if (!(censor_bound >= 0.0)) throw ValidationError("scenario: censor_bound must be >= 0");
  if (n < 10) throw ValidationError("scenario: n must be at least 10");
  if (iterations < 1) throw ValidationError("scenario: iterations must be at least 1");
  if (bootstrap_reps < 0 || bootstrap_reps == 1) throw ValidationError("scenario: bootstrap_reps must be 0 or >= 2");
  if (model == DataModel::frailty && !(frailty_shape > 0.0 && frailty_rate > 0.0)) {
    throw ValidationError("scenario: frailty shape and rate must be positive");
  }
  if (population_iterations < 1 || population_n < 10) throw ValidationError("scenario: population size too small");
  if (methods.empty()) throw ValidationError("scenario: no methods");
  if (pr_restarts < 0) throw ValidationError("scenario: pr_restarts must be >= 0");
}

SimScenario preset_scenario(DataModel model, double impact, int censoring_percent) {
  struct Coefs {
    double b1, g1;
  };
  // Coefficients giving enhanced concordance 0.70 and the requested impact.
  static const std::map<std::pair<int, int>, Coefs> table{
      {{0, 25}, {0.718, 0.346}}, {{0, 50}, {0.624, 0.505}}, {{0, 100}, {0.408, 0.684}},
      {{1, 25}, {1.741, 0.887}}, {{1, 50}, {1.567, 1.301}}, {{1, 100}, {1.061, 1.754}}};
  const int key = static_cast<int>(std::lround(impact * 1000.0));
  const auto it = table.find({model == DataModel::frailty ? 1 : 0, key});
  if (it == table.end()) throw ValidationError("no preset for impact " + std::to_string(impact));
  SimScenario s;
  s.model = model;
  s.beta = Eigen::Vector2d(it->second.b1, 0.15);
  s.gamma = Eigen::Vector2d(it->second.g1, 0.15);
  s.tau = model == DataModel::frailty ? 6.0 : 1.18;
  switch (censoring_percent) {
    case 0:
      s.censor_bound = 0.0;
      break;
    case 25:
      s.censor_bound = model == DataModel::frailty ? 310.0 : 4.75;
      break;
    case 50:
      s.censor_bound = model == DataModel::frailty ? 13.0 : 1.58;
      break;
    default:
      throw ValidationError("preset censoring must be 0, 25 or 50 percent");
  }
  std::ostringstream name;
  name << to_string(model) << "-xi" << impact << "-c" << censoring_percent;
  s.name = name.str();
  return s;
}

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

SimScenario scenario_from_config(const KeyValueConfig& config) {
  config.require_known({"scenario.name", "scenario.preset", "scenario.impact", "scenario.censoring",
                        "scenario.model", "scenario.beta", "scenario.gamma", "scenario.tau",
                        "scenario.censor_bound", "scenario.n", "scenario.iterations", "scenario.bootstrap_reps",
                        "scenario.seed", "scenario.frailty_shape", "scenario.frailty_rate",
                        "scenario.population_iterations", "scenario.population_n", "scenario.methods",
                        "scenario.ph_transform", "scenario.pr_restarts"});
  SimScenario s;
  if (config.has("scenario.preset")) {
    const DataModel model = parse_data_model(config.string("scenario.preset"));
    const double impact = config.has("scenario.impact") ? config.number("scenario.impact") : 0.025;
    const int censoring = config.has("scenario.censoring") ? static_cast<int>(config.integer("scenario.censoring")) : 0;
    s = preset_scenario(model, impact, censoring);
  } else if (config.has("scenario.impact") || config.has("scenario.censoring")) {
    throw ValidationError(config.source() + ": 'impact' and 'censoring' require 'preset'");
  }
  if (config.has("scenario.name")) s.name = config.string("scenario.name");
  if (config.has("scenario.model")) s.model = parse_data_model(config.string("scenario.model"));
  if (config.has("scenario.beta")) s.beta = to_vector(config.numbers("scenario.beta"));
  if (config.has("scenario.gamma")) s.gamma = to_vector(config.numbers("scenario.gamma"));
  if (config.has("scenario.tau")) s.tau = config.number("scenario.tau");
  if (config.has("scenario.censor_bound")) s.censor_bound = config.number("scenario.censor_bound");
  if (config.has("scenario.n")) s.n = config.integer("scenario.n");
  if (config.has("scenario.iterations")) s.iterations = config.integer("scenario.iterations");
  if (config.has("scenario.bootstrap_reps")) s.bootstrap_reps = static_cast<int>(config.integer("scenario.bootstrap_reps"));
  if (config.has("scenario.seed")) s.seed = config.unsigned_integer("scenario.seed");
  if (config.has("scenario.frailty_shape")) s.frailty_shape = config.number("scenario.frailty_shape");
  if (config.has("scenario.frailty_rate")) s.frailty_rate = config.number("scenario.frailty_rate");
  if (config.has("scenario.population_iterations")) {
    s.population_iterations = config.integer("scenario.population_iterations");
  }
  if (config.has("scenario.population_n")) s.population_n = config.integer("scenario.population_n");
  if (config.has("scenario.methods")) {
    s.methods.clear();
    for (const auto& m : config.strings("scenario.methods")) s.methods.push_back(parse_method(m));
  }
  if (config.has("scenario.ph_transform")) s.ph_transform = parse_time_transform(config.string("scenario.ph_transform"));
  if (config.has("scenario.pr_restarts")) s.pr_restarts = static_cast<int>(config.integer("scenario.pr_restarts"));
  if (s.name.empty()) s.name = "custom";
  s.validate();
  return s;
}

SurvivalDataset generate(const SimScenario& scenario, std::mt19937_64& rng) {
  const Index n = scenario.n;
  const Index p = scenario.beta.size();
  const Index q = scenario.gamma.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> exponential(1.0);
  std::gamma_distribution<double> frailty(scenario.frailty_shape, 1.0 / scenario.frailty_rate);
  std::uniform_real_distribution<double> censor(0.0, scenario.censor_bound > 0.0 ? scenario.censor_bound : 1.0);

  Eigen::VectorXd time(n);
  Eigen::VectorXi status(n);
  Eigen::MatrixXd x(n, p), z(n, q);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < p; ++k) x(i, k) = normal(rng);
    for (Index k = 0; k < q; ++k) z(i, k) = normal(rng);
    const double eta = x.row(i).dot(scenario.beta) + (q > 0 ? z.row(i).dot(scenario.gamma) : 0.0);
    double t = std::exp(-eta) * exponential(rng);
    if (scenario.model == DataModel::frailty) t /= frailty(rng);
    // Tiny frailties can push t past the double range; such subjects outlive any horizon.
    if (!(t <= std::numeric_limits<double>::max())) t = std::numeric_limits<double>::max();
    if (!(t > 0.0)) t = std::numeric_limits<double>::min();
    if (scenario.censor_bound > 0.0) {
      const double c = censor(rng);
      time(i) = std::min(t, c);
      status(i) = t < c ? 1 : 0;
      if (!(time(i) > 0.0)) time(i) = std::numeric_limits<double>::min();
    } else {
      time(i) = t;
      status(i) = 1;
    }
  }
  std::vector<std::string> xn, zn;
  for (Index k = 0; k < p; ++k) xn.push_back("x" + std::to_string(k + 1));
  for (Index k = 0; k < q; ++k) zn.push_back("z" + std::to_string(k + 1));
  return SurvivalDataset(std::move(time), std::move(status), std::move(x), std::move(z), std::move(xn), std::move(zn));
}

double true_survival(const SimScenario& scenario, double eta, double t) {
  if (scenario.model == DataModel::ph) return std::exp(-t * std::exp(eta));
  return std::pow(1.0 + t * std::exp(eta) / scenario.frailty_rate, -scenario.frailty_shape);
}

double true_precedence(const SimScenario& scenario, double eta1, double eta2) {
  if (scenario.model == DataModel::ph) return precedence(Family::ph, eta1, eta2, std::log(scenario.tau));
  // Integral of f1(t) S2(t) over [0, tau] in x = log t; the integrand behaves
  // like exp(x) on the left, so cutting at 36 units below the first
  // transition loses less than 1e-15.
  const double k = scenario.frailty_shape;
  const double l1 = eta1 - std::log(scenario.frailty_rate);
  const double l2 = eta2 - std::log(scenario.frailty_rate);
  auto integrand = [&](double x) {
    return k * std::exp(l1 + x - (k + 1.0) * std::log1p(std::exp(l1 + x)) - k * std::log1p(std::exp(l2 + x)));
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, -l1 - 36.0, std::log(scenario.tau),
                                                                        15, 1e-13);
}

namespace {

std::function<double(double, double)> precedence_function(const SimScenario& scenario) {
  return [&scenario](double a, double b) { return true_precedence(scenario, a, b); };
}

struct PopulationDraw {
  double kappa = 0.0;
  double projected = 0.0;
  double direct = 0.0;
  double pi = 0.0;
};

}  // namespace

PopulationParams population_params(const SimScenario& scenario, std::optional<Index> iterations,
                                   std::optional<Index> n) {
  scenario.validate();
  const Index iters = iterations.value_or(scenario.population_iterations);
  const Index size = n.value_or(scenario.population_n);
  if (iters < 1 || size < 10) throw ValidationError("population: need iterations >= 1 and n >= 10");
  const Index p = scenario.beta.size();
  const Index q = scenario.gamma.size();

  const double reach = 5.0 * (scenario.beta.norm() + scenario.gamma.norm());
  const ChebyshevSurface shared(precedence_function(scenario), -reach, reach);

  std::vector<PopulationDraw> draws(static_cast<std::size_t>(iters));
  parallel_for(iters, [&](Index t) {
    std::mt19937_64 rng = make_stream(scenario.seed, StreamPurpose::population, static_cast<std::uint64_t>(t));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(size, p), z(size, q);
    for (Index i = 0; i < size; ++i) {
      for (Index k = 0; k < p; ++k) x(i, k) = normal(rng);
      for (Index k = 0; k < q; ++k) z(i, k) = normal(rng);
    }
    const Eigen::VectorXd u = x * scenario.beta;
    const Eigen::VectorXd v = q > 0 ? Eigen::VectorXd(z * scenario.gamma) : Eigen::VectorXd::Zero(size);
    const Eigen::VectorXd eta = u + v;

    const bool inside = shared.contains(u.minCoeff() + v.minCoeff()) && shared.contains(u.maxCoeff() + v.maxCoeff());
    std::optional<ChebyshevSurface> local;
    if (!inside) {
      const double lo = u.minCoeff() + v.minCoeff();
      const double hi = u.maxCoeff() + v.maxCoeff();
      local.emplace(precedence_function(scenario), lo - 1e-9, hi + 1e-9);
    }
    const ChebyshevSurface& surface = inside ? shared : *local;

    Eigen::MatrixXd theta;
    if (scenario.model == DataModel::ph) {
      theta.resize(size, size);
      const double m = std::log(scenario.tau);
      for (Index j = 0; j < size; ++j) {
        for (Index i = 0; i < size; ++i) theta(i, j) = i == j ? 0.0 : precedence(Family::ph, eta(i), eta(j), m);
      }
    } else {
      const Eigen::MatrixXd basis = surface.basis(eta);
      theta = basis * surface.coefficients() * basis.transpose();
      theta.diagonal().setZero();
    }
    const double nn = static_cast<double>(size);
    const double pi = theta.sum() / (nn * (nn - 1.0));
    const double h = sample_sd(u) * std::cbrt(1.0 / nn);

    PopulationDraw& d = draws[static_cast<std::size_t>(t)];
    d.pi = pi;
    d.kappa = concordance_sum(eta, theta, pi);
    d.direct = concordance_sum(u, theta, pi);
    d.projected = (v.array() == 0.0).all() ? d.direct : concordance_sum(u, project_theta(u, v, surface, h), pi);
  });

  PopulationParams out;
  out.iterations = iters;
  out.n = size;
  Eigen::VectorXd k(iters), kp(iters);
  double direct = 0.0, pi = 0.0;
  for (Index t = 0; t < iters; ++t) {
    const auto& d = draws[static_cast<std::size_t>(t)];
    k(t) = d.kappa;
    kp(t) = d.projected;
    direct += d.direct;
    pi += d.pi;
  }
  out.kappa = k.mean();
  out.kappa_projected = kp.mean();
  out.xi = out.kappa - out.kappa_projected;
  out.kappa_projected_direct = direct / static_cast<double>(iters);
  out.pi = pi / static_cast<double>(iters);
  out.kappa_mc_se = sample_sd(k) / std::sqrt(static_cast<double>(iters));
  out.kappa_projected_mc_se = sample_sd(kp) / std::sqrt(static_cast<double>(iters));
  return out;
}

const SimRow& SimReport::row(Quantity quantity, Method method) const {
  for (const auto& r : rows) {
    if (r.quantity == quantity && r.method == method) return r;
  }
  throw ValidationError("report has no row for " + to_string(quantity) + " " + to_string(method));
}

namespace {

struct IterationResult {
  bool ok = false;
  std::string error;
  double censoring = 0.0;
  std::optional<bool> ph_reject;
  Eigen::VectorXd estimates;  // method-major: (enhanced, projected, xi) per method
  Eigen::VectorXd se;         // same layout; empty without bootstrap
  int bootstrap_failures = 0;
};

Eigen::VectorXd flatten(const RouteResults& r, const std::vector<Method>& methods) {
  Eigen::VectorXd v(3 * static_cast<Index>(methods.size()));
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const RouteEstimate& e = r.at(methods[m]);
    v.segment(3 * static_cast<Index>(m), 3) << e.kappa_enhanced, e.kappa_projected, e.xi;
  }
  return v;
}

}  // namespace

SimReport run_study(const SimScenario& scenario, const std::optional<PopulationParams>& truth) {
  scenario.validate();
  SimReport report;
  report.scenario = scenario;
  report.population = truth ? *truth : population_params(scenario);
  report.iterations = scenario.iterations;

  const auto& methods = scenario.methods;
  const Index width = 3 * static_cast<Index>(methods.size());
  std::vector<IterationResult> results(static_cast<std::size_t>(scenario.iterations));

  parallel_for(scenario.iterations, [&](Index it) {
    IterationResult& res = results[static_cast<std::size_t>(it)];
    try {
      std::mt19937_64 rng = make_stream(scenario.seed, StreamPurpose::data, static_cast<std::uint64_t>(it));
      const SurvivalDataset ds = generate(scenario, rng);
      res.censoring = ds.censoring_fraction();
      RouteOptions options;
      options.family = Family::ph;
      options.tau = scenario.tau;
      options.pr_restarts = scenario.pr_restarts;
      options.seed = rng();
      const RouteResults routes = evaluate_routes(ds, methods, options);
      res.estimates = flatten(routes, methods);
      if (routes.cox) res.ph_reject = ph_test(*routes.cox, scenario.ph_transform).global_p_value < 0.05;
      if (scenario.bootstrap_reps > 0) {
        const BootstrapDraws draws = bootstrap_draws(
            ds, scenario.bootstrap_reps, scenario.seed, static_cast<std::uint64_t>(it), width,
            [&](const SurvivalDataset& sample, std::uint64_t inner) {
              RouteOptions o = options;
              o.seed = inner;
              return flatten(evaluate_routes(sample, methods, o), methods);
            });
        res.se.resize(width);
        for (Index k = 0; k < width; ++k) res.se(k) = sample_sd(draws.values.col(k));
        res.bootstrap_failures = draws.failures;
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  std::vector<const IterationResult*> good;
  std::string first_error;
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].ok) {
      good.push_back(&results[k]);
    } else if (first_error.empty()) {
      first_error = "iteration " + std::to_string(k) + ": " + results[k].error;
    }
  }
  report.failures = scenario.iterations - static_cast<Index>(good.size());
  if (report.failures * 20 > scenario.iterations || good.size() < 2) {
    throw NumericalError("simulation aborted: " + std::to_string(report.failures) + " of " +
                         std::to_string(scenario.iterations) + " iterations failed; first failure: " + first_error);
  }

  const auto count = static_cast<Index>(good.size());
  Eigen::MatrixXd est(count, width), se(count, width);
  Index ph_tests = 0, ph_rejects = 0;
  double censoring = 0.0;
  for (Index r = 0; r < count; ++r) {
    const IterationResult& res = *good[static_cast<std::size_t>(r)];
    est.row(r) = res.estimates.transpose();
    if (res.se.size() == width) se.row(r) = res.se.transpose();
    censoring += res.censoring;
    report.bootstrap_failures += res.bootstrap_failures;
    if (res.ph_reject) {
      ++ph_tests;
      ph_rejects += *res.ph_reject ? 1 : 0;
    }
  }
  report.censoring = censoring / static_cast<double>(count);
  if (ph_tests > 0) report.ph_rejection = static_cast<double>(ph_rejects) / static_cast<double>(ph_tests);

  const std::array<double, 3> truths{report.population.kappa, report.population.kappa_projected,
                                     report.population.xi};
  const std::array<Quantity, 3> quantities{Quantity::enhanced, Quantity::projection, Quantity::impact};
  const auto base = std::find(methods.begin(), methods.end(), Method::pl_cpe);
  for (std::size_t qi = 0; qi < 3; ++qi) {
    std::optional<double> base_rmse;
    if (base != methods.end()) {
      const Index col = 3 * static_cast<Index>(base - methods.begin()) + static_cast<Index>(qi);
      base_rmse = std::sqrt((est.col(col).array() - truths[qi]).square().mean());
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const Index col = 3 * static_cast<Index>(m) + static_cast<Index>(qi);
      SimRow row;
      row.quantity = quantities[qi];
      row.method = methods[m];
      row.truth = truths[qi];
      row.count = count;
      row.mean = est.col(col).mean();
      row.bias = row.mean - row.truth;
      row.sd = sample_sd(est.col(col));
      row.rmse = std::sqrt((est.col(col).array() - row.truth).square().mean());
      if (base_rmse && *base_rmse > 0.0) row.relative_efficiency = row.rmse / *base_rmse;
      if (scenario.bootstrap_reps > 0) {
        if (row.sd > 0.0) row.se_ratio = se.col(col).mean() / row.sd;
        const Eigen::ArrayXd dev = (est.col(col).array() - row.truth).abs();
        row.coverage = (dev <= 1.96 * se.col(col).array()).cast<double>().mean();
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace survproj
