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

#include "support.hpp"

#include "survproj/config.hpp"
#include "survproj/errors.hpp"
#include "survproj/simgen.hpp"
#include "survproj/survfit.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>

using namespace survproj;

namespace {

// Pr(T1 < T2, T1 < tau) for the gamma-frailty generator, integrated directly in t.
double frailty_precedence_oracle(double eta1, double eta2, double tau, double shape, double rate) {
  auto surv = [&](double eta, double t) { return std::pow(1.0 + std::exp(eta) * t / rate, -shape); };
  auto dens = [&](double eta, double t) {
    return shape * std::exp(eta) / rate * std::pow(1.0 + std::exp(eta) * t / rate, -shape - 1.0);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double t) { return dens(eta1, t) * surv(eta2, t); }, 0.0, tau);
}

}  // namespace

TEST_CASE("presets carry the documented design") {
  const SimScenario ph = preset_scenario(DataModel::ph, 0.05, 50);
  CHECK(ph.name == "PH-xi0.05-c50");
  CHECK(ph.n == 300);
  CHECK(ph.tau == 1.18);
  CHECK(ph.censor_bound == 1.58);
  CHECK(ph.beta.size() == 2);
  CHECK(ph.gamma(1) == 0.15);
  const SimScenario fr = preset_scenario(DataModel::frailty, 0.1, 25);
  CHECK(fr.tau == 6.0);
  CHECK(fr.censor_bound == 310.0);
  CHECK(fr.frailty_shape == 0.25);
  CHECK_THROWS_AS(preset_scenario(DataModel::ph, 0.2, 0), ValidationError);
  CHECK_THROWS_AS(preset_scenario(DataModel::ph, 0.05, 10), ValidationError);
}

TEST_CASE("scenario config overrides a preset") {
  const KeyValueConfig kv = KeyValueConfig::parse(
      "[scenario]\npreset = \"frailty\"\nimpact = 0.05\ncensoring = 25\nn = 150\nseed = 99\n"
      "methods = [\"PL/CPE\", \"PR/wCI\"]\ngamma = [0.0, 0.0]\n");
  const SimScenario s = scenario_from_config(kv);
  CHECK(s.model == DataModel::frailty);
  CHECK(s.n == 150);
  CHECK(s.seed == 99);
  CHECK(s.censor_bound == 310.0);
  CHECK(s.gamma.isZero());
  CHECK(s.methods == std::vector<Method>{Method::pl_cpe, Method::pr_wci});
  CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("[scenario]\nimpact = 0.05\n")), ValidationError);
  CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("[scenario]\npreset = \"PH\"\nn = 1\n")),
                  ValidationError);
  CHECK_THROWS_AS(scenario_from_config(KeyValueConfig::parse("[scenario]\npreset = \"PH\"\nspeed = 1\n")),
                  ValidationError);
}

TEST_CASE("null generator has unit exponential survival") {
  SimScenario s = preset_scenario(DataModel::ph, 0.05, 0);
  s.beta.setZero();
  s.gamma.setZero();
  s.n = 5000;
  std::mt19937_64 rng(17);
  const SurvivalDataset ds = generate(s, rng);
  const StepSurvival km = km_fit(ds.time(), ds.status());
  double worst = 0.0;
  for (double t = 0.0; t <= 3.0; t += 0.01) worst = std::max(worst, std::abs(km.eval(t) - std::exp(-t)));
  CHECK(worst < 0.02);
}

TEST_CASE("generator is a pure function of the stream") {
  const SimScenario s = preset_scenario(DataModel::frailty, 0.025, 50);
  std::mt19937_64 a(5), b(5);
  CHECK(generate(s, a).checksum() == generate(s, b).checksum());
  const SurvivalDataset ds = generate(s, a);
  CHECK(ds.x_names() == std::vector<std::string>{"x1", "x2"});
  CHECK(ds.z_names() == std::vector<std::string>{"z1", "z2"});
  CHECK((ds.time().array() > 0.0).all());
}

TEST_CASE("censoring bounds produce the nominal censoring rates") {
  struct Case {
    DataModel model;
    int percent;
  };
  for (const Case c : {Case{DataModel::ph, 25}, Case{DataModel::ph, 50}, Case{DataModel::frailty, 25},
                       Case{DataModel::frailty, 50}}) {
    SimScenario s = preset_scenario(c.model, 0.05, c.percent);
    s.n = 10000;
    std::mt19937_64 rng(31);
    const double frac = generate(s, rng).censoring_fraction();
    CAPTURE(s.name);
    CHECK(std::abs(frac - c.percent / 100.0) < 0.02);
  }
}

TEST_CASE("true survival matches the generator") {
  const SimScenario ph = preset_scenario(DataModel::ph, 0.05, 0);
  CHECK(true_survival(ph, 0.3, 0.8) == doctest::Approx(std::exp(-0.8 * std::exp(0.3))).epsilon(1e-15));
  const SimScenario fr = preset_scenario(DataModel::frailty, 0.05, 0);
  CHECK(true_survival(fr, 0.3, 0.8) == doctest::Approx(std::pow(1.0 + 4.0 * 0.8 * std::exp(0.3), -0.25)).epsilon(1e-14));

  SimScenario big = fr;
  big.beta.setZero();
  big.gamma.setZero();
  big.n = 20000;
  std::mt19937_64 rng(8);
  const SurvivalDataset ds = generate(big, rng);
  for (double t : {0.01, 0.5, 6.0}) {
    const double emp = (ds.time().array() > t).cast<double>().mean();
    CHECK(std::abs(emp - true_survival(big, 0.0, t)) < 0.01);
  }
}

TEST_CASE("true precedence agrees with direct integration") {
  const SimScenario fr = preset_scenario(DataModel::frailty, 0.05, 0);
  for (double e1 : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
    for (double e2 : {-2.0, 0.0, 0.7, 3.5}) {
      CAPTURE(e1);
      CAPTURE(e2);
      const double oracle = frailty_precedence_oracle(e1, e2, fr.tau, fr.frailty_shape, fr.frailty_rate);
      CHECK(std::abs(true_precedence(fr, e1, e2) - oracle) < 1e-9);
    }
    const double s = true_survival(fr, e1, fr.tau);
    CHECK(std::abs(true_precedence(fr, e1, e1) - 0.5 * (1.0 - s * s)) < 1e-12);
  }
  const SimScenario ph = preset_scenario(DataModel::ph, 0.05, 0);
  const double s1 = true_survival(ph, 0.4, ph.tau), s2 = true_survival(ph, -0.2, ph.tau);
  CHECK(true_precedence(ph, 0.4, -0.2) ==
        doctest::Approx((1.0 - s1 * s2) * std::exp(0.4) / (std::exp(0.4) + std::exp(-0.2))).epsilon(1e-13));
}

TEST_CASE("population impact is zero without new-factor effects") {
  SimScenario s = preset_scenario(DataModel::ph, 0.05, 0);
  s.gamma.setZero();
  const PopulationParams pop = population_params(s, 4, 400);
  CHECK(std::abs(pop.xi) < 0.003);
  CHECK(pop.kappa > 0.5);
  CHECK(pop.iterations == 4);
  CHECK(pop.n == 400);
}

TEST_CASE("population smoothed projection tracks the unsmoothed check") {
  const SimScenario s = preset_scenario(DataModel::ph, 0.1, 0);
  const PopulationParams pop = population_params(s, 3, 600);
  CHECK(std::abs(pop.kappa_projected - pop.kappa_projected_direct) < 0.005);
  CHECK(pop.xi == pop.kappa - pop.kappa_projected);
  CHECK(std::abs(pop.kappa - 0.70) < 0.02);
}

TEST_CASE("small study runs end to end and is reproducible") {
  SimScenario s = preset_scenario(DataModel::ph, 0.05, 25);
  s.iterations = 6;
  s.bootstrap_reps = 4;
  s.methods = {Method::pl_cpe, Method::pl_wci};
  PopulationParams truth;
  truth.kappa = 0.70;
  truth.kappa_projected = 0.65;
  truth.xi = 0.05;
  const SimReport a = run_study(s, truth);
  const SimReport b = run_study(s, truth);
  CHECK(a.rows.size() == 6);
  CHECK(a.iterations == 6);
  const SimRow& cpe = a.row(Quantity::impact, Method::pl_cpe);
  CHECK(cpe.truth == 0.05);
  CHECK(cpe.relative_efficiency == 1.0);
  CHECK(cpe.count == 6);
  CHECK(cpe.coverage.has_value());
  CHECK(std::abs(cpe.bias - (cpe.mean - cpe.truth)) < 1e-15);
  CHECK(cpe.rmse == doctest::Approx(std::sqrt(cpe.bias * cpe.bias + cpe.sd * cpe.sd * 5.0 / 6.0)).epsilon(1e-12));
  CHECK(a.ph_rejection.has_value());
  CHECK(a.row(Quantity::impact, Method::pl_wci).mean == b.row(Quantity::impact, Method::pl_wci).mean);
  CHECK_THROWS_AS(a.row(Quantity::impact, Method::pr_wci), ValidationError);
}
