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

#include "survproj/errors.hpp"
#include "survproj/inference.hpp"
#include "survproj/parallel.hpp"
#include "survproj/simgen.hpp"

#include <doctest.h>

#include <cmath>

using namespace survproj;

namespace {

AnalysisConfig config_for(const SurvivalDataset& ds, Method method) {
  AnalysisConfig c;
  c.columns.x = ds.x_names();
  c.columns.z = ds.z_names();
  c.tau = ds.max_time();
  c.method = method;
  c.seed = 11;
  c.pr_restarts = 0;
  return c;
}

}  // namespace

TEST_CASE("every route reports xi as enhanced minus projected") {
  const SurvivalDataset ds = testing::random_dataset(120, 2, 1, 3, 2.0);
  RouteOptions options;
  options.tau = 1.5;
  const RouteResults r = evaluate_routes(ds, {kAllMethods.begin(), kAllMethods.end()}, options);
  for (Method m : kAllMethods) {
    const RouteEstimate& e = r.at(m);
    CHECK(e.xi == e.kappa_enhanced - e.kappa_projected);
    CHECK(e.kappa_enhanced > 0.5);
    CHECK(e.kappa_enhanced < 1.0);
  }
  CHECK(r.cox.has_value());
  CHECK(r.rank.has_value());
  CHECK(r.at(Method::pl_cpe).kappa_enhanced == r.cpe->enhanced.value);
}

TEST_CASE("zeroing the new-factor coefficients removes the impact") {
  const SurvivalDataset ds = testing::random_dataset(100, 2, 2, 5, 2.0);
  RouteOptions options;
  options.tau = 1.5;
  options.zero_gamma = true;
  const RouteResults r = evaluate_routes(ds, {kAllMethods.begin(), kAllMethods.end()}, options);
  for (Method m : kAllMethods) CHECK(r.at(m).xi == 0.0);
}

TEST_CASE("routes only evaluate what was requested") {
  const SurvivalDataset ds = testing::random_dataset(60, 1, 1, 8);
  RouteOptions options;
  options.tau = ds.max_time();
  const RouteResults r = evaluate_routes(ds, {Method::pl_wci}, options);
  CHECK(r.estimates[method_slot(Method::pl_wci)].has_value());
  CHECK_FALSE(r.estimates[method_slot(Method::pl_cpe)].has_value());
  CHECK_THROWS_AS(r.at(Method::pr_wci), ValidationError);
}

TEST_CASE("partial-likelihood routes refuse non-PH families without fixed coefficients") {
  const SurvivalDataset ds = testing::random_dataset(60, 1, 1, 8);
  AnalysisConfig c = config_for(ds, Method::pl_cpe);
  c.family = Family::po;
  CHECK_THROWS_AS(impact(ds, c), ValidationError);
  c.beta = Eigen::VectorXd::Constant(1, 0.7);
  c.gamma = Eigen::VectorXd::Constant(1, 0.3);
  const ImpactEstimate e = impact(ds, c);
  CHECK(e.family == Family::po);
  CHECK(std::isfinite(e.xi));
}

TEST_CASE("impact without bootstrap has no intervals") {
  const SurvivalDataset ds = testing::random_dataset(80, 2, 1, 21);
  const ImpactEstimate e = impact(ds, config_for(ds, Method::pl_wci));
  CHECK_FALSE(e.xi_ci.has_value());
  CHECK_FALSE(e.enhanced_ci.has_value());
  CHECK(e.bootstrap_reps == 0);
  CHECK(e.seed == 11);
  CHECK_FALSE(e.baseline_misspecified);
}

TEST_CASE("bootstrap is reproducible and independent of the worker count") {
  const SurvivalDataset ds = testing::random_dataset(80, 2, 1, 21);
  AnalysisConfig c = config_for(ds, Method::pl_wci);
  c.bootstrap_reps = 30;
  const int before = thread_count();
  set_thread_count(1);
  const ImpactEstimate one = impact(ds, c);
  set_thread_count(3);
  const ImpactEstimate three = impact(ds, c);
  set_thread_count(before);
  REQUIRE(one.xi_ci.has_value());
  CHECK(one.xi_ci->se == three.xi_ci->se);
  CHECK(one.xi_ci->lower == three.xi_ci->lower);
  CHECK(one.enhanced_ci->upper == three.enhanced_ci->upper);
  CHECK(one.xi_ci->se > 0.0);
  CHECK(std::abs(one.xi_ci->upper - one.xi - 1.96 * one.xi_ci->se) < 1e-15);

  c.seed = 12;
  const ImpactEstimate other = impact(ds, c);
  CHECK(other.xi == one.xi);
  CHECK(other.xi_ci->se != one.xi_ci->se);
}

TEST_CASE("normal_interval uses the replicate standard deviation") {
  const Eigen::Vector4d reps(1.0, 2.0, 3.0, 4.0);
  const Interval ci = normal_interval(10.0, reps);
  const double sd = std::sqrt(5.0 / 3.0);
  CHECK(ci.se == doctest::Approx(sd).epsilon(1e-14));
  CHECK(ci.lower == doctest::Approx(10.0 - 1.96 * sd).epsilon(1e-14));
  CHECK(ci.upper == doctest::Approx(10.0 + 1.96 * sd).epsilon(1e-14));
}

TEST_CASE("bootstrap drops failed replicates and aborts past ten percent") {
  const SurvivalDataset ds = testing::random_dataset(30, 1, 0, 2);
  auto sometimes = [](const SurvivalDataset& d, std::uint64_t seed) {
    if (seed % 25 == 0) throw NumericalError("unlucky");
    return Eigen::VectorXd::Constant(1, d.time().mean());
  };
  const BootstrapDraws draws = bootstrap_draws(ds, 200, 4, 0, 1, sometimes);
  CHECK(draws.requested == 200);
  CHECK(draws.values.rows() == 200 - draws.failures);
  CHECK(draws.failures <= 20);

  auto never = [](const SurvivalDataset&, std::uint64_t) -> Eigen::VectorXd { throw NumericalError("singular"); };
  try {
    bootstrap_draws(ds, 20, 4, 0, 1, never);
    FAIL("no abort");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("singular") != std::string::npos);
  }
  CHECK_THROWS_AS(bootstrap_draws(ds, 1, 4, 0, 1, sometimes), ValidationError);
}

TEST_CASE("two-subject cohorts cannot be bootstrapped") {
  Eigen::VectorXd t(2);
  t << 1.0, 2.0;
  Eigen::VectorXi d(2);
  d << 1, 1;
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 1.0;
  const SurvivalDataset ds(t, d, x, Eigen::MatrixXd(2, 0));
  AnalysisConfig c = config_for(ds, Method::pl_wci);
  c.bootstrap_reps = 20;
  CHECK_THROWS_AS(impact(ds, c), NumericalError);
}

TEST_CASE("naive nested impact is flagged and vanishes without new factors") {
  const SurvivalDataset ds = testing::random_dataset(100, 2, 1, 31);
  const ImpactEstimate e = naive_nested_impact(ds, config_for(ds, Method::pl_cpe));
  CHECK(e.baseline_misspecified);
  CHECK(std::isfinite(e.xi));

  const SurvivalDataset xonly = ds.without_z();
  CHECK(naive_nested_impact(xonly, config_for(xonly, Method::pl_wci)).xi == 0.0);
  CHECK_THROWS_AS(naive_nested_impact(ds, config_for(ds, Method::pr_wci)), ValidationError);
}

TEST_CASE("impact of a 0.05 generator is recovered at n = 2000") {
  SimScenario s = preset_scenario(DataModel::ph, 0.05, 0);
  s.n = 2000;
  std::mt19937_64 rng(2024);
  const SurvivalDataset ds = generate(s, rng);
  RouteOptions options;
  options.tau = s.tau;
  const RouteResults r = evaluate_routes(ds, {Method::pl_cpe, Method::pl_wci}, options);
  CHECK(std::abs(r.at(Method::pl_cpe).xi - 0.05) < 0.01);
  CHECK(std::abs(r.at(Method::pl_wci).xi - 0.05) < 0.02);
}
