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

#include "oracles.hpp"
#include "support.hpp"

#include "survproj/errors.hpp"
#include "survproj/simgen.hpp"
#include "survproj/transmodel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <limits>

using namespace survproj;
using namespace oracles;
using doctest::Approx;
using boost::math::quadrature::gauss_kronrod;

TEST_CASE("precedence formulas match nested quadrature on a 5x5x3 grid") {
  const double lins[] = {-1.5, -0.4, 0.0, 0.5, 2.0};
  const double survs[] = {0.05, 0.3, 0.5, 0.6, 0.9};
  const double shifts[] = {-1.0, 0.0, 1.5};
  for (Family family : {Family::ph, Family::po, Family::probit}) {
    CAPTURE(to_string(family));
    for (double lin : lins) {
      for (double s1 : survs) {
        for (double shift : shifts) {
          CAPTURE(lin);
          CAPTURE(s1);
          CAPTURE(shift);
          CHECK(std::abs(theta(family, lin, s1) - oracle(family, lin, s1, shift)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("theta_ph special cases") {
  for (double s : {0.1, 0.5, 0.93}) CHECK(theta_ph(0.0, s, s) == Approx((1 - s * s) / 2).epsilon(1e-14));
  // horizon-free limit: 1 / (1 + exp(-lin12))
  for (double d : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    CHECK(std::abs(theta_ph(d, 1e-12, 1e-12) - 1.0 / (1.0 + std::exp(-d))) < 1e-6);
  }
  const double s2 = implied_s2(Family::ph, 0.5, 0.6);
  CHECK(std::abs(theta_ph(0.5, 0.6, s2) - oracle(Family::ph, 0.5, 0.6, 0.0)) < 1e-6);
}

TEST_CASE("theta_ph rises with the risk gap and stays in [0, 1]") {
  double last = -1.0;
  for (double d = -6.0; d <= 6.0; d += 0.25) {
    const double v = theta_ph(d, 0.4, 0.4);
    CHECK(v > last);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    last = v;
  }
  CHECK(theta_ph(0.3, 1.0 - 1e-12, 1.0 - 1e-12) < 1e-9);
}

TEST_CASE("theta_po near the removable singularity") {
  for (double s : {0.2, 0.5, 0.8}) {
    CHECK(std::abs(theta_po(0.0, s) - oracle(Family::po, 0.0, s, 0.0)) < 1e-6);
    CHECK(theta_po(0.0, s) == Approx((1 - s * s) / 2).epsilon(1e-12));
  }
  CHECK(std::abs(theta_po(1e-5, 0.5) - theta_po(1e-3, 0.5)) < 1e-3);
  // both sides of the switch agree with the direct formula continued by quadrature
  for (double d : {-2e-4, -9.9e-5, 9.9e-5, 2e-4}) CHECK(std::abs(theta_po(d, 0.5) - oracle(Family::po, d, 0.5, 0.0)) < 1e-6);
  CHECK(std::abs(theta_po(0.8, 0.4) - oracle(Family::po, 0.8, 0.4, 0.0)) < 1e-6);
}

TEST_CASE("theta_probit special cases") {
  CHECK(theta_probit(0.0, 0.5) == Approx(0.25 + std::asin(1.0 / std::sqrt(2.0)) / (2 * kPi)).epsilon(1e-10));
  for (double d : {-1.0, 0.0, 0.8}) {
    CHECK(std::abs(theta_probit(d, 1e-10) - 0.5 * std::erfc(-d / 2.0)) < 1e-6);
  }
  CHECK(std::abs(theta_probit(0.3, 0.7) - oracle(Family::probit, 0.3, 0.7, 0.0)) < 1e-7);
}

TEST_CASE("bivariate normal CDF reference values") {
  CHECK(bivariate_normal_cdf(0.0, 0.0, 0.0) == Approx(0.25).epsilon(1e-12));
  CHECK(bivariate_normal_cdf(0.0, 0.0, 0.5) == Approx(0.25 + std::asin(0.5) / (2 * kPi)).epsilon(1e-12));
  CHECK(bivariate_normal_cdf(1.0, 30.0, 0.3) == Approx(0.5 * std::erfc(-1.0 / std::sqrt(2.0))).epsilon(1e-10));
}

TEST_CASE("exchanging the pair accounts for every event before tau") {
  for (Family family : {Family::ph, Family::po, Family::probit}) {
    for (double d : {-1.2, -0.2, 0.0, 0.4, 1.9}) {
      for (double s1 : {0.1, 0.35, 0.5, 0.7, 0.95}) {
        const double s2 = implied_s2(family, d, s1);
        double forward = 0.0, backward = 0.0;
        if (family == Family::ph) {
          forward = theta_ph(d, s1, s2);
          backward = theta_ph(-d, s2, s1);
        } else {
          forward = theta(family, d, s1);
          backward = theta(family, -d, s2);
        }
        CHECK(std::abs(forward + backward - (1.0 - s1 * s2)) < 1e-7);
      }
    }
  }
}

TEST_CASE("link and inverse link are mutual inverses") {
  for (Family family : {Family::ph, Family::po, Family::probit}) {
    for (double s = 1e-6; s < 1.0 - 1e-6; s += 0.0173) {
      CHECK(std::abs(link_inverse(family, link(family, s)) - s) < 1e-12);
    }
    CHECK(std::abs(link_inverse(family, link(family, 1.0 - 1e-6)) - (1.0 - 1e-6)) < 1e-12);
    double last = std::numeric_limits<double>::infinity();
    for (double s = 0.01; s < 1.0; s += 0.01) {
      const double g = link(family, s);
      CHECK(g < last);
      last = g;
    }
  }
}

TEST_CASE("solve_m_tau inverts an intercept-only model") {
  const Index n = 10;
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 1.0, 10.0);
  Eigen::MatrixXd x = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  const SurvivalDataset ds(t, Eigen::VectorXi::Ones(n), x, Eigen::MatrixXd(n, 0));
  const double m =
      solve_m_tau(ds, Eigen::VectorXd::Zero(1), Eigen::VectorXd(0), Family::ph, censoring_km(ds), 5.5);
  CHECK(m == Approx(std::log(-std::log(0.5))).epsilon(1e-9));
  const double mpo =
      solve_m_tau(ds, Eigen::VectorXd::Zero(1), Eigen::VectorXd(0), Family::po, censoring_km(ds), 3.5);
  CHECK(mpo == Approx(std::log(0.3 / 0.7)).epsilon(1e-9));
}

TEST_CASE("m(tau) on generated PH data agrees with log tau and the Breslow baseline") {
  SimScenario s = preset_scenario(DataModel::ph, 0.025, 0);
  s.n = 2000;
  std::mt19937_64 rng = make_stream(5, StreamPurpose::data, 0);
  const SurvivalDataset ds = generate(s, rng);
  const TransformFit fit = make_transform_fit(ds, Family::ph, s.beta, s.gamma, s.tau);
  CHECK(std::abs(fit.survival(0.0) - std::exp(-s.tau)) < 0.02);

  const CoxFit cox = cox_fit(ds, true);
  const TransformFit cfit = make_transform_fit(ds, Family::ph, cox.beta, cox.gamma, s.tau);
  const Eigen::VectorXd eta = cfit.risk(ds);
  double cumhaz = 0.0;
  for (Index i = 0; i < ds.n(); ++i) {
    if (ds.status()(i) == 0 || ds.time()(i) > s.tau) continue;
    double denom = 0.0;
    for (Index j = 0; j < ds.n(); ++j) {
      if (ds.time()(j) >= ds.time()(i)) denom += std::exp(eta(j));
    }
    cumhaz += 1.0 / denom;
  }
  double worst = 0.0;
  for (Index i = 0; i < ds.n(); ++i) {
    worst = std::max(worst, std::abs(cfit.survival(eta(i)) - std::exp(-cumhaz * std::exp(eta(i)))));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("theta_cross mixes indices as documented") {
  const SurvivalDataset ds = testing::random_dataset(25, 2, 2, 9);
  Eigen::VectorXd b(2), c(2);
  b << 0.6, -0.2;
  c << 0.4, 0.3;
  const TransformFit fit = make_transform_fit(ds, Family::po, b, c, 0.5);
  const Eigen::VectorXd eta = fit.risk(ds);
  CHECK(theta_cross(fit, ds, 3, 7, 3, 7) == precedence(fit, eta(3), eta(7)));
  const double manual1 = ds.x().row(2).dot(b) + ds.z().row(11).dot(c);
  const double manual2 = ds.x().row(5).dot(b) + ds.z().row(0).dot(c);
  CHECK(theta_cross(fit, ds, 2, 5, 11, 0) == Approx(theta_po(manual1 - manual2, fit.survival(manual1))).epsilon(1e-14));

  const SurvivalDataset noz = ds.without_z();
  const TransformFit f0 = make_transform_fit(noz, Family::ph, b, Eigen::VectorXd(0), 0.5);
  CHECK(theta_cross(f0, noz, 1, 4, 0, 0) == theta_cross(f0, noz, 1, 4, 17, 9));
}
