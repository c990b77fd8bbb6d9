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

#include "survproj/optim.hpp"

#include <doctest.h>

#include <cmath>

using namespace survproj;

TEST_CASE("nelder_mead minimizes a shifted quadratic") {
  const Eigen::Vector3d target(1.0, -2.0, 0.5);
  auto f = [&](const Eigen::VectorXd& x) { return (x - target).squaredNorm() + 3.0; };
  const NelderMeadResult r = nelder_mead(f, Eigen::Vector3d::Zero());
  CHECK(r.converged);
  CHECK((r.x - target).norm() < 1e-4);
  CHECK(std::abs(r.value - 3.0) < 1e-9);
}

TEST_CASE("nelder_mead follows the Rosenbrock valley") {
  auto f = [](const Eigen::VectorXd& x) { return std::pow(1 - x(0), 2) + 100 * std::pow(x(1) - x(0) * x(0), 2); };
  NelderMeadOptions options;
  options.max_evaluations = 5000;
  options.initial_step = 0.5;
  const NelderMeadResult r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), options);
  CHECK((r.x - Eigen::Vector2d(1.0, 1.0)).norm() < 1e-3);
}

TEST_CASE("nelder_mead respects the evaluation budget and zero dimensions") {
  auto f = [](const Eigen::VectorXd& x) { return std::sin(10 * x.sum()) + x.squaredNorm(); };
  NelderMeadOptions options;
  options.max_evaluations = 25;
  const NelderMeadResult r = nelder_mead(f, Eigen::Vector2d(3.0, 3.0), options);
  CHECK(r.evaluations <= 25);
  CHECK_FALSE(r.converged);

  const NelderMeadResult empty = nelder_mead([](const Eigen::VectorXd&) { return 4.0; }, Eigen::VectorXd(0));
  CHECK(empty.value == 4.0);
  CHECK(empty.converged);
}
