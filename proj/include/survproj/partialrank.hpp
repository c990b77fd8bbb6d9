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
#include "survproj/survfit.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>

namespace survproj {

/// Rank objective [n(n-1)]^-1 sum_{i != j} delta_j I(y_i > y_j) K_ij with
/// K_ij = I(r_i < r_j) (raw) or Phi((r_j - r_i) / g) (smoothed), r = b'x + c'z.
double pr_objective(const SurvivalDataset& ds, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                    bool smoothed, double g = 0.0);

struct PartialRankOptions {
  /// x column whose coefficient is fixed at +-1; defaults to the first continuous one.
  std::optional<Index> anchor;
  /// Smoothing bandwidth; defaults to sqrt(2) sd(start risk) n^{-1/3}.
  std::optional<double> g;
  /// Simplex runs after the first, each from a seeded perturbation of the best point.
  int restarts = 3;
  std::uint64_t seed = 0;
  /// Accept an anchor whose Cox z-ratio is below 0.1 instead of failing.
  bool allow_weak_anchor = false;
};

struct PartialRankFit {
  /// Free x coefficients, in x column order with the anchor removed.
  Eigen::VectorXd eta;
  Eigen::VectorXd gamma;
  Index anchor_index = 0;
  /// +1 normally; -1 when the sign-flipped candidate won.
  double anchor_sign = 1.0;
  double objective_value = 0.0;
  double start_objective = 0.0;
  double g = 0.0;
  bool converged = false;
  int evaluations = 0;

  /// Full x coefficient vector with anchor_sign at the anchor.
  Eigen::VectorXd beta() const;
};

/// Maximizes the smoothed rank objective over the free coefficients, starting
/// from the Cox estimates rescaled so the anchor coefficient is 1. Pass `init`
/// to reuse an enhanced-model Cox fit of `ds`.
PartialRankFit pr_fit(const SurvivalDataset& ds, const PartialRankOptions& options = {},
                      const CoxFit* init = nullptr);

}  // namespace survproj
