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

#include <Eigen/Core>

#include <functional>

namespace survproj {

/// Tensor Chebyshev interpolant of a smooth f(a, b) on the square [lo, hi]^2.
/// The degree doubles from 32 until the trailing coefficients fall below the
/// tolerance (or max_size is reached), then negligible trailing terms are
/// dropped. f(a, b) ~= sum_{p,q} C(p, q) T_p(a~) T_q(b~) with a~ the image
/// of a in [-1, 1].
class ChebyshevSurface {
 public:
  ChebyshevSurface(const std::function<double(double, double)>& f, double lo, double hi, double tolerance = 1e-12,
                   int max_size = 512);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Eigen::Index size() const { return coefficients_.rows(); }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  /// False when max_size was reached before the tail met the tolerance.
  bool converged() const { return converged_; }
  /// Sum of the absolute values of the discarded tail coefficients.
  double tail_bound() const { return tail_bound_; }

  double to_unit(double a) const { return (2.0 * a - lo_ - hi_) / (hi_ - lo_); }
  bool contains(double a) const { return a >= lo_ && a <= hi_; }

  /// T_0..T_{size-1} at the image of every entry of `points`; one row per point.
  Eigen::MatrixXd basis(const Eigen::Ref<const Eigen::VectorXd>& points) const;

  double operator()(double a, double b) const;

 private:
  double lo_;
  double hi_;
  Eigen::MatrixXd coefficients_;
  bool converged_ = false;
  double tail_bound_ = 0.0;
};

}  // namespace survproj
