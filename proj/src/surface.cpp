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

#include "survproj/surface.hpp"

#include "survproj/errors.hpp"

#include <cmath>
#include <numbers>

namespace survproj {

namespace {

// Interpolation coefficients from values at first-kind Chebyshev nodes.
Eigen::MatrixXd fit_coefficients(const std::function<double(double, double)>& f, double lo, double hi, int m) {
  Eigen::VectorXd nodes(m);
  Eigen::MatrixXd transform(m, m);
  for (int k = 0; k < m; ++k) {
    const double angle = std::numbers::pi * (k + 0.5) / m;
    nodes(k) = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(angle);
    for (int p = 0; p < m; ++p) transform(p, k) = (p == 0 ? 1.0 : 2.0) / m * std::cos(p * angle);
  }
  Eigen::MatrixXd values(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) values(k, l) = f(nodes(k), nodes(l));
  }
  if (!values.allFinite()) throw NumericalError("Chebyshev surface: function is not finite on the box");
  return transform * values * transform.transpose();
}

}  // namespace

ChebyshevSurface::ChebyshevSurface(const std::function<double(double, double)>& f, double lo, double hi,
                                   double tolerance, int max_size)
    : lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw NumericalError("Chebyshev surface: empty box");
  Eigen::MatrixXd c;
  int m = 32;
  for (;; m *= 2) {
    c = fit_coefficients(f, lo, hi, m);
    const int tail = m - m / 8;
    const double tail_max = std::max(c.bottomRows(m - tail).cwiseAbs().maxCoeff(),
                                     c.rightCols(m - tail).cwiseAbs().maxCoeff());
    if (tail_max < tolerance) {
      converged_ = true;
      break;
    }
    if (m * 2 > max_size) break;
  }
  int keep = m;
  const double negligible = 0.01 * tolerance;
  while (keep > 1 && c.row(keep - 1).cwiseAbs().maxCoeff() < negligible &&
         c.col(keep - 1).cwiseAbs().maxCoeff() < negligible) {
    --keep;
  }
  tail_bound_ = c.cwiseAbs().sum() - c.topLeftCorner(keep, keep).cwiseAbs().sum();
  if (!converged_) tail_bound_ = std::max(tail_bound_, c.bottomRows(m / 8).cwiseAbs().sum());
  coefficients_ = c.topLeftCorner(keep, keep);
}

Eigen::MatrixXd ChebyshevSurface::basis(const Eigen::Ref<const Eigen::VectorXd>& points) const {
  const Eigen::Index n = points.size();
  const Eigen::Index m = size();
  Eigen::MatrixXd t(n, m);
  const Eigen::ArrayXd x = points.unaryExpr([this](double a) { return to_unit(a); }).array();
  t.col(0).setOnes();
  if (m > 1) t.col(1) = x.matrix();
  for (Eigen::Index p = 2; p < m; ++p) {
    t.col(p) = (2.0 * x * t.col(p - 1).array() - t.col(p - 2).array()).matrix();
  }
  return t;
}

double ChebyshevSurface::operator()(double a, double b) const {
  Eigen::VectorXd pa(1), pb(1);
  pa << a;
  pb << b;
  return (basis(pa) * coefficients_ * basis(pb).transpose())(0, 0);
}

}  // namespace survproj
