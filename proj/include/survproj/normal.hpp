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

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace survproj {

template <typename Scalar>
Scalar normal_pdf(Scalar t) {
  using std::exp;
  return exp(Scalar(-0.5) * t * t) * Scalar(0.5) * Scalar(std::numbers::inv_sqrtpi) * Scalar(std::numbers::sqrt2);
}

template <typename Scalar>
Scalar normal_cdf(Scalar t) {
  using std::erfc;
  return Scalar(0.5) * erfc(-t / Scalar(std::numbers::sqrt2));
}

/// Inverse of normal_cdf on (0, 1).
template <typename Scalar>
Scalar normal_quantile(Scalar p) {
  return -Scalar(std::numbers::sqrt2) * boost::math::erfc_inv(Scalar(2) * p);
}

/// Piecewise cubic Hermite table of the standard normal CDF on [-8.5, 8.5]
/// with spacing 1/128. Maximum absolute error is about 5e-12; outside the
/// table the value saturates at 0 or 1. Used by the rank objective, where
/// the CDF is evaluated once per comparable pair.
class NormalCdfTable {
 public:
  NormalCdfTable() {
    const int m = static_cast<int>(2.0 * kHalfWidth * kDensity) + 2;
    cdf_.resize(static_cast<std::size_t>(m) + 1);
    slope_.resize(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
      const double t = -kHalfWidth + k / kDensity;
      cdf_[static_cast<std::size_t>(k)] = normal_cdf(t);
      slope_[static_cast<std::size_t>(k)] = normal_pdf(t) / kDensity;
    }
    last_ = m - 1;
  }

  double operator()(double t) const {
    const double s = (t + kHalfWidth) * kDensity;
    if (!(s > 0.0)) return 0.0;
    if (s >= last_) return 1.0;
    const int k = static_cast<int>(s);
    const double u = s - k;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const auto a = static_cast<std::size_t>(k);
    return (2 * u3 - 3 * u2 + 1) * cdf_[a] + (u3 - 2 * u2 + u) * slope_[a] + (3 * u2 - 2 * u3) * cdf_[a + 1] +
           (u3 - u2) * slope_[a + 1];
  }

  static const NormalCdfTable& instance() {
    static const NormalCdfTable table;
    return table;
  }

 private:
  static constexpr double kHalfWidth = 8.5;
  static constexpr double kDensity = 128.0;
  std::vector<double> cdf_;
  std::vector<double> slope_;
  int last_ = 0;
};

}  // namespace survproj
