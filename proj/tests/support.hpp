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
#include "survproj/rng.hpp"

#include <Eigen/Core>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testing {

using survproj::Index;
using survproj::SurvivalDataset;

// Unique path under the system temp directory; removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& suffix = ".csv") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("survproj_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + suffix);
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }
  void write(const std::string& text) const {
    std::ofstream(path_, std::ios::binary) << text;
  }

 private:
  std::filesystem::path path_;
};

// Exponential event times with hazard exp(x b + z c), uniform censoring on (0, cmax).
inline SurvivalDataset random_dataset(Index n, Index p, Index q, std::uint64_t seed, double cmax = 3.0,
                                      double effect = 0.7) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo;
  std::uniform_real_distribution<double> unif(0.0, cmax);
  Eigen::VectorXd time(n);
  Eigen::VectorXi status(n);
  Eigen::MatrixXd x(n, p), z(n, q);
  for (Index i = 0; i < n; ++i) {
    double eta = 0.0;
    for (Index k = 0; k < p; ++k) {
      x(i, k) = normal(rng);
      eta += effect * x(i, k) / static_cast<double>(k + 1);
    }
    for (Index k = 0; k < q; ++k) {
      z(i, k) = normal(rng);
      eta += 0.5 * effect * z(i, k);
    }
    const double t = std::exp(-eta) * expo(rng);
    const double c = cmax > 0.0 ? unif(rng) : 1e300;
    time(i) = std::min(t, c);
    status(i) = t < c ? 1 : 0;
  }
  if (status.sum() == 0) status(0) = 1;
  std::vector<std::string> xn, zn;
  for (Index k = 0; k < p; ++k) xn.push_back("x" + std::to_string(k + 1));
  for (Index k = 0; k < q; ++k) zn.push_back("z" + std::to_string(k + 1));
  return SurvivalDataset(time, status, x, z, xn, zn);
}

}  // namespace testing
