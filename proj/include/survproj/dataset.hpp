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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace survproj {

using Index = Eigen::Index;

/// One row of a cohort: observed time min(T, C), event indicator, and the two
/// covariate blocks (conventional x, new z).
struct Subject {
  double time = 0.0;
  int status = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd z;
};

/// Which CSV columns hold time, status, and the x / z covariate blocks.
struct ColumnMapping {
  std::string time;
  std::string status;
  std::vector<std::string> x;
  std::vector<std::string> z;
};

/// Immutable survival cohort. Construction validates every row; after that the
/// object never changes, so it can be shared freely between worker threads.
///
/// Structural invariants: n >= 2, p >= 1, q >= 0, time > 0, status in {0,1},
/// finite covariates, at least one event. Identifiability of the rank route
/// (a continuous x column) is checked by the estimators that need it.
class SurvivalDataset {
 public:
  SurvivalDataset(Eigen::VectorXd time, Eigen::VectorXi status, Eigen::MatrixXd x,
                  Eigen::MatrixXd z, std::vector<std::string> x_names = {},
                  std::vector<std::string> z_names = {});

  static SurvivalDataset from_subjects(const std::vector<Subject>& subjects,
                                       std::vector<std::string> x_names = {},
                                       std::vector<std::string> z_names = {});

  Index n() const { return time_.size(); }
  Index p() const { return x_.cols(); }
  Index q() const { return z_.cols(); }

  const Eigen::VectorXd& time() const { return time_; }
  const Eigen::VectorXi& status() const { return status_; }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::MatrixXd& z() const { return z_; }
  const std::vector<std::string>& x_names() const { return x_names_; }
  const std::vector<std::string>& z_names() const { return z_names_; }

  Subject subject(Index i) const;

  /// Analysis horizon recorded by truncate_to_horizon(), if any.
  std::optional<double> horizon() const { return horizon_; }

  double max_time() const { return time_.maxCoeff(); }
  Index events() const { return status_.sum(); }
  double censoring_fraction() const {
    return 1.0 - static_cast<double>(events()) / static_cast<double>(n());
  }

  /// More than 10 distinct values in x column `col`.
  bool x_column_is_continuous(Index col) const;
  std::optional<Index> first_continuous_x() const;

  /// Rows `rows` (with repetition) as a new dataset; keeps names and horizon.
  SurvivalDataset resample(std::span<const Index> rows) const;
  /// Same rows with the z block removed (q = 0).
  SurvivalDataset without_z() const;
  /// Same rows with every z entry set to zero.
  SurvivalDataset with_z_zeroed() const;
  SurvivalDataset with_horizon(double tau) const;

  /// FNV-1a digest over all stored values; used to verify immutability.
  std::uint64_t checksum() const;

 private:
  Eigen::VectorXd time_;
  Eigen::VectorXi status_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd z_;
  std::vector<std::string> x_names_;
  std::vector<std::string> z_names_;
  std::optional<double> horizon_;
};

/// Reads a header-first, comma-separated file. Errors name the 1-based data row
/// and the column.
SurvivalDataset load_csv(const std::filesystem::path& path, const ColumnMapping& columns);

/// Writes time, status, x..., z... at round-trip precision.
void write_csv(const SurvivalDataset& ds, const std::filesystem::path& path,
               const std::string& time_name = "time", const std::string& status_name = "status");

/// Validates tau against the follow-up and records it on a copy of `ds`.
/// Rows are never dropped; estimators apply I(y < tau) themselves.
SurvivalDataset truncate_to_horizon(const SurvivalDataset& ds, double tau);

}  // namespace survproj
