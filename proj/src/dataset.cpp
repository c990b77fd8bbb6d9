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

#include "survproj/dataset.hpp"

#include "survproj/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace survproj {

namespace {

std::vector<std::string> default_names(const std::string& prefix, Index count) {
  std::vector<std::string> names;
  for (Index k = 0; k < count; ++k) names.push_back(prefix + std::to_string(k + 1));
  return names;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double-quoted fields may contain commas; "" is an
// escaped quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(trim(field));
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

void fnv_mix(std::uint64_t& h, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < bytes; ++k) {
    h ^= p[k];
    h *= 1099511628211ULL;
  }
}

}  // namespace

SurvivalDataset::SurvivalDataset(Eigen::VectorXd time, Eigen::VectorXi status, Eigen::MatrixXd x,
                                 Eigen::MatrixXd z, std::vector<std::string> x_names,
                                 std::vector<std::string> z_names)
    : time_(std::move(time)),
      status_(std::move(status)),
      x_(std::move(x)),
      z_(std::move(z)),
      x_names_(std::move(x_names)),
      z_names_(std::move(z_names)) {
  const Index rows = time_.size();
  if (rows < 2) throw ValidationError("dataset needs at least 2 subjects, got " + std::to_string(rows));
  if (status_.size() != rows || x_.rows() != rows || (z_.size() > 0 && z_.rows() != rows)) {
    throw ValidationError("time, status, x and z must have the same number of rows");
  }
  if (z_.size() == 0) z_.resize(rows, 0);
  if (x_.cols() < 1) throw ValidationError("dataset needs at least one conventional (x) covariate");
  if (x_names_.empty()) x_names_ = default_names("x", x_.cols());
  if (z_names_.empty()) z_names_ = default_names("z", z_.cols());
  if (static_cast<Index>(x_names_.size()) != x_.cols() ||
      static_cast<Index>(z_names_.size()) != z_.cols()) {
    throw ValidationError("covariate name count does not match covariate columns");
  }
  for (Index i = 0; i < rows; ++i) {
    const std::string where = "row " + std::to_string(i + 1);
    if (!std::isfinite(time_(i)) || time_(i) <= 0.0) {
      throw ValidationError(where + ": time must be finite and > 0");
    }
    if (status_(i) != 0 && status_(i) != 1) {
      throw ValidationError(where + ": status must be 0 or 1");
    }
    for (Index k = 0; k < x_.cols(); ++k) {
      if (!std::isfinite(x_(i, k))) throw ValidationError(where + ": non-finite value in '" + x_names_[k] + "'");
    }
    for (Index k = 0; k < z_.cols(); ++k) {
      if (!std::isfinite(z_(i, k))) throw ValidationError(where + ": non-finite value in '" + z_names_[k] + "'");
    }
  }
  if (status_.sum() < 1) throw ValidationError("dataset has no events");
}

SurvivalDataset SurvivalDataset::from_subjects(const std::vector<Subject>& subjects,
                                               std::vector<std::string> x_names,
                                               std::vector<std::string> z_names) {
  const auto rows = static_cast<Index>(subjects.size());
  if (rows == 0) throw ValidationError("no subjects");
  const Index p = subjects.front().x.size();
  const Index q = subjects.front().z.size();
  Eigen::VectorXd time(rows);
  Eigen::VectorXi status(rows);
  Eigen::MatrixXd x(rows, p);
  Eigen::MatrixXd z(rows, q);
  for (Index i = 0; i < rows; ++i) {
    const Subject& s = subjects[static_cast<std::size_t>(i)];
    if (s.x.size() != p || s.z.size() != q) {
      throw ValidationError("row " + std::to_string(i + 1) + ": covariate dimensions differ from row 1");
    }
    time(i) = s.time;
    status(i) = s.status;
    x.row(i) = s.x.transpose();
    if (q > 0) z.row(i) = s.z.transpose();
  }
  return SurvivalDataset(std::move(time), std::move(status), std::move(x), std::move(z),
                         std::move(x_names), std::move(z_names));
}

Subject SurvivalDataset::subject(Index i) const {
  return Subject{time_(i), status_(i), x_.row(i).transpose(), z_.row(i).transpose()};
}

bool SurvivalDataset::x_column_is_continuous(Index col) const {
  std::set<double> distinct;
  for (Index i = 0; i < n(); ++i) {
    distinct.insert(x_(i, col));
    if (distinct.size() > 10) return true;
  }
  return false;
}

std::optional<Index> SurvivalDataset::first_continuous_x() const {
  for (Index k = 0; k < p(); ++k) {
    if (x_column_is_continuous(k)) return k;
  }
  return std::nullopt;
}

SurvivalDataset SurvivalDataset::resample(std::span<const Index> rows) const {
  const auto m = static_cast<Index>(rows.size());
  Eigen::VectorXd time(m);
  Eigen::VectorXi status(m);
  Eigen::MatrixXd x(m, p());
  Eigen::MatrixXd z(m, q());
  for (Index r = 0; r < m; ++r) {
    const Index i = rows[static_cast<std::size_t>(r)];
    time(r) = time_(i);
    status(r) = status_(i);
    x.row(r) = x_.row(i);
    z.row(r) = z_.row(i);
  }
  SurvivalDataset out(std::move(time), std::move(status), std::move(x), std::move(z), x_names_, z_names_);
  out.horizon_ = horizon_;
  return out;
}

SurvivalDataset SurvivalDataset::without_z() const {
  SurvivalDataset out(time_, status_, x_, Eigen::MatrixXd(n(), 0), x_names_, {});
  out.horizon_ = horizon_;
  return out;
}

SurvivalDataset SurvivalDataset::with_z_zeroed() const {
  SurvivalDataset out(time_, status_, x_, Eigen::MatrixXd::Zero(n(), q()), x_names_, z_names_);
  out.horizon_ = horizon_;
  return out;
}

SurvivalDataset SurvivalDataset::with_horizon(double tau) const {
  SurvivalDataset out = *this;
  out.horizon_ = tau;
  return out;
}

std::uint64_t SurvivalDataset::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  fnv_mix(h, time_.data(), sizeof(double) * static_cast<std::size_t>(time_.size()));
  fnv_mix(h, status_.data(), sizeof(int) * static_cast<std::size_t>(status_.size()));
  fnv_mix(h, x_.data(), sizeof(double) * static_cast<std::size_t>(x_.size()));
  fnv_mix(h, z_.data(), sizeof(double) * static_cast<std::size_t>(z_.size()));
  if (horizon_) fnv_mix(h, &*horizon_, sizeof(double));
  return h;
}

SurvivalDataset load_csv(const std::filesystem::path& path, const ColumnMapping& columns) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + path.string() + "' is empty");
  if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_record(line);

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t k = 0; k < header.size(); ++k) position.emplace(header[k], k);
  auto locate = [&](const std::string& name) {
    const auto it = position.find(name);
    if (it == position.end()) {
      throw ValidationError("'" + path.string() + "': missing column '" + name + "'");
    }
    return it->second;
  };
  if (columns.time.empty() || columns.status.empty()) {
    throw ValidationError("column mapping must name the time and status columns");
  }
  if (columns.x.empty()) throw ValidationError("column mapping must name at least one x column");
  const std::size_t time_col = locate(columns.time);
  const std::size_t status_col = locate(columns.status);
  std::vector<std::size_t> x_cols, z_cols;
  for (const auto& name : columns.x) x_cols.push_back(locate(name));
  for (const auto& name : columns.z) z_cols.push_back(locate(name));

  std::vector<double> time;
  std::vector<int> status;
  std::vector<double> xv, zv;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> cells = split_record(line);
    const std::string where = "'" + path.string() + "' row " + std::to_string(row);
    if (cells.size() != header.size()) {
      throw ValidationError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(cells.size()));
    }
    auto cell = [&](std::size_t col) {
      const std::string& text = cells[col];
      const auto value = parse_double(text);
      if (!value) {
        throw ValidationError(where + ", column '" + header[col] + "': " +
                              (text.empty() || text == "NA" ? "missing value" : "non-numeric value '" + text + "'"));
      }
      if (!std::isfinite(*value)) {
        throw ValidationError(where + ", column '" + header[col] + "': non-finite value");
      }
      return *value;
    };
    const double t = cell(time_col);
    if (t <= 0.0) throw ValidationError(where + ", column '" + header[time_col] + "': time must be > 0");
    const double d = cell(status_col);
    if (d != 0.0 && d != 1.0) {
      throw ValidationError(where + ", column '" + header[status_col] + "': status must be 0 or 1, got " +
                            cells[status_col]);
    }
    time.push_back(t);
    status.push_back(static_cast<int>(d));
    for (auto col : x_cols) xv.push_back(cell(col));
    for (auto col : z_cols) zv.push_back(cell(col));
  }

  const auto n = static_cast<Index>(time.size());
  const auto p = static_cast<Index>(x_cols.size());
  const auto q = static_cast<Index>(z_cols.size());
  Eigen::MatrixXd x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      xv.data(), n, p);
  Eigen::MatrixXd z(n, q);
  if (q > 0) {
    z = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(zv.data(), n, q);
  }
  return SurvivalDataset(Eigen::Map<const Eigen::VectorXd>(time.data(), n),
                         Eigen::Map<const Eigen::VectorXi>(status.data(), n), std::move(x), std::move(z),
                         columns.x, columns.z);
}

void write_csv(const SurvivalDataset& ds, const std::filesystem::path& path, const std::string& time_name,
               const std::string& status_name) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << time_name << ',' << status_name;
  for (const auto& name : ds.x_names()) out << ',' << name;
  for (const auto& name : ds.z_names()) out << ',' << name;
  out << '\n';
  char buffer[64];
  auto put = [&](double v) {
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    out.write(buffer, ptr - buffer);
  };
  for (Index i = 0; i < ds.n(); ++i) {
    put(ds.time()(i));
    out << ',' << ds.status()(i);
    for (Index k = 0; k < ds.p(); ++k) {
      out << ',';
      put(ds.x()(i, k));
    }
    for (Index k = 0; k < ds.q(); ++k) {
      out << ',';
      put(ds.z()(i, k));
    }
    out << '\n';
  }
}

SurvivalDataset truncate_to_horizon(const SurvivalDataset& ds, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be a finite positive time");
  if (tau > ds.max_time()) {
    std::ostringstream msg;
    msg << "tau = " << tau << " exceeds the maximum observed time " << ds.max_time();
    throw ValidationError(msg.str());
  }
  return ds.with_horizon(tau);
}

}  // namespace survproj
