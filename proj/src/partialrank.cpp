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

#include "survproj/partialrank.hpp"

#include "survproj/concordance.hpp"
#include "survproj/errors.hpp"
#include "survproj/normal.hpp"
#include "survproj/optim.hpp"
#include "survproj/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

namespace survproj {

namespace {

// Ordered pairs (early event j, later subject i) with delta_j = 1, y_i > y_j.
// Subjects are sorted by time, so the later subjects of each event form a
// suffix starting at first_later.
struct RankPairs {
  std::vector<Index> order;
  std::vector<Index> event_pos;
  std::vector<Index> first_later;
};

RankPairs rank_pairs(const SurvivalDataset& ds) {
  RankPairs pairs;
  const auto& y = ds.time();
  const Index n = ds.n();
  pairs.order.resize(static_cast<std::size_t>(n));
  std::iota(pairs.order.begin(), pairs.order.end(), Index{0});
  std::stable_sort(pairs.order.begin(), pairs.order.end(), [&](Index a, Index b) { return y(a) < y(b); });
  Index later = 0;
  for (Index pos = 0; pos < n; ++pos) {
    const Index j = pairs.order[static_cast<std::size_t>(pos)];
    if (ds.status()(j) == 0) continue;
    later = std::max(later, pos);
    while (later < n && !(y(pairs.order[static_cast<std::size_t>(later)]) > y(j))) ++later;
    if (later == n) break;
    pairs.event_pos.push_back(pos);
    pairs.first_later.push_back(later);
  }
  return pairs;
}

std::vector<double> sorted_risk(const RankPairs& pairs, const Eigen::VectorXd& risk) {
  std::vector<double> out(pairs.order.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = risk(pairs.order[k]);
  return out;
}

double smoothed_sum(const RankPairs& pairs, const Eigen::VectorXd& risk, double g) {
  const NormalCdfTable& cdf = NormalCdfTable::instance();
  const std::vector<double> r = sorted_risk(pairs, risk);
  const double inv = 1.0 / g;
  const std::size_t n = r.size();
  double total = 0.0;
  for (std::size_t e = 0; e < pairs.event_pos.size(); ++e) {
    const double rj = r[static_cast<std::size_t>(pairs.event_pos[e])] * inv;
    double part = 0.0;
    for (std::size_t i = static_cast<std::size_t>(pairs.first_later[e]); i < n; ++i) part += cdf(rj - r[i] * inv);
    total += part;
  }
  return total;
}

double raw_sum(const RankPairs& pairs, const Eigen::VectorXd& risk) {
  const std::vector<double> r = sorted_risk(pairs, risk);
  const std::size_t n = r.size();
  double total = 0.0;
  for (std::size_t e = 0; e < pairs.event_pos.size(); ++e) {
    const double rj = r[static_cast<std::size_t>(pairs.event_pos[e])];
    for (std::size_t i = static_cast<std::size_t>(pairs.first_later[e]); i < n; ++i) total += r[i] < rj ? 1.0 : 0.0;
  }
  return total;
}

Eigen::MatrixXd design(const SurvivalDataset& ds) {
  Eigen::MatrixXd w(ds.n(), ds.p() + ds.q());
  w.leftCols(ds.p()) = ds.x();
  if (ds.q() > 0) w.rightCols(ds.q()) = ds.z();
  return w;
}

}  // namespace

double pr_objective(const SurvivalDataset& ds, const Eigen::VectorXd& beta, const Eigen::VectorXd& gamma,
                    bool smoothed, double g) {
  if (beta.size() != ds.p() || gamma.size() != ds.q()) {
    throw ValidationError("pr_objective: coefficient lengths do not match the dataset");
  }
  if (smoothed && !(g > 0.0)) throw ValidationError("pr_objective: smoothing bandwidth must be positive");
  Eigen::VectorXd risk = ds.x() * beta;
  if (ds.q() > 0) risk += ds.z() * gamma;
  const RankPairs pairs = rank_pairs(ds);
  const double total = smoothed ? smoothed_sum(pairs, risk, g) : raw_sum(pairs, risk);
  const auto n = static_cast<double>(ds.n());
  return total / (n * (n - 1.0));
}

Eigen::VectorXd PartialRankFit::beta() const {
  Eigen::VectorXd b(eta.size() + 1);
  for (Index k = 0, e = 0; k < b.size(); ++k) b(k) = k == anchor_index ? anchor_sign : eta(e++);
  return b;
}

PartialRankFit pr_fit(const SurvivalDataset& ds, const PartialRankOptions& options, const CoxFit* init) {
  const Index n = ds.n();
  const Index p = ds.p();
  const Index q = ds.q();
  if (n < 20) throw ValidationError("pr_fit: needs at least 20 subjects, got " + std::to_string(n));

  Index anchor = 0;
  if (options.anchor) {
    anchor = *options.anchor;
    if (anchor < 0 || anchor >= p) throw ValidationError("pr_fit: anchor column out of range");
    if (!ds.x_column_is_continuous(anchor)) {
      throw ValidationError("pr_fit: anchor column '" + ds.x_names()[static_cast<std::size_t>(anchor)] +
                            "' has 10 or fewer distinct values");
    }
  } else {
    const auto first = ds.first_continuous_x();
    if (!first) throw ValidationError("pr_fit: no continuous x column (more than 10 distinct values) to anchor");
    anchor = *first;
  }

  CoxFit own;
  if (init == nullptr) {
    own = cox_fit(ds, true);
    init = &own;
  }
  if (init->beta.size() != p || init->gamma.size() != q) {
    throw ValidationError("pr_fit: initial Cox fit does not match the dataset");
  }
  const double cox_anchor = init->beta(anchor);
  const double z_ratio = std::abs(cox_anchor) / init->se(anchor);
  if (!(z_ratio >= 0.1) && !options.allow_weak_anchor) {
    std::ostringstream msg;
    msg << "pr_fit: anchor coefficient is indistinguishable from zero (|beta|/se = " << z_ratio << ")";
    throw NumericalError(msg.str());
  }
  if (cox_anchor == 0.0) throw NumericalError("pr_fit: Cox anchor coefficient is exactly zero");

  const Eigen::MatrixXd w = design(ds);
  const RankPairs pairs = rank_pairs(ds);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  const Eigen::VectorXd coef = init->coefficients();

  // Free parameters: every coefficient except the anchor.
  auto expand = [&](const Eigen::VectorXd& free, double sign) {
    Eigen::VectorXd full(p + q);
    for (Index k = 0, e = 0; k < p + q; ++k) full(k) = k == anchor ? sign : free(e++);
    return full;
  };
  auto compress = [&](const Eigen::VectorXd& full) {
    Eigen::VectorXd free(p + q - 1);
    for (Index k = 0, e = 0; k < p + q; ++k) {
      if (k != anchor) free(e++) = full(k);
    }
    return free;
  };

  double g = 0.0;
  if (options.g) {
    g = *options.g;
    if (!(g > 0.0)) throw ValidationError("pr_fit: smoothing bandwidth g must be positive");
  } else {
    const Eigen::VectorXd start = coef / cox_anchor;
    g = std::sqrt(2.0) * sample_sd(w * start) * std::cbrt(1.0 / static_cast<double>(n));
    if (!(g > 0.0)) throw NumericalError("pr_fit: starting risk index has zero spread");
  }

  std::vector<double> signs{1.0};
  if (cox_anchor < 0.0) signs.push_back(-1.0);

  PartialRankFit best;
  bool have_best = false;
  for (std::size_t c = 0; c < signs.size(); ++c) {
    const double sign = signs[c];
    auto objective = [&](const Eigen::VectorXd& free) {
      const Eigen::VectorXd risk = w * expand(free, sign);
      return -smoothed_sum(pairs, risk, g) * scale;
    };
    Eigen::VectorXd x = compress(coef * (sign / cox_anchor));
    const double start_value = -objective(x);
    NelderMeadResult run = nelder_mead(objective, x);
    int evaluations = run.evaluations;
    NelderMeadResult top = run;
    std::mt19937_64 rng = make_stream(options.seed, StreamPurpose::restart, c);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int r = 0; r < options.restarts; ++r) {
      Eigen::VectorXd perturbed = top.x;
      for (Index k = 0; k < perturbed.size(); ++k) {
        perturbed(k) += 0.1 * std::max(std::abs(perturbed(k)), 0.1) * normal(rng);
      }
      run = nelder_mead(objective, perturbed);
      evaluations += run.evaluations;
      if (run.value < top.value) top = run;
    }

    PartialRankFit fit;
    const Eigen::VectorXd full = expand(top.x, sign);
    fit.anchor_index = anchor;
    fit.anchor_sign = sign;
    fit.eta.resize(p - 1);
    for (Index k = 0, e = 0; k < p; ++k) {
      if (k != anchor) fit.eta(e++) = full(k);
    }
    fit.gamma = full.tail(q);
    fit.objective_value = -top.value;
    fit.start_objective = start_value;
    fit.g = g;
    fit.converged = top.converged;
    fit.evaluations = evaluations;
    if (!have_best || fit.objective_value > best.objective_value) {
      best = fit;
      have_best = true;
    }
  }
  return best;
}

}  // namespace survproj
