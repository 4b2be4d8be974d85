// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Distances between distributions on a common grid, the exact 1-D optimal
// transport under squared cost, and the evaluation statistics (MSE and the
// statistical-parity gap).

#ifndef FAIRPP_METRICS_HPP_
#define FAIRPP_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fairpp/errors.hpp"
#include "fairpp/grid.hpp"
#include "fairpp/matrix.hpp"

namespace fairpp {

namespace internal {

inline void RequireSameLength(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kMismatchedLength,
                "distributions have " + std::to_string(p.size()) + " and " +
                    std::to_string(q.size()) + " bins");
  }
}

}  // namespace internal

// Kolmogorov-Smirnov distance: largest gap between the two CDFs.
inline double KsDistance(std::span<const double> p, std::span<const double> q) {
  internal::RequireSameLength(p, q);
  double gap = 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    gap += p[j] - q[j];
    worst = std::max(worst, std::abs(gap));
  }
  return worst;
}

inline double L1Distance(std::span<const double> p, std::span<const double> q) {
  internal::RequireSameLength(p, q);
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) total += std::abs(p[j] - q[j]);
  return total;
}

inline double LinfDistance(std::span<const double> p, std::span<const double> q) {
  internal::RequireSameLength(p, q);
  double worst = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) worst = std::max(worst, std::abs(p[j] - q[j]));
  return worst;
}

struct TransportPlan {
  double cost = 0.0;
  Matrix coupling;
};

// Squared transport cost of a coupling on the grid.
inline double TransportCost(const Matrix& coupling, const Grid& grid) {
  double cost = 0.0;
  for (std::size_t j = 0; j < coupling.rows(); ++j) {
    for (std::size_t l = 0; l < coupling.cols(); ++l) {
      const double d = grid.midpoint(j) - grid.midpoint(l);
      cost += d * d * coupling(j, l);
    }
  }
  return cost;
}

// The monotone (quantile) coupling of p and q, built by walking both
// distributions left to right and matching mass greedily. In one dimension
// with a convex cost this coupling is optimal, so its cost is W2^2(p, q).
// When both current masses run out together, both cursors advance.
inline Matrix MonotoneCoupling(std::span<const double> p, std::span<const double> q) {
  internal::RequireSameLength(p, q);
  const std::size_t k = p.size();
  Matrix coupling(k, k);
  std::size_t i = 0;
  std::size_t j = 0;
  double left = k > 0 ? std::max(p[0], 0.0) : 0.0;
  double right = k > 0 ? std::max(q[0], 0.0) : 0.0;
  while (i < k && j < k) {
    if (left <= 0.0) {
      if (++i < k) left = std::max(p[i], 0.0);
      continue;
    }
    if (right <= 0.0) {
      if (++j < k) right = std::max(q[j], 0.0);
      continue;
    }
    const double moved = std::min(left, right);
    coupling(i, j) += moved;
    if (left == right) {
      left = 0.0;
      right = 0.0;
    } else if (left < right) {
      left = 0.0;
      right -= moved;
    } else {
      right = 0.0;
      left -= moved;
    }
  }
  return coupling;
}

inline TransportPlan W2SqMonotone(std::span<const double> p, std::span<const double> q,
                                  const Grid& grid) {
  internal::RequireSameLength(p, q);
  if (p.size() != grid.size()) {
    throw Error(ErrorKind::kMismatchedLength, "distribution does not match the grid");
  }
  TransportPlan plan;
  plan.coupling = MonotoneCoupling(p, q);
  plan.cost = TransportCost(plan.coupling, grid);
  return plan;
}

// Histogram of `values` on the grid, normalized. Empty input yields zeros.
inline std::vector<double> EmpiricalPmf(std::span<const double> values, const Grid& grid) {
  std::vector<double> pmf(grid.size(), 0.0);
  if (values.empty()) return pmf;
  std::vector<std::size_t> counts(grid.size(), 0);
  for (double v : values) ++counts[grid.Discretize(v)];
  const double n = static_cast<double>(values.size());
  for (std::size_t j = 0; j < pmf.size(); ++j) pmf[j] = static_cast<double>(counts[j]) / n;
  return pmf;
}

// Statistical-parity gap: the largest pairwise KS distance between the
// per-group output distributions, binned on `grid`. Empty groups are left
// out of the comparison.
inline double DeltaSp(const std::vector<std::vector<double>>& outputs_by_group,
                      const Grid& grid) {
  std::vector<std::vector<double>> pmfs;
  for (const auto& outputs : outputs_by_group) {
    if (!outputs.empty()) pmfs.push_back(EmpiricalPmf(outputs, grid));
  }
  if (pmfs.empty()) {
    throw Error(ErrorKind::kEmptyInput, "every group is empty");
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < pmfs.size(); ++a) {
    for (std::size_t b = a + 1; b < pmfs.size(); ++b) {
      worst = std::max(worst, KsDistance(pmfs[a], pmfs[b]));
    }
  }
  return worst;
}

inline double Mse(std::span<const double> predictions, std::span<const double> labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorKind::kMismatchedLength,
                std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) throw Error(ErrorKind::kEmptyInput, "no predictions");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double d = predictions[i] - labels[i];
    total += d * d;
  }
  return total / static_cast<double>(labels.size());
}

}  // namespace fairpp

#endif  // FAIRPP_METRICS_HPP_
