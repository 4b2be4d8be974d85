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

// Private estimation of the per-group output distributions of a regressor
// on a fixed grid: an empirical joint histogram of (group, bin), Laplace
// noise calibrated to its L1 sensitivity of 2/n, clipping of the group
// marginals, and an L-infinity isotonic projection of each group's scaled
// partial sums onto the set of valid CDFs.
//
// This is the only code on the fitting path that touches raw sample
// values. Everything downstream consumes PrivateGroupDists and so inherits
// the privacy guarantee by post-processing.

#ifndef FAIRPP_DP_ESTIMATION_HPP_
#define FAIRPP_DP_ESTIMATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fairpp/errors.hpp"
#include "fairpp/grid.hpp"
#include "fairpp/matrix.hpp"
#include "fairpp/random.hpp"
#include "fairpp/samples.hpp"

namespace fairpp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Mass per (group, bin). The empirical version is nonnegative and sums to
// one; after noise it carries no sign or sum constraint.
struct JointPmf {
  Matrix mass;

  std::size_t num_groups() const { return mass.rows(); }
  std::size_t num_bins() const { return mass.cols(); }
};

struct PrivacyParams {
  double epsilon = kInfinity;  // +inf disables noise
  std::size_t n = 0;

  void Validate() const {
    if (!(epsilon > 0.0)) {
      throw Error(ErrorKind::kInvalidParameter, "epsilon must be positive");
    }
    if (n == 0) throw Error(ErrorKind::kInvalidParameter, "sample count must be positive");
  }

  // Laplace scale for a statistic of L1 sensitivity 2/n.
  double NoiseScale() const {
    return std::isinf(epsilon) ? 0.0 : 2.0 / (static_cast<double>(n) * epsilon);
  }
};

// A valid distribution on the grid together with its CDF.
struct GroupDistribution {
  std::vector<double> cdf;
  std::vector<double> pmf;
  bool degenerate = false;  // weight was zero; pmf is the last-bin point mass
};

struct PrivateGroupDists {
  std::vector<double> weights;             // clipped group marginals, not renormalized
  std::vector<std::vector<double>> pmfs;   // per group, length k
  std::vector<std::vector<double>> cdfs;   // per group, length k

  std::size_t num_groups() const { return weights.size(); }
  std::size_t num_bins() const { return pmfs.empty() ? 0 : pmfs.front().size(); }
};

inline JointPmf EmpiricalJoint(const GroupedSamples& samples, const Grid& grid) {
  if (samples.empty()) {
    throw Error(ErrorKind::kEmptyInput, "no samples to estimate from");
  }
  samples.Validate();
  JointPmf joint{Matrix(samples.num_groups(), grid.size())};
  std::vector<std::size_t> counts(samples.num_groups() * grid.size(), 0);
  for (const Sample& s : samples.rows) {
    ++counts[s.group * grid.size() + grid.Discretize(s.score)];
  }
  const double n = static_cast<double>(samples.size());
  auto out = joint.mass.data();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / n;
  }
  return joint;
}

// Inverse CDF of Laplace(0, scale) at u in (0, 1).
inline double LaplaceQuantile(double u, double scale) {
  const double centered = u - 0.5;
  const double tail = 1.0 - 2.0 * std::abs(centered);
  const double magnitude = -scale * std::log(tail);
  return centered < 0.0 ? -magnitude : magnitude;
}

inline double SampleLaplace(RandomStream& rng, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "Laplace scale must be positive");
  }
  return LaplaceQuantile(rng.UniformOpen(), scale);
}

// Adds independent Laplace(0, 2/(n*epsilon)) noise to every cell. Draws are
// taken in row-major cell order.
inline JointPmf PrivatizeJoint(const JointPmf& joint, const PrivacyParams& params,
                               RandomStream& rng) {
  params.Validate();
  if (std::isinf(params.epsilon)) return joint;
  const double scale = params.NoiseScale();
  JointPmf noisy = joint;
  for (double& cell : noisy.mass.data()) cell += SampleLaplace(rng, scale);
  return noisy;
}

inline std::vector<double> GroupWeights(const JointPmf& joint) {
  std::vector<double> weights(joint.num_groups());
  for (std::size_t a = 0; a < joint.num_groups(); ++a) {
    weights[a] = std::max(joint.mass.RowSum(a), 0.0);
  }
  return weights;
}

// L-infinity isotonic regression of `partial_sums` followed by clipping to
// [0, 1] and pinning the last value to 1. The isotonic fit at j is the
// midpoint of the running max over the prefix [0, j] and the running min
// over the suffix [j, k).
inline std::vector<double> ProjectCdf(std::span<const double> partial_sums) {
  const std::size_t k = partial_sums.size();
  std::vector<double> suffix_min(k);
  double running = kInfinity;
  for (std::size_t j = k; j-- > 0;) {
    running = std::min(running, partial_sums[j]);
    suffix_min[j] = running;
  }
  std::vector<double> cdf(k);
  double prefix_max = -kInfinity;
  for (std::size_t j = 0; j < k; ++j) {
    prefix_max = std::max(prefix_max, partial_sums[j]);
    const double fit = 0.5 * (prefix_max + suffix_min[j]);
    cdf[j] = std::clamp(fit, 0.0, 1.0);
  }
  if (k > 0) cdf[k - 1] = 1.0;
  return cdf;
}

inline std::vector<double> CdfToPmf(std::span<const double> cdf) {
  std::vector<double> pmf(cdf.size());
  double previous = 0.0;
  for (std::size_t j = 0; j < cdf.size(); ++j) {
    pmf[j] = cdf[j] - previous;
    previous = cdf[j];
  }
  return pmf;
}

// Turns one (possibly noisy) row of the joint PMF into a valid conditional
// distribution. A zero weight leaves the scaled partial sums identically
// zero, which projects to the point mass on the last bin.
inline GroupDistribution RenormalizeCdf(std::span<const double> row, double weight) {
  if (row.empty()) throw Error(ErrorKind::kInvalidBins, "empty histogram row");
  if (!(weight >= 0.0) || std::isinf(weight)) {
    throw Error(ErrorKind::kInvalidParameter, "group weight must be finite and nonnegative");
  }
  GroupDistribution out;
  std::vector<double> partial(row.size(), 0.0);
  if (weight > 0.0) {
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      sum += row[j];
      partial[j] = sum / weight;
    }
  } else {
    out.degenerate = true;
  }
  out.cdf = ProjectCdf(partial);
  out.pmf = CdfToPmf(out.cdf);
  return out;
}

inline PrivateGroupDists EstimatePrivateDists(const GroupedSamples& samples, const Grid& grid,
                                              const PrivacyParams& params, RandomStream& rng) {
  const JointPmf empirical = EmpiricalJoint(samples, grid);
  PrivacyParams checked = params;
  checked.n = samples.size();
  const JointPmf noisy = PrivatizeJoint(empirical, checked, rng);

  PrivateGroupDists dists;
  dists.weights = GroupWeights(noisy);
  for (std::size_t a = 0; a < noisy.num_groups(); ++a) {
    GroupDistribution g = RenormalizeCdf(noisy.mass.row(a), dists.weights[a]);
    dists.pmfs.push_back(std::move(g.pmf));
    dists.cdfs.push_back(std::move(g.cdf));
  }
  return dists;
}

// Tracks which datasets have already been spent on a private fit. Each fit
// consumes the full budget; a second fit on the same dataset is refused
// unless the caller explicitly allows budget reuse.
class PrivacyBudgetLedger {
 public:
  explicit PrivacyBudgetLedger(bool allow_reuse = false) : allow_reuse_(allow_reuse) {}

  void Charge(const std::string& dataset_id, double epsilon) {
    auto [it, inserted] = spent_.try_emplace(dataset_id, 0.0);
    if (!inserted && !allow_reuse_) {
      throw Error(ErrorKind::kBudgetExhausted,
                  "dataset '" + dataset_id +
                      "' was already used for a private fit in this run; pass the "
                      "budget-reuse override to fit it again");
    }
    it->second += epsilon;
  }

  double Spent(const std::string& dataset_id) const {
    auto it = spent_.find(dataset_id);
    return it == spent_.end() ? 0.0 : it->second;
  }

 private:
  bool allow_reuse_;
  std::map<std::string, double> spent_;
};

}  // namespace fairpp

#endif  // FAIRPP_DP_ESTIMATION_HPP_
