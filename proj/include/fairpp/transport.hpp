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

#ifndef FAIRPP_TRANSPORT_HPP_
#define FAIRPP_TRANSPORT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "fairpp/barycenter_lp.hpp"
#include "fairpp/dp_estimation.hpp"
#include "fairpp/errors.hpp"
#include "fairpp/grid.hpp"
#include "fairpp/matrix.hpp"
#include "fairpp/random.hpp"

namespace fairpp {

// Per-group randomized post-processing maps. Row j of group a's kernel is
// the distribution of the output bin given input bin j.
struct TransportKernels {
  std::vector<Matrix> kernels;

  std::size_t num_groups() const { return kernels.size(); }
  std::size_t num_bins() const { return kernels.empty() ? 0 : kernels.front().rows(); }
  const Matrix& operator[](std::size_t a) const { return kernels[a]; }
};

// Conditions each coupling on its input bin. Bins the group's distribution
// never visits map to themselves.
inline TransportKernels ExtractKernels(const BarycenterSolution& sol,
                                       const PrivateGroupDists& dists) {
  if (sol.couplings.size() != dists.num_groups()) {
    throw Error(ErrorKind::kMismatchedLength, "solution and distributions disagree on group count");
  }
  TransportKernels out;
  for (std::size_t a = 0; a < dists.num_groups(); ++a) {
    const Matrix& coupling = sol.couplings[a];
    const std::size_t k = coupling.rows();
    Matrix kernel(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      const double mass = dists.pmfs[a][j];
      const double row_total = coupling.RowSum(j);
      if (mass > 0.0 && row_total > 0.0) {
        // Normalizing by the realized row total instead of the pmf entry
        // removes the float drift between the two.
        for (std::size_t l = 0; l < k; ++l) kernel(j, l) = coupling(j, l) / row_total;
      } else {
        kernel(j, j) = 1.0;
      }
    }
    out.kernels.push_back(std::move(kernel));
  }
  return out;
}

inline TransportKernels IdentityKernels(std::size_t groups, std::size_t bins) {
  return TransportKernels{std::vector<Matrix>(groups, Matrix::Identity(bins))};
}

// Output distribution of group a's kernel applied to input distribution p.
inline std::vector<double> PushForward(const TransportKernels& kern, std::size_t a,
                                       std::span<const double> p) {
  const Matrix& kernel = kern[a];
  if (p.size() != kernel.rows()) {
    throw Error(ErrorKind::kMismatchedLength, "distribution does not match the kernel");
  }
  std::vector<double> out(kernel.cols(), 0.0);
  for (std::size_t j = 0; j < kernel.rows(); ++j) {
    if (p[j] == 0.0) continue;
    for (std::size_t l = 0; l < kernel.cols(); ++l) out[l] += p[j] * kernel(j, l);
  }
  return out;
}

// Draws an output bin from row j by inverse CDF on one uniform.
inline std::size_t ApplySample(const TransportKernels& kern, std::size_t a, std::size_t j,
                               RandomStream& rng) {
  const Matrix& kernel = kern[a];
  const double u = rng.Uniform();
  double cumulative = 0.0;
  std::size_t last_positive = j;
  for (std::size_t l = 0; l < kernel.cols(); ++l) {
    const double mass = kernel(j, l);
    if (mass <= 0.0) continue;
    cumulative += mass;
    last_positive = l;
    if (u < cumulative) return l;
  }
  // Rounding left u above the final cumulative sum.
  return last_positive;
}

// Deterministic alternative: the mean output value of row j. The output
// distribution is no longer the fitted target, so the statistical parity
// guarantee does NOT hold in this mode.
inline double BarycentricProjection(const TransportKernels& kern, std::size_t a, std::size_t j,
                                    const Grid& grid) {
  const Matrix& kernel = kern[a];
  double value = 0.0;
  for (std::size_t l = 0; l < kernel.cols(); ++l) value += kernel(j, l) * grid.midpoint(l);
  return value;
}

}  // namespace fairpp

#endif  // FAIRPP_TRANSPORT_HPP_
