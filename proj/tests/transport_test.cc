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

#include "fairpp/transport.hpp"

#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace fairpp {
namespace {

PrivateGroupDists MakeDists(std::vector<double> weights, std::vector<std::vector<double>> pmfs) {
  PrivateGroupDists d;
  d.weights = std::move(weights);
  d.pmfs = std::move(pmfs);
  for (const auto& p : d.pmfs) {
    std::vector<double> cdf(p.size());
    double run = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) cdf[j] = (run += p[j]);
    d.cdfs.push_back(cdf);
  }
  return d;
}

std::vector<double> RandomPmf(std::size_t k, RandomStream& rng) {
  std::vector<double> p(k);
  double total = 0.0;
  for (double& v : p) {
    v = rng.Uniform() < 0.3 ? 0.0 : rng.Uniform();
    total += v;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    return p;
  }
  for (double& v : p) v /= total;
  return p;
}

TEST(ExtractKernelsTest, SingleCellCouplingAndUnvisitedRows) {
  BarycenterSolution sol;
  Matrix pi(3, 3);
  pi(0, 1) = 1.0;
  sol.couplings = {pi};
  const auto d = MakeDists({1.0}, {{1, 0, 0}});
  const auto kern = ExtractKernels(sol, d);
  const Matrix& m = kern[0];
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_EQ(m(1, 1), 1.0);
  EXPECT_EQ(m(2, 2), 1.0);
  EXPECT_EQ(m.RowSum(1), 1.0);
  EXPECT_EQ(m.RowSum(2), 1.0);
}

TEST(ExtractKernelsTest, FromTheEndpointsLp) {
  const auto d = MakeDists({0.5, 0.5}, {{1, 0, 0}, {0, 0, 1}});
  const auto kern = ExtractKernels(ComputeBarycenter(d, Grid(0, 1, 3), 0.0), d);
  EXPECT_NEAR(kern[0](0, 1), 1.0, 1e-12);
  EXPECT_EQ(kern[0](1, 1), 1.0);
  EXPECT_EQ(kern[0](2, 2), 1.0);
  EXPECT_NEAR(kern[1](2, 1), 1.0, 1e-12);
  EXPECT_EQ(kern[1](0, 0), 1.0);
}

TEST(ExtractKernelsTest, IdentityCouplingsGiveIdentityKernels) {
  const auto d = MakeDists({0.5, 0.5}, {{0.2, 0.8, 0}, {0, 0.5, 0.5}});
  const auto kern = ExtractKernels(IdentitySolution(d), d);
  for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(kern[a], Matrix::Identity(3));
}

TEST(ExtractKernelsTest, ZeroMassRowIsIdentityWhateverTheCoupling) {
  BarycenterSolution sol;
  Matrix pi(2, 2);
  pi(0, 0) = 0.5;
  pi(1, 0) = 1e-14;  // dust in a row the pmf says is empty
  sol.couplings = {pi};
  const auto kern = ExtractKernels(sol, MakeDists({1.0}, {{1.0, 0.0}}));
  EXPECT_EQ(kern[0](1, 0), 0.0);
  EXPECT_EQ(kern[0](1, 1), 1.0);
}

TEST(ExtractKernelsTest, GroupCountMismatch) {
  BarycenterSolution sol;
  EXPECT_THROW(ExtractKernels(sol, MakeDists({1.0}, {{1.0}})), Error);
}

TEST(PushForwardTest, Examples) {
  const auto id = IdentityKernels(1, 3);
  const std::vector<double> p{0.2, 0.3, 0.5};
  EXPECT_EQ(PushForward(id, 0, p), p);

  TransportKernels kern{{Matrix(2, 2)}};
  kern.kernels[0](0, 0) = 0.25;
  kern.kernels[0](0, 1) = 0.75;
  kern.kernels[0](1, 1) = 1.0;
  const auto row = PushForward(kern, 0, std::vector<double>{1.0, 0.0});
  EXPECT_EQ(row, (std::vector<double>{0.25, 0.75}));
  EXPECT_THROW(PushForward(kern, 0, std::vector<double>{1.0}), Error);
}

TEST(TransportInvariantTest, RowStochasticExactPushForwardOrderedRows) {
  RandomStream rng(71);
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 1 + rng.UniformIndex(8);
    const std::size_t groups = 1 + rng.UniformIndex(3);
    std::vector<double> w;
    std::vector<std::vector<double>> pmfs;
    for (std::size_t a = 0; a < groups; ++a) {
      w.push_back(0.1 + rng.Uniform());
      pmfs.push_back(RandomPmf(k, rng));
    }
    const auto d = MakeDists(w, pmfs);
    const double alpha = std::vector<double>{0.0, 0.1, 0.3}[rng.UniformIndex(3)];
    const auto sol = ComputeBarycenter(d, Grid(0, 1, k), alpha);
    const auto kern = ExtractKernels(sol, d);
    for (std::size_t a = 0; a < groups; ++a) {
      const Matrix& m = kern[a];
      for (std::size_t j = 0; j < k; ++j) {
        EXPECT_NEAR(m.RowSum(j), 1.0, 1e-12);
        for (std::size_t l = 0; l < k; ++l) EXPECT_GE(m(j, l), 0.0);
      }
      const auto pushed = PushForward(kern, a, d.pmfs[a]);
      for (std::size_t l = 0; l < k; ++l) EXPECT_NEAR(pushed[l], sol.targets[a][l], 1e-9);
      // Cumulative rows are ordered for rows that carry mass.
      for (std::size_t j = 0; j < k; ++j) {
        if (d.pmfs[a][j] <= 0.0) continue;
        for (std::size_t j2 = j + 1; j2 < k; ++j2) {
          if (d.pmfs[a][j2] <= 0.0) continue;
          double c1 = 0.0;
          double c2 = 0.0;
          for (std::size_t l = 0; l < k; ++l) {
            c1 += m(j, l);
            c2 += m(j2, l);
            EXPECT_GE(c1, c2 - 1e-9);
          }
        }
      }
    }
  }
}

TEST(ApplySampleTest, DeterministicRows) {
  RandomStream rng(1);
  const auto id = IdentityKernels(1, 4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ApplySample(id, 0, 2, rng), 2u);
  TransportKernels kern{{Matrix(3, 3)}};
  kern.kernels[0](0, 1) = 1.0;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ApplySample(kern, 0, 0, rng), 1u);
}

TEST(ApplySampleTest, MonteCarloFrequencies) {
  TransportKernels kern{{Matrix(3, 3)}};
  kern.kernels[0](0, 0) = 0.5;
  kern.kernels[0](0, 1) = 0.5;
  RandomStream rng(2024);
  std::vector<double> freq(3, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) freq[ApplySample(kern, 0, 0, rng)] += 1.0 / n;
  EXPECT_NEAR(freq[0], 0.5, 0.01);
  EXPECT_NEAR(freq[1], 0.5, 0.01);
  EXPECT_EQ(freq[2], 0.0);
}

TEST(ApplySampleTest, SameStreamSameDraws) {
  TransportKernels kern{{Matrix(2, 2)}};
  kern.kernels[0](0, 0) = 0.3;
  kern.kernels[0](0, 1) = 0.7;
  RandomStream r1(8);
  RandomStream r2(8);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(ApplySample(kern, 0, 0, r1), ApplySample(kern, 0, 0, r2));
}

TEST(BarycentricProjectionTest, MeanOfRow) {
  TransportKernels kern{{Matrix(3, 3)}};
  kern.kernels[0](0, 0) = 0.5;
  kern.kernels[0](0, 2) = 0.5;
  const Grid g(0, 3, 3);
  EXPECT_DOUBLE_EQ(BarycentricProjection(kern, 0, 0, g), 1.5);
}

}  // namespace
}  // namespace fairpp
