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

#include "fairpp/grid.hpp"

#include <vector>

#include "gtest/gtest.h"

namespace fairpp {
namespace {

TEST(GridTest, MidpointsOnUnitInterval) {
  const Grid g(0, 1, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.midpoint(0), 0.125);
  EXPECT_DOUBLE_EQ(g.midpoint(1), 0.375);
  EXPECT_DOUBLE_EQ(g.midpoint(2), 0.625);
  EXPECT_DOUBLE_EQ(g.midpoint(3), 0.875);
}

TEST(GridTest, SingleBin) {
  const Grid g(0, 1, 1);
  EXPECT_DOUBLE_EQ(g.midpoint(0), 0.5);
  EXPECT_EQ(g.Discretize(-3.0), 0u);
  EXPECT_EQ(g.Discretize(7.0), 0u);
}

TEST(GridTest, MidpointsIncludeLowerOffset) {
  const Grid g(1, 4, 3);
  EXPECT_DOUBLE_EQ(g.midpoint(0), 1.5);
  EXPECT_DOUBLE_EQ(g.midpoint(1), 2.5);
  EXPECT_DOUBLE_EQ(g.midpoint(2), 3.5);
}

TEST(GridTest, RejectsBadConstruction) {
  EXPECT_THROW(
      {
        try {
          Grid(1, 1, 3);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::kInvalidInterval);
          throw;
        }
      },
      Error);
  EXPECT_THROW(Grid(2, 1, 3), Error);
  try {
    Grid(0, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidBins);
  }
}

TEST(GridTest, DiscretizeNearestMidpoint) {
  const Grid g(0, 1, 4);
  EXPECT_EQ(g.Discretize(0.2), 0u);
  EXPECT_EQ(g.Discretize(0.25), 0u);  // tie between 0.125 and 0.375
  EXPECT_EQ(g.Discretize(0.5), 1u);   // tie between 0.375 and 0.625
  EXPECT_EQ(g.Discretize(0.75), 2u);
  EXPECT_EQ(g.Discretize(1.7), 3u);
  EXPECT_EQ(g.Discretize(-0.4), 0u);
}

TEST(GridTest, TieBreaksLowOnOffsetGrids) {
  const Grid g(1, 4, 3);
  EXPECT_EQ(g.Discretize(2.0), 0u);
  EXPECT_EQ(g.Discretize(3.0), 1u);
}

TEST(GridTest, DisplacementBoundAndMonotonicity) {
  for (std::size_t k : {1u, 2u, 3u, 7u, 36u, 180u}) {
    const Grid g(-0.3, 2.9, k);
    std::size_t previous = 0;
    for (int i = 0; i <= 5000; ++i) {
      const double y = -0.3 + 3.2 * i / 5000.0;
      const std::size_t j = g.Discretize(y);
      ASSERT_LT(j, k);
      EXPECT_LE(std::abs(g.midpoint(j) - y), g.length() / (2.0 * k) + 1e-12) << "k=" << k << " y=" << y;
      EXPECT_GE(j, previous);
      previous = j;
    }
  }
}

TEST(GridTest, MidpointsStrictlyInside) {
  const Grid g(-2, 5, 11);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_GT(g.midpoint(j), g.lower());
    EXPECT_LT(g.midpoint(j), g.upper());
    if (j > 0) {
      EXPECT_LT(g.midpoint(j - 1), g.midpoint(j));
    }
  }
}

}  // namespace
}  // namespace fairpp
