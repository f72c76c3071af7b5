// Copyright 2026 The hcontent Authors
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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hcontent/choquet.hpp"
#include "hcontent/testbed.hpp"

namespace hcontent {
namespace {

// For the unit radial bump {u > t} is the ball of radius 1 - t, so
// int u dH^d = int_0^1 (1 - t)^d dt = 1 / (1 + d).
TEST(Choquet, RadialBumpBracketsClosedForm) {
  const ScalarField u = radial_bump(2, 1.0, 64);
  for (double d : {1.0, 1.5, 2.0}) {
    const ChoquetBracket b = choquet_integral(u, d);
    EXPECT_LE(b.lower, 1.0 / (1.0 + d)) << "delta " << d;
    EXPECT_GE(b.upper, 1.0 / (1.0 + d)) << "delta " << d;
  }
}

TEST(Choquet, IndicatorMatchesContentBracket) {
  const Grid g = make_cube_grid(2, -1.25, 1.25, 48);
  const DiscreteSet e = ball_cells(g, {0.0, 0.0, 0.0}, 0.7);
  const ChoquetBracket b = choquet_integral(indicator(e, 2.0), 1.0);
  const ContentBracket c = content_bracket(e, 1.0);
  EXPECT_NEAR(b.lower, 2.0 * c.lower, 1e-12);
  EXPECT_NEAR(b.upper, 2.0 * c.upper, 1e-12);
}

TEST(Choquet, PositivelyHomogeneous) {
  const ScalarField u = random_bump_sum(make_cube_grid(2, -1.0, 1.0, 32), 3, 4);
  const ChoquetBracket a = choquet_integral(u, 2.0);
  const ChoquetBracket b = choquet_integral(scale_field(u, 3.0), 2.0);
  EXPECT_NEAR(b.lower, 3.0 * a.lower, 1e-9 * a.lower);
  EXPECT_NEAR(b.upper, 3.0 * a.upper, 1e-9 * a.upper);
}

TEST(Choquet, ZeroFieldIntegratesToZero) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 16);
  const ScalarField z(g, std::vector<double>(static_cast<std::size_t>(g.size()), 0.0));
  const ChoquetBracket b = choquet_integral(z, 1.0);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
}

TEST(Choquet, FinerLadderNeverWidensBracket) {
  const ScalarField u = radial_bump(2, 1.0, 64);
  ChoquetOptions coarse, fine;
  coarse.ladder = 8;
  fine.ladder = 16;
  const ChoquetBracket a = choquet_integral(u, 1.0, coarse);
  const ChoquetBracket b = choquet_integral(u, 1.0, fine);
  EXPECT_GE(b.lower, a.lower * (1.0 - 1e-12));
  EXPECT_LE(b.upper, a.upper * (1.0 + 1e-12));
}

TEST(Ladder, NestedAndCapped) {
  const ScalarField u = radial_bump(2, 1.0, 64);
  const ThresholdLadder a = make_ladder(u, 8);
  const ThresholdLadder b = make_ladder(u, 16);
  EXPECT_EQ(a.policy, "subsampled");
  EXPECT_EQ(a.levels.size(), 9u);
  EXPECT_DOUBLE_EQ(a.levels.back(), u.max_value());
  for (double t : a.levels) {
    EXPECT_TRUE(std::find(b.levels.begin(), b.levels.end(), t) != b.levels.end()) << t;
  }
  EXPECT_THROW(make_ladder(u, 1), ValidationError);
}

TEST(Ladder, AllValuesWhenFew) {
  const Grid g = make_cube_grid(1, 0.0, 1.0, 4);  // boundary cells must be 0
  const ScalarField f(g, {0.0, 2.0, 1.0, 0.0});
  const ThresholdLadder l = make_ladder(f, 16);
  EXPECT_EQ(l.policy, "all-values");
  EXPECT_EQ(l.levels, (std::vector<double>{0.0, 1.0, 2.0}));  // zeros dropped
}

TEST(Choquet, WorkersDoNotChangeResult) {
  const ScalarField u = random_bump_sum(make_cube_grid(2, -1.0, 1.0, 48), 3, 9);
  ChoquetOptions one, two;
  two.workers = 2;
  const ChoquetBracket a = choquet_integral(u, 1.0, one);
  const ChoquetBracket b = choquet_integral(u, 1.0, two);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
}

TEST(Choquet, CacheSharedAcrossCalls) {
  ContentCache cache;
  ChoquetOptions o;
  o.cache = &cache;
  const ScalarField u = radial_bump(2, 1.0, 48);
  const ChoquetBracket a = choquet_integral(u, 1.0, o);
  const std::size_t stored = cache.size();
  const ChoquetBracket b = choquet_integral(u, 1.0, o);
  EXPECT_EQ(cache.size(), stored);
  EXPECT_GE(cache.hits(), stored);
  EXPECT_EQ(a.upper, b.upper);
}

TEST(DimensionChange, HoldsOnBumpSums) {
  for (std::uint64_t seed : {1u, 2u}) {
    const ScalarField u = random_bump_sum(make_cube_grid(2, -1.0, 1.0, 32), 3, seed);
    for (auto [d1, d2] : {std::pair{1.0, 2.0}, std::pair{0.5, 1.5}}) {
      const DimensionChangeReport r = dimension_change_check(u, d1, d2);
      EXPECT_TRUE(r.passed) << "seed " << seed << " d1 " << d1;
      EXPECT_NEAR(r.factor, std::pow(d2 / d1, 1.0 / d2), 1e-15);
    }
  }
}

TEST(DimensionChange, RejectsBadOrder) {
  const ScalarField u = radial_bump(2, 1.0, 32);
  EXPECT_THROW(dimension_change_check(u, 2.0, 1.0), ValidationError);
  EXPECT_THROW(dimension_change_check(u, 1.0, 2.5), ValidationError);
}

TEST(Sublinearity, BumpPairWithinCap) {
  const Grid g = make_cube_grid(2, -1.0, 1.0, 48);
  const std::vector<ScalarField> fs{random_bump_sum(g, 1, 11), random_bump_sum(g, 2, 12)};
  const SublinearityReport r = sublinearity_check(fs, 1.5);
  EXPECT_TRUE(r.passed) << r.ratio;
  EXPECT_GT(r.ratio, 0.0);
}

TEST(Sublinearity, NeedsSharedGrid) {
  const std::vector<ScalarField> fs{radial_bump(2, 1.0, 32), radial_bump(2, 1.0, 40)};
  EXPECT_THROW(sublinearity_check(fs, 1.0), ValidationError);
}

TEST(Fatou, IncreasingTruncationsOfBump) {
  const ScalarField u = radial_bump(2, 1.0, 48);
  std::vector<ScalarField> seq;
  for (double b : {0.25, 0.5, 0.75}) seq.push_back(truncate(u, 0.0, b));  // min(u, b)
  seq.push_back(u);
  const FatouReport r = fatou_consistency_check(seq, 1.0);
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.elements.size(), 4u);
  for (std::size_t i = 1; i < r.elements.size(); ++i) {
    EXPECT_GE(r.elements[i].upper, r.elements[i - 1].lower);
  }
}

TEST(Fatou, RejectsDecreasingSequence) {
  const ScalarField u = radial_bump(2, 1.0, 32);
  const std::vector<ScalarField> seq{u, scale_field(u, 0.5)};
  EXPECT_THROW(fatou_consistency_check(seq, 1.0), ValidationError);
}

}  // namespace
}  // namespace hcontent
