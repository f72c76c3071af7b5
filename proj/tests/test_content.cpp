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
#include <numbers>
#include <random>
#include <vector>

#include "hcontent/content.hpp"

namespace hcontent {
namespace {

DiscreteSet disk(int cells, double half_box, double r = 1.0) {
  return ball_cells(make_cube_grid(2, -half_box, half_box, cells), {0.0, 0.0, 0.0}, r);
}

TEST(Content, RejectsBadDelta) {
  const DiscreteSet e = disk(16, 1.25);
  EXPECT_THROW(content_bracket(e, 0.0), ValidationError);
  EXPECT_THROW(content_bracket(e, 0.05), ValidationError);
  EXPECT_THROW(content_bracket(e, 2.5), ValidationError);
}

TEST(Content, EmptySetIsZero) {
  const DiscreteSet e(make_cube_grid(2, 0.0, 1.0, 8));
  const ContentBracket b = content_bracket(e, 1.0);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
  EXPECT_TRUE(b.exact);
}

TEST(Content, SingleCellUpperIsCircumscribedBall) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 8);
  const DiscreteSet e(g, {g.ravel({3, 4, 0})});
  for (double d : {0.5, 1.0, 2.0}) {
    const ContentBracket b = content_bracket(e, d);
    EXPECT_NEAR(b.upper, std::pow(g.h / std::sqrt(2.0), d), 1e-12);
    EXPECT_LE(b.lower, b.upper);
  }
}

TEST(Content, DiskBracketContainsRadiusPower) {
  const DiscreteSet e = disk(64, 1.25);
  for (double d : {0.5, 1.0, 2.0}) {
    const ContentBracket b = content_bracket(e, d);
    EXPECT_LE(b.lower, 1.0) << "delta " << d;
    EXPECT_GE(b.upper, 1.0) << "delta " << d;
    EXPECT_GE(b.lower, 1.0 / b.slack * (1.0 - 1e-12));
    EXPECT_TRUE(verify_cover(e, b.witness));
  }
}

TEST(Content, SmallerDiskScales) {
  const DiscreteSet e = disk(64, 0.625, 0.5);
  const ContentBracket b = content_bracket(e, 1.5);
  EXPECT_LE(b.lower, std::pow(0.5, 1.5));
  EXPECT_GE(b.upper, std::pow(0.5, 1.5));
}

// On [-2, 2]^2 at 128 cells the cell-centre disc has area above pi, so the
// volume bound alone already exceeds r^2 = 1: the bracket brackets the
// discretised set, not the continuum disc.
TEST(Content, CoarseDiscOnWideBoxOvershootsAtFullDimension) {
  const DiscreteSet e = disk(128, 2.0);
  EXPECT_GT(lebesgue_measure(e), std::numbers::pi);
  const ContentBracket b = content_bracket(e, 2.0);
  EXPECT_EQ(b.lower_method, LowerMethod::kVolumeBound);
  EXPECT_DOUBLE_EQ(b.lower, volume_lower(e));
  EXPECT_GT(b.lower, 1.0);
  EXPECT_GE(b.upper, b.lower);
}

TEST(Content, IntervalIsExactAtFullDimension) {
  const Grid g = make_cube_grid(1, 0.0, 2.0, 40);
  std::vector<CellIndex> c;
  for (int i = 10; i < 30; ++i) c.push_back(i);
  const ContentBracket b = content_bracket(DiscreteSet(g, c), 1.0);
  EXPECT_NEAR(b.lower, 0.5, 1e-12);  // length 1, radius 1/2
  EXPECT_NEAR(b.upper, 0.5, 1e-12);
}

TEST(Content, BallInThreeDimensions) {
  const DiscreteSet e = ball_cells(make_cube_grid(3, -1.25, 1.25, 24), {0.0, 0.0, 0.0}, 1.0);
  const ContentBracket b = content_bracket(e, 3.0);
  EXPECT_LE(b.lower, 1.0 + 0.05);  // cell-centre ball volume within a few percent
  EXPECT_GE(b.upper, 1.0);
  EXPECT_LE(b.upper, 1.3);
}

TEST(Content, DefaultRoundingFactor) {
  EXPECT_DOUBLE_EQ(default_rounding_factor(1), 3.0);
  EXPECT_DOUBLE_EQ(default_rounding_factor(2), 2.0 * std::sqrt(2.0));
  ContentOptions o;
  o.rounding_factor = 1.0;
  EXPECT_THROW(rounding_factor(o, 2), ValidationError);
}

TEST(Frostman, MorePhasesNeverLowerTheBound) {
  const DiscreteSet e = disk(48, 1.25);
  ContentOptions one, three;
  three.phases = 3;
  const double a = frostman_lower(e, 1.0, one).lower;
  const double b = frostman_lower(e, 1.0, three).lower;
  EXPECT_GE(b, a);
  EXPECT_LE(b, greedy_upper(e, 1.0).cost);
}

TEST(Frostman, SublevelsGiveValidBounds) {
  const DiscreteSet e = disk(48, 1.25);
  ContentOptions o;
  o.sublevels = 2;
  const FrostmanResult r = frostman_lower(e, 1.0, o);
  EXPECT_GT(r.lower, 0.0);
  EXPECT_LE(r.lower, 1.0);
  EXPECT_LE(r.rounding_factor, default_rounding_factor(2) + 1e-12);
}

// Exhaustive oracle: sets of at most 3 cells need at most 3 balls, so the
// best cover over all 1-, 2- and 3-subsets of the candidate family is the
// family optimum.
TEST(ExactSmall, MatchesExhaustiveSearchOnTinySets) {
  std::mt19937_64 rng(5);
  const Grid g = make_cube_grid(2, 0.0, 1.0, 10);
  std::uniform_int_distribution<int> pick(1, 8);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<CellIndex> c;
    const int k = 1 + trial % 3;
    for (int i = 0; i < k; ++i) c.push_back(g.ravel({pick(rng), pick(rng), 0}));
    const DiscreteSet e(g, c);
    for (double d : {1.0, 2.0}) {
      const std::vector<Ball> cand = candidate_balls(e);
      auto covers = [&](std::initializer_list<std::size_t> idx) {
        Cover cv;
        for (std::size_t i : idx) cv.balls.push_back(cand[i]);
        return verify_cover(e, cv);
      };
      double best = std::numeric_limits<double>::infinity();
      const std::size_t m = cand.size();
      for (std::size_t a = 0; a < m; ++a) {
        const double ca = std::pow(cand[a].radius, d);
        if (ca < best && covers({a})) best = ca;
        for (std::size_t b = a + 1; b < m; ++b) {
          const double cb = ca + std::pow(cand[b].radius, d);
          if (cb < best && covers({a, b})) best = cb;
          if (e.size() < 3) continue;
          for (std::size_t q = b + 1; q < m; ++q) {
            const double cq = cb + std::pow(cand[q].radius, d);
            if (cq < best && covers({a, b, q})) best = cq;
          }
        }
      }
      const ExactResult ex = exact_small(e, d);
      EXPECT_TRUE(ex.optimal);
      EXPECT_TRUE(verify_cover(e, ex.cover));
      EXPECT_NEAR(ex.cover.cost, best, 1e-12 * best);
    }
  }
}

TEST(ExactSmall, RejectsLargeSets) {
  EXPECT_THROW(exact_small(disk(64, 1.25), 1.0), ValidationError);
}

TEST(ExactSmall, SandwichedBetweenLowerAndGreedy) {
  const DiscreteSet e = disk(16, 1.25);
  ASSERT_LE(e.size(), 256u);
  for (double d : {1.0, 1.5, 2.0}) {
    const ContentBracket b = content_bracket(e, d);
    const ExactResult ex = exact_small(e, d);
    EXPECT_LE(b.lower, ex.cover.cost * (1.0 + 1e-12));
    EXPECT_LE(ex.cover.cost, greedy_upper(e, d).cost * (1.0 + 1e-12));
  }
}

TEST(Content, UnionBracketCombinesParts) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 32);
  const DiscreteSet a = ball_cells(g, {0.25, 0.25, 0.0}, 0.1);
  const DiscreteSet b = ball_cells(g, {0.75, 0.75, 0.0}, 0.1);
  const std::vector<DiscreteSet> parts{a, b};
  const ContentBracket u = content_bracket_union(parts, 1.0);
  const ContentBracket ba = content_bracket(a, 1.0);
  const ContentBracket bb = content_bracket(b, 1.0);
  EXPECT_LE(u.upper, ba.upper + bb.upper + 1e-12);
  EXPECT_GE(u.lower, std::max(ba.lower, bb.lower));
  EXPECT_TRUE(verify_cover(set_union(a, b), u.witness));
}

TEST(Content, CacheReturnsStoredBrackets) {
  ContentCache cache;
  const DiscreteSet e = disk(24, 1.25);
  const ContentBracket first = cache.get(e, 1.0);
  const ContentBracket second = cache.get(e, 1.0);
  EXPECT_EQ(cache.hits(), 1u);
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_EQ(first.lower, second.lower);
  EXPECT_EQ(first.upper, second.upper);
}

TEST(Content, RandomSetsNeverInvert) {
  std::mt19937_64 rng(17);
  const Grid g = make_cube_grid(2, 0.0, 1.0, 24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<CellIndex> c;
    for (CellIndex i = 0; i < g.size(); ++i) {
      if (u(rng) < 0.08) c.push_back(i);
    }
    const DiscreteSet e(g, c);
    for (double d : {0.5, 1.0, 1.5, 2.0}) {
      ContentBracket b;
      ASSERT_NO_THROW(b = content_bracket(e, d));
      EXPECT_LE(b.lower, b.upper);
    }
  }
}

}  // namespace
}  // namespace hcontent
