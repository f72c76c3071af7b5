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
#include <utility>
#include <vector>

#include "hcontent/grid.hpp"

namespace hcontent {
namespace {

TEST(Grid, CubicCellsAndIndexing) {
  const Grid g = make_cube_grid(2, -1.0, 1.0, 8);
  EXPECT_EQ(g.size(), 64);
  EXPECT_DOUBLE_EQ(g.h, 0.25);
  for (CellIndex i = 0; i < g.size(); ++i) EXPECT_EQ(g.ravel(g.unravel(i)), i);
  // Last axis fastest.
  EXPECT_EQ(g.unravel(1)[1], 1);
  const Point c = g.center(0);
  EXPECT_DOUBLE_EQ(c[0], -0.875);
  EXPECT_DOUBLE_EQ(c[1], -0.875);
}

TEST(Grid, RejectsNonCubicBox) {
  const std::vector<std::pair<double, double>> box{{0.0, 1.0}, {0.0, 2.0}};
  EXPECT_THROW(make_grid(2, box, 16), ValidationError);
}

TEST(Grid, RejectsOversizedGrid) { EXPECT_THROW(make_cube_grid(3, 0.0, 1.0, 1024), CapacityError); }

TEST(ScalarField, RejectsNegativeAndNonFinite) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 4);
  std::vector<double> v(16, 0.0);
  v[5] = -1.0;
  EXPECT_THROW(ScalarField(g, v), ValidationError);
  v[5] = std::nan("");
  EXPECT_THROW(ScalarField(g, v), ValidationError);
}

TEST(ScalarField, RequiresZeroBoundaryLayer) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 4);
  std::vector<double> v(16, 0.0);
  v[5] = 1.0;  // interior
  EXPECT_NO_THROW(ScalarField(g, v));
  v[0] = 1.0;  // corner
  EXPECT_THROW(ScalarField(g, v), ValidationError);
}

TEST(Superlevel, StrictAndClosedDiffer) {
  const Grid g = make_cube_grid(1, 0.0, 1.0, 6);
  const ScalarField f(g, {0.0, 0.5, 1.0, 0.5, 0.25, 0.0});
  EXPECT_EQ(superlevel(f, 0.5).size(), 1u);
  EXPECT_EQ(superlevel_closed(f, 0.5).size(), 3u);
  EXPECT_TRUE(superlevel(f, 0.5).is_subset_of(superlevel_closed(f, 0.5)));
  EXPECT_EQ(superlevel(f, 0.0).size(), 4u);
}

TEST(Superlevel, NestedInThreshold) {
  const Grid g = make_cube_grid(2, -1.0, 1.0, 32);
  const ScalarField f = sample_field(g, [](const Point& p) { return std::max(0.0, 0.8 - std::hypot(p[0], p[1])); });
  for (double t = 0.0; t < 0.8; t += 0.1) EXPECT_TRUE(superlevel(f, t + 0.1).is_subset_of(superlevel(f, t)));
}

TEST(Integrals, MidpointRule) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 10);
  std::vector<double> v(100, 0.0);
  for (int i = 1; i < 9; ++i)
    for (int j = 1; j < 9; ++j) v[i * 10 + j] = 2.0;
  const ScalarField f(g, v);
  EXPECT_NEAR(lebesgue_integral(f), 2.0 * 0.64, 1e-12);
}

TEST(Integrals, ConeGradientMatchesAnalytic) {
  // u = max(0, 1 - |x|): |grad u| = 1 on the unit disc, integral pi.
  const Grid g = make_cube_grid(2, -1.25, 1.25, 256);
  const ScalarField u = sample_field(g, [](const Point& p) { return std::max(0.0, 1.0 - std::hypot(p[0], p[1])); });
  const ScalarField d = fd_gradient(u);
  EXPECT_EQ(d.gradient_source(), GradientSource::kFiniteDifference);
  EXPECT_NEAR(gradient_integral(d), std::numbers::pi, 0.03 * std::numbers::pi);
}

TEST(Integrals, FdGradientOfLinearRampIsExact) {
  const Grid g = make_cube_grid(1, 0.0, 1.0, 20);
  std::vector<double> v(20, 0.0);
  for (int i = 2; i < 18; ++i) v[i] = 0.1 * i;  // slope 0.1 per cell = 2 per unit
  const ScalarField d = fd_gradient(ScalarField(g, v));
  for (int i = 4; i < 16; ++i) EXPECT_NEAR(d.gradient()[i], 2.0, 1e-12);
}

TEST(Sets, BallCellsApproximateArea) {
  const Grid g = make_cube_grid(2, -1.25, 1.25, 256);
  const DiscreteSet b = ball_cells(g, {0.0, 0.0, 0.0}, 1.0);
  EXPECT_NEAR(lebesgue_measure(b), std::numbers::pi, 0.01);
}

TEST(Sets, UnionAndBlocks) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 8);
  const DiscreteSet a = block_cells(g, {1, 1, 0}, {2, 2, 1});
  const DiscreteSet b = block_cells(g, {2, 2, 0}, {2, 2, 1});
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(set_union(a, b).size(), 7u);
  EXPECT_TRUE(a.is_subset_of(set_union(a, b)));
}

TEST(Fields, PowScaleAddIndicator) {
  const Grid g = make_cube_grid(1, 0.0, 1.0, 5);
  const ScalarField f(g, {0.0, 2.0, 3.0, 4.0, 0.0}, std::vector<double>{0.0, 1.0, 1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(pow_field(f, 2.0).values()[2], 9.0);
  EXPECT_FALSE(pow_field(f, 2.0).has_gradient());
  const ScalarField s = scale_field(f, 0.5);
  EXPECT_DOUBLE_EQ(s.values()[3], 2.0);
  EXPECT_DOUBLE_EQ(s.gradient()[1], 0.5);
  const std::vector<ScalarField> both{f, f};
  EXPECT_DOUBLE_EQ(add_fields(both).values()[1], 4.0);
  const ScalarField ind = indicator(superlevel(f, 2.5), 7.0);
  EXPECT_DOUBLE_EQ(ind.values()[1], 0.0);
  EXPECT_DOUBLE_EQ(ind.values()[2], 7.0);
}

TEST(Geometry, UnitBallVolumes) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-15);
}

}  // namespace
}  // namespace hcontent
