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
#include <string>
#include <vector>

#include "hcontent/verify.hpp"

namespace hcontent {
namespace {

constexpr double kPi = std::numbers::pi;

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(Params, PsWindow) {
  const InequalityParams q = ps_params(2, 1.5, 1.0, 0.0);
  EXPECT_NEAR(q.lhs_power, 3.0, 1e-15);
  EXPECT_EQ(q.content_dim, 1.5);
  // p must exceed delta/n = 0.75 ... printed with the bound
  EXPECT_NE(message_of([] { ps_params(2, 1.5, 0.5, 0.0); }).find("0.75"), std::string::npos);
  EXPECT_THROW(ps_params(2, 1.5, 1.5, 0.0), ValidationError);
  EXPECT_THROW(ps_params(2, 1.5, 1.45, 0.0), ValidationError);  // above 0.95 delta
  EXPECT_THROW(ps_params(2, 1.5, 1.0, 1.0), ValidationError);
  EXPECT_THROW(ps_params(1, 1.0, 0.5, 0.0), ValidationError);
}

TEST(Params, LimitWindowEdge) {
  // n = 3, kappa = 0.75: the edge (n-1)/(1-kappa/n) = 8/3.
  const std::string m = message_of([] { limit_params(3, 2.5, 0.75); });
  EXPECT_NE(m.find("2.66667"), std::string::npos) << m;
  EXPECT_NO_THROW(limit_params(3, 8.0 / 3.0, 0.75));
  EXPECT_THROW(limit_params(2, 2.5, 0.0), ValidationError);
}

TEST(Params, SpwExponents) {
  const InequalityParams q = spw_params(2, 0.5);
  EXPECT_NEAR(q.lhs_power, 1.5, 1e-15);
  EXPECT_NEAR(q.content_dim, 1.5, 1e-15);
  EXPECT_THROW(spw_params(2, 1.5), ValidationError);
}

TEST(Verdict, DefaultCaps) {
  EXPECT_EQ(default_cap(Theorem::kPS), 4.0);
  EXPECT_EQ(default_cap(Theorem::kSuperlevel), 1.0);
  EXPECT_TRUE(std::isinf(default_cap(Theorem::kCantorBlowup)));
}

TEST(Spw, BumpConsistent) {
  const ScalarField u = radial_bump(2, 1.0, 96);
  const InequalityReport r = verify_spw(u, 0.0);
  EXPECT_EQ(r.verdict, Verdict::kConsistent);
  EXPECT_NEAR(r.rhs.lower, kPi, 0.03 * kPi);
  for (const SubCheck& c : r.checks) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_EQ(r.checks.size(), 2u);
}

TEST(Ps, BumpConsistent) {
  const ScalarField u = radial_bump(2, 1.0, 64);
  const InequalityReport r = verify_ps(u, ps_params(2, 1.5, 1.0, 0.0));
  EXPECT_NE(r.verdict, Verdict::kViolation);
  EXPECT_LE(r.ratio.lower, r.ratio.upper);
  EXPECT_THROW(verify_ps(radial_bump(3, 1.0, 16), ps_params(2, 1.5, 1.0, 0.0)), ValidationError);
}

TEST(Limit, BumpConsistent) {
  const InequalityReport r = verify_limit(radial_bump(2, 1.0, 64), 2.0, 0.0);
  EXPECT_NE(r.verdict, Verdict::kViolation);
}

// Radial bump, a = 1/4, b = 3/4, kappa = 0: {u >= 3/4} is the disc of
// radius 1/4 with H^2 content 1/16, so LHS = (1/2)(1/16)^(1/2) = 1/8; the
// RHS is the annulus 1/4 < |x| < 3/4 with |grad u| = 1, area pi/2.
TEST(Ko, RadialBumpClosedForm) {
  const ScalarField u = radial_bump(2, 1.0, 128);
  const InequalityReport r = verify_ko_lemma(u, 0.25, 0.75, 0.0);
  EXPECT_LE(r.lhs.lower, 0.125 * 1.02);
  EXPECT_GE(r.lhs.upper, 0.125 * 0.98);
  EXPECT_NEAR(r.rhs.lower, kPi / 2.0, 0.03 * kPi / 2.0);
  EXPECT_EQ(r.verdict, Verdict::kConsistent);
  for (const SubCheck& c : r.checks) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_THROW(verify_ko_lemma(u, 0.75, 0.25, 0.0), ValidationError);
  EXPECT_THROW(verify_ko_lemma(u, 0.25, 1.5, 0.0), ValidationError);
}

TEST(Superlevel, ZeroFieldRejected) {
  const Grid g = make_cube_grid(2, 0.0, 1.0, 16);
  const ScalarField z(g, std::vector<double>(static_cast<std::size_t>(g.size()), 0.0));
  EXPECT_THROW(verify_superlevel(z, 0.0), ValidationError);
}

// {u >= u(x)} is the disc of radius |x|, whose H^(2-k) content raised to
// 1/(2-k) is |x|. With |grad u| = 1 the RHS is int_{|x|<1} dx/|x| = 2 pi for
// both kappa.
TEST(Superlevel, RadialBumpBracketsTwoPi) {
  const ScalarField u = radial_bump(2, 1.0, 96);
  for (double kappa : {0.0, 0.5}) {
    const InequalityReport r = verify_superlevel(u, kappa);
    EXPECT_LE(r.rhs.lower, 2.0 * kPi) << kappa;
    EXPECT_GE(r.rhs.upper, 2.0 * kPi) << kappa;
    EXPECT_NE(r.verdict, Verdict::kViolation);
  }
}

TEST(Fit, LogLogExactPowerLaw) {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  const SlopeFit f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, -1.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.half_width, 0.0, 1e-9);
  EXPECT_THROW(fit_loglog(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}), ValidationError);
}

TEST(Sweep, TentRejectsUnresolvedRadii) {
  const std::vector<double> r{0.25, 0.125, 0.0625};
  const std::string m = message_of([&] { sharpness_tent(0.0, 2.0, r, {}, 128); });
  EXPECT_NE(m.find("dropped r = 0.0625"), std::string::npos) << m;
  EXPECT_THROW(sharpness_tent(0.0, 2.0, std::vector<double>{0.25, 0.0625, 0.125}), ValidationError);
}

TEST(Sweep, CantorRejectsDeltaOutsideWindow) {
  const std::vector<int> k{1, 2, 3};
  EXPECT_THROW(cantor_blowup(1.0, 1.0, k), ValidationError);
  EXPECT_THROW(cantor_blowup(0.05, 1.0, k), ValidationError);
}

}  // namespace
}  // namespace hcontent
