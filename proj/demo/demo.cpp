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


// Small tour: bracket the content of a disc, integrate a bump, check one
// inequality. Runs in a few seconds.

#include <cstdio>

#include "hcontent/hcontent.hpp"

int main() {
  using namespace hcontent;

  const Grid g = make_cube_grid(2, -1.25, 1.25, 64);
  const DiscreteSet disc = ball_cells(g, {0.0, 0.0, 0.0}, 1.0);
  for (double d : {1.0, 2.0}) {
    const ContentBracket b = content_bracket(disc, d);
    std::printf("H^%.1f_inf(disc): [%.4f, %.4f]  lower via %s, %zu balls in witness\n", d, b.lower, b.upper,
                to_string(b.lower_method), b.witness.balls.size());
  }

  const ScalarField u = radial_bump(2, 1.0, 64);
  const ChoquetBracket c = choquet_integral(u, 1.0);
  std::printf("int u dH^1_inf for the unit bump: [%.4f, %.4f]  (closed form 0.5)\n", c.lower, c.upper);

  const InequalityReport r = verify_superlevel(u, 0.0);
  std::printf("superlevel inequality: lhs %.4f, rhs [%.4f, %.4f], verdict %s\n", r.lhs.lower, r.rhs.lower,
              r.rhs.upper, to_string(r.verdict));

  std::printf("%s\n", to_json(c).dump().substr(0, 120).c_str());
  return 0;
}
