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

// Test functions and sets: tents, radial bumps, sums of bumps, a
// four-corner Cantor set with capacitary potentials, truncation and the
// staircase partition of a monotone function.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hcontent/error.hpp"
#include "hcontent/grid.hpp"

namespace hcontent {

namespace detail {
inline double norm(const Point& p, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += p[k] * p[k];
  return std::sqrt(s);
}
}  // namespace detail

// ---------------------------------------------------------------- tent

struct TentSpec {
  double r = 0.25;
  int cells = 256;          // per axis
  double half_width = 1.0;  // grid is [-half_width, half_width]^2
};

inline Grid tent_grid(const TentSpec& s) { return make_cube_grid(2, -s.half_width, s.half_width, s.cells); }

// u_r = 1/r on B(0,r), 0 outside B(0,2r), radially linear in between, with
// the exact gradient 1/r^2 on the annulus.
inline ScalarField tent2d(const TentSpec& s) {
  if (!(s.r > 0.0 && s.r < 1.0)) throw ValidationError("tent radius r must lie in (0, 1)");
  const Grid g = tent_grid(s);
  if (g.h > s.r / 8.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "tent with r = " << s.r << " is under-resolved: h = " << g.h << " > r/8";
    throw ValidationError(os.str());
  }
  detail::require(2.0 * s.r + g.h < s.half_width, "tent support must stay inside the grid");
  const double r = s.r;
  return sample_field(
      g,
      [r](const Point& p) {
        const double d = detail::norm(p, 2);
        if (d < r) return 1.0 / r;
        if (d < 2.0 * r) return (2.0 * r - d) / (r * r);
        return 0.0;
      },
      [r](const Point& p) {
        const double d = detail::norm(p, 2);
        return d > r && d < 2.0 * r ? 1.0 / (r * r) : 0.0;
      });
}

// Exact int |grad u_r| dx = area of the annulus / r^2.
inline constexpr double kTentGradientIntegral = 3.0 * 3.14159265358979323846;

// ---------------------------------------------------------------- bumps

// u(x) = height * max(0, 1 - |x - center| / R) with exact gradient height/R
// on the support.
inline ScalarField radial_bump(const Grid& g, double R, const Point& center = {0.0, 0.0, 0.0},
                               double height = 1.0) {
  detail::require(R > 0.0 && height > 0.0, "bump radius and height must be positive");
  detail::require(R >= 4.0 * g.h, "bump radius must span at least 4 cells");
  auto dist = [&g, center](const Point& p) {
    Point d{0.0, 0.0, 0.0};
    for (int k = 0; k < g.n; ++k) d[k] = p[k] - center[k];
    return detail::norm(d, g.n);
  };
  return sample_field(
      g, [&](const Point& p) { return height * std::max(0.0, 1.0 - dist(p) / R); },
      [&](const Point& p) { return dist(p) < R ? height / R : 0.0; });
}

// Radial bump on [-1.25R, 1.25R]^n with `cells` per axis.
inline ScalarField radial_bump(int n, double R, int cells = 256) {
  return radial_bump(make_cube_grid(n, -1.25 * R, 1.25 * R, cells), R);
}

struct Bump {
  Point center{};
  double radius = 0.0;
  double height = 0.0;
};

// Random bumps whose supports stay inside the middle 80% of the grid box.
inline std::vector<Bump> random_bumps(const Grid& g, int count, std::uint64_t seed,
                                      double rmin = 0.15, double rmax = 0.45) {
  detail::require(count >= 1, "need at least one bump");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double half = 0.5 * g.extent();
  std::vector<Bump> out;
  for (int i = 0; i < count; ++i) {
    Bump b;
    b.radius = (rmin + (rmax - rmin) * unit(rng)) * half;
    const double room = 0.8 * half - b.radius;
    detail::require(room > 0.0, "bump radius range too large for the grid");
    for (int k = 0; k < g.n; ++k) b.center[k] = g.lo[k] + half + room * (2.0 * unit(rng) - 1.0);
    b.height = 0.5 + unit(rng);
    out.push_back(b);
  }
  return out;
}

// Sum of bumps with the exact gradient magnitude (the gradient vectors are
// summed before taking the norm).
inline ScalarField bump_sum(const Grid& g, std::span<const Bump> bumps) {
  std::vector<double> v(static_cast<std::size_t>(g.size()), 0.0);
  std::vector<double> grad(v.size(), 0.0);
  for (CellIndex i = 0; i < g.size(); ++i) {
    const Point p = g.center(i);
    Point gv{0.0, 0.0, 0.0};
    for (const Bump& b : bumps) {
      Point d{0.0, 0.0, 0.0};
      for (int k = 0; k < g.n; ++k) d[k] = p[k] - b.center[k];
      const double r = detail::norm(d, g.n);
      if (r >= b.radius) continue;
      v[i] += b.height * (1.0 - r / b.radius);
      if (r > 0.0) {
        for (int k = 0; k < g.n; ++k) gv[k] -= b.height / b.radius * d[k] / r;
      }
    }
    grad[i] = detail::norm(gv, g.n);
  }
  return ScalarField(g, std::move(v), std::move(grad), GradientSource::kAnalytic);
}

inline ScalarField random_bump_sum(const Grid& g, int count, std::uint64_t seed) {
  const std::vector<Bump> b = random_bumps(g, count, seed);
  return bump_sum(g, b);
}

// ---------------------------------------------------------------- Cantor

// Four-corner Cantor iterate in [0,1]^2: every level-(j-1) square of side
// l_{j-1} keeps four corner squares of side l_j, l_0 = 1. The level-k grid
// has h = l_k / cells_per_side, so every square of every level lies on cell
// boundaries.
struct CantorSpec {
  int level = 1;
  std::vector<double> sides;  // l_1 .. l_k; empty selects l_j = 4^-j / j
  double collar = 0.0;        // collar width; 0 selects l_k
  int cells_per_side = 3;     // cells across a level-k square
};

inline double default_cantor_side(int j) { return std::ldexp(1.0, -2 * j) / j; }

struct CantorGeometry {
  Grid grid;
  std::vector<MultiIndex> corners;  // lower-left cell of every level-k square
  int side_cells = 0;
  int collar_cells = 0;
  double side = 0.0;
  double collar = 0.0;
};

inline CantorGeometry cantor_geometry(const CantorSpec& spec) {
  const int k = spec.level;
  detail::require(k >= 1, "Cantor level must be >= 1");
  detail::require(spec.cells_per_side >= 1, "Cantor cells_per_side must be >= 1");
  std::vector<double> l{1.0};
  if (spec.sides.empty()) {
    for (int j = 1; j <= k; ++j) l.push_back(default_cantor_side(j));
  } else {
    detail::require(static_cast<int>(spec.sides.size()) >= k, "Cantor side list shorter than the level");
    l.insert(l.end(), spec.sides.begin(), spec.sides.begin() + k);
  }
  for (int j = 1; j <= k; ++j) {
    detail::require(l[j] > 0.0 && l[j] < 0.5 * l[j - 1], "Cantor sides must satisfy l_j < l_{j-1}/2");
  }
  const double w = spec.collar > 0.0 ? spec.collar : l[k];
  const double gap = l[k - 1] - 2.0 * l[k];
  if (2.0 * w > gap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "Cantor collars overlap: width " << w << " exceeds half the gap " << gap;
    throw ValidationError(os.str());
  }
  const double h = l[k] / spec.cells_per_side;
  auto cells_of = [h](double x, const char* what) {
    const double c = x / h;
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-9 * std::max(1.0, c)) {
      std::ostringstream os;
      os << "Cantor " << what << " " << x << " is not a whole number of cells of width " << h;
      throw ValidationError(os.str());
    }
    return static_cast<int>(r);
  };
  std::vector<int> side_cells(k + 1);
  for (int j = 0; j <= k; ++j) side_cells[j] = cells_of(l[j], "side");
  const int collar_cells = cells_of(w, "collar");
  const int pad = collar_cells + 2;
  const std::int64_t cells = static_cast<std::int64_t>(side_cells[0]) + 2 * pad;
  if (cells > (std::int64_t{1} << 15)) throw CapacityError("Cantor grid too large");
  CantorGeometry geo;
  geo.grid = make_cube_grid(2, -pad * h, 1.0 + pad * h, static_cast<int>(cells));
  geo.side_cells = side_cells[k];
  geo.collar_cells = collar_cells;
  geo.side = l[k];
  geo.collar = w;
  std::vector<MultiIndex> cur{{pad, pad, 0}};
  for (int j = 1; j <= k; ++j) {
    std::vector<MultiIndex> next;
    next.reserve(cur.size() * 4);
    const int off = side_cells[j - 1] - side_cells[j];
    for (const MultiIndex& c : cur) {
      for (int dx : {0, off}) {
        for (int dy : {0, off}) next.push_back({c[0] + dx, c[1] + dy, 0});
      }
    }
    cur.swap(next);
  }
  std::sort(cur.begin(), cur.end());
  geo.corners = std::move(cur);
  return geo;
}

inline DiscreteSet cantor_set(const CantorSpec& spec) {
  const CantorGeometry geo = cantor_geometry(spec);
  std::vector<CellIndex> out;
  out.reserve(geo.corners.size() * geo.side_cells * geo.side_cells);
  for (const MultiIndex& c : geo.corners) {
    for (int i = 0; i < geo.side_cells; ++i) {
      for (int j = 0; j < geo.side_cells; ++j) out.push_back(geo.grid.ravel({c[0] + i, c[1] + j, 0}));
    }
  }
  return DiscreteSet(geo.grid, std::move(out));
}

// phi_k = max(0, 1 - dist_inf(x, E_k) / w): 1 on the level-k squares and
// linear across a collar of width w measured in the max-norm, so
// |grad phi_k| = 1/w exactly on the collar. int |grad phi_k| = 4^k 4 (l_k + w).
inline ScalarField cantor_capacitary(const CantorSpec& spec) {
  const CantorGeometry geo = cantor_geometry(spec);
  const Grid& g = geo.grid;
  std::vector<double> v(static_cast<std::size_t>(g.size()), 0.0);
  std::vector<double> grad(v.size(), 0.0);
  const int s = geo.side_cells;
  const int c = geo.collar_cells;
  for (const MultiIndex& q : geo.corners) {
    for (int i = -c; i < s + c; ++i) {
      for (int j = -c; j < s + c; ++j) {
        // Max-norm distance from the cell centre to the square, in cells.
        const double dx = std::max({0.0, -(i + 0.5), i + 0.5 - s});
        const double dy = std::max({0.0, -(j + 0.5), j + 0.5 - s});
        const double d = std::max(dx, dy);
        const double val = std::max(0.0, 1.0 - d / c);
        const CellIndex idx = g.ravel({q[0] + i, q[1] + j, 0});
        if (val > v[idx]) {
          v[idx] = val;
          grad[idx] = (d > 0.0 && val > 0.0) ? 1.0 / geo.collar : 0.0;
        }
      }
    }
  }
  return ScalarField(g, std::move(v), std::move(grad), GradientSource::kAnalytic);
}

inline double cantor_gradient_integral_exact(const CantorSpec& spec) {
  const CantorGeometry geo = cantor_geometry(spec);
  return static_cast<double>(geo.corners.size()) * 4.0 * (geo.side + geo.collar);
}

// ---------------------------------------------------------------- truncation

// psi = 0 where f <= a, f - a where a < f < b, b - a where f >= b; the
// gradient is f's gradient on {a < f < b} and 0 elsewhere.
inline ScalarField truncate(const ScalarField& f, double a, double b) {
  if (!(a >= 0.0 && a < b)) {
    std::ostringstream os;
    os << "truncation needs 0 <= a < b; got a = " << a << ", b = " << b;
    throw ValidationError(os.str());
  }
  const auto v = f.values();
  const std::vector<double> fg = gradient_or_fd(f);
  std::vector<double> out(v.size()), grad(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= a) {
      out[i] = 0.0;
    } else if (v[i] < b) {
      out[i] = v[i] - a;
      grad[i] = fg[i];
    } else {
      out[i] = b - a;
    }
  }
  const GradientSource src = f.has_gradient() ? f.gradient_source() : GradientSource::kFiniteDifference;
  return ScalarField(f.grid(), std::move(out), std::move(grad), src);
}

// ---------------------------------------------------------------- staircase

struct StaircasePartition {
  std::vector<double> points;  // t_0 = 0 < t_1 < ...
  double eps = 0.0;
  double s = 0.0;
};

namespace detail {
inline void validate_monotone_samples(std::span<const double> t, std::span<const double> F, double s) {
  require(t.size() == F.size(), "staircase abscissae and values differ in length");
  require(!t.empty(), "staircase needs at least one sample");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(std::isfinite(t[i]) && std::isfinite(F[i]), "staircase samples must be finite");
    require(t[i] >= 0.0 && t[i] < s, "staircase samples must lie in [0, s)");
    if (i > 0) {
      require(t[i] > t[i - 1], "staircase abscissae must be strictly increasing");
      if (F[i] < F[i - 1]) {
        std::ostringstream os;
        os << "staircase function is not non-decreasing at sample " << i;
        throw ValidationError(os.str());
      }
    }
  }
}
}  // namespace detail

// Greedy partition of a sampled left-continuous non-decreasing F on [0, s):
// after t_{i-1}, the reference is F at the first sample beyond t_{i-1}, and
// t_i is the last sample whose value stays within eps of it.
inline StaircasePartition staircase(std::span<const double> t, std::span<const double> F, double eps,
                                    double s) {
  detail::require(eps > 0.0, "staircase eps must be positive");
  detail::validate_monotone_samples(t, F, s);
  StaircasePartition out;
  out.eps = eps;
  out.s = s;
  out.points.push_back(0.0);
  std::size_t j = t[0] > 0.0 ? 0 : 1;  // first sample strictly beyond t_0 = 0
  while (j < t.size()) {
    const double ref = F[j];
    std::size_t last = j;
    while (last + 1 < t.size() && F[last + 1] <= ref + eps) ++last;
    out.points.push_back(t[last]);
    j = last + 1;
  }
  return out;
}

// Largest |F(t_i) - F(t)| over samples t in (t_{i-1}, t_i], across all i.
inline double staircase_defect(std::span<const double> t, std::span<const double> F,
                               const StaircasePartition& part) {
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 1; i < part.points.size(); ++i) {
    const double lo = part.points[i - 1];
    const double hi = part.points[i];
    const auto at = std::lower_bound(t.begin(), t.end(), hi);
    detail::require(at != t.end() && *at == hi, "staircase point is not a sample");
    const double Fi = F[static_cast<std::size_t>(at - t.begin())];
    while (j < t.size() && t[j] <= lo) ++j;
    for (; j < t.size() && t[j] <= hi; ++j) worst = std::max(worst, std::abs(Fi - F[j]));
  }
  return worst;
}

}  // namespace hcontent
