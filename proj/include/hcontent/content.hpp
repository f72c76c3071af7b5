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

// Certified brackets for the delta-dimensional Hausdorff content
//
//   H^delta_inf(E) = inf { sum_i r_i^delta : E subset of union_i B(x_i, r_i) }
//
// of a DiscreteSet E, read as the union of its closed cells.
//
// Upper bounds come from explicit ball covers drawn from a finite candidate
// family (greedy weighted set cover, optionally improved by branch and bound
// on small sets). Every cover is a witness: any cover bounds the infimum.
//
// Lower bounds come from packing measures. A measure mu spread uniformly
// over the cells of E with mu(B(x, r)) <= C r^delta for every ball gives
// H^delta_inf(E) >= mu(E) / C. Checking all balls is replaced by a finite
// constraint family: row j has radius a_j = alpha 2^(j/L) cells on a lattice
// of spacing s_j = 2^floor(j/L), and a ball of radius r in (a_{j-1}, a_j]
// sits inside some B(c, rho_j), rho_j = a_j + s_j sqrt(n) / 2. So
// mu(B(c, rho_j)) <= rho_j^delta gives mu(B(x, r)) <= (sigma r)^delta with
// sigma = 2^(1/L) (1 + sqrt(n) / (2 alpha)); alpha is solved from sigma.
// Small balls are handled by a per-cell density cap, balls above the top
// row pay at least a_J^delta on their own. sigma is the rounding factor and
// sigma^delta the slack printed with every bracket. When delta = n the
// volume bound |E| / |B(0,1)| is used as well.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "hcontent/error.hpp"
#include "hcontent/grid.hpp"
#include "hcontent/packing.hpp"

namespace hcontent {

inline constexpr double kMinContentDimension = 0.1;
// Node budget of the standalone exact search. Brackets use the smaller
// ContentOptions::exact_budget since their search only tightens the upper end.
inline constexpr std::size_t kExactSmallBudget = 100000;

struct Ball {
  Point center{};
  double radius = 0.0;
};

struct Cover {
  std::vector<Ball> balls;
  double cost = 0.0;
  double delta = 1.0;
};

inline double cover_cost(std::span<const Ball> balls, double delta) {
  double c = 0.0;
  for (const Ball& b : balls) c += std::pow(b.radius, delta);
  return c;
}

enum class LowerMethod { kFrostmanLP, kVolumeBound, kExact };
enum class UpperMethod { kGreedy, kExactSmall, kSingleBall, kUnion, kExact };

inline const char* to_string(LowerMethod m) {
  switch (m) {
    case LowerMethod::kFrostmanLP:
      return "frostman-LP";
    case LowerMethod::kVolumeBound:
      return "volume-bound";
    default:
      return "exact";
  }
}

inline const char* to_string(UpperMethod m) {
  switch (m) {
    case UpperMethod::kGreedy:
      return "greedy";
    case UpperMethod::kExactSmall:
      return "exact-small";
    case UpperMethod::kSingleBall:
      return "single-ball";
    case UpperMethod::kUnion:
      return "union";
    default:
      return "exact";
  }
}

struct ContentOptions {
  // Rounding factor sigma of the packing family; 0 selects the default
  // (2 sqrt(n) for n >= 2, 3 for n = 1).
  double rounding_factor = 0.0;
  // Also solve the packing program when delta = n (the volume bound is
  // usually far stronger there).
  bool frostman_at_full_dimension = false;
  bool use_exact_small = true;
  std::size_t exact_cap = 256;
  std::size_t exact_budget = 20000;
  bool verify_witness = true;
  // Radius steps per octave in the packing family.
  int sublevels = 1;
  // Packing families tried, with alpha stepped by 2^(1/phases) per family.
  int phases = 1;
  // Also try coarse lattices moved by half a spacing (2^n variants).
  bool lattice_shifts = false;
};

inline double default_rounding_factor(int n) { return n >= 2 ? 2.0 * std::sqrt(double(n)) : 3.0; }

inline double rounding_factor(const ContentOptions& o, int n) {
  const double s = o.rounding_factor > 0.0 ? o.rounding_factor : default_rounding_factor(n);
  detail::require(s > 1.0, "rounding factor (slack base) must exceed 1");
  return s;
}

struct ContentBracket {
  double delta = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  Cover witness;
  LowerMethod lower_method = LowerMethod::kExact;
  UpperMethod upper_method = UpperMethod::kExact;
  bool exact = false;              // lower == upper is certified
  bool optimal_in_family = false;  // exact_small finished its search
  double rounding_factor = 0.0;    // sigma
  double slack = 1.0;              // sigma^delta
  double packing_mass = 0.0;       // mu(E) of the packing certificate
  double volume_bound = 0.0;       // |E| / |B(0,1)| when delta = n
  std::size_t cells = 0;
  std::vector<std::string> warnings;
};

namespace detail {

// E in integer cell coordinates.
struct LocalGeometry {
  int n = 2;
  double h = 1.0;
  Point lo{};
  std::vector<MultiIndex> coords;
  MultiIndex bmin{0, 0, 0};
  MultiIndex bmax{0, 0, 0};

  explicit LocalGeometry(const DiscreteSet& e) : n(e.grid().n), h(e.grid().h), lo(e.grid().lo) {
    coords.reserve(e.size());
    for (CellIndex c : e.cells()) coords.push_back(e.grid().unravel(c));
    bmin = bmax = coords.empty() ? MultiIndex{0, 0, 0} : coords.front();
    for (const MultiIndex& m : coords) {
      for (int k = 0; k < n; ++k) {
        bmin[k] = std::min(bmin[k], m[k]);
        bmax[k] = std::max(bmax[k], m[k]);
      }
    }
  }

  std::size_t size() const { return coords.size(); }

  int extent() const {
    int e = 1;
    for (int k = 0; k < n; ++k) e = std::max(e, bmax[k] - bmin[k] + 1);
    return e;
  }
};

// Distance from c (cell units) to the farthest corner of cell m.
inline double far_distance(const Point& c, const MultiIndex& m, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = std::max(std::abs(c[k] - m[k]), std::abs(c[k] - (m[k] + 1.0)));
    s += d * d;
  }
  return std::sqrt(s);
}

// Distance from c (cell units) to the nearest point of cell m.
inline double near_distance(const Point& c, const MultiIndex& m, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = std::max(0.0, std::abs(c[k] - (m[k] + 0.5)) - 0.5);
    s += d * d;
  }
  return std::sqrt(s);
}

// Calls fn(lattice multi-index) for lattice points (m + 1/2) s of a level
// whose per-axis distance to the centre of cell `cell` is at most `reach`
// (cell units).
template <typename Fn>
void for_lattice_near(const MultiIndex& cell, int n, double s, double reach, Fn&& fn) {
  MultiIndex lo{0, 0, 0}, hi{0, 0, 0};
  for (int k = 0; k < n; ++k) {
    const double q = cell[k] + 0.5;
    lo[k] = static_cast<int>(std::ceil((q - reach) / s - 0.5));
    hi[k] = static_cast<int>(std::floor((q + reach) / s - 0.5));
  }
  MultiIndex m{0, 0, 0};
  for (m[0] = lo[0]; m[0] <= hi[0]; ++m[0]) {
    for (m[1] = lo[1]; m[1] <= hi[1]; ++m[1]) {
      for (m[2] = lo[2]; m[2] <= hi[2]; ++m[2]) fn(m);
    }
  }
}

inline Point lattice_point(const MultiIndex& m, int n, double s) {
  Point c{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) c[k] = (m[k] + 0.5) * s;
  return c;
}

// Visits the lattice points (m + 1/2) s (cell units) that have member cells
// of E within `radius`, in lexicographic order of m. fn(centre, members,
// distances) receives the members sorted by distance: far-corner distance
// when `far`, nearest-point distance otherwise.
template <typename Fn>
void scan_lattice(const LocalGeometry& geo, double s, double radius, bool far, Fn&& fn,
                  const MultiIndex& shift = {0, 0, 0}) {
  const int n = geo.n;
  const std::size_t N = geo.size();
  if (N == 0) return;
  const double R = radius * (1.0 + 1e-12);
  auto dist = [far, n](const Point& c, const MultiIndex& m) {
    return far ? far_distance(c, m, n) : near_distance(c, m, n);
  };

  std::array<int, 3> llo{0, 0, 0}, len{1, 1, 1}, blen{1, 1, 1};
  for (int k = 0; k < n; ++k) {
    llo[k] = static_cast<int>(std::floor((geo.bmin[k] - shift[k] - R - 1.0) / s - 0.5));
    const int lhi = static_cast<int>(std::ceil((geo.bmax[k] - shift[k] + 2.0 + R) / s - 0.5));
    len[k] = lhi - llo[k] + 1;
    blen[k] = geo.bmax[k] - geo.bmin[k] + 1;
  }
  std::vector<char> mark(static_cast<std::size_t>(len[0]) * len[1] * len[2], 0);
  std::vector<std::int32_t> local(static_cast<std::size_t>(blen[0]) * blen[1] * blen[2], -1);
  auto lattice_slot = [&](const MultiIndex& lm) {
    return (static_cast<std::size_t>(lm[0] - llo[0]) * len[1] + (lm[1] - llo[1])) * len[2] + (lm[2] - llo[2]);
  };
  auto local_slot = [&](const MultiIndex& m) -> std::int64_t {
    std::int64_t idx = 0;
    for (int k = 0; k < 3; ++k) {
      const int o = k < n ? m[k] - geo.bmin[k] : 0;
      if (o < 0 || o >= blen[k]) return -1;
      idx = idx * blen[k] + o;
    }
    return idx;
  };
  // A lattice point is the centre of the block of cells floor(m / s); mark
  // every lattice point within reach of an occupied block.
  const int si = static_cast<int>(s);
  const int breach = static_cast<int>(std::ceil((R + 1.0 + 0.5 * s) / s));
  std::vector<char> occupied(mark.size(), 0);
  for (std::size_t c = 0; c < N; ++c) {
    const MultiIndex& m = geo.coords[c];
    local[static_cast<std::size_t>(local_slot(m))] = static_cast<std::int32_t>(c);
    MultiIndex b{0, 0, 0};
    for (int k = 0; k < n; ++k) {
      const int v = m[k] - shift[k];
      b[k] = v >= 0 ? v / si : -((-v + si - 1) / si);
    }
    occupied[lattice_slot(b)] = 1;
  }
  {
    const int r1 = n >= 2 ? breach : 0;
    const int r2 = n >= 3 ? breach : 0;
    MultiIndex b{0, 0, 0};
    for (b[0] = llo[0]; b[0] < llo[0] + len[0]; ++b[0]) {
      for (b[1] = llo[1]; b[1] < llo[1] + len[1]; ++b[1]) {
        for (b[2] = llo[2]; b[2] < llo[2] + len[2]; ++b[2]) {
          if (!occupied[lattice_slot(b)]) continue;
          MultiIndex q{0, 0, 0};
          for (q[0] = std::max(llo[0], b[0] - breach); q[0] <= std::min(llo[0] + len[0] - 1, b[0] + breach); ++q[0]) {
            for (q[1] = std::max(llo[1], b[1] - r1); q[1] <= std::min(llo[1] + len[1] - 1, b[1] + r1); ++q[1]) {
              for (q[2] = std::max(llo[2], b[2] - r2); q[2] <= std::min(llo[2] + len[2] - 1, b[2] + r2); ++q[2]) {
                mark[lattice_slot(q)] = 1;
              }
            }
          }
        }
      }
    }
  }

  // Offsets from floor(centre) to member cells; the fractional position of
  // a lattice point is the same for the whole level. Large patterns are
  // replaced by a scan over E.
  Point frac{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) frac[k] = 0.5 * s - std::floor(0.5 * s);
  const int reach = static_cast<int>(std::ceil(R)) + 1;
  const bool walk = std::pow(2.0 * reach + 1.0, n) <= 8.0 * static_cast<double>(N);
  std::vector<std::pair<double, MultiIndex>> pattern;
  if (walk) {
    MultiIndex o{0, 0, 0};
    const int r2 = n >= 2 ? reach : 0;
    const int r3 = n >= 3 ? reach : 0;
    for (o[0] = -reach; o[0] <= reach; ++o[0]) {
      for (o[1] = -r2; o[1] <= r2; ++o[1]) {
        for (o[2] = -r3; o[2] <= r3; ++o[2]) {
          const double d = dist(frac, o);
          if (d <= R) pattern.push_back({d, o});
        }
      }
    }
    std::sort(pattern.begin(), pattern.end());
  }

  std::vector<std::uint32_t> members;
  std::vector<double> dists;
  std::vector<std::pair<double, std::uint32_t>> direct;
  MultiIndex lm{0, 0, 0};
  for (lm[0] = llo[0]; lm[0] < llo[0] + len[0]; ++lm[0]) {
    for (lm[1] = llo[1]; lm[1] < llo[1] + len[1]; ++lm[1]) {
      for (lm[2] = llo[2]; lm[2] < llo[2] + len[2]; ++lm[2]) {
        if (!mark[lattice_slot(lm)]) continue;
        Point c = lattice_point(lm, n, s);
        for (int k = 0; k < n; ++k) c[k] += shift[k];
        members.clear();
        dists.clear();
        if (walk) {
          MultiIndex anchor{0, 0, 0};
          for (int k = 0; k < n; ++k) anchor[k] = static_cast<int>(std::floor(c[k]));
          for (const auto& [d, o] : pattern) {
            MultiIndex m{anchor[0] + o[0], anchor[1] + o[1], anchor[2] + o[2]};
            const std::int64_t slot = local_slot(m);
            if (slot < 0 || local[static_cast<std::size_t>(slot)] < 0) continue;
            members.push_back(static_cast<std::uint32_t>(local[static_cast<std::size_t>(slot)]));
            dists.push_back(d);
          }
        } else {
          direct.clear();
          for (std::size_t q = 0; q < N; ++q) {
            const double d = dist(c, geo.coords[q]);
            if (d <= R) direct.push_back({d, static_cast<std::uint32_t>(q)});
          }
          std::sort(direct.begin(), direct.end());
          for (const auto& [d, q] : direct) {
            members.push_back(q);
            dists.push_back(d);
          }
        }
        if (!members.empty()) fn(c, std::span<const std::uint32_t>(members), std::span<const double>(dists));
      }
    }
  }
}

}  // namespace detail

// Finite surrogate for "all balls": centres on coarsened lattices
// (m + 1/2) 2^j in cell units, nominal radii {1/sqrt2, 1, sqrt2, 2} 2^j
// (plus 2 sqrt2 at level 0), each shrunk to the tightest radius that still
// contains the same member cells. A few whole-set balls from the top
// levels and from the centre of E's bounding box complete the family.
class CandidateFamily {
 public:
  struct Candidate {
    std::uint32_t center = 0;
    std::uint32_t length = 0;  // prefix of the centre's distance-sorted list
    double radius = 0.0;       // cell units
    bool whole = false;        // covers all of E
  };

  explicit CandidateFamily(const DiscreteSet& e) : geo_(e) {
    if (geo_.size() == 0) return;
    build();
  }

  std::size_t size() const { return candidates_.size(); }
  std::size_t num_cells() const { return geo_.size(); }
  int levels() const { return levels_; }
  const Candidate& candidate(std::size_t i) const { return candidates_[i]; }

  std::span<const std::uint32_t> cells_of(std::size_t i) const {
    const Candidate& c = candidates_[i];
    if (c.whole) return all_;
    return {members_.data() + offsets_[c.center], c.length};
  }

  Ball ball(std::size_t i) const {
    const Candidate& c = candidates_[i];
    Ball b;
    for (int k = 0; k < geo_.n; ++k) b.center[k] = geo_.lo[k] + centers_[c.center][k] * geo_.h;
    b.radius = c.radius * geo_.h;
    return b;
  }

  double cost(std::size_t i, double delta) const {
    return std::pow(candidates_[i].radius * geo_.h, delta);
  }

  const detail::LocalGeometry& geometry() const { return geo_; }

 private:
  void build() {
    const int n = geo_.n;
    const std::size_t N = geo_.size();
    all_.resize(N);
    std::iota(all_.begin(), all_.end(), 0u);
    const int extent = geo_.extent();
    int top = 0;
    while ((1 << top) < extent) ++top;
    levels_ = top + 1;
    static constexpr double kMult[] = {0.70710678118654752, 1.0, 1.41421356237309505, 2.0,
                                       2.82842712474619010};

    std::vector<std::uint32_t> whole_centers;
    for (int j = 0; j <= top; ++j) {
      const double s = std::ldexp(1.0, j);
      const int nmult = j == 0 ? 5 : 4;
      const double rmax = kMult[nmult - 1] * s;
      detail::scan_lattice(geo_, s, rmax, true,
                           [&](const Point& c, std::span<const std::uint32_t> cells,
                               std::span<const double> dist) {
        const auto cid = static_cast<std::uint32_t>(centers_.size());
        centers_.push_back(c);
        offsets_.push_back(static_cast<std::uint32_t>(members_.size()));
        members_.insert(members_.end(), cells.begin(), cells.end());
        std::size_t len = 0;
        for (int t = 0; t < nmult; ++t) {
          const double r = kMult[t] * s * (1.0 + 1e-12);
          const std::size_t prev = len;
          while (len < dist.size() && dist[len] <= r) ++len;
          if (len == 0 || len == prev) continue;
          candidates_.push_back({cid, static_cast<std::uint32_t>(len), dist[len - 1], len == N});
        }
        if (j + 2 >= top) whole_centers.push_back(cid);
      });
    }
    // Whole-set balls from top-level centres inside E's bounding box and
    // from the box centre itself.
    Point mid{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) mid[k] = 0.5 * (geo_.bmin[k] + geo_.bmax[k] + 1);
    for (std::uint32_t cid : whole_centers) {
      bool inside = true;
      for (int k = 0; k < n; ++k) {
        inside = inside && centers_[cid][k] >= geo_.bmin[k] && centers_[cid][k] <= geo_.bmax[k] + 1;
      }
      if (inside) add_whole(cid);
    }
    centers_.push_back(mid);
    offsets_.push_back(static_cast<std::uint32_t>(members_.size()));
    add_whole(static_cast<std::uint32_t>(centers_.size() - 1));
  }

  void add_whole(std::uint32_t cid) {
    double r = 0.0;
    for (const MultiIndex& m : geo_.coords) r = std::max(r, detail::far_distance(centers_[cid], m, geo_.n));
    candidates_.push_back({cid, static_cast<std::uint32_t>(geo_.size()), r, true});
  }

  detail::LocalGeometry geo_;
  int levels_ = 0;
  std::vector<Point> centers_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint32_t> all_;
  std::vector<Candidate> candidates_;
};

// Candidate balls for E in deterministic order; empty when E is empty.
inline std::vector<Ball> candidate_balls(const DiscreteSet& e) {
  CandidateFamily fam(e);
  std::vector<Ball> out;
  out.reserve(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) out.push_back(fam.ball(i));
  return out;
}

// True when every member cell of e lies in some ball (closed-ball test with
// a relative tolerance).
inline bool verify_cover(const DiscreteSet& e, const Cover& cover) {
  const Grid& g = e.grid();
  const detail::LocalGeometry geo(e);
  std::vector<char> hit(geo.size(), 0);
  for (const Ball& b : cover.balls) {
    Point c{0.0, 0.0, 0.0};
    for (int k = 0; k < g.n; ++k) c[k] = (b.center[k] - g.lo[k]) / g.h;
    const double r = b.radius / g.h * (1.0 + 1e-9);
    for (std::size_t i = 0; i < geo.size(); ++i) {
      if (!hit[i] && detail::far_distance(c, geo.coords[i], g.n) <= r) hit[i] = 1;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](char x) { return x != 0; });
}

struct GreedyResult {
  Cover cover;
  std::vector<std::size_t> chosen;  // candidate indices
};

namespace detail {

inline Cover make_cover(const CandidateFamily& fam, std::span<const std::size_t> chosen,
                        double delta) {
  Cover c;
  c.delta = delta;
  for (std::size_t i : chosen) {
    c.balls.push_back(fam.ball(i));
    c.cost += fam.cost(i, delta);
  }
  return c;
}

// Lazy greedy weighted set cover: repeatedly take the candidate minimising
// cost / newly covered cells, ties to the lowest index; then drop balls
// whose cells are all covered twice, most expensive first.
inline GreedyResult greedy_cover(const CandidateFamily& fam, double delta) {
  const std::size_t N = fam.num_cells();
  std::vector<double> cost(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) cost[i] = fam.cost(i, delta);
  std::vector<char> covered(N, 0);
  std::size_t remaining = N;
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    heap.push({cost[i] / static_cast<double>(fam.cells_of(i).size()), i});
  }
  std::vector<std::size_t> chosen;
  while (remaining > 0 && !heap.empty()) {
    const auto [ratio, i] = heap.top();
    heap.pop();
    std::size_t gain = 0;
    for (std::uint32_t c : fam.cells_of(i)) gain += covered[c] ? 0 : 1;
    if (gain == 0) continue;
    const double fresh = cost[i] / static_cast<double>(gain);
    if (!heap.empty() && Entry{fresh, i} > heap.top()) {
      heap.push({fresh, i});
      continue;
    }
    chosen.push_back(i);
    for (std::uint32_t c : fam.cells_of(i)) {
      if (!covered[c]) {
        covered[c] = 1;
        --remaining;
      }
    }
  }
  // Reverse delete.
  std::vector<std::uint32_t> count(N, 0);
  for (std::size_t i : chosen) {
    for (std::uint32_t c : fam.cells_of(i)) ++count[c];
  }
  std::vector<std::size_t> order(chosen.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cost[chosen[a]] > cost[chosen[b]];
  });
  std::vector<char> keep(chosen.size(), 1);
  for (std::size_t o : order) {
    const auto cells = fam.cells_of(chosen[o]);
    if (std::all_of(cells.begin(), cells.end(), [&](std::uint32_t c) { return count[c] >= 2; })) {
      keep[o] = 0;
      for (std::uint32_t c : cells) --count[c];
    }
  }
  GreedyResult res;
  for (std::size_t o = 0; o < chosen.size(); ++o) {
    if (keep[o]) res.chosen.push_back(chosen[o]);
  }
  res.cover = make_cover(fam, res.chosen, delta);
  return res;
}

inline std::optional<std::size_t> best_single_ball(const CandidateFamily& fam) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (fam.cells_of(i).size() != fam.num_cells()) continue;
    if (!best || fam.candidate(i).radius < fam.candidate(*best).radius) best = i;
  }
  return best;
}

}  // namespace detail

inline void validate_delta(double delta, int n) {
  if (!(delta > 0.0 && delta <= n)) {
    std::ostringstream os;
    os << "content dimension delta = " << delta << " must lie in (0, n] with n = " << n;
    throw ValidationError(os.str());
  }
  if (delta < kMinContentDimension) {
    std::ostringstream os;
    os << "content dimension delta = " << delta << " is below the supported floor "
       << kMinContentDimension;
    throw ValidationError(os.str());
  }
}

// Greedy cover of E, never worse than the cheapest single candidate ball
// containing all of E.
inline Cover greedy_upper(const DiscreteSet& e, double delta) {
  validate_delta(delta, e.grid().n);
  Cover empty;
  empty.delta = delta;
  if (e.empty()) return empty;
  CandidateFamily fam(e);
  GreedyResult g = detail::greedy_cover(fam, delta);
  if (auto single = detail::best_single_ball(fam)) {
    const double c = fam.cost(*single, delta);
    if (c < g.cover.cost) {
      std::size_t one[] = {*single};
      return detail::make_cover(fam, one, delta);
    }
  }
  return g.cover;
}

struct ExactResult {
  Cover cover;
  bool optimal = false;
  std::size_t nodes = 0;
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const CandidateFamily& fam, double delta, std::size_t budget)
      : fam_(fam), budget_(budget), words_((fam.num_cells() + 63) / 64) {
    const std::size_t N = fam.num_cells();
    // Bitsets, dedupe identical sets (keep cheapest), drop dominated ones.
    struct Cand {
      std::vector<std::uint64_t> bits;
      double cost;
      std::size_t index;
      std::size_t size;
    };
    std::vector<Cand> raw;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      Cand c{std::vector<std::uint64_t>(words_, 0), fam.cost(i, delta), i, 0};
      for (std::uint32_t m : fam.cells_of(i)) c.bits[m / 64] |= std::uint64_t{1} << (m % 64);
      c.size = fam.cells_of(i).size();
      raw.push_back(std::move(c));
    }
    std::stable_sort(raw.begin(), raw.end(), [](const Cand& a, const Cand& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.size > b.size;
    });
    std::vector<char> dead(raw.size(), 0);
    for (std::size_t a = 0; a < raw.size(); ++a) {
      if (dead[a]) continue;
      for (std::size_t b = a + 1; b < raw.size(); ++b) {
        if (dead[b] || raw[b].size > raw[a].size) continue;
        // raw[a] is no more expensive; b dominated if b subset of a.
        bool subset = true;
        for (std::size_t w = 0; w < words_ && subset; ++w) subset = (raw[b].bits[w] & ~raw[a].bits[w]) == 0;
        if (subset) dead[b] = 1;
      }
    }
    for (std::size_t a = 0; a < raw.size(); ++a) {
      if (dead[a]) continue;
      bits_.push_back(std::move(raw[a].bits));
      cost_.push_back(raw[a].cost);
      index_.push_back(raw[a].index);
    }
    covering_.assign(N, {});
    for (std::size_t s = 0; s < bits_.size(); ++s) {
      for (std::size_t m = 0; m < N; ++m) {
        if (bits_[s][m / 64] >> (m % 64) & 1) covering_[m].push_back(static_cast<std::uint32_t>(s));
      }
    }
    overlap_.resize(bits_.size());
    load_.resize(bits_.size());
    banned_.assign(bits_.size(), 0);
    price_.resize(N);
  }

  ExactResult run(const Cover& incumbent_cover, std::span<const std::size_t> incumbent_choice) {
    best_cost_ = incumbent_cover.cost;
    best_choice_.assign(incumbent_choice.begin(), incumbent_choice.end());
    incumbent_is_initial_ = true;
    std::vector<std::uint64_t> uncovered(words_, 0);
    for (std::size_t m = 0; m < fam_.num_cells(); ++m) uncovered[m / 64] |= std::uint64_t{1} << (m % 64);
    std::vector<std::size_t> path;
    aborted_ = false;
    nodes_ = 0;
    search(uncovered, 0.0, path);
    ExactResult r;
    r.optimal = !aborted_;
    r.nodes = nodes_;
    r.cover = make_cover(fam_, best_choice_, incumbent_cover.delta);
    return r;
  }

 private:
  static std::size_t popcount(std::span<const std::uint64_t> b) {
    std::size_t c = 0;
    for (std::uint64_t w : b) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Dual feasible prices y_m (sum over any candidate stays within its
  // cost): start from cost / |S n U| and raise each cell by the smallest
  // remaining slack of its candidates.
  double lower_bound(const std::vector<std::uint64_t>& u) {
    for (std::size_t s = 0; s < bits_.size(); ++s) {
      std::size_t c = 0;
      for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(bits_[s][w] & u[w]));
      overlap_[s] = static_cast<std::uint32_t>(c);
      load_[s] = 0.0;
    }
    cells_.clear();
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t word = u[w];
      while (word) {
        cells_.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
        word &= word - 1;
      }
    }
    double single = 0.0;
    for (std::size_t m : cells_) {
      double best = std::numeric_limits<double>::infinity();
      double cheapest = std::numeric_limits<double>::infinity();
      for (std::uint32_t s : covering_[m]) {
        if (banned_[s]) continue;
        best = std::min(best, cost_[s] / overlap_[s]);
        cheapest = std::min(cheapest, cost_[s]);
      }
      // Every candidate of this cell is excluded on this branch.
      if (!std::isfinite(best)) return best;
      price_[m] = best;
      single = std::max(single, cheapest);
      for (std::uint32_t s : covering_[m]) {
        if (!banned_[s]) load_[s] += best;
      }
    }
    // Cells with few candidates first: their raises are least contested.
    std::sort(cells_.begin(), cells_.end(), [this](std::size_t a, std::size_t b) {
      return covering_[a].size() != covering_[b].size() ? covering_[a].size() < covering_[b].size() : a < b;
    });
    double total = 0.0;
    for (std::size_t m : cells_) {
      double slack = std::numeric_limits<double>::infinity();
      for (std::uint32_t s : covering_[m]) {
        if (!banned_[s]) slack = std::min(slack, cost_[s] - load_[s]);
      }
      if (slack > 0.0) {
        price_[m] += slack;
        for (std::uint32_t s : covering_[m]) {
          if (!banned_[s]) load_[s] += slack;
        }
      }
      total += price_[m];
    }
    return std::max(total, single);
  }

  void search(const std::vector<std::uint64_t>& u, double cost, std::vector<std::size_t>& path) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (popcount(u) == 0) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_choice_.clear();
        for (std::size_t s : path) best_choice_.push_back(index_[s]);
      }
      return;
    }
    if (cost + lower_bound(u) >= best_cost_ * (1.0 - 1e-12)) return;
    // Branch on the uncovered cell with the fewest covering candidates.
    std::size_t pick = 0;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t word = u[w];
      while (word) {
        const std::size_t m = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        std::size_t live = 0;
        for (std::uint32_t c : covering_[m]) live += banned_[c] ? 0 : 1;
        if (live < fewest) {
          fewest = live;
          pick = m;
        }
      }
    }
    // Order branches by cost per newly covered cell.
    std::vector<std::pair<double, std::uint32_t>> order;
    for (std::uint32_t s : covering_[pick]) {
      if (banned_[s]) continue;
      std::size_t c = 0;
      for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(bits_[s][w] & u[w]));
      order.push_back({cost_[s] / static_cast<double>(c), s});
    }
    std::sort(order.begin(), order.end());
    // Drop branches whose new cells are covered by a no more expensive
    // sibling; every such sibling also contains `pick`.
    {
      std::vector<std::pair<double, std::uint32_t>> kept;
      for (const auto& cand : order) {
        const std::uint32_t s = cand.second;
        bool dominated = false;
        for (const auto& [r2, t] : order) {
          if (t == s || cost_[t] > cost_[s]) continue;
          bool subset = true;
          bool equal = true;
          for (std::size_t w = 0; w < words_ && subset; ++w) {
            const std::uint64_t a = bits_[s][w] & u[w];
            const std::uint64_t b = bits_[t][w] & u[w];
            subset = (a & ~b) == 0;
            equal = equal && a == b;
          }
          // Equal sets at equal cost: keep the lower index.
          if (subset && (!equal || cost_[t] < cost_[s] || t < s)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) kept.push_back(cand);
      }
      order.swap(kept);
    }
    // Later siblings exclude the candidates tried before them: covers
    // using those were already searched.
    std::vector<std::uint64_t> next(words_);
    std::vector<std::uint32_t> tried;
    for (const auto& [ratio, s] : order) {
      if (cost + cost_[s] >= best_cost_ * (1.0 - 1e-12)) continue;
      for (std::size_t w = 0; w < words_; ++w) next[w] = u[w] & ~bits_[s][w];
      path.push_back(s);
      search(next, cost + cost_[s], path);
      path.pop_back();
      banned_[s] = 1;
      tried.push_back(s);
      if (aborted_) break;
    }
    for (std::uint32_t s : tried) banned_[s] = 0;
  }

  const CandidateFamily& fam_;
  std::size_t budget_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> bits_;
  std::vector<double> cost_;
  std::vector<std::size_t> index_;
  std::vector<std::vector<std::uint32_t>> covering_;
  std::vector<std::uint32_t> overlap_;
  std::vector<double> load_;
  std::vector<char> banned_;
  std::vector<double> price_;
  std::vector<std::size_t> cells_;
  double best_cost_ = 0.0;
  std::vector<std::size_t> best_choice_;
  bool incumbent_is_initial_ = true;
  bool aborted_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace detail

// Minimum-cost cover within the candidate family by branch and bound,
// seeded with the greedy cover. `optimal` is set only when the search
// finished inside the node budget.
inline ExactResult exact_small(const DiscreteSet& e, double delta, std::size_t budget = kExactSmallBudget,
                               std::size_t cap = 256) {
  validate_delta(delta, e.grid().n);
  if (e.size() > cap) {
    std::ostringstream os;
    os << "exact search is limited to " << cap << " cells; set has " << e.size();
    throw ValidationError(os.str());
  }
  ExactResult r;
  r.cover.delta = delta;
  if (e.empty()) {
    r.optimal = true;
    return r;
  }
  CandidateFamily fam(e);
  GreedyResult g = detail::greedy_cover(fam, delta);
  if (auto single = detail::best_single_ball(fam); single && fam.cost(*single, delta) < g.cover.cost) {
    g.chosen = {*single};
    g.cover = detail::make_cover(fam, g.chosen, delta);
  }
  detail::BranchAndBound bnb(fam, delta, budget);
  return bnb.run(g.cover, g.chosen);
}

struct FrostmanResult {
  double lower = 0.0;         // certified lower bound for H^delta_inf(E)
  double mass = 0.0;          // mu(E)
  double rounding_factor = 0.0;
  double slack = 1.0;         // sigma^delta
  double top_bound = 0.0;     // a_J^delta (physical)
  std::size_t constraints = 0;
  double max_load_ratio = 0.0;
};

namespace detail {

// One packing family: radius steps alpha 2^(j / L) (cell units) on lattices
// of spacing 2^floor(j / L), coarse lattices moved by half a spacing along
// the axes set in `shift_bits`.
inline FrostmanResult frostman_family(const LocalGeometry& geo, double delta, int L, double alpha,
                                      unsigned shift_bits) {
  const int n = geo.n;
  const double h = geo.h;
  const double half_diag = 0.5 * std::sqrt(double(n));
  const double q = std::exp2(1.0 / L);
  FrostmanResult out;
  out.rounding_factor = q * (1.0 + half_diag / alpha);
  out.slack = std::pow(out.rounding_factor, delta);
  const double reach = geo.extent() * std::sqrt(double(n));

  PackingProblem lp;
  lp.num_vars = geo.size();
  // Density cap covering balls of radius at most alpha / q.
  const double a_minus = alpha / q;
  lp.cap = out.slack * std::pow(h, n) / (unit_ball_volume(n) * std::pow(a_minus * h, n - delta));

  double a_top = alpha;
  for (int j = 0;; ++j) {
    const int si = 1 << (j / L);
    const double s = si;
    const double a = alpha * std::exp2(double(j) / L);
    const double rho = a + half_diag * s;
    const double budget = std::pow(rho * h, delta);
    MultiIndex shift{0, 0, 0};
    for (int k = 0; k < n; ++k) shift[k] = (shift_bits >> k & 1u) ? si / 2 : 0;
    scan_lattice(geo, s, rho, false,
                 [&](const Point&, std::span<const std::uint32_t> cells, std::span<const double>) {
      // A row that cannot bind even with every member at the cap is skipped.
      if (static_cast<double>(cells.size()) * lp.cap <= budget) return;
      lp.add_row(cells, budget);
    }, shift);
    a_top = a;
    if (a >= reach) break;
  }
  out.constraints = lp.num_rows();
  out.top_bound = std::pow(a_top * h, delta);

  const PackingSolution sol = solve_packing(lp);
  out.mass = sol.value;
  out.max_load_ratio = sol.max_load_ratio;
  out.lower = std::min(out.top_bound, out.mass / out.slack);
  return out;
}

}  // namespace detail

// Packing-measure lower bound: the best of several packing families whose
// rounding factors are all at most sigma. Each measure is certified feasible
// for its family before it is used.
inline FrostmanResult frostman_lower(const DiscreteSet& e, double delta,
                                     const ContentOptions& opts = {}) {
  const int n = e.grid().n;
  validate_delta(delta, n);
  const double sigma = rounding_factor(opts, n);
  detail::require(opts.sublevels >= 1, "sublevels must be at least 1");
  detail::require(opts.phases >= 1, "phases must be at least 1");
  const double q = std::exp2(1.0 / opts.sublevels);
  detail::require(sigma > q, "rounding factor must exceed 2^(1/sublevels)");
  FrostmanResult best;
  best.rounding_factor = sigma;
  best.slack = std::pow(sigma, delta);
  if (e.empty()) return best;

  const detail::LocalGeometry geo(e);
  const double alpha0 = 0.5 * std::sqrt(double(n)) / (sigma / q - 1.0);
  const unsigned shifts = opts.lattice_shifts ? 1u << n : 1u;
  bool first = true;
  for (int i = 0; i < opts.phases; ++i) {
    const double alpha = alpha0 * std::exp2(double(i) / opts.phases);
    for (unsigned b = 0; b < shifts; ++b) {
      FrostmanResult r = detail::frostman_family(geo, delta, opts.sublevels, alpha, b);
      if (first || r.lower > best.lower) best = r;
      first = false;
    }
  }
  return best;
}

// |E| / |B(0,1)|: any ball cover has sum |B_i| >= |E|.
inline double volume_lower(const DiscreteSet& e) {
  return lebesgue_measure(e) / unit_ball_volume(e.grid().n);
}

namespace detail {
inline std::string describe_cover(const Cover& c) {
  std::ostringstream os;
  os << "cover of " << c.balls.size() << " balls, cost " << c.cost;
  return os.str();
}
}  // namespace detail

inline ContentBracket content_bracket(const DiscreteSet& e, double delta,
                                      const ContentOptions& opts = {}) {
  const int n = e.grid().n;
  validate_delta(delta, n);
  ContentBracket b;
  b.delta = delta;
  b.rounding_factor = rounding_factor(opts, n);
  b.slack = std::pow(b.rounding_factor, delta);
  b.witness.delta = delta;
  b.cells = e.size();
  if (e.empty()) {
    b.exact = true;
    b.optimal_in_family = true;
    return b;
  }

  CandidateFamily fam(e);
  GreedyResult g = detail::greedy_cover(fam, delta);
  b.witness = g.cover;
  b.upper_method = UpperMethod::kGreedy;
  if (auto single = detail::best_single_ball(fam); single && fam.cost(*single, delta) < b.witness.cost) {
    g.chosen = {*single};
    g.cover = detail::make_cover(fam, g.chosen, delta);
    b.witness = g.cover;
    b.upper_method = UpperMethod::kSingleBall;
  }
  if (opts.use_exact_small && e.size() <= opts.exact_cap) {
    detail::BranchAndBound bnb(fam, delta, opts.exact_budget);
    ExactResult ex = bnb.run(g.cover, g.chosen);
    b.optimal_in_family = ex.optimal;
    if (ex.cover.cost < b.witness.cost) {
      b.witness = ex.cover;
      b.upper_method = UpperMethod::kExactSmall;
    }
    if (!ex.optimal) b.warnings.push_back("exact search hit its node budget");
  }
  b.upper = b.witness.cost;

  const bool full = delta == static_cast<double>(n);
  if (full) {
    b.volume_bound = volume_lower(e);
    b.lower = b.volume_bound;
    b.lower_method = LowerMethod::kVolumeBound;
  }
  if (!full || opts.frostman_at_full_dimension) {
    const FrostmanResult fr = frostman_lower(e, delta, opts);
    b.packing_mass = fr.mass;
    if (fr.lower > b.lower || !full) {
      if (fr.lower > b.lower) {
        b.lower = fr.lower;
        b.lower_method = LowerMethod::kFrostmanLP;
      }
    }
    if (fr.mass <= 0.0) b.warnings.push_back("packing program returned zero mass");
  }
  if (!full && b.lower_method != LowerMethod::kFrostmanLP) b.lower_method = LowerMethod::kFrostmanLP;

  if (opts.verify_witness && !verify_cover(e, b.witness)) {
    throw BracketInversion("witness cover does not cover the set", "",
                           detail::describe_cover(b.witness));
  }
  if (b.lower > b.upper * (1.0 + 1e-12)) {
    std::ostringstream lo, os;
    lo << to_string(b.lower_method) << " lower bound " << b.lower << " (packing mass "
       << b.packing_mass << ", slack " << b.slack << ", volume bound " << b.volume_bound << ")";
    os << "content bracket inverted for delta = " << delta << ": lower " << b.lower << " > upper "
       << b.upper;
    throw BracketInversion(os.str(), lo.str(), detail::describe_cover(b.witness));
  }
  return b;
}

// Bracket for the union of `parts` with enforced subadditivity: the upper
// end is min(direct cover, sum of part covers), the lower end the best of
// the direct certificate and the part certificates (monotonicity).
inline ContentBracket content_bracket_union(std::span<const DiscreteSet> parts, double delta,
                                            const ContentOptions& opts = {}) {
  detail::require(!parts.empty(), "union of no sets");
  DiscreteSet u = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) u = set_union(u, parts[i]);
  ContentBracket b = content_bracket(u, delta, opts);
  Cover joined;
  joined.delta = delta;
  for (const DiscreteSet& p : parts) {
    const ContentBracket pb = content_bracket(p, delta, opts);
    joined.balls.insert(joined.balls.end(), pb.witness.balls.begin(), pb.witness.balls.end());
    joined.cost += pb.upper;
    b.lower = std::max(b.lower, pb.lower);
  }
  if (joined.cost < b.upper) {
    b.witness = joined;
    b.upper = joined.cost;
    b.upper_method = UpperMethod::kUnion;
  }
  return b;
}

// Thread-safe memo of brackets keyed by (delta, member cells).
class ContentCache {
 public:
  explicit ContentCache(ContentOptions opts = {}) : opts_(opts) {}

  const ContentOptions& options() const { return opts_; }

  ContentBracket get(const DiscreteSet& e, double delta) {
    Key key{delta, std::vector<CellIndex>(e.cells().begin(), e.cells().end())};
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = map_.find(key); it != map_.end()) {
        ++hits_;
        return it->second;
      }
    }
    ContentBracket b = content_bracket(e, delta, opts_);
    std::lock_guard<std::mutex> lock(mu_);
    map_.emplace(std::move(key), b);
    return b;
  }

  std::size_t hits() const { return hits_; }
  std::size_t size() const { return map_.size(); }

 private:
  using Key = std::pair<double, std::vector<CellIndex>>;
  ContentOptions opts_;
  std::mutex mu_;
  std::map<Key, ContentBracket> map_;
  std::size_t hits_ = 0;
};

}  // namespace hcontent
