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

// Regular cubic-cell grids in R^n (n = 1, 2, 3), cell-centred scalar fields,
// superlevel extraction, finite-difference gradients and Lebesgue integrals.
//
// Cells are indexed row-major: the last axis varies fastest. A cell with
// multi-index (i_0, ..., i_{n-1}) occupies the closed cube
// prod_k [lo_k + i_k h, lo_k + (i_k + 1) h] and its sample sits at the centre.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hcontent/error.hpp"

namespace hcontent {

using CellIndex = std::int64_t;
using Point = std::array<double, 3>;
using MultiIndex = std::array<int, 3>;

// Upper limit on cells^n for any grid; about 256 MiB per double array.
inline constexpr std::int64_t kMaxGridCells = std::int64_t{1} << 25;

struct Grid {
  int n = 2;
  Point lo{};
  Point hi{};
  int cells = 2;  // per axis
  double h = 0.5;

  std::int64_t size() const {
    std::int64_t s = 1;
    for (int k = 0; k < n; ++k) s *= cells;
    return s;
  }

  double cell_volume() const { return std::pow(h, n); }

  MultiIndex unravel(CellIndex idx) const {
    MultiIndex m{0, 0, 0};
    for (int k = n - 1; k >= 0; --k) {
      m[k] = static_cast<int>(idx % cells);
      idx /= cells;
    }
    return m;
  }

  CellIndex ravel(const MultiIndex& m) const {
    CellIndex idx = 0;
    for (int k = 0; k < n; ++k) idx = idx * cells + m[k];
    return idx;
  }

  Point center(CellIndex idx) const {
    const MultiIndex m = unravel(idx);
    Point p{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) p[k] = lo[k] + (m[k] + 0.5) * h;
    return p;
  }

  bool on_boundary(CellIndex idx) const {
    const MultiIndex m = unravel(idx);
    for (int k = 0; k < n; ++k) {
      if (m[k] == 0 || m[k] == cells - 1) return true;
    }
    return false;
  }

  double extent() const { return hi[0] - lo[0]; }

  friend bool operator==(const Grid& a, const Grid& b) {
    if (a.n != b.n || a.cells != b.cells || a.h != b.h) return false;
    for (int k = 0; k < a.n; ++k) {
      if (a.lo[k] != b.lo[k] || a.hi[k] != b.hi[k]) return false;
    }
    return true;
  }
};

// Builds a grid over the box prod_k [bbox[k].first, bbox[k].second].
// The box must be cubic: one cell width h = extent / cells on every axis.
inline Grid make_grid(int n, std::span<const std::pair<double, double>> bbox, int cells) {
  detail::require(n >= 1 && n <= 3, "grid dimension must be 1, 2 or 3");
  detail::require(static_cast<int>(bbox.size()) == n,
                  "bounding box must list one range per axis");
  detail::require(cells >= 2, "cells per axis must be at least 2");
  Grid g;
  g.n = n;
  g.cells = cells;
  const double extent = bbox[0].second - bbox[0].first;
  detail::require(std::isfinite(extent) && extent > 0.0, "bounding box is degenerate");
  for (int k = 0; k < n; ++k) {
    const double e = bbox[k].second - bbox[k].first;
    if (!(std::abs(e - extent) <= 1e-12 * extent)) {
      std::ostringstream os;
      os << "bounding box is not cubic: axis 0 has extent " << extent << " but axis " << k
         << " has extent " << e << "; cells must be cubes with one width h";
      throw ValidationError(os.str());
    }
    g.lo[k] = bbox[k].first;
    g.hi[k] = bbox[k].first + extent;
  }
  double total = 1.0;
  for (int k = 0; k < n; ++k) total *= cells;
  if (total > static_cast<double>(kMaxGridCells)) {
    std::ostringstream os;
    os << "grid with " << cells << "^" << n << " cells exceeds the budget of " << kMaxGridCells
       << " cells";
    throw CapacityError(os.str());
  }
  g.h = extent / cells;
  return g;
}

// Grid over [lo, hi]^n.
inline Grid make_cube_grid(int n, double lo, double hi, int cells) {
  std::vector<std::pair<double, double>> box(static_cast<std::size_t>(std::max(n, 0)), {lo, hi});
  return make_grid(n, box, cells);
}

enum class GradientSource { kNone, kAnalytic, kFiniteDifference };

inline const char* to_string(GradientSource s) {
  switch (s) {
    case GradientSource::kAnalytic:
      return "analytic";
    case GradientSource::kFiniteDifference:
      return "finite-difference";
    default:
      return "none";
  }
}

// Non-negative, compactly supported cell-centred samples of a function u,
// optionally with |grad u| at the same cell centres. Immutable after
// construction.
class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values,
              std::optional<std::vector<double>> gradient = std::nullopt,
              GradientSource source = GradientSource::kNone)
      : grid_(grid), values_(std::move(values)), gradient_(std::move(gradient)) {
    source_ = gradient_ ? (source == GradientSource::kNone ? GradientSource::kAnalytic : source)
                        : GradientSource::kNone;
    validate();
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  bool has_gradient() const { return gradient_.has_value(); }
  std::span<const double> gradient() const {
    detail::require(gradient_.has_value(), "field carries no gradient");
    return *gradient_;
  }
  GradientSource gradient_source() const { return source_; }

  double max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
  }

 private:
  void validate() const {
    detail::require(static_cast<std::int64_t>(values_.size()) == grid_.size(),
                    "value count does not match the grid");
    if (gradient_) {
      detail::require(gradient_->size() == values_.size(),
                      "gradient count does not match the grid");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (!(std::isfinite(v) && v >= 0.0)) {
        std::ostringstream os;
        os << "field value at cell " << i << " is " << v << "; values must be finite and >= 0";
        throw ValidationError(os.str());
      }
      if (v != 0.0 && grid_.on_boundary(static_cast<CellIndex>(i))) {
        std::ostringstream os;
        os << "field is not compactly supported: boundary cell " << i << " has value " << v;
        throw ValidationError(os.str());
      }
      if (gradient_) {
        const double g = (*gradient_)[i];
        detail::require(std::isfinite(g) && g >= 0.0, "gradient magnitudes must be finite and >= 0");
      }
    }
  }

  Grid grid_;
  std::vector<double> values_;
  std::optional<std::vector<double>> gradient_;
  GradientSource source_ = GradientSource::kNone;
};

// Samples value(p) and, if given, grad(p) at every cell centre. Both callables
// take a Point whose unused trailing coordinates are zero.
template <typename ValueFn>
ScalarField sample_field(const Grid& grid, ValueFn&& value) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (CellIndex i = 0; i < grid.size(); ++i) v[i] = value(grid.center(i));
  return ScalarField(grid, std::move(v));
}

template <typename ValueFn, typename GradFn>
ScalarField sample_field(const Grid& grid, ValueFn&& value, GradFn&& grad) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  std::vector<double> g(v.size());
  for (CellIndex i = 0; i < grid.size(); ++i) {
    const Point p = grid.center(i);
    v[i] = value(p);
    g[i] = grad(p);
  }
  return ScalarField(grid, std::move(v), std::move(g), GradientSource::kAnalytic);
}

// A finite union of closed grid cells; members are sorted and unique.
class DiscreteSet {
 public:
  explicit DiscreteSet(Grid grid, std::vector<CellIndex> cells = {})
      : grid_(grid), cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    if (!cells_.empty()) {
      detail::require(cells_.front() >= 0 && cells_.back() < grid_.size(),
                      "set member outside the grid");
    }
  }

  const Grid& grid() const { return grid_; }
  std::span<const CellIndex> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  bool contains(CellIndex c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

  bool is_subset_of(const DiscreteSet& other) const {
    return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
  }

  friend bool operator==(const DiscreteSet& a, const DiscreteSet& b) {
    return a.grid_ == b.grid_ && a.cells_ == b.cells_;
  }

 private:
  Grid grid_;
  std::vector<CellIndex> cells_;
};

inline DiscreteSet set_union(const DiscreteSet& a, const DiscreteSet& b) {
  detail::require(a.grid() == b.grid(), "sets live on different grids");
  std::vector<CellIndex> u;
  u.reserve(a.size() + b.size());
  std::set_union(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                 std::back_inserter(u));
  return DiscreteSet(a.grid(), std::move(u));
}

// Lebesgue measure of the union of member cells.
inline double lebesgue_measure(const DiscreteSet& e) {
  return static_cast<double>(e.size()) * e.grid().cell_volume();
}

// Strict superlevel set {f > t}, as used by the layer-cake integral.
inline DiscreteSet superlevel(const ScalarField& f, double t) {
  detail::require(t >= 0.0, "superlevel threshold must be >= 0");
  std::vector<CellIndex> out;
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > t) out.push_back(static_cast<CellIndex>(i));
  }
  return DiscreteSet(f.grid(), std::move(out));
}

// Closed superlevel set {f >= t}. Never interchangeable with superlevel().
inline DiscreteSet superlevel_closed(const ScalarField& f, double t) {
  detail::require(t >= 0.0, "superlevel threshold must be >= 0");
  std::vector<CellIndex> out;
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= t) out.push_back(static_cast<CellIndex>(i));
  }
  return DiscreteSet(f.grid(), std::move(out));
}

// Midpoint-rule integral sum(values) * h^n.
inline double lebesgue_integral(std::span<const double> values, const Grid& grid) {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

inline double lebesgue_integral(const ScalarField& f) {
  return lebesgue_integral(f.values(), f.grid());
}

// Integral of |grad f|, using the attached gradient.
inline double gradient_integral(const ScalarField& f) {
  return lebesgue_integral(f.gradient(), f.grid());
}

// |grad f| by central differences. At a support edge (one neighbour zero)
// the one-sided difference toward the support is used; cells with f = 0
// get 0.
inline ScalarField fd_gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  const auto v = f.values();
  std::vector<double> grad(v.size(), 0.0);
  for (CellIndex i = 0; i < g.size(); ++i) {
    if (v[i] == 0.0) continue;
    const MultiIndex m = g.unravel(i);
    double sq = 0.0;
    CellIndex stride = 1;
    for (int k = g.n - 1; k >= 0; --k) {
      const bool has_lo = m[k] > 0;
      const bool has_hi = m[k] < g.cells - 1;
      const double lo = has_lo ? v[i - stride] : 0.0;
      const double hi = has_hi ? v[i + stride] : 0.0;
      double d = 0.0;
      if (lo > 0.0 && hi > 0.0) {
        d = (hi - lo) / (2.0 * g.h);
      } else if (hi > 0.0) {
        d = (hi - v[i]) / g.h;
      } else if (lo > 0.0) {
        d = (v[i] - lo) / g.h;
      } else {
        d = (hi - lo) / (2.0 * g.h);
      }
      sq += d * d;
      stride *= g.cells;
    }
    grad[i] = std::sqrt(sq);
  }
  return ScalarField(g, std::vector<double>(v.begin(), v.end()), std::move(grad),
                     GradientSource::kFiniteDifference);
}

// The attached gradient, or finite differences when none is attached.
inline std::vector<double> gradient_or_fd(const ScalarField& f) {
  if (f.has_gradient()) return {f.gradient().begin(), f.gradient().end()};
  const ScalarField d = fd_gradient(f);
  return {d.gradient().begin(), d.gradient().end()};
}

// Samples raised to a power; exact on samples. The gradient is dropped.
inline ScalarField pow_field(const ScalarField& f, double exponent) {
  detail::require(exponent > 0.0, "power transform needs a positive exponent");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = x == 0.0 ? 0.0 : std::pow(x, exponent);
  return ScalarField(f.grid(), std::move(v));
}

inline ScalarField scale_field(const ScalarField& f, double lambda) {
  detail::require(lambda >= 0.0, "scale factor must be >= 0");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= lambda;
  if (f.has_gradient()) {
    std::vector<double> g(f.gradient().begin(), f.gradient().end());
    for (double& x : g) x *= lambda;
    return ScalarField(f.grid(), std::move(v), std::move(g), f.gradient_source());
  }
  return ScalarField(f.grid(), std::move(v));
}

// Pointwise sum; gradients are not summable as magnitudes and are dropped.
inline ScalarField add_fields(std::span<const ScalarField> fields) {
  detail::require(!fields.empty(), "nothing to add");
  std::vector<double> v(fields[0].values().begin(), fields[0].values().end());
  for (std::size_t j = 1; j < fields.size(); ++j) {
    detail::require(fields[j].grid() == fields[0].grid(), "fields live on different grids");
    const auto w = fields[j].values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
  }
  return ScalarField(fields[0].grid(), std::move(v));
}

// Field equal to `height` on the cells of e and zero elsewhere.
inline ScalarField indicator(const DiscreteSet& e, double height = 1.0) {
  std::vector<double> v(static_cast<std::size_t>(e.grid().size()), 0.0);
  for (CellIndex c : e.cells()) v[c] = height;
  return ScalarField(e.grid(), std::move(v));
}

// Cells whose centre lies in the open ball B(center, radius).
inline DiscreteSet ball_cells(const Grid& g, const Point& center, double radius) {
  std::vector<CellIndex> out;
  for (CellIndex i = 0; i < g.size(); ++i) {
    const Point p = g.center(i);
    double d2 = 0.0;
    for (int k = 0; k < g.n; ++k) d2 += (p[k] - center[k]) * (p[k] - center[k]);
    if (d2 < radius * radius) out.push_back(i);
  }
  return DiscreteSet(g, std::move(out));
}

// Axis-aligned block of cells [first_k, first_k + width_k) per axis.
inline DiscreteSet block_cells(const Grid& g, const MultiIndex& first, const MultiIndex& width) {
  std::vector<CellIndex> out;
  for (CellIndex i = 0; i < g.size(); ++i) {
    const MultiIndex m = g.unravel(i);
    bool in = true;
    for (int k = 0; k < g.n; ++k) in = in && m[k] >= first[k] && m[k] < first[k] + width[k];
    if (in) out.push_back(i);
  }
  return DiscreteSet(g, std::move(out));
}

// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return std::numbers::pi;
    default:
      return 4.0 * std::numbers::pi / 3.0;
  }
}

}  // namespace hcontent
