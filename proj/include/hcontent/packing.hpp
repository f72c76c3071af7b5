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

// Approximate solver for 0/1 packing programs
//
//   maximize sum_i x_i  subject to  sum_{i in S_c} x_i <= b_c,  0 <= x_i <= cap.
//
// Two heuristics are run and the larger value is kept. Both end in a
// maximal point (no variable can grow alone), and the final scaling step
// makes the result feasible to floating-point exactness, so it is always a
// valid feasible point regardless of how close it is to the optimum.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace hcontent {

struct PackingProblem {
  std::size_t num_vars = 0;
  // Row r owns row_members[row_offsets[r], row_offsets[r + 1]).
  std::vector<std::uint32_t> row_offsets{0};
  std::vector<std::uint32_t> row_members;
  std::vector<double> budgets;
  double cap = std::numeric_limits<double>::infinity();

  std::size_t num_rows() const { return budgets.size(); }

  std::span<const std::uint32_t> row(std::size_t r) const {
    return {row_members.data() + row_offsets[r], row_offsets[r + 1] - row_offsets[r]};
  }

  void add_row(std::span<const std::uint32_t> members, double budget) {
    row_members.insert(row_members.end(), members.begin(), members.end());
    row_offsets.push_back(static_cast<std::uint32_t>(row_members.size()));
    budgets.push_back(budget);
  }
};

struct PackingSolution {
  std::vector<double> x;
  double value = 0.0;
  // Largest load/budget ratio before the final rescale (1 means tight).
  double max_load_ratio = 0.0;
};

// Returns max over rows of load/budget, and over variables of x/cap.
inline double packing_max_load(const PackingProblem& p, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t r = 0; r < p.num_rows(); ++r) {
    double load = 0.0;
    for (std::uint32_t i : p.row(r)) load += x[i];
    if (load > 0.0) worst = std::max(worst, load / p.budgets[r]);
  }
  if (p.cap < std::numeric_limits<double>::infinity()) {
    for (double v : x) worst = std::max(worst, v / p.cap);
  }
  return worst;
}

namespace detail {

// Progressive filling from a feasible start x0: every free variable rises
// from its start value at the same rate; a row that becomes tight freezes
// its free variables, a variable reaching the cap freezes alone.
inline std::vector<double> progressive_fill(const PackingProblem& p, std::vector<double> x0) {
  const std::size_t nv = p.num_vars;
  const std::size_t nr = p.num_rows();
  std::vector<double> x = std::move(x0);
  if (nv == 0) return x;

  std::vector<std::uint32_t> col_offsets(nv + 1, 0);
  for (std::uint32_t i : p.row_members) ++col_offsets[i + 1];
  for (std::size_t i = 0; i < nv; ++i) col_offsets[i + 1] += col_offsets[i];
  std::vector<std::uint32_t> col_rows(p.row_members.size());
  {
    std::vector<std::uint32_t> fill(col_offsets.begin(), col_offsets.end() - 1);
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::uint32_t i : p.row(r)) col_rows[fill[i]++] = static_cast<std::uint32_t>(r);
    }
  }

  // slack_r = budget - load of x0; a row is tight at level slack_r / free_r.
  std::vector<double> slack(nr, 0.0);
  std::vector<std::uint32_t> free_count(nr, 0);
  std::vector<std::uint32_t> version(nr, 0);
  for (std::size_t r = 0; r < nr; ++r) {
    double load = 0.0;
    for (std::uint32_t i : p.row(r)) load += x[i];
    slack[r] = std::max(0.0, p.budgets[r] - load);
    free_count[r] = static_cast<std::uint32_t>(p.row(r).size());
  }
  std::vector<char> frozen(nv, 0);
  std::size_t num_free = nv;

  using Entry = std::pair<double, std::pair<std::uint32_t, std::uint32_t>>;  // time, (row or var, tag)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  constexpr std::uint32_t kVarTag = 0xFFFFFFFFu;
  for (std::size_t r = 0; r < nr; ++r) {
    if (free_count[r] == 0) continue;
    heap.push({slack[r] / free_count[r], {static_cast<std::uint32_t>(r), 0}});
  }
  if (p.cap < std::numeric_limits<double>::infinity()) {
    for (std::size_t i = 0; i < nv; ++i) {
      heap.push({std::max(0.0, p.cap - x[i]), {static_cast<std::uint32_t>(i), kVarTag}});
    }
  }

  double level = 0.0;
  auto freeze = [&](std::uint32_t i) {
    frozen[i] = 1;
    x[i] += level;
    --num_free;
    for (std::uint32_t k = col_offsets[i]; k < col_offsets[i + 1]; ++k) {
      const std::uint32_t r = col_rows[k];
      // The row's free members had all risen by `level`; this one stops.
      slack[r] -= level;
      --free_count[r];
      ++version[r];
      if (free_count[r] > 0) {
        const double t = level + std::max(0.0, slack[r] - level * free_count[r]) / free_count[r];
        heap.push({t, {r, version[r]}});
      }
    }
  };

  while (num_free > 0 && !heap.empty()) {
    const auto [t, id] = heap.top();
    heap.pop();
    const auto [r, tag] = id;
    if (tag == kVarTag) {
      if (frozen[r]) continue;
      level = std::max(level, t);
      freeze(r);
      continue;
    }
    if (tag != version[r] || free_count[r] == 0) continue;
    level = std::max(level, t);
    for (std::uint32_t i : p.row(r)) {
      if (!frozen[i]) freeze(i);
    }
  }
  // Variables in no row and without a cap stay at their start value.
  return x;
}

// Fine-to-coarse scaling in row order: start every variable at its
// smallest bound and scale each overloaded row down to its budget. Later
// rows only ever decrease variables, so earlier rows stay feasible.
inline std::vector<double> bottom_up_scaling(const PackingProblem& p) {
  std::vector<double> x(p.num_vars, p.cap);
  for (std::size_t r = 0; r < p.num_rows(); ++r) {
    for (std::uint32_t i : p.row(r)) x[i] = std::min(x[i], p.budgets[r]);
  }
  for (double& v : x) {
    if (!(v < std::numeric_limits<double>::infinity())) v = 0.0;
  }
  for (std::size_t r = 0; r < p.num_rows(); ++r) {
    double load = 0.0;
    for (std::uint32_t i : p.row(r)) load += x[i];
    if (load > p.budgets[r]) {
      const double f = p.budgets[r] / load;
      for (std::uint32_t i : p.row(r)) x[i] *= f;
    }
  }
  return x;
}

inline PackingSolution finish(const PackingProblem& p, std::vector<double> x) {
  PackingSolution sol;
  sol.x = std::move(x);
  sol.max_load_ratio = packing_max_load(p, sol.x);
  if (sol.max_load_ratio > 1.0) {
    // Rounding drift only; scale back onto the feasible side.
    const double s = 1.0 / (sol.max_load_ratio * (1.0 + 1e-12));
    for (double& v : sol.x) v *= s;
  }
  double total = 0.0;
  for (double v : sol.x) total += v;
  sol.value = total;
  return sol;
}

}  // namespace detail

// Best of two feasible points: progressive filling from zero, and the
// fine-to-coarse scaling of the rows (in the order they were added)
// topped up by progressive filling.
inline PackingSolution solve_packing(const PackingProblem& p) {
  PackingSolution a = detail::finish(p, detail::progressive_fill(p, std::vector<double>(p.num_vars, 0.0)));
  PackingSolution b = detail::finish(p, detail::progressive_fill(p, detail::bottom_up_scaling(p)));
  return b.value > a.value ? b : a;
}

}  // namespace hcontent
