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

// Choquet integrals against H^delta_inf by the layer-cake formula
//
//   int f dH = int_0^inf H({f > t}) dt,
//
// and numeric checks of the basic inequalities for such integrals.
//
// For sampled fields t -> H({f > t}) is a non-increasing step function that
// only jumps at sample values, so with a ladder 0 = t_0 < ... < t_m = max f
// drawn from those values
//
//   sum_k (t_{k+1} - t_k) L({f >= t_{k+1}})  <=  int f dH
//                                            <=  sum_k (t_{k+1} - t_k) U({f > t_k}).
//
// When the ladder holds every distinct value both sets coincide and the
// bracket width comes only from the content brackets.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hcontent/content.hpp"
#include "hcontent/error.hpp"
#include "hcontent/grid.hpp"
#include "hcontent/parallel.hpp"

namespace hcontent {

struct ThresholdLadder {
  std::vector<double> levels;  // t_0 = 0 < t_1 < ... < t_m = max f
  std::string policy;          // "all-values" or "subsampled"

  std::size_t intervals() const { return levels.empty() ? 0 : levels.size() - 1; }
};

// Ladder drawn from the distinct positive sample values v_1 < ... < v_K:
// all of them when K <= m, otherwise t_k = v_{ceil(k K / m)}. Ladders for m
// and 2m are nested.
inline ThresholdLadder make_ladder(const ScalarField& f, std::size_t m) {
  detail::require(m >= 2, "ladder needs at least 2 levels");
  std::vector<double> v;
  for (double x : f.values()) {
    if (x > 0.0) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  ThresholdLadder ladder;
  ladder.levels.push_back(0.0);
  const std::size_t K = v.size();
  if (K <= m) {
    ladder.policy = "all-values";
    ladder.levels.insert(ladder.levels.end(), v.begin(), v.end());
  } else {
    ladder.policy = "subsampled";
    for (std::size_t k = 1; k <= m; ++k) {
      const std::size_t idx = (k * K + m - 1) / m;  // 1-based ceil(kK/m)
      ladder.levels.push_back(v[idx - 1]);
    }
  }
  return ladder;
}

struct ValueBracket {
  double lower = 0.0;
  double upper = 0.0;

  double mid() const { return 0.5 * (lower + upper); }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

// x -> x^e applied to both ends (e > 0 keeps the order).
inline ValueBracket pow_bracket(const ValueBracket& b, double e) {
  auto pw = [e](double x) { return x <= 0.0 ? 0.0 : std::pow(x, e); };
  return {pw(b.lower), pw(b.upper)};
}

struct ChoquetOptions {
  std::size_t ladder = 16;
  ContentOptions content;
  std::size_t workers = 1;
  ContentCache* cache = nullptr;  // optional shared memo
};

struct ChoquetBracket {
  double delta = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  ThresholdLadder ladder;
  // Level k: bracket of {f > t_k} (upper sum) and of {f >= t_{k+1}} (lower
  // sum), before the monotone envelopes are applied.
  std::vector<ContentBracket> upper_sets;
  std::vector<ContentBracket> lower_sets;
  std::vector<std::string> warnings;

  ValueBracket value() const { return {lower, upper}; }
};

namespace detail {

inline ContentBracket bracket_of(const DiscreteSet& e, double delta, const ChoquetOptions& o) {
  if (o.cache != nullptr) return o.cache->get(e, delta);
  return content_bracket(e, delta, o.content);
}

}  // namespace detail

inline ChoquetBracket choquet_integral(const ScalarField& f, double delta,
                                       const ChoquetOptions& opts = {}) {
  validate_delta(delta, f.grid().n);
  ChoquetBracket out;
  out.delta = delta;
  out.ladder = make_ladder(f, opts.ladder);
  const std::vector<double>& t = out.ladder.levels;
  const std::size_t m = out.ladder.intervals();
  if (m == 0) return out;

  std::vector<DiscreteSet> upper_sets, lower_sets;
  upper_sets.reserve(m);
  lower_sets.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    upper_sets.push_back(superlevel(f, t[k]));
    lower_sets.push_back(superlevel_closed(f, t[k + 1]));
  }
  // Jobs: every upper set, plus lower sets that differ from the matching
  // upper set.
  std::vector<const DiscreteSet*> jobs;
  std::vector<std::size_t> lower_job(m);
  for (std::size_t k = 0; k < m; ++k) jobs.push_back(&upper_sets[k]);
  for (std::size_t k = 0; k < m; ++k) {
    if (lower_sets[k] == upper_sets[k]) {
      lower_job[k] = k;
    } else {
      lower_job[k] = jobs.size();
      jobs.push_back(&lower_sets[k]);
    }
  }
  std::vector<ContentBracket> results(jobs.size());
  detail::parallel_for(jobs.size(), opts.workers,
                       [&](std::size_t i) { results[i] = detail::bracket_of(*jobs[i], delta, opts); });

  out.upper_sets.assign(results.begin(), results.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t k = 0; k < m; ++k) out.lower_sets.push_back(results[lower_job[k]]);

  double env = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    env = std::min(env, out.upper_sets[k].upper);
    out.upper += (t[k + 1] - t[k]) * env;
  }
  env = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    env = std::max(env, out.lower_sets[k].lower);
    out.lower += (t[k + 1] - t[k]) * env;
  }
  for (const ContentBracket& b : results) {
    for (const std::string& w : b.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) {
        out.warnings.push_back(w);
      }
    }
  }
  if (out.lower > out.upper * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "Choquet bracket inverted: lower " << out.lower << " > upper " << out.upper;
    throw BracketInversion(os.str(), "layer-cake lower sum", "layer-cake upper sum");
  }
  return out;
}

struct DimensionChangeReport {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double factor = 1.0;  // (delta2 / delta1)^(1 / delta2)
  ValueBracket lhs;     // (int f dH^delta2)^(1/delta2)
  ValueBracket rhs;     // (int f^(delta1/delta2) dH^delta1)^(1/delta1)
  double margin = 0.0;  // factor * rhs.upper - lhs.lower
  bool passed = true;
};

// Checks (int f dH^d2)^(1/d2) <= (d2/d1)^(1/d2) (int f^(d1/d2) dH^d1)^(1/d1)
// in the only direction sound under brackets: lhs.lower <= factor * rhs.upper.
inline DimensionChangeReport dimension_change_check(const ScalarField& f, double delta1,
                                                    double delta2, const ChoquetOptions& opts = {}) {
  if (!(delta1 > 0.0 && delta1 < delta2 && delta2 <= f.grid().n)) {
    std::ostringstream os;
    os << "dimension change needs 0 < delta1 < delta2 <= n; got delta1 = " << delta1
       << ", delta2 = " << delta2;
    throw ValidationError(os.str());
  }
  DimensionChangeReport r;
  r.delta1 = delta1;
  r.delta2 = delta2;
  r.factor = std::pow(delta2 / delta1, 1.0 / delta2);
  r.lhs = pow_bracket(choquet_integral(f, delta2, opts).value(), 1.0 / delta2);
  r.rhs = pow_bracket(choquet_integral(pow_field(f, delta1 / delta2), delta1, opts).value(),
                      1.0 / delta1);
  r.margin = r.factor * r.rhs.upper - r.lhs.lower;
  r.passed = r.lhs.lower <= r.factor * r.rhs.upper * (1.0 + 1e-12);
  return r;
}

struct SublinearityReport {
  double delta = 1.0;
  ValueBracket sum_integral;          // int (sum f_i) dH
  std::vector<ValueBracket> parts;    // int f_i dH
  double ratio = 0.0;                 // sum_integral.upper / sum_i parts[i].lower
  double cap = 0.0;
  bool passed = true;
};

// Default cap for sublinearity ratios, calibrated on random indicator and
// bump families at delta in [1, 2]; see the README.
inline constexpr double kDefaultSublinearityCap = 8.0;

// Empirical quasi-sublinearity constant
// upper(int sum f_i dH) / sum_i lower(int f_i dH), compared with `cap`.
inline SublinearityReport sublinearity_check(std::span<const ScalarField> fields, double delta,
                                             double cap = kDefaultSublinearityCap,
                                             const ChoquetOptions& opts = {}) {
  detail::require(fields.size() >= 2, "sublinearity check needs at least two fields");
  for (const ScalarField& f : fields) {
    detail::require(f.grid() == fields[0].grid(), "sublinearity fields must share one grid");
  }
  SublinearityReport r;
  r.delta = delta;
  r.cap = cap;
  r.sum_integral = choquet_integral(add_fields(fields), delta, opts).value();
  double denom = 0.0;
  for (const ScalarField& f : fields) {
    r.parts.push_back(choquet_integral(f, delta, opts).value());
    denom += r.parts.back().lower;
  }
  if (denom > 0.0) {
    r.ratio = r.sum_integral.upper / denom;
  } else {
    r.ratio = r.sum_integral.upper > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  r.passed = r.ratio <= cap;
  return r;
}

struct FatouReport {
  double delta = 1.0;
  ValueBracket limit_integral;             // int (lim f_i) dH
  std::vector<ValueBracket> elements;      // int f_i dH
  double liminf_upper = 0.0;
  double cap = 1.0;
  double margin = 0.0;  // cap * liminf_upper - limit_integral.lower
  bool passed = true;
};

// A finite non-decreasing sequence is read as continuing with its last
// element, so its pointwise limit is the last element and the liminf of the
// integrals is the last element's integral. The limit field is rebuilt as
// the pointwise supremum of the sequence and must equal the last element.
inline FatouReport fatou_consistency_check(std::span<const ScalarField> seq, double delta,
                                           double cap = 1.0, const ChoquetOptions& opts = {}) {
  detail::require(!seq.empty(), "Fatou check needs a non-empty sequence");
  const Grid& g = seq[0].grid();
  std::vector<double> sup(seq[0].values().begin(), seq[0].values().end());
  for (std::size_t i = 1; i < seq.size(); ++i) {
    detail::require(seq[i].grid() == g, "Fatou sequence must share one grid");
    const auto prev = seq[i - 1].values();
    const auto cur = seq[i].values();
    for (std::size_t c = 0; c < cur.size(); ++c) {
      if (cur[c] < prev[c]) {
        std::ostringstream os;
        os << "Fatou sequence is not pointwise non-decreasing: element " << i << " drops at cell "
           << c;
        throw ValidationError(os.str());
      }
      sup[c] = std::max(sup[c], cur[c]);
    }
  }
  const auto last = seq.back().values();
  detail::require(std::equal(sup.begin(), sup.end(), last.begin()),
                  "pointwise limit differs from the last element");
  FatouReport r;
  r.delta = delta;
  r.cap = cap;
  for (const ScalarField& f : seq) r.elements.push_back(choquet_integral(f, delta, opts).value());
  r.limit_integral = choquet_integral(ScalarField(g, std::move(sup)), delta, opts).value();
  r.liminf_upper = r.elements.back().upper;
  r.margin = cap * r.liminf_upper - r.limit_integral.lower;
  r.passed = r.limit_integral.lower <= cap * r.liminf_upper * (1.0 + 1e-12);
  return r;
}

}  // namespace hcontent
