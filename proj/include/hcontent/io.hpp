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

// Serialization. JSON goes through nlohmann::json (shortest round-trip
// doubles, so identical inputs give identical bytes; infinities become
// null). The sweep CSV and the field text format are described in the
// README and versioned by their first line.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcontent/choquet.hpp"
#include "hcontent/content.hpp"
#include "hcontent/error.hpp"
#include "hcontent/grid.hpp"
#include "hcontent/verify.hpp"

namespace hcontent {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSweepCsvVersion = "# hcontent-sweep-csv v1";
inline constexpr const char* kSweepCsvHeader =
    "abscissa,lhs_lower,lhs_upper,rhs_lower,rhs_upper,ratio_lower,ratio_upper";
inline constexpr const char* kFieldVersion = "# hcontent-field v1";

namespace detail {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json point_json(const Point& p, int n) {
  Json a = Json::array();
  for (int k = 0; k < n; ++k) a.push_back(p[k]);
  return a;
}

}  // namespace detail

inline Json to_json(const Grid& g) {
  Json lo = Json::array(), hi = Json::array();
  for (int k = 0; k < g.n; ++k) {
    lo.push_back(g.lo[k]);
    hi.push_back(g.hi[k]);
  }
  return {{"n", g.n}, {"cells", g.cells}, {"lo", lo}, {"hi", hi}, {"h", g.h}};
}

inline Json to_json(const Cover& c, int n) {
  Json balls = Json::array();
  for (const Ball& b : c.balls) balls.push_back({{"center", detail::point_json(b.center, n)}, {"radius", b.radius}});
  return {{"delta", c.delta}, {"cost", c.cost}, {"balls", balls}};
}

inline Json to_json(const ContentBracket& b, int n) {
  return {{"delta", b.delta},
          {"lower", b.lower},
          {"upper", b.upper},
          {"lower_method", to_string(b.lower_method)},
          {"upper_method", to_string(b.upper_method)},
          {"exact", b.exact},
          {"optimal_in_family", b.optimal_in_family},
          {"rounding_factor", b.rounding_factor},
          {"slack", b.slack},
          {"packing_mass", b.packing_mass},
          {"volume_bound", b.volume_bound},
          {"cells", b.cells},
          {"witness", to_json(b.witness, n)},
          {"warnings", b.warnings}};
}

// Per-level brackets without witnesses; the sets can be large.
inline Json to_json(const ChoquetBracket& c) {
  Json levels = Json::array();
  const std::size_t m = c.upper_sets.size();
  for (std::size_t k = 0; k < m; ++k) {
    Json lv = {{"t", c.ladder.levels[k]},
               {"t_next", k + 1 < c.ladder.levels.size() ? detail::num(c.ladder.levels[k + 1]) : Json(nullptr)},
               {"strict_lower", c.upper_sets[k].lower},
               {"strict_upper", c.upper_sets[k].upper},
               {"strict_cells", c.upper_sets[k].cells}};
    if (k < c.lower_sets.size()) {
      lv["closed_lower"] = c.lower_sets[k].lower;
      lv["closed_upper"] = c.lower_sets[k].upper;
      lv["closed_cells"] = c.lower_sets[k].cells;
    }
    levels.push_back(lv);
  }
  return {{"delta", c.delta},
          {"lower", c.lower},
          {"upper", c.upper},
          {"ladder", {{"policy", c.ladder.policy}, {"levels", c.ladder.levels}}},
          {"levels", levels},
          {"warnings", c.warnings}};
}

inline Json to_json(const InequalityParams& p) {
  return {{"n", p.n}, {"delta", p.delta}, {"p", p.p}, {"kappa", p.kappa},
          {"lhs_power", p.lhs_power}, {"content_dim", p.content_dim}};
}

inline Json to_json(const InequalityReport& r) {
  Json checks = Json::array();
  for (const SubCheck& c : r.checks) {
    checks.push_back({{"name", c.name}, {"lhs", detail::num(c.lhs)}, {"rhs", detail::num(c.rhs)},
                      {"factor", detail::num(c.factor)}, {"passed", c.passed}});
  }
  return {{"theorem", to_string(r.theorem)},
          {"family", r.family},
          {"params", to_json(r.params)},
          {"lhs", {detail::num(r.lhs.lower), detail::num(r.lhs.upper)}},
          {"rhs", {detail::num(r.rhs.lower), detail::num(r.rhs.upper)}},
          {"ratio", {detail::num(r.ratio.lower), detail::num(r.ratio.upper)}},
          {"verdict", to_string(r.verdict)},
          {"empirical_constant", detail::num(r.empirical_constant)},
          {"cap", detail::num(r.cap)},
          {"lhs_slack", r.lhs_slack},
          {"rhs_slack", r.rhs_slack},
          {"checks", checks},
          {"warnings", r.warnings}};
}

inline Json to_json(const SweepReport& s) {
  Json pts = Json::array();
  for (const SweepPoint& p : s.points) pts.push_back({{"abscissa", p.abscissa}, {"report", to_json(p.report)}});
  return {{"kind", s.kind},
          {"abscissa", s.abscissa_name},
          {"fit", {{"slope", s.fit.slope}, {"intercept", s.fit.intercept},
                   {"half_width", detail::num(s.fit.half_width)}, {"points", s.fit.points}}},
          {"expected_slope", detail::num(s.expected_slope)},
          {"points", pts},
          {"warnings", s.warnings}};
}

inline std::string sweep_csv(const SweepReport& s) {
  std::ostringstream os;
  os << kSweepCsvVersion << '\n' << kSweepCsvHeader << '\n';
  for (const SweepPoint& p : s.points) {
    const InequalityReport& r = p.report;
    os << detail::fmt(p.abscissa) << ',' << detail::fmt(r.lhs.lower) << ',' << detail::fmt(r.lhs.upper) << ','
       << detail::fmt(r.rhs.lower) << ',' << detail::fmt(r.rhs.upper) << ',' << detail::fmt(r.ratio.lower) << ','
       << detail::fmt(r.ratio.upper) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- fields
//
//   # hcontent-field v1
//   n <n>
//   cells <cells per axis>
//   lo <lo_0> ... <lo_{n-1}>
//   h <cell width>
//   gradient <0|1>
//   <values, one per line, row-major, last axis fastest>
//   <gradient magnitudes, same order, when gradient is 1>

inline std::string field_text(const ScalarField& f) {
  const Grid& g = f.grid();
  std::ostringstream os;
  os << kFieldVersion << '\n' << "n " << g.n << '\n' << "cells " << g.cells << '\n' << "lo";
  for (int k = 0; k < g.n; ++k) os << ' ' << detail::fmt(g.lo[k]);
  os << '\n' << "h " << detail::fmt(g.h) << '\n' << "gradient " << (f.has_gradient() ? 1 : 0) << '\n';
  for (double v : f.values()) os << detail::fmt(v) << '\n';
  if (f.has_gradient()) {
    for (double v : f.gradient()) os << detail::fmt(v) << '\n';
  }
  return os.str();
}

inline Json field_metadata(const ScalarField& f) {
  return {{"format", "hcontent-field"},
          {"version", 1},
          {"grid", to_json(f.grid())},
          {"gradient_source", to_string(f.gradient_source())},
          {"max_value", f.max_value()},
          {"lebesgue_integral", lebesgue_integral(f)}};
}

namespace detail {

inline double parse_double(const std::string& tok, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ValidationError("field file: cannot read number '" + tok + "' in " + where);
  }
  return v;
}

inline std::string expect_key(std::istream& in, const char* key) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(std::string("field file: missing '") + key + "' line");
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key) throw ValidationError(std::string("field file: expected '") + key + "', got '" + line + "'");
  std::string rest;
  std::getline(ls, rest);
  return rest;
}

}  // namespace detail

inline ScalarField parse_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kFieldVersion) {
    throw ValidationError(std::string("field file: first line must be '") + kFieldVersion + "'");
  }
  const int n = static_cast<int>(detail::parse_double(std::string(detail::expect_key(in, "n")).substr(1), "n"));
  const int cells =
      static_cast<int>(detail::parse_double(std::string(detail::expect_key(in, "cells")).substr(1), "cells"));
  detail::require(n >= 1 && n <= 3, "field file: n must be 1, 2 or 3");
  std::istringstream los(detail::expect_key(in, "lo"));
  std::vector<double> lo;
  for (std::string tok; los >> tok;) lo.push_back(detail::parse_double(tok, "lo"));
  detail::require(static_cast<int>(lo.size()) == n, "field file: lo must list n coordinates");
  const double h = detail::parse_double(std::string(detail::expect_key(in, "h")).substr(1), "h");
  const std::string gflag = detail::expect_key(in, "gradient").substr(1);
  detail::require(gflag == "0" || gflag == "1", "field file: gradient flag must be 0 or 1");
  std::vector<std::pair<double, double>> bbox;
  for (double l : lo) bbox.push_back({l, l + cells * h});
  const Grid g = make_grid(n, bbox, cells);
  const std::size_t total = static_cast<std::size_t>(g.size());
  auto read_block = [&](const char* what) {
    std::vector<double> v;
    v.reserve(total);
    while (v.size() < total && std::getline(in, line)) v.push_back(detail::parse_double(line, what));
    if (v.size() != total) {
      std::ostringstream os;
      os << "field file: expected " << total << " " << what << ", got " << v.size();
      throw ValidationError(os.str());
    }
    return v;
  };
  std::vector<double> values = read_block("values");
  if (gflag == "1") {
    std::vector<double> grad = read_block("gradient values");
    return ScalarField(g, std::move(values), std::move(grad), GradientSource::kAnalytic);
  }
  return ScalarField(g, std::move(values));
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

// Writes the field to `path` and its metadata to `path`.json.
inline void write_field(const std::string& path, const ScalarField& f) {
  write_text_file(path, field_text(f));
  write_text_file(path + ".json", field_metadata(f).dump(2) + "\n");
}

inline ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open field file '" + path + "'");
  return parse_field(in);
}

}  // namespace hcontent
