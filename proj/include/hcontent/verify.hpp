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

// Both sides of the content Sobolev inequalities on sampled fields.
//
// An inequality A <= c B is judged with brackets only:
//   violation     A.lower > cap * B.upper   (certain, whatever the true values)
//   consistent    A.upper <= cap * B.lower  (certain)
//   inconclusive  otherwise.
// The empirical constant is A.upper / B.lower.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hcontent/choquet.hpp"
#include "hcontent/content.hpp"
#include "hcontent/error.hpp"
#include "hcontent/grid.hpp"
#include "hcontent/testbed.hpp"

namespace hcontent {

enum class Verdict { kConsistent, kViolation, kInconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent:
      return "consistent";
    case Verdict::kViolation:
      return "violation";
    default:
      return "inconclusive";
  }
}

enum class Theorem { kPS, kSPW, kLimit, kKO, kSuperlevel, kTentSharpness, kCantorBlowup };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::kPS:
      return "ps";
    case Theorem::kSPW:
      return "spw";
    case Theorem::kLimit:
      return "limit";
    case Theorem::kKO:
      return "ko";
    case Theorem::kSuperlevel:
      return "superlevel";
    case Theorem::kTentSharpness:
      return "tent";
    default:
      return "cantor";
  }
}

// Verdict caps. The true constants are not explicit; these defaults sit
// above every empirical constant seen on the testbed (see the README).
inline double default_cap(Theorem t) {
  switch (t) {
    case Theorem::kPS:
      return 4.0;
    case Theorem::kSPW:
      return 2.0;
    case Theorem::kLimit:
      return 4.0;
    case Theorem::kKO:
      return 2.0;
    case Theorem::kSuperlevel:
      return 1.0;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

struct InequalityParams {
  int n = 2;
  double delta = 2.0;
  double p = 1.0;
  double kappa = 0.0;
  double lhs_power = 1.0;    // exponent on |u| inside the LHS integral
  double content_dim = 2.0;  // dimension of the LHS content
};

// delta/n < p < delta (and p <= 0.95 delta), kappa in [0, 1).
inline InequalityParams ps_params(int n, double delta, double p, double kappa) {
  std::ostringstream os;
  if (!(n >= 2 && n <= 3)) os << "ps needs n in {2, 3}";
  else if (!(delta > 0.0 && delta <= n)) os << "ps needs 0 < delta <= n; got delta = " << delta;
  else if (!(p > delta / n)) os << "ps needs p > delta/n = " << delta / n << "; got p = " << p;
  else if (!(p < delta)) os << "ps needs p < delta = " << delta << "; got p = " << p;
  else if (!(p <= 0.95 * delta)) os << "ps needs p <= 0.95 delta = " << 0.95 * delta << "; got p = " << p;
  else if (!(kappa >= 0.0 && kappa < 1.0)) os << "ps needs kappa in [0, 1); got kappa = " << kappa;
  if (!os.str().empty()) throw ValidationError(os.str());
  InequalityParams q{n, delta, p, kappa, 0.0, delta - kappa * p};
  q.lhs_power = p * (delta - kappa * p) / (delta - p);
  return q;
}

inline InequalityParams spw_params(int n, double kappa) {
  std::ostringstream os;
  if (!(n >= 2 && n <= 3)) os << "spw needs n in {2, 3}";
  else if (!(kappa >= 0.0 && kappa <= 1.0)) os << "spw needs kappa in [0, 1]; got kappa = " << kappa;
  if (!os.str().empty()) throw ValidationError(os.str());
  return {n, static_cast<double>(n), 1.0, kappa, (n - kappa) / (n - 1.0), n - kappa};
}

// (n-1)/(1-kappa/n) <= delta <= n.
inline InequalityParams limit_params(int n, double delta, double kappa) {
  std::ostringstream os;
  if (!(n >= 2 && n <= 3)) {
    os << "limit case needs n in {2, 3}";
  } else if (!(kappa >= 0.0 && kappa <= 1.0)) {
    os << "limit case needs kappa in [0, 1]; got kappa = " << kappa;
  } else {
    const double edge = (n - 1.0) / (1.0 - kappa / n);
    if (delta < edge * (1.0 - 1e-12)) {
      os << "limit case needs (n-1)/(1-kappa/n) <= delta <= n; delta = " << delta
         << " is below the window edge " << edge;
    } else if (delta > n) {
      os << "limit case needs delta <= n = " << n << "; got delta = " << delta;
    }
  }
  if (!os.str().empty()) throw ValidationError(os.str());
  const double d = delta - kappa * delta / n;
  return {n, delta, delta / n, kappa, d / (n - 1.0), d};
}

struct SubCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double factor = 1.0;
  bool passed = true;  // lhs <= factor * rhs
};

struct InequalityReport {
  Theorem theorem = Theorem::kPS;
  std::string family;
  InequalityParams params;
  ValueBracket lhs;
  ValueBracket rhs;
  ValueBracket ratio;  // [lhs.lower / rhs.upper, lhs.upper / rhs.lower]
  Verdict verdict = Verdict::kConsistent;
  double empirical_constant = 0.0;
  double cap = 1.0;
  double lhs_slack = 1.0;  // rounding slack sigma^d of the LHS content
  double rhs_slack = 1.0;
  std::vector<SubCheck> checks;
  std::vector<std::string> warnings;
};

struct VerifyOptions {
  ChoquetOptions choquet;
  double cap = 0.0;  // 0 selects default_cap(theorem)
  std::size_t superlevel_ladder = 48;
};

namespace detail {

inline double safe_div(double a, double b) {
  if (a == 0.0) return 0.0;
  if (b <= 0.0) return std::numeric_limits<double>::infinity();
  return a / b;
}

inline void finalize(InequalityReport& r, const VerifyOptions& o) {
  r.cap = o.cap > 0.0 ? o.cap : default_cap(r.theorem);
  r.ratio = {safe_div(r.lhs.lower, r.rhs.upper), safe_div(r.lhs.upper, r.rhs.lower)};
  r.empirical_constant = r.ratio.upper;
  if (r.lhs.lower > r.cap * r.rhs.upper * (1.0 + 1e-12)) {
    r.verdict = Verdict::kViolation;
  } else if (r.lhs.upper <= r.cap * r.rhs.lower * (1.0 + 1e-12)) {
    r.verdict = Verdict::kConsistent;
  } else {
    r.verdict = Verdict::kInconclusive;
  }
}

inline void merge_warnings(InequalityReport& r, const ChoquetBracket& b) {
  for (const std::string& w : b.warnings) {
    if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
  }
}

inline double slack_of(const VerifyOptions& o, int n, double d) {
  return std::pow(rounding_factor(o.choquet.content, n), d);
}

// (int f^q dH^d)^(1/q).
inline ValueBracket norm_bracket(const ScalarField& f, double q, double d, const VerifyOptions& o,
                                 InequalityReport& r) {
  const ChoquetBracket b = choquet_integral(pow_field(f, q), d, o.choquet);
  merge_warnings(r, b);
  return pow_bracket(b.value(), 1.0 / q);
}

inline ScalarField gradient_field(const ScalarField& f) {
  return ScalarField(f.grid(), gradient_or_fd(f));
}

// (int f^(n/(n-1)) dx)^((n-1)/n).
inline double classical_lhs(const ScalarField& f) {
  const int n = f.grid().n;
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = std::pow(x, n / (n - 1.0));
  return std::pow(lebesgue_integral(v, f.grid()), (n - 1.0) / n);
}

}  // namespace detail

// (int |u|^q dH^(delta - kappa p))^(1/q) <= c (int |grad u|^p dH^delta)^(1/p),
// q = p (delta - kappa p) / (delta - p).
inline InequalityReport verify_ps(const ScalarField& f, const InequalityParams& params,
                                  const VerifyOptions& opts = {}) {
  const InequalityParams prm = ps_params(params.n, params.delta, params.p, params.kappa);
  detail::require(f.grid().n == prm.n, "field dimension differs from n");
  InequalityReport r;
  r.theorem = Theorem::kPS;
  r.params = prm;
  r.lhs = detail::norm_bracket(f, prm.lhs_power, prm.content_dim, opts, r);
  r.rhs = detail::norm_bracket(detail::gradient_field(f), prm.p, prm.delta, opts, r);
  r.lhs_slack = detail::slack_of(opts, prm.n, prm.content_dim);
  r.rhs_slack = detail::slack_of(opts, prm.n, prm.delta);
  detail::finalize(r, opts);
  return r;
}

// Sharp isoperimetric constant of ||u||_{n/(n-1)} <= c ||grad u||_1.
inline double gagliardo_nirenberg_constant(int n) {
  return 1.0 / (n * std::pow(unit_ball_volume(n), 1.0 / n));
}

// (int |u|^((n-k)/(n-1)) dH^(n-k))^((n-1)/(n-k)) <= c int |grad u| dx.
inline InequalityReport verify_spw(const ScalarField& f, double kappa, const VerifyOptions& opts = {}) {
  const int n = f.grid().n;
  const InequalityParams prm = spw_params(n, kappa);
  InequalityReport r;
  r.theorem = Theorem::kSPW;
  r.params = prm;
  r.lhs = detail::norm_bracket(f, prm.lhs_power, prm.content_dim, opts, r);
  const double g = lebesgue_integral(gradient_or_fd(f), f.grid());
  r.rhs = {g, g};
  r.lhs_slack = detail::slack_of(opts, n, prm.content_dim);
  detail::finalize(r, opts);

  // Classical L^(n/(n-1)) norm against the content form: follows from the
  // dimension change from n - kappa to n and |E| <= |B(0,1)| H^n_inf(E).
  const double classical = detail::classical_lhs(f);
  const double cb = std::pow(unit_ball_volume(n) * n / (n - kappa), (n - 1.0) / n);
  r.checks.push_back({"classical-below-content-form", classical, r.lhs.upper, cb,
                      classical <= cb * r.lhs.upper * (1.0 + 1e-9)});
  if (kappa == 0.0) {
    // 5% allowance for the cell-centre quadrature of both sides.
    const double c = gagliardo_nirenberg_constant(n) * 1.05;
    r.checks.push_back({"gagliardo-nirenberg", classical, g, c, classical <= c * g});
  }
  return r;
}

// (int |u|^(d/(n-1)) dH^d)^((n-1)/d) <= c (int |grad u|^(delta/n) dH^delta)^(n/delta),
// d = delta - kappa delta / n.
inline InequalityReport verify_limit(const ScalarField& f, double delta, double kappa,
                                     const VerifyOptions& opts = {}) {
  const int n = f.grid().n;
  const InequalityParams prm = limit_params(n, delta, kappa);
  InequalityReport r;
  r.theorem = Theorem::kLimit;
  r.params = prm;
  r.lhs = detail::norm_bracket(f, prm.lhs_power, prm.content_dim, opts, r);
  r.rhs = detail::norm_bracket(detail::gradient_field(f), prm.p, prm.delta, opts, r);
  r.lhs_slack = detail::slack_of(opts, n, prm.content_dim);
  r.rhs_slack = detail::slack_of(opts, n, prm.delta);
  detail::finalize(r, opts);
  return r;
}

// |b - a| H^(n-k)({u >= b})^((n-1)/(n-k)) <= c int_{a < u < b} |grad u| dx.
inline InequalityReport verify_ko_lemma(const ScalarField& f, double a, double b, double kappa,
                                        const VerifyOptions& opts = {}) {
  const int n = f.grid().n;
  const InequalityParams prm = spw_params(n, kappa);
  const double top = f.max_value();
  if (!(a >= 0.0 && a < b && b < top)) {
    std::ostringstream os;
    os << "ko lemma needs 0 <= a < b < max u = " << top << "; got a = " << a << ", b = " << b;
    throw ValidationError(os.str());
  }
  InequalityReport r;
  r.theorem = Theorem::kKO;
  r.params = prm;
  const ScalarField psi = truncate(f, a, b);
  const ContentBracket cb = content_bracket(superlevel_closed(f, b), prm.content_dim, opts.choquet.content);
  const double beta = (n - 1.0) / (n - kappa);
  r.lhs = {(b - a) * std::pow(cb.lower, beta), (b - a) * std::pow(cb.upper, beta)};
  const double g = gradient_integral(psi);
  r.rhs = {g, g};
  r.lhs_slack = cb.slack;
  detail::finalize(r, opts);
  // psi = b - a on {u >= b}, so the lemma's LHS sits below the content
  // norm of psi.
  const ValueBracket spw_lhs = detail::norm_bracket(psi, prm.lhs_power, prm.content_dim, opts, r);
  r.checks.push_back({"below-spw-lhs-of-truncation", r.lhs.lower, spw_lhs.upper, 1.0,
                      r.lhs.lower <= spw_lhs.upper * (1.0 + 1e-12)});
  return r;
}

// ||u||_inf <= c int |grad u(x)| / H^(n-k)({u >= u(x)})^((n-1)/(n-k)) dx.
// Each cell's closed superlevel is sandwiched between ladder sets; lower
// content gives the upper RHS and vice versa.
inline InequalityReport verify_superlevel(const ScalarField& f, double kappa,
                                          const VerifyOptions& opts = {}) {
  const int n = f.grid().n;
  const InequalityParams prm = spw_params(n, kappa);
  const double M = f.max_value();
  if (!(M > 0.0)) throw ValidationError("superlevel inequality needs max u > 0");
  InequalityReport r;
  r.theorem = Theorem::kSuperlevel;
  r.params = prm;
  r.lhs = {M, M};
  const double d = prm.content_dim;
  const double beta = (n - 1.0) / (n - kappa);

  ThresholdLadder ladder = make_ladder(f, opts.superlevel_ladder);
  std::vector<double> t(ladder.levels.begin() + 1, ladder.levels.end());
  double vmin = M;
  for (double v : f.values()) {
    if (v > 0.0) vmin = std::min(vmin, v);
  }
  if (t.front() > vmin) t.insert(t.begin(), vmin);
  const std::size_t m = t.size();
  std::vector<DiscreteSet> sets;
  for (double x : t) sets.push_back(superlevel_closed(f, x));
  std::vector<ContentBracket> cbs(m);
  detail::parallel_for(m, opts.choquet.workers,
                       [&](std::size_t k) { cbs[k] = detail::bracket_of(sets[k], d, opts.choquet); });
  std::vector<double> U(m), L(m);
  double env = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) U[k] = env = std::min(env, cbs[k].upper);
  env = 0.0;
  for (std::size_t k = m; k-- > 0;) L[k] = env = std::max(env, cbs[k].lower);

  const std::vector<double> grad = gradient_or_fd(f);
  const double vol = f.grid().cell_volume();
  const auto vals = f.values();
  double lo = 0.0, hi = 0.0;
  std::size_t nonpositive = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = vals[i];
    if (v <= 0.0) continue;
    // t[klo] <= v <= t[khi]
    const std::size_t khi = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), v) - t.begin());
    const std::size_t klo = t[khi] == v ? khi : khi - 1;
    const double cu = U[klo];
    const double cl = L[khi];
    if (v < M && !(cl > 0.0)) ++nonpositive;
    if (grad[i] == 0.0) continue;
    lo += grad[i] * vol / std::pow(cu, beta);
    hi += cl > 0.0 ? grad[i] * vol / std::pow(cl, beta) : std::numeric_limits<double>::infinity();
  }
  r.rhs = {lo, hi};
  r.lhs_slack = 1.0;
  r.rhs_slack = detail::slack_of(opts, n, d);
  detail::finalize(r, opts);
  r.checks.push_back({"superlevel-content-positive", static_cast<double>(nonpositive), 0.0, 1.0,
                      nonpositive == 0});
  return r;
}

// ---------------------------------------------------------------- sweeps

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  std::size_t points = 0;
};

namespace detail {
// Two-sided 97.5% Student t quantiles, 1..30 degrees of freedom.
inline double t_quantile_975(std::size_t dof) {
  static constexpr double kT[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                  2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                  2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof == 0) return std::numeric_limits<double>::infinity();
  return dof <= 30 ? kT[dof - 1] : 1.96;
}
}  // namespace detail

// Least squares fit of log y against log x.
inline SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "slope fit inputs differ in length");
  detail::require(x.size() >= 3, "slope fit needs at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(x[i] > 0.0 && y[i] > 0.0, "slope fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  detail::require(sxx > 0.0, "slope fit needs distinct abscissae");
  SlopeFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (f.intercept + f.slope * lx[i]);
    sse += e * e;
  }
  const double se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  f.half_width = detail::t_quantile_975(n - 2) * se;
  return f;
}

struct SweepPoint {
  double abscissa = 0.0;
  InequalityReport report;
};

struct SweepReport {
  std::string kind;            // "tent" or "cantor"
  std::string abscissa_name;   // "r" or "k"
  std::vector<SweepPoint> points;
  SlopeFit fit;
  double expected_slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

namespace detail {
inline void require_strictly_monotone(std::span<const double> x, const char* what) {
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < x.size(); ++i) {
    inc = inc && x[i] > x[i - 1];
    dec = dec && x[i] < x[i - 1];
  }
  if (!(inc || dec)) throw ValidationError(std::string(what) + " must be strictly monotone");
}
}  // namespace detail

// Tent family: LHS = (int u_r^alpha dH^(2-kappa))^(1/alpha), RHS = int |grad u_r| dx.
// The slope is fitted to the LHS lower ends against r.
inline SweepReport sharpness_tent(double kappa, double alpha, std::span<const double> r_list,
                                  const VerifyOptions& opts = {}, int cells = 256,
                                  double half_width = 1.0) {
  detail::require(alpha > 0.0, "tent sweep needs alpha > 0");
  detail::require(kappa >= 0.0 && kappa <= 1.0, "tent sweep needs kappa in [0, 1]");
  detail::require_strictly_monotone(r_list, "tent radii");
  SweepReport s;
  s.kind = "tent";
  s.abscissa_name = "r";
  s.expected_slope = (2.0 - kappa) / alpha - 1.0;
  const VerifyOptions o = opts;
  for (double r : r_list) {
    const TentSpec spec{r, cells, half_width};
    if (tent_grid(spec).h > r / 8.0 * (1.0 + 1e-12) || !(r > 0.0 && 2.0 * r + tent_grid(spec).h < half_width)) {
      std::ostringstream os;
      os << "dropped r = " << r << ": not resolved by " << cells << " cells";
      s.warnings.push_back(os.str());
      continue;
    }
    const ScalarField u = tent2d(spec);
    InequalityReport rep;
    rep.theorem = Theorem::kTentSharpness;
    rep.family = "tent";
    rep.params = {2, 2.0 - kappa, alpha, kappa, alpha, 2.0 - kappa};
    rep.lhs = detail::norm_bracket(u, alpha, 2.0 - kappa, o, rep);
    const double g = gradient_integral(u);
    rep.rhs = {g, g};
    rep.lhs_slack = detail::slack_of(o, 2, 2.0 - kappa);
    detail::finalize(rep, o);
    s.points.push_back({r, std::move(rep)});
  }
  if (s.points.size() < 3) {
    std::string msg = "tent sweep needs at least 3 resolvable radii";
    for (const std::string& w : s.warnings) msg += "; " + w;
    throw ValidationError(msg);
  }
  std::vector<double> x, y;
  for (const SweepPoint& p : s.points) {
    x.push_back(p.abscissa);
    y.push_back(p.report.lhs.lower);
  }
  s.fit = fit_loglog(x, y);
  return s;
}

// Cantor family: ratio (int phi_k^p dH^delta)^(1/p) / int |grad phi_k| dx,
// which grows without bound when delta < n - 1. Each point also records
// the content bracket of the iterate E_k.
inline SweepReport cantor_blowup(double delta, double p, std::span<const int> k_list,
                                 const VerifyOptions& opts = {}, int cells_per_side = 3) {
  if (!(delta >= kMinContentDimension && delta < 1.0)) {
    std::ostringstream os;
    os << "cantor sweep needs " << kMinContentDimension << " <= delta < n - 1 = 1; got delta = " << delta;
    throw ValidationError(os.str());
  }
  detail::require(p > 0.0, "cantor sweep needs p > 0");
  std::vector<double> ks(k_list.begin(), k_list.end());
  detail::require_strictly_monotone(ks, "cantor levels");
  SweepReport s;
  s.kind = "cantor";
  s.abscissa_name = "k";
  for (int k : k_list) {
    CantorSpec spec;
    spec.level = k;
    spec.cells_per_side = cells_per_side;
    const ScalarField phi = cantor_capacitary(spec);
    InequalityReport rep;
    rep.theorem = Theorem::kCantorBlowup;
    rep.family = "cantor";
    rep.params = {2, delta, p, 0.0, p, delta};
    rep.lhs = detail::norm_bracket(phi, p, delta, opts, rep);
    const double g = gradient_integral(phi);
    rep.rhs = {g, g};
    rep.lhs_slack = detail::slack_of(opts, 2, delta);
    detail::finalize(rep, opts);
    const ContentBracket e = content_bracket(cantor_set(spec), delta, opts.choquet.content);
    rep.checks.push_back({"iterate-content-lower", e.lower, e.upper, 1.0, e.lower > 0.0});
    rep.checks.push_back({"lhs-above-iterate-content", std::pow(e.lower, 1.0 / p), rep.lhs.lower, 1.0,
                          std::pow(e.lower, 1.0 / p) <= rep.lhs.lower * (1.0 + 1e-12)});
    s.points.push_back({static_cast<double>(k), std::move(rep)});
  }
  if (s.points.size() >= 3) {
    std::vector<double> x, y;
    for (const SweepPoint& pt : s.points) {
      x.push_back(pt.abscissa);
      y.push_back(pt.report.ratio.lower);
    }
    s.fit = fit_loglog(x, y);
  }
  return s;
}

}  // namespace hcontent
