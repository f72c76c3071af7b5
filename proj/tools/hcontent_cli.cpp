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

// hcontent: content brackets, Choquet integrals, inequality checks and
// sweeps from the command line. Reports go to --out (or stdout); the run
// manifest goes to --manifest (or stderr) so reports stay byte-stable.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcontent/hcontent.hpp"

namespace {

using hcontent::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInversion = 3;

struct RunConfig {
  std::string command;
  std::string family;
  std::string field;
  double threshold = 0.0;
  int n = 2;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double p = 1.0;
  double kappa = 0.0;
  double alpha = 1.0;
  int grid = 128;
  int ladder = 16;
  int budget = 20000;
  int exact_cap = 256;
  double cap = 0.0;
  double slack = 0.0;
  int phases = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  int workers = 1;
  std::string manifest;
  double radius = 1.0;
  int level = 2;
  int cells_per_side = 3;
  int count = 3;
  std::string theorem;
  double a = 0.25;
  double b = 0.75;
  std::string sweep;
  std::vector<double> r_list{0.25, 0.125, 0.0625};
  std::vector<int> k_list{1, 2, 3, 4};
};

// One entry per configurable key: the flag name doubles as the JSON key.
struct Key {
  std::string name;
  std::function<Json()> get;
  std::function<void(const Json&)> set;
};

template <typename T>
Key key(const std::string& name, T& slot) {
  return {name, [&slot] { return Json(slot); }, [&slot](const Json& j) { slot = j.get<T>(); }};
}

std::vector<Key> keys(RunConfig& c) {
  return {key("family", c.family),       key("field", c.field),
          key("threshold", c.threshold), key("n", c.n),
          key("delta", c.delta),         key("p", c.p),
          key("kappa", c.kappa),         key("alpha", c.alpha),
          key("grid", c.grid),           key("ladder", c.ladder),
          key("budget", c.budget),       key("exact-cap", c.exact_cap),
          key("cap", c.cap),             key("slack", c.slack),
          key("phases", c.phases),       key("seed", c.seed),
          key("out", c.out),             key("format", c.format),
          key("workers", c.workers),     key("radius", c.radius),
          key("level", c.level),         key("cells-per-side", c.cells_per_side),
          key("count", c.count),         key("theorem", c.theorem),
          key("a", c.a),                 key("b", c.b),
          key("sweep", c.sweep),         key("r-list", c.r_list),
          key("k-list", c.k_list)};
}

Json config_echo(RunConfig& c) {
  Json j = Json::object();
  j["command"] = c.command;
  for (const Key& k : keys(c)) {
    const Json v = k.get();
    // NaN is not representable in JSON.
    j[k.name] = v.is_number_float() && std::isnan(v.get<double>()) ? Json(nullptr) : v;
  }
  return j;
}

struct Manifest {
  Json config;
  std::vector<std::pair<std::string, double>> timings;
  std::vector<std::string> warnings;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  template <typename Fn>
  auto stage(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    return result;
  }

  void warn(const std::string& w) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
  }

  Json to_json(const std::string& status, int code, const std::string& error) const {
    Json t = Json::array();
    for (const auto& [name, s] : timings) t.push_back({{"stage", name}, {"seconds", s}});
    Json j = {{"tool", "hcontent"},
              {"version", hcontent::kVersion},
              {"status", status},
              {"exit_code", code},
              {"config", config},
              {"wall_clock_seconds",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
              {"timings", t},
              {"warnings", warnings}};
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

hcontent::VerifyOptions verify_options(const RunConfig& c) {
  hcontent::VerifyOptions o;
  o.cap = c.cap;
  o.choquet.ladder = static_cast<std::size_t>(c.ladder);
  o.choquet.workers = static_cast<std::size_t>(c.workers);
  o.choquet.content.rounding_factor = c.slack;
  o.choquet.content.exact_budget = static_cast<std::size_t>(c.budget);
  o.choquet.content.exact_cap = static_cast<std::size_t>(c.exact_cap);
  o.choquet.content.phases = c.phases;
  return o;
}

void validate_common(const RunConfig& c) {
  using hcontent::detail::require;
  require(c.n >= 1 && c.n <= 3, "--n must be 1, 2 or 3");
  require(c.grid >= 8, "--grid must be at least 8 cells per axis");
  require(c.ladder >= 2, "--ladder must be at least 2");
  require(c.budget >= 1, "--budget must be positive");
  require(c.exact_cap >= 1, "--exact-cap must be positive");
  require(c.cap >= 0.0, "--cap must be >= 0 (0 selects the default)");
  require(c.slack == 0.0 || c.slack > 1.0, "--slack must exceed 1 (0 selects the default)");
  require(c.phases >= 1, "--phases must be at least 1");
  require(c.workers >= 1, "--workers must be at least 1");
  require(c.format == "json" || c.format == "csv", "--format must be json or csv");
  require(c.radius > 0.0, "--radius must be positive");
}

double require_delta(const RunConfig& c) {
  if (std::isnan(c.delta)) throw hcontent::ValidationError("--delta is required for this command");
  hcontent::validate_delta(c.delta, c.n);
  return c.delta;
}

hcontent::Grid ball_grid(const RunConfig& c) {
  return hcontent::make_cube_grid(c.n, -1.25 * c.radius, 1.25 * c.radius, c.grid);
}

hcontent::DiscreteSet make_set(const RunConfig& c) {
  using namespace hcontent;
  if (c.family == "ball") return ball_cells(ball_grid(c), {0.0, 0.0, 0.0}, c.radius);
  if (c.family == "block") {
    // Cube [-radius, radius]^n on the ball grid.
    const Grid g = ball_grid(c);
    const int first = static_cast<int>(std::lround(0.25 * c.radius / g.h));
    const int width = c.grid - 2 * first;
    return block_cells(g, {first, first, first}, {width, width, width});
  }
  if (c.family == "cantor") {
    detail::require(c.n == 2, "the cantor family lives in the plane (--n 2)");
    CantorSpec s;
    s.level = c.level;
    s.cells_per_side = c.cells_per_side;
    return cantor_set(s);
  }
  if (c.family == "file") {
    detail::require(!c.field.empty(), "--family file needs --field <path>");
    return superlevel(read_field(c.field), c.threshold);
  }
  throw ValidationError("unknown set family '" + c.family + "' (ball | block | cantor | file)");
}

hcontent::ScalarField make_field(const RunConfig& c) {
  using namespace hcontent;
  if (c.family == "bump") return radial_bump(ball_grid(c), c.radius);
  if (c.family == "bumps") return random_bump_sum(make_cube_grid(c.n, -1.0, 1.0, c.grid), c.count, c.seed);
  if (c.family == "tent") {
    detail::require(c.n == 2, "the tent family lives in the plane (--n 2)");
    return tent2d({c.radius, c.grid, 1.0});
  }
  if (c.family == "ball") return indicator(ball_cells(ball_grid(c), {0.0, 0.0, 0.0}, c.radius));
  if (c.family == "cantor") {
    detail::require(c.n == 2, "the cantor family lives in the plane (--n 2)");
    CantorSpec s;
    s.level = c.level;
    s.cells_per_side = c.cells_per_side;
    return cantor_capacitary(s);
  }
  if (c.family == "file") {
    detail::require(!c.field.empty(), "--family file needs --field <path>");
    return read_field(c.field);
  }
  throw ValidationError("unknown field family '" + c.family + "' (bump | bumps | tent | ball | cantor | file)");
}

void collect(Manifest& m, const std::vector<std::string>& ws) {
  for (const std::string& w : ws) m.warn(w);
}

std::string cmd_content(const RunConfig& c, Manifest& m) {
  using namespace hcontent;
  const double delta = require_delta(c);
  const DiscreteSet e = m.stage("build-set", [&] { return make_set(c); });
  hcontent::detail::require(e.grid().n == c.n, "set dimension differs from --n");
  const ContentOptions o = verify_options(c).choquet.content;
  const ContentBracket b = m.stage("content-bracket", [&] { return content_bracket(e, delta, o); });
  collect(m, b.warnings);
  if (!b.optimal_in_family && e.size() <= o.exact_cap) m.warn("exact search did not finish; upper bound is greedy");
  Json j = {{"command", "content"}, {"family", c.family}, {"grid", to_json(e.grid())}, {"bracket", to_json(b, c.n)}};
  return j.dump(2) + "\n";
}

std::string cmd_integrate(const RunConfig& c, Manifest& m) {
  using namespace hcontent;
  const double delta = require_delta(c);
  hcontent::detail::require(c.alpha > 0.0, "--alpha (power of the integrand) must be positive");
  const ScalarField f = m.stage("build-field", [&] { return make_field(c); });
  hcontent::detail::require(f.grid().n == c.n, "field dimension differs from --n");
  const ScalarField g = c.alpha == 1.0 ? f : pow_field(f, c.alpha);
  const ChoquetBracket b = m.stage("choquet", [&] { return choquet_integral(g, delta, verify_options(c).choquet); });
  collect(m, b.warnings);
  Json j = {{"command", "integrate"}, {"family", c.family}, {"alpha", c.alpha},
            {"grid", to_json(f.grid())}, {"integral", to_json(b)}};
  return j.dump(2) + "\n";
}

std::string cmd_verify(const RunConfig& c, Manifest& m) {
  using namespace hcontent;
  const VerifyOptions o = verify_options(c);
  // Parameter windows are checked before any field is built.
  std::function<InequalityReport(const ScalarField&)> run;
  if (c.theorem == "ps") {
    const double delta = require_delta(c);
    const InequalityParams prm = ps_params(c.n, delta, c.p, c.kappa);
    run = [prm, o](const ScalarField& f) { return verify_ps(f, prm, o); };
  } else if (c.theorem == "spw") {
    spw_params(c.n, c.kappa);
    run = [&c, o](const ScalarField& f) { return verify_spw(f, c.kappa, o); };
  } else if (c.theorem == "limit") {
    const double delta = require_delta(c);
    limit_params(c.n, delta, c.kappa);
    run = [&c, delta, o](const ScalarField& f) { return verify_limit(f, delta, c.kappa, o); };
  } else if (c.theorem == "ko") {
    spw_params(c.n, c.kappa);
    run = [&c, o](const ScalarField& f) { return verify_ko_lemma(f, c.a, c.b, c.kappa, o); };
  } else if (c.theorem == "superlevel") {
    spw_params(c.n, c.kappa);
    run = [&c, o](const ScalarField& f) { return verify_superlevel(f, c.kappa, o); };
  } else {
    throw ValidationError("unknown theorem '" + c.theorem + "' (ps | spw | limit | ko | superlevel)");
  }
  const ScalarField f = m.stage("build-field", [&] { return make_field(c); });
  hcontent::detail::require(f.grid().n == c.n, "field dimension differs from --n");
  InequalityReport r = m.stage("verify", [&] { return run(f); });
  r.family = c.family;
  collect(m, r.warnings);
  Json j = {{"command", "verify"}, {"grid", to_json(f.grid())}, {"report", to_json(r)}};
  return j.dump(2) + "\n";
}

std::string cmd_sweep(const RunConfig& c, Manifest& m) {
  using namespace hcontent;
  const VerifyOptions o = verify_options(c);
  SweepReport s;
  if (c.sweep == "tent") {
    detail::require(c.r_list.size() >= 3, "tent sweep needs at least 3 radii in --r-list");
    s = m.stage("tent-sweep", [&] { return sharpness_tent(c.kappa, c.alpha, c.r_list, o, c.grid); });
  } else if (c.sweep == "cantor") {
    detail::require(c.k_list.size() >= 3, "cantor sweep needs at least 3 levels in --k-list");
    if (std::isnan(c.delta)) throw ValidationError("--delta is required for the cantor sweep");
    s = m.stage("cantor-sweep", [&] { return cantor_blowup(c.delta, c.p, c.k_list, o, c.cells_per_side); });
  } else {
    throw ValidationError("unknown sweep '" + c.sweep + "' (tent | cantor)");
  }
  collect(m, s.warnings);
  for (const SweepPoint& p : s.points) collect(m, p.report.warnings);
  if (c.format == "csv") return sweep_csv(s);
  Json j = {{"command", "sweep"}, {"sweep", to_json(s)}};
  return j.dump(2) + "\n";
}

void emit_manifest(const RunConfig& c, const Manifest& m, const std::string& status, int code,
                   const std::string& error) {
  const std::string text = m.to_json(status, code, error).dump(2) + "\n";
  if (!c.manifest.empty()) {
    try {
      hcontent::write_text_file(c.manifest, text);
      return;
    } catch (const std::exception& e) {
      std::cerr << "hcontent: " << e.what() << "\n";
    }
  }
  std::cerr << text;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  Manifest manifest;
  CLI::App app{"Hausdorff content brackets, Choquet integrals and content Sobolev checks"};
  app.set_version_flag("--version", std::string(hcontent::kVersion));
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; its keys are the long flag names and win over flags");
  app.add_option("--family", cfg.family, "set or field family: ball | block | cantor | file | bump | bumps | tent");
  app.add_option("--field", cfg.field, "field file (family file)");
  app.add_option("--threshold", cfg.threshold, "set = {f > threshold} for family file");
  app.add_option("--n", cfg.n, "dimension");
  app.add_option("--delta", cfg.delta, "content dimension");
  app.add_option("--p", cfg.p, "gradient exponent");
  app.add_option("--kappa", cfg.kappa, "dimension drop kappa");
  app.add_option("--alpha", cfg.alpha, "integrand power (integrate) or LHS exponent (tent sweep)");
  app.add_option("--grid", cfg.grid, "cells per axis");
  app.add_option("--ladder", cfg.ladder, "threshold ladder size m");
  app.add_option("--budget", cfg.budget, "branch-and-bound node budget");
  app.add_option("--exact-cap", cfg.exact_cap, "largest set (cells) handed to branch and bound");
  app.add_option("--cap", cfg.cap, "verdict cap on the inequality constant (0: theorem default)");
  app.add_option("--slack", cfg.slack, "rounding factor sigma of the packing bound (0: 2 sqrt(n))");
  app.add_option("--phases", cfg.phases, "packing families tried per lower bound");
  app.add_option("--seed", cfg.seed, "seed for random fixtures");
  app.add_option("--out", cfg.out, "report path (default stdout)");
  app.add_option("--format", cfg.format, "json | csv (csv for sweeps)");
  app.add_option("--workers", cfg.workers, "worker threads");
  app.add_option("--manifest", cfg.manifest, "manifest path (default stderr)");
  app.add_option("--radius", cfg.radius, "ball/bump radius, tent r");
  app.add_option("--level", cfg.level, "cantor level k");
  app.add_option("--cells-per-side", cfg.cells_per_side, "cells across a level-k cantor square");
  app.add_option("--count", cfg.count, "number of random bumps");
  app.add_option("--theorem", cfg.theorem, "ps | spw | limit | ko | superlevel");
  app.add_option("--a", cfg.a, "ko lemma lower truncation level");
  app.add_option("--b", cfg.b, "ko lemma upper truncation level");
  app.add_option("--sweep", cfg.sweep, "tent | cantor");
  app.add_option("--r-list", cfg.r_list, "tent radii")->delimiter(',');
  app.add_option("--k-list", cfg.k_list, "cantor levels")->delimiter(',');
  for (const char* name : {"content", "integrate", "verify", "sweep"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    manifest.config = config_echo(cfg);
    emit_manifest(cfg, manifest, "error", kExitUsage, e.what());
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  int code = kExitOk;
  std::string error;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw hcontent::ValidationError("cannot open config file '" + config_path + "'");
      Json file;
      try {
        file = Json::parse(in);
      } catch (const Json::exception& e) {
        throw hcontent::ValidationError("config file is not valid JSON: " + std::string(e.what()));
      }
      if (!file.is_object()) throw hcontent::ValidationError("config file must hold a JSON object");
      std::vector<Key> ks = keys(cfg);
      for (auto it = file.begin(); it != file.end(); ++it) {
        auto k = std::find_if(ks.begin(), ks.end(), [&](const Key& x) { return x.name == it.key(); });
        if (k == ks.end()) throw hcontent::ValidationError("config file: unknown key '" + it.key() + "'");
        if (app.count("--" + it.key()) > 0 && k->get() != it.value()) {
          manifest.warn("config file overrides --" + it.key());
        }
        try {
          k->set(it.value());
        } catch (const Json::exception&) {
          throw hcontent::ValidationError("config file: wrong type for '" + it.key() + "'");
        }
      }
    }
    manifest.config = config_echo(cfg);
    validate_common(cfg);
    if (cfg.format == "csv" && cfg.command != "sweep") {
      throw hcontent::ValidationError("--format csv is only available for sweeps");
    }
    std::string text;
    if (cfg.command == "content") {
      text = cmd_content(cfg, manifest);
    } else if (cfg.command == "integrate") {
      text = cmd_integrate(cfg, manifest);
    } else if (cfg.command == "verify") {
      text = cmd_verify(cfg, manifest);
    } else {
      text = cmd_sweep(cfg, manifest);
    }
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      hcontent::write_text_file(cfg.out, text);
    }
  } catch (const hcontent::BracketInversion& e) {
    code = kExitInversion;
    error = e.what();
  } catch (const std::invalid_argument& e) {
    code = kExitUsage;
    error = e.what();
  } catch (const std::exception& e) {
    code = 1;
    error = e.what();
  }
  if (manifest.config.is_null()) manifest.config = config_echo(cfg);
  if (code != kExitOk) std::cerr << "hcontent: " << error << "\n";
  emit_manifest(cfg, manifest, code == kExitOk ? "ok" : "error", code, error);
  return code;
}
