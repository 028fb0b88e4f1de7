// Copyright 2026 The DAME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DAME_CLI_HPP
#define DAME_CLI_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dame/bounds.hpp"
#include "dame/csv.hpp"
#include "dame/experiments.hpp"
#include "dame/mechanisms.hpp"
#include "dame/protocol.hpp"
#include "dame/svg.hpp"

namespace dame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

struct Config {
  std::string command;       // mtilde | bounds | simulate | benchmark | audit
  nlohmann::json params;     // per-command document
  std::string output = "-";  // "-" = stdout, otherwise a CSV path
  std::string svg;           // optional chart path, empty = none
  std::uint64_t seed = 0;
  int threads = 0;           // 0 = all available cores
  bool quiet = false;

  static Config from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "command", "params", "output", "svg", "seed", "threads", "quiet"};
    for (const auto& item : j.items()) {
      if (std::find(known.begin(), known.end(), item.key()) == known.end())
        throw std::invalid_argument("config: unknown key '" + item.key() +
                                    "'");
    }
    Config c;
    c.command = j.at("command").get<std::string>();
    c.params = j.value("params", nlohmann::json::object());
    c.output = j.value("output", std::string("-"));
    c.svg = j.value("svg", std::string());
    c.seed = j.value("seed", std::uint64_t{0});
    c.threads = j.value("threads", 0);
    c.quiet = j.value("quiet", false);
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["params"] = params;
    j["output"] = output;
    if (!svg.empty()) j["svg"] = svg;
    j["seed"] = seed;
    // threads is omitted on purpose: results are schedule-independent and
    // the emitted CSV must be bit-identical across thread counts.
    j["quiet"] = quiet;
    return j;
  }
};

namespace cli_detail {

inline void require_keys(const nlohmann::json& j,
                         const std::vector<std::string>& known,
                         const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument(where + ": params must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::invalid_argument(where + ": unknown key '" + item.key() +
                                  "'");
  }
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

// Grid spec "key=lo:hi:steps" over a numeric distribution parameter.
struct GridSpec {
  std::string key;
  double lo = 0.0, hi = 0.0;
  int steps = 0;
};

inline GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  const auto eq = text.find('=');
  const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq + 1);
  const auto c2 = c1 == std::string::npos ? std::string::npos
                                          : text.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos ||
      c2 == std::string::npos)
    throw std::invalid_argument("grid must be 'param=lo:hi:steps'");
  g.key = text.substr(0, eq);
  try {
    g.lo = std::stod(text.substr(eq + 1, c1 - eq - 1));
    g.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.steps = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must be 'param=lo:hi:steps'");
  }
  if (g.steps < 1) throw std::invalid_argument("grid: steps must be >= 1");
  if (!(g.hi >= g.lo)) throw std::invalid_argument("grid: need hi >= lo");
  return g;
}

inline CsvDocument cmd_mtilde(const Config& c) {
  require_keys(c.params, {"dist", "n", "alpha"}, "mtilde");
  const SizeDistribution dist = SizeDistribution::from_json(c.params.at("dist"));
  const auto n = c.params.at("n").get<std::int64_t>();
  const PrivacyBudget alpha(c.params.at("alpha").get<double>());
  const MTildeResult r = solve_m_tilde(dist, n, alpha);

  CsvDocument doc;
  doc.header = {"m_tilde", "iterations", "psi_at_result", "psi_above",
                "bracket_extended", "used_linear_scan"};
  doc.add_row({std::to_string(r.m_tilde), std::to_string(r.iterations),
               format_double(r.psi_at_result), format_double(r.psi_above),
               r.bracket_extended ? "1" : "0",
               r.used_linear_scan ? "1" : "0"});
  return doc;
}

inline CsvDocument cmd_bounds(const Config& c) {
  require_keys(c.params, {"dist", "n", "alpha", "grid"}, "bounds");
  const nlohmann::json dist_json = c.params.at("dist");
  const auto n = c.params.at("n").get<std::int64_t>();
  const double alpha = c.params.at("alpha").get<double>();

  CsvDocument doc;
  doc.header = {"param",       "n_alpha_sq",     "m_tilde",
                "lower_bound", "lower_argmax_a", "upper_bound"};

  const auto emit = [&](const std::string& param_value,
                        const nlohmann::json& dj, std::int64_t nn,
                        double aa) {
    const SizeDistribution dist = SizeDistribution::from_json(dj);
    const RiskBounds b = evaluate_bounds(dist, nn, PrivacyBudget(aa));
    doc.add_row({param_value, format_double(b.n_alpha_sq),
                 std::to_string(b.m_tilde), format_double(b.lower),
                 std::to_string(b.lower_argmax_a), format_double(b.upper)});
  };

  if (!c.params.contains("grid")) {
    emit("", dist_json, n, alpha);
    return doc;
  }
  const GridSpec g = parse_grid(c.params.at("grid").get<std::string>());
  for (int i = 0; i < g.steps; ++i) {
    const double v =
        (g.steps == 1)
            ? g.lo
            : g.lo + (g.hi - g.lo) * double(i) / double(g.steps - 1);
    nlohmann::json dj = dist_json;
    std::int64_t nn = n;
    double aa = alpha;
    if (g.key == "n") {
      nn = std::int64_t(std::llround(v));
    } else if (g.key == "alpha") {
      aa = v;
    } else {
      if (!dj.contains(g.key))
        throw std::invalid_argument("bounds: grid key '" + g.key +
                                    "' not in dist");
      if (dj.at(g.key).is_number_integer())
        dj[g.key] = std::int64_t(std::llround(v));
      else
        dj[g.key] = v;
    }
    emit(format_double(v), dj, nn, aa);
  }
  return doc;
}

inline CsvDocument benchmark_doc(const std::vector<BenchmarkRow>& rows) {
  CsvDocument doc;
  doc.header = {"algorithm", "param_name", "param_value", "n",
                "alpha",     "trials",     "mse",         "ci99"};
  for (const auto& r : rows) {
    doc.add_row({r.algorithm, r.param_name, format_double(r.param_value),
                 std::to_string(r.n), format_double(r.alpha),
                 std::to_string(r.trials), format_double(r.mse),
                 format_double(r.ci99)});
  }
  return doc;
}

inline CsvDocument bound_grid_doc(const std::vector<BoundGridRow>& rows) {
  CsvDocument doc;
  doc.header = {"param",       "n_alpha_sq",     "m_tilde",
                "lower_bound", "lower_argmax_a", "upper_bound"};
  for (const auto& r : rows) {
    doc.add_row({format_double(r.param), format_double(r.n_alpha_sq),
                 std::to_string(r.m_tilde), format_double(r.lower),
                 std::to_string(r.lower_argmax_a), format_double(r.upper)});
  }
  return doc;
}

inline CsvDocument cmd_simulate(const Config& c, std::uint64_t seed) {
  require_keys(c.params, {"scenario", "dump_transcript"}, "simulate");
  nlohmann::json sj = c.params.at("scenario");
  if (!sj.contains("seed")) sj["seed"] = seed;
  const Scenario s = Scenario::from_json(sj);
  const RiskEstimate est = estimate_risk(s, resolve_threads(c.threads));

  CsvDocument doc = benchmark_doc({{to_string(s.algorithm), "", 0.0, s.n,
                                    s.alpha, s.trials, est.mean_sq_error,
                                    est.ci_half_width_99}});
  if (c.params.value("dump_transcript", false)) {
    // One full protocol execution at trial 0, attached as a comment so the
    // document still parses as CSV.
    const std::uint64_t trial_seed = mix64(s.seed, 0);
    std::vector<UserDataset> users;
    users.reserve(std::size_t(s.n));
    for (std::int64_t u = 0; u < s.n; ++u) {
      Rng rng = make_rng(trial_seed, std::uint64_t(u), detail::kDataStream);
      const std::int64_t m = s.size_dist.sample(rng);
      users.emplace_back(m, s.data_dist.sample_empirical_mean(m, rng));
    }
    const PrivacyBudget alpha(s.alpha);
    const std::int64_t m_tilde =
        solve_m_tilde(s.size_dist, s.n, alpha).m_tilde;
    const ProtocolTranscript t =
        run_dame(users, s.size_dist, alpha, m_tilde, trial_seed);
    doc.comments.push_back("# transcript " + t.to_json().dump());
  }
  return doc;
}

inline CsvDocument cmd_benchmark(const Config& c, std::uint64_t seed) {
  require_keys(c.params, {"preset", "trials", "rho_points", "grid_points"},
               "benchmark");
  const std::string preset = c.params.at("preset").get<std::string>();
  const int threads = resolve_threads(c.threads);

  if (preset == "figure-s2-desk" || preset == "figure-s2-paper") {
    const bool desk = preset == "figure-s2-desk";
    const std::int64_t m1 = desk ? 1000 : 100000;
    const std::int64_t m2 = desk ? 10000 : 1000000;
    const auto trials = c.params.value("trials", std::int64_t{200});
    const int rho_points = c.params.value("rho_points", 10);
    return benchmark_doc(run_figure_s2(m1, m2, 10000, 22.0 / 35.0,
                                       rho_points, trials, seed, threads));
  }
  const int grid_points = c.params.value("grid_points", 100);
  if (preset == "figure-s1-poisson")
    return bound_grid_doc(
        run_figure_s1(SizeFamily::kPoisson, 500.0, grid_points));
  if (preset == "figure-s1-uniform")
    return bound_grid_doc(
        run_figure_s1(SizeFamily::kUniform, 500.0, grid_points));
  if (preset == "figure-s1-binomial")
    return bound_grid_doc(
        run_figure_s1(SizeFamily::kBinomial, 500.0, grid_points));
  if (preset == "figure-s1-sweep")
    return bound_grid_doc(run_figure_s1_sweep(5.0, 1e2, 1e6, grid_points));
  throw std::invalid_argument("benchmark: unknown preset '" + preset + "'");
}

inline CsvDocument cmd_audit(const Config& c, std::ostream& err) {
  require_keys(c.params, {"alpha"}, "audit");
  const double alpha = c.params.at("alpha").get<double>();
  const PrivacyBudget budget(alpha);
  const FlipProbability pi = FlipProbability::from_alpha(alpha);
  const double rr_loss = audit_rr_privacy(pi);

  // The Laplace release has sensitivity 14 tau and scale 14 tau / alpha;
  // the ratio, hence the loss, is alpha at any tau. Audit at tau = 1.
  const double lap_loss = audit_laplace_privacy(14.0 / alpha, 14.0);

  CsvDocument doc;
  doc.header = {"mechanism", "parameter", "exact_privacy_loss",
                "target_alpha"};
  doc.add_row({"randomized_response", format_double(pi.pi),
               format_double(rr_loss), format_double(alpha)});
  doc.add_row({"laplace_release", format_double(14.0 / alpha),
               format_double(lap_loss), format_double(alpha)});
  if (!c.quiet) {
    err << "mechanism             exact loss            target alpha\n"
        << "randomized_response   " << format_double(rr_loss) << "   "
        << format_double(alpha) << "\n"
        << "laplace_release       " << format_double(lap_loss) << "   "
        << format_double(alpha) << "\n";
  }
  return doc;
}

inline void maybe_render_svg(const Config& c, const CsvDocument& doc) {
  if (c.svg.empty()) return;
  // Chart anything with positive numeric columns: bound grids plot both
  // bounds against param; benchmark grids plot mse per algorithm.
  SvgChart chart("dame " + c.command, "parameter", "value");
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int color = 0;
  const auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < doc.header.size(); ++i)
      if (doc.header[i] == name) return int(i);
    return -1;
  };
  const auto add = [&](const std::string& label, int xcol, int ycol,
                       const std::string& filter_col_value = "",
                       int filter_col = -1) {
    SvgChart::Series s;
    s.label = label;
    s.color = colors[color % 4];
    for (const auto& row : doc.rows) {
      if (filter_col >= 0 && row[std::size_t(filter_col)] != filter_col_value)
        continue;
      const double x = std::stod(row[std::size_t(xcol)]);
      const double y = std::stod(row[std::size_t(ycol)]);
      if (x > 0.0 && y > 0.0) s.points.push_back({x, y});
    }
    if (!s.points.empty()) {
      chart.add_series(std::move(s));
      ++color;
    }
  };
  if (col("lower_bound") >= 0) {
    add("lower_bound", col("param"), col("lower_bound"));
    add("upper_bound", col("param"), col("upper_bound"));
  } else if (col("mse") >= 0) {
    std::vector<std::string> algos;
    for (const auto& row : doc.rows) {
      const auto& a = row[std::size_t(col("algorithm"))];
      if (std::find(algos.begin(), algos.end(), a) == algos.end())
        algos.push_back(a);
    }
    for (const auto& a : algos)
      add(a, col("param_value"), col("mse"), a, col("algorithm"));
  }
  chart.write_atomic(c.svg);
}

}  // namespace cli_detail

// Runs one fully validated command. The emitted CSV always starts with a
// '#' comment carrying the resolved config, so any output can be replayed
// byte-for-byte by feeding that JSON back in.
inline int dispatch(const Config& config, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  try {
    Config resolved = config;
    const char* env = std::getenv("DAME_SEED");
    if (env) resolved.seed = std::stoull(env);
    // The echoed config must carry the effective scenario seed regardless
    // of whether it came from the scenario, --seed, or the environment.
    if (resolved.params.is_object() && resolved.params.contains("scenario")) {
      if (env || !resolved.params["scenario"].contains("seed"))
        resolved.params["scenario"]["seed"] = resolved.seed;
    }

    CsvDocument doc;
    if (resolved.command == "mtilde") {
      doc = cli_detail::cmd_mtilde(resolved);
    } else if (resolved.command == "bounds") {
      doc = cli_detail::cmd_bounds(resolved);
    } else if (resolved.command == "simulate") {
      doc = cli_detail::cmd_simulate(resolved, resolved.seed);
    } else if (resolved.command == "benchmark") {
      doc = cli_detail::cmd_benchmark(resolved, resolved.seed);
    } else if (resolved.command == "audit") {
      doc = cli_detail::cmd_audit(resolved, err);
    } else {
      throw std::invalid_argument("unknown command '" + resolved.command +
                                  "'");
    }

    doc.comments.insert(doc.comments.begin(),
                        "# " + resolved.to_json().dump());
    if (resolved.output == "-" || resolved.output.empty()) {
      out << doc.to_string();
    } else {
      doc.write_atomic(resolved.output);
      if (!resolved.quiet)
        err << "wrote " << resolved.output << " (" << doc.rows.size()
            << " rows)\n";
    }
    cli_detail::maybe_render_svg(resolved, doc);
    return kExitOk;
  } catch (const nlohmann::json::exception& e) {
    err << nlohmann::json{{"error", "validation"}, {"detail", e.what()}}
        << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << nlohmann::json{{"error", "validation"}, {"detail", e.what()}}
        << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "numeric"}, {"detail", e.what()}} << "\n";
    return kExitNumeric;
  }
}

}  // namespace dame

#endif  // DAME_CLI_HPP
