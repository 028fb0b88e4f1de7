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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dame/cli.hpp"

namespace {

nlohmann::json parse_json_arg(const std::string& text,
                              const std::string& what) {
  // '@path' reads the document from a file.
  std::string payload = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in)
      throw std::invalid_argument(what + ": cannot open '" + text.substr(1) +
                                  "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    payload = buf.str();
  }
  try {
    return nlohmann::json::parse(payload);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dame: distribution-aware mean estimation under user-level local "
      "differential privacy"};
  app.require_subcommand(0, 1);
  // Let global flags appear after the subcommand name; subcommands
  // inherit this at creation.
  app.fallthrough();

  dame::Config config;
  std::string dist_json, scenario_json, config_json, grid;
  std::int64_t n = 0;
  double alpha = 0.0;
  std::int64_t trials = -1;
  int rho_points = -1, grid_points = -1;
  std::string preset;
  bool dump_transcript = false;

  app.add_option("--config", config_json,
                 "full config JSON (or @file); replays an echoed '#' config "
                 "line verbatim");
  app.add_option("-o,--output", config.output,
                 "CSV output path ('-' = stdout)");
  app.add_option("--svg", config.svg, "also render a log-log SVG chart");
  app.add_option("--seed", config.seed,
                 "master seed (env DAME_SEED overrides)");
  app.add_option("--threads", config.threads,
                 "worker threads (0 = all cores)");
  app.add_flag("--quiet", config.quiet, "suppress progress on stderr");

  auto* c_mtilde = app.add_subcommand(
      "mtilde", "solve the localisation size threshold for a size law");
  c_mtilde->add_option("--dist", dist_json, "size distribution JSON")
      ->required();
  c_mtilde->add_option("--n", n, "number of users")->required();
  c_mtilde->add_option("--alpha", alpha, "privacy budget")->required();

  auto* c_bounds = app.add_subcommand(
      "bounds", "evaluate the lower/upper risk bounds, optionally on a grid");
  c_bounds->add_option("--dist", dist_json, "size distribution JSON")
      ->required();
  c_bounds->add_option("--n", n, "number of users")->required();
  c_bounds->add_option("--alpha", alpha, "privacy budget")->required();
  c_bounds->add_option("--grid", grid,
                       "sweep 'param=lo:hi:steps' over a dist key, n, or "
                       "alpha");

  auto* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo risk of one scenario");
  c_sim->add_option("--scenario", scenario_json, "scenario JSON")->required();
  c_sim->add_flag("--dump-transcript", dump_transcript,
                  "attach the trial-0 protocol transcript as a CSV comment");

  auto* c_bench = app.add_subcommand("benchmark", "preset benchmark grids");
  c_bench
      ->add_option("--preset", preset,
                   "figure-s2-desk | figure-s2-paper | figure-s1-poisson | "
                   "figure-s1-uniform | figure-s1-binomial | figure-s1-sweep")
      ->required();
  c_bench->add_option("--trials", trials, "Monte Carlo trials per point");
  c_bench->add_option("--rho-points", rho_points, "rho grid size");
  c_bench->add_option("--grid-points", grid_points, "bound grid size");

  auto* c_audit = app.add_subcommand(
      "audit", "exact privacy losses of both mechanisms");
  c_audit->add_option("--alpha", alpha, "privacy budget")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_json.empty()) {
      config = dame::Config::from_json(
          parse_json_arg(config_json, "--config"));
    } else if (c_mtilde->parsed() || c_bounds->parsed()) {
      config.command = c_mtilde->parsed() ? "mtilde" : "bounds";
      config.params = {{"dist", parse_json_arg(dist_json, "--dist")},
                       {"n", n},
                       {"alpha", alpha}};
      if (!grid.empty()) config.params["grid"] = grid;
    } else if (c_sim->parsed()) {
      config.command = "simulate";
      config.params = {
          {"scenario", parse_json_arg(scenario_json, "--scenario")}};
      if (dump_transcript) config.params["dump_transcript"] = true;
    } else if (c_bench->parsed()) {
      config.command = "benchmark";
      config.params = {{"preset", preset}};
      if (trials >= 0) config.params["trials"] = trials;
      if (rho_points >= 0) config.params["rho_points"] = rho_points;
      if (grid_points >= 0) config.params["grid_points"] = grid_points;
    } else if (c_audit->parsed()) {
      config.command = "audit";
      config.params = {{"alpha", alpha}};
    } else {
      std::cerr << app.help();
      return dame::kExitValidation;
    }
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "validation"},
                                {"detail", e.what()}}
              << "\n";
    return dame::kExitValidation;
  }

  return dame::dispatch(config);
}
