// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: eigtrack {exact|sweep|pod|match|refine|reproduce} [flags]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eigtrack/experiments.hpp"

namespace {

using eigtrack::experiments::ExperimentConfig;
using eigtrack::experiments::UsageError;

struct RawFlags {
  std::optional<double> h;
  std::optional<std::string> grid;
  std::optional<std::string> window;
  std::optional<std::string> initial_grid;
  std::optional<int> steps;
  std::optional<double> weight;
  std::optional<int> rank;
  std::optional<std::string> out;
};

void add_common(CLI::App& cmd, ExperimentConfig& config, RawFlags& raw) {
  cmd.add_option("--h", raw.h, "Grid spacing of the finite element mesh");
  cmd.add_option("--grid-min", config.grid_min, "Smallest parameter value")->capture_default_str();
  cmd.add_option("--grid-max", config.grid_max, "Largest parameter value")->capture_default_str();
  cmd.add_option("--grid-size", config.grid_size, "Number of parameter values")
      ->capture_default_str();
  cmd.add_option("--grid", raw.grid, "Explicit comma-separated parameter values");
  cmd.add_option("--window", raw.window, "Spectral window LO,HI");
  cmd.add_option("--out", raw.out, "Output directory (default: $EIGTRACK_OUT_DIR or .)");
  cmd.add_option("--seed", config.seed, "Seed recorded in the config echo")->capture_default_str();
}

void add_weight(CLI::App& cmd, RawFlags& raw) {
  cmd.add_option("--w", raw.weight, "Eigenvector weight in the cost matrix");
}

void apply(const RawFlags& raw, ExperimentConfig& config) {
  if (raw.h) {
    config.h = *raw.h;
    config.h_given = true;
  }
  if (raw.grid) config.grid = eigtrack::experiments::parse_list(*raw.grid);
  if (raw.window) config.window = eigtrack::experiments::parse_window(*raw.window);
  if (raw.initial_grid) config.initial_grid = eigtrack::experiments::parse_list(*raw.initial_grid);
  if (raw.steps) {
    if (*raw.steps < 1) throw UsageError("--steps must be at least 1");
    config.grid_size = *raw.steps + 1;
  }
  config.weight = raw.weight;
  config.rank = raw.rank;
  if (raw.out) {
    config.out_dir = *raw.out;
  } else if (const char* env = std::getenv("EIGTRACK_OUT_DIR"); env != nullptr && *env != '\0') {
    config.out_dir = env;
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace ex = eigtrack::experiments;
  CLI::App app{"Parametric eigenvalue tracking on an anisotropic model problem"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  ExperimentConfig config;
  RawFlags raw;

  auto* exact = app.add_subcommand("exact", "Analytic eigenvalues over the parameter grid");
  add_common(*exact, config, raw);
  exact->add_option("--steps", raw.steps, "Number of grid intervals (overrides --grid-size)");

  auto* sweep = app.add_subcommand("sweep", "First six FEM eigenvalues over the parameter grid");
  add_common(*sweep, config, raw);
  sweep->add_flag("--vectors", config.write_vectors, "Also write eigenvectors per grid point");

  auto* pod = app.add_subcommand("pod", "POD basis and reduced-basis eigenvalue table");
  add_common(*pod, config, raw);
  add_weight(*pod, raw);
  pod->add_option("--target", config.target, "Snapshot eigenvalue index (1-based)")
      ->capture_default_str();
  pod->add_option("--tol", config.tol, "Relative truncation tolerance")->capture_default_str();
  pod->add_option("--rank", raw.rank, "Fixed basis size (overrides --tol)");

  auto* match = app.add_subcommand("match", "Track eigenvalue curves across the grid");
  add_common(*match, config, raw);
  add_weight(*match, raw);
  match->add_option("--gate", config.gate, "Largest eigenvector distance chained into a curve")
      ->capture_default_str();

  auto* refine = app.add_subcommand("refine", "Greedy refinement of the parameter grid");
  add_common(*refine, config, raw);
  add_weight(*refine, raw);
  refine->add_option("--initial-grid", raw.initial_grid, "Comma-separated starting grid");
  refine->add_option("--budget", config.budget, "Maximum number of inserted points")
      ->capture_default_str();
  refine->add_option("--theta", config.theta, "Stop once every indicator is below this")
      ->capture_default_str();
  refine->add_option("--gate", config.gate, "Largest eigenvector distance chained into a curve")
      ->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Self-checking reference experiments");
  add_common(*reproduce, config, raw);
  reproduce
      ->add_option("target", config.reproduce_target,
                   "table1|table2|table3|fig1|fig2|fig3|fig4")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ex::kSuccess : ex::kUsageError;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    apply(raw, config);
    return ex::run(config, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return ex::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kCheckFailed;
  }
}
