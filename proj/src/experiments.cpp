// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigtrack/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "eigtrack/analytic.hpp"
#include "eigtrack/fem.hpp"
#include "eigtrack/matching.hpp"
#include "eigtrack/parameter_grid.hpp"
#include "eigtrack/pod.hpp"

namespace eigtrack::experiments {
namespace {

namespace fs = std::filesystem;

constexpr std::array kCommands{"exact", "sweep", "pod", "match", "refine", "reproduce"};
constexpr std::array kReproduceTargets{"table1", "table2", "table3", "fig1",
                                       "fig2",   "fig3",   "fig4"};
constexpr std::array kTableMu{-0.75, -0.25, 0.25, 0.75};
constexpr int kSweepColumns = 6;

template <std::size_t N>
bool one_of(const std::string& value, const std::array<const char*, N>& options) {
  return std::any_of(options.begin(), options.end(),
                     [&](const char* option) { return value == option; });
}

std::string number(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

std::string join(const std::vector<double>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text += ',';
    text += number(values[i]);
  }
  return text;
}

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

void require_parameters(const std::vector<double>& values, const std::string& flag) {
  for (double mu : values) {
    require(std::isfinite(mu) && mu > -1.0, flag + ": parameter values must be finite and > -1");
  }
}

fem::ModelProblem model_problem(double h) { return fem::ModelProblem(fem::build_mesh(h)); }

// Collects PASS/FAIL lines for `reproduce`.
class CheckLog {
 public:
  explicit CheckLog(std::ostream& log) : log_(log) {}

  void check(bool ok, const std::string& what) {
    log_ << (ok ? "PASS  " : "FAIL  ") << what << '\n';
    failures_ += ok ? 0 : 1;
    ++total_;
  }

  int finish(const std::string& target) const {
    log_ << target << ": " << total_ - failures_ << '/' << total_ << " checks passed\n";
    return failures_ == 0 ? kSuccess : kCheckFailed;
  }

 private:
  std::ostream& log_;
  int failures_ = 0;
  int total_ = 0;
};

std::string relative_gap_text(double value, double bound) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(2) << value << " <= " << bound;
  return out.str();
}

// ---- exact ----------------------------------------------------------------

int run_exact(const ExperimentConfig& config, std::ostream& log) {
  const auto grid = config.parameter_grid();
  const auto window = config.spectral_window();
  const std::string echo = config.echo();
  std::size_t rows = 0;
  write_csv_atomically(config.out_dir / "exact.csv", echo, [&](std::ostream& out) {
    out << "mu,lambda,m,n\n";
    out << std::setprecision(17);
    for (double mu : grid) {
      for (const auto& entry : analytic::exact_sorted_spectrum(mu, window, 1000)) {
        out << mu << ',' << entry.lambda << ',' << entry.label.m << ',' << entry.label.n << '\n';
        ++rows;
      }
    }
  });
  log << "exact: " << rows << " eigenvalues over " << grid.size() << " parameter values\n";
  return kSuccess;
}

// ---- sweep ----------------------------------------------------------------

std::vector<EigenSet> first_six(EigenSweep& sweep, const std::vector<double>& grid) {
  std::vector<EigenSet> sets;
  for (double mu : grid) {
    const EigenSet& set = sweep.at(mu);
    if (set.size() < kSweepColumns) {
      std::ostringstream msg;
      msg << "sweep: only " << set.size() << " eigenvalues inside the window at mu=" << mu
          << "; widen --window";
      throw std::runtime_error(msg.str());
    }
    sets.push_back(set);
  }
  return sets;
}

void write_sweep_csv(const fs::path& path, const std::string& echo,
                     const std::vector<EigenSet>& sets) {
  write_csv_atomically(path, echo, [&](std::ostream& out) {
    out << "mu";
    for (int i = 1; i <= kSweepColumns; ++i) out << ",lambda_" << i;
    out << '\n' << std::setprecision(17);
    for (const auto& set : sets) {
      out << set.mu;
      for (int i = 0; i < kSweepColumns; ++i) out << ',' << set[static_cast<std::size_t>(i)].lambda;
      out << '\n';
    }
  });
}

int run_sweep(const ExperimentConfig& config, std::ostream& log) {
  const auto problem = model_problem(config.h);
  EigenSweep sweep(problem, config.spectral_window());
  const auto grid = config.parameter_grid();
  const auto sets = first_six(sweep, grid);
  const std::string echo = config.echo();
  write_sweep_csv(config.out_dir / "sweep.csv", echo, sets);
  if (config.write_vectors) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::ostringstream name;
      name << "vectors_" << std::setw(3) << std::setfill('0') << k + 1 << ".csv";
      write_csv_atomically(config.out_dir / name.str(), echo, [&](std::ostream& out) {
        write_eigenvectors_csv(out, sweep.at(grid[k]));
      });
    }
  }
  log << "sweep: " << problem.mesh().num_dofs() << " dofs, " << grid.size()
      << " parameter values\n";
  return kSuccess;
}

// ---- pod ------------------------------------------------------------------

struct PodRun {
  pod::PodBasis basis;
  std::vector<pod::RbComparison> rows;
};

PodRun pod_run(EigenSweep& sweep, const std::vector<double>& grid, int target, double tol,
               std::optional<int> rank, std::span<const double> table_mu, double weight) {
  const auto snapshots = pod::build_snapshots(sweep, grid, target);
  auto basis = pod::svd_truncate(snapshots, tol);
  if (rank) basis = basis.with_rank(*rank);
  auto rows = pod::compare_fem_rb(sweep, basis.retained(), target, table_mu, weight);
  return {std::move(basis), std::move(rows)};
}

void write_singular_values_csv(const fs::path& path, const std::string& echo,
                               const pod::PodBasis& basis) {
  write_csv_atomically(path, echo, [&](std::ostream& out) {
    out << "index,sigma\n" << std::setprecision(17);
    const auto& sigma = basis.singular_values();
    for (Eigen::Index i = 0; i < sigma.size(); ++i) out << i + 1 << ',' << sigma(i) << '\n';
  });
}

void write_rb_table_csv(const fs::path& path, const std::string& echo,
                        const std::vector<pod::RbComparison>& rows) {
  write_csv_atomically(path, echo, [&](std::ostream& out) {
    out << "h,mu,lambda_fem,lambda_rb,reduced_index\n" << std::setprecision(17);
    for (const auto& row : rows) {
      out << row.h << ',' << row.mu << ',' << row.lambda_fem << ',' << row.lambda_rb << ','
          << row.reduced_index + 1 << '\n';
    }
  });
}

void log_rb_rows(std::ostream& log, const std::vector<pod::RbComparison>& rows) {
  log << "      h        mu        lambda_fem         lambda_rb  idx   rel.gap\n";
  for (const auto& row : rows) {
    log << std::fixed << std::setprecision(3) << std::setw(7) << row.h << std::setw(10) << row.mu
        << std::setprecision(8) << std::setw(18) << row.lambda_fem << std::setw(18)
        << row.lambda_rb << std::setw(5) << row.reduced_index + 1 << std::scientific
        << std::setprecision(2) << std::setw(10) << row.relative_gap() << '\n'
        << std::defaultfloat;
  }
}

int run_pod(const ExperimentConfig& config, std::ostream& log) {
  const auto problem = model_problem(config.h);
  const auto window = config.spectral_window();
  EigenSweep sweep(problem, window);
  const double weight = config.weight.value_or(matching::default_weight(window));
  const auto run = pod_run(sweep, config.parameter_grid(), config.target, config.tol, config.rank,
                           kTableMu, weight);

  const std::string echo = config.echo();
  write_singular_values_csv(config.out_dir / "singular_values.csv", echo, run.basis);
  write_rb_table_csv(config.out_dir / "rb_table.csv", echo, run.rows);
  write_csv_atomically(config.out_dir / "rb_reduced.csv", echo, [&](std::ostream& out) {
    out << "mu,reduced_index,lambda_rb\n" << std::setprecision(17);
    for (const auto& row : run.rows) {
      for (std::size_t i = 0; i < row.reduced_lambdas.size(); ++i) {
        out << row.mu << ',' << i + 1 << ',' << row.reduced_lambdas[i] << '\n';
      }
    }
  });
  log << "pod: target " << config.target << ", N = " << run.basis.rank() << '\n';
  log_rb_rows(log, run.rows);
  return kSuccess;
}

// ---- match ----------------------------------------------------------------

int run_match(const ExperimentConfig& config, std::ostream& log) {
  const auto problem = model_problem(config.h);
  const auto window = config.spectral_window();
  EigenSweep sweep(problem, window);
  const matching::TrackingOptions options{
      config.weight.value_or(matching::default_weight(window)), config.gate};
  const auto grid = config.parameter_grid();
  const auto family = matching::track_curves(sweep, grid, options);

  const std::string echo = config.echo();
  write_csv_atomically(config.out_dir / "curves.csv", echo,
                       [&](std::ostream& out) { matching::write_curves_csv(out, family); });
  write_csv_atomically(config.out_dir / "events.csv", echo,
                       [&](std::ostream& out) { matching::write_events_csv(out, family); });
  write_csv_atomically(config.out_dir / "steps.csv", echo, [&](std::ostream& out) {
    out << "step,mu_left,mu_right,pairs,ambiguous,total_cost\n" << std::setprecision(17);
    for (std::size_t k = 0; k < family.steps().size(); ++k) {
      const auto& step = family.steps()[k];
      const auto flagged = std::count(step.ambiguous.begin(), step.ambiguous.end(), true);
      out << k + 1 << ',' << grid[k] << ',' << grid[k + 1] << ',' << step.pairs.size() << ','
          << flagged << ',' << step.total_cost << '\n';
    }
  });
  log << "match: " << family.curves().size() << " curves, " << family.events().size()
      << " window events, w = " << options.weight << '\n';
  return kSuccess;
}

// ---- refine ---------------------------------------------------------------

matching::RefinementResult refinement(const ExperimentConfig& config, EigenSweep& sweep) {
  const auto& window = sweep.window();
  matching::RefinementOptions options;
  options.weight = config.weight.value_or(matching::default_weight(window));
  options.gate = config.gate;
  options.budget = config.budget;
  options.theta = config.theta;
  options.window_width = window.width();
  const auto provider = [&sweep](double mu) { return sweep.at(mu); };
  return matching::refine_grid(config.initial_grid, provider, sweep.problem().mass(), options);
}

int run_refine(const ExperimentConfig& config, std::ostream& log) {
  const auto problem = model_problem(config.h);
  EigenSweep sweep(problem, config.spectral_window());
  const auto result = refinement(config, sweep);
  const std::string echo = config.echo();
  write_csv_atomically(config.out_dir / "grid.csv", echo,
                       [&](std::ostream& out) { matching::write_grid_csv(out, result.grid); });
  write_csv_atomically(config.out_dir / "indicators.csv", echo,
                       [&](std::ostream& out) { matching::write_indicators_csv(out, result); });
  log << "refine: " << result.grid.size() << " grid points after " << result.history.size() - 1
      << " insertions\n";
  for (const auto& step : result.history) {
    if (step.inserted) log << "  iteration " << step.iteration << ": inserted " << *step.inserted << '\n';
  }
  return kSuccess;
}

// ---- reproduce ------------------------------------------------------------

std::vector<double> reproduce_mesh_sizes(const ExperimentConfig& config,
                                         std::vector<double> defaults) {
  return config.h_given ? std::vector<double>{config.h} : defaults;
}

// Tables 1-3: RB-POD versus FEM at the four table parameters.
int reproduce_table(const ExperimentConfig& config, std::ostream& log) {
  const std::string& target = config.reproduce_target;
  const bool third = target == "table3";
  const int target_index = third ? 3 : 1;
  const int rank = target == "table2" ? 2 : target_index;
  const double tol = third ? 1e-2 : 1e-1;
  const double bound = target == "table2" ? 5e-6 : 5e-5;

  CheckLog checks(log);
  std::vector<pod::RbComparison> all_rows;
  for (double h : reproduce_mesh_sizes(config, {0.1, 0.05})) {
    const auto problem = model_problem(h);
    const SpectralWindow window(0.0, 60.0);
    EigenSweep sweep(problem, window);
    const auto snapshots = pod::build_snapshots(sweep, default_parameter_grid(), target_index);
    auto basis = pod::svd_truncate(snapshots, tol);
    if (target != "table2") {
      checks.check(basis.rank() == rank, "h=" + number(h) + ": N_tol(" + number(tol) + ") = " +
                                             std::to_string(basis.rank()) + ", expected " +
                                             std::to_string(rank));
    }
    basis = basis.with_rank(rank);
    const auto rows = pod::compare_fem_rb(sweep, basis.retained(), target_index, kTableMu,
                                          matching::default_weight(window));
    log_rb_rows(log, rows);
    for (const auto& row : rows) {
      const std::string where = "h=" + number(h) + " mu=" + number(row.mu);
      checks.check(row.relative_gap() <= bound,
                   where + ": |rb - fem|/fem " + relative_gap_text(row.relative_gap(), bound));
      checks.check(row.lambda_rb >= row.lambda_fem * (1.0 - 1e-12),
                   where + ": reduced eigenvalue bounds the FEM eigenvalue from above");
      if (third) {
        checks.check(row.reduced_index == 1, where + ": matched reduced index " +
                                                 std::to_string(row.reduced_index + 1) +
                                                 ", expected 2");
      }
    }
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
  }
  write_rb_table_csv(config.out_dir / ("reproduce_" + target + ".csv"), config.echo(), all_rows);
  return checks.finish(target);
}

// Figure 1: analytic spectrum, checked against a hand enumeration at mu = 0.25.
int reproduce_fig1(const ExperimentConfig& config, std::ostream& log) {
  CheckLog checks(log);
  const SpectralWindow window(0.0, 40.0);
  const std::array<analytic::ModeLabel, 6> labels{{{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 1}, {1, 3}}};
  const std::array<double, 6> expected{5.5517, 12.9539, 14.8044, 22.2066, 25.2909, 30.2257};
  const auto spectrum = analytic::exact_sorted_spectrum(0.25, window, 1000);
  checks.check(spectrum.size() >= labels.size(), "mu=0.25: at least six eigenvalues below 40");
  for (std::size_t i = 0; i < labels.size() && i < spectrum.size(); ++i) {
    std::ostringstream what;
    what << "mu=0.25 entry " << i + 1 << ": " << spectrum[i].label << " lambda "
         << std::setprecision(9) << spectrum[i].lambda;
    checks.check(spectrum[i].label == labels[i] &&
                     std::abs(spectrum[i].lambda - expected[i]) <= 1e-4,
                 what.str());
  }
  const double first = analytic::exact_eigenvalue({1, 1}, -0.75);
  checks.check(std::abs(first - 3.08425138) <= 5e-9, "lambda(1,1) at mu=-0.75 = 3.08425138");

  ExperimentConfig exact = config;
  exact.window = std::make_pair(window.lo(), window.hi());
  run_exact(exact, log);
  return checks.finish("fig1");
}

// Figure 2: first six FEM eigenvalues along the default grid, checked
// against the sorted analytic spectrum on the mesh and its refinement.
int reproduce_fig2(const ExperimentConfig& config, std::ostream& log) {
  CheckLog checks(log);
  const double h = config.h_given ? config.h : 0.1;
  const SpectralWindow window(0.0, 100.0);
  const auto grid = default_parameter_grid();
  const auto coarse_problem = model_problem(h);
  const auto fine_problem = model_problem(h / 2);
  EigenSweep coarse_sweep(coarse_problem, window);
  EigenSweep fine_sweep(fine_problem, window);
  const auto coarse = first_six(coarse_sweep, grid);
  const auto fine = first_six(fine_sweep, grid);

  bool above = true;
  double worst = 0.0;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto exact = analytic::exact_sorted_spectrum(grid[k], window, 1000);
    for (std::size_t i = 0; i < kSweepColumns; ++i) {
      const double error_coarse = coarse[k][i].lambda - exact[i].lambda;
      const double error_fine = fine[k][i].lambda - exact[i].lambda;
      above = above && error_coarse > 0.0 && error_fine > 0.0;
      worst = std::max(worst, error_coarse / exact[i].lambda);
      ratio_min = std::min(ratio_min, error_coarse / error_fine);
      ratio_max = std::max(ratio_max, error_coarse / error_fine);
    }
  }
  log << "h=" << h << ": worst relative error " << std::scientific << std::setprecision(2)
      << worst << ", error ratio h/(h/2) in [" << std::fixed << ratio_min << ", " << ratio_max
      << "]\n" << std::defaultfloat;
  checks.check(above, "every FEM eigenvalue bounds the sorted exact eigenvalue from above");
  checks.check(ratio_min >= 3.5 && ratio_max <= 4.5,
               "second-order convergence: every error ratio h/(h/2) lies in [3.5, 4.5]");
  write_sweep_csv(config.out_dir / "reproduce_fig2.csv", config.echo(), coarse);
  return checks.finish("fig2");
}

// Figures 3-4: singular values of S1 and S3.
int reproduce_singular_values(const ExperimentConfig& config, std::ostream& log) {
  CheckLog checks(log);
  const bool third = config.reproduce_target == "fig4";
  const double h = config.h_given ? config.h : 0.1;
  const auto problem = model_problem(h);
  EigenSweep sweep(problem, SpectralWindow(0.0, 60.0));
  const auto snapshots = pod::build_snapshots(sweep, default_parameter_grid(), third ? 3 : 1);
  const auto basis = pod::svd_truncate(snapshots, 1e-1);
  const auto& sigma = basis.singular_values();
  std::ostringstream ratios;
  ratios << std::scientific << std::setprecision(2);
  for (Eigen::Index i = 1; i < std::min<Eigen::Index>(sigma.size(), 5); ++i) {
    ratios << " s" << i + 1 << "/s1=" << sigma(i) / sigma(0);
  }
  log << "h=" << h << ':' << ratios.str() << '\n';
  if (third) {
    const auto above = (sigma.array() > 1e-3 * sigma(0)).count();
    checks.check(above == 3, "S3 has " + std::to_string(above) +
                                 " singular values above 1e-3 * s1, expected 3");
  } else {
    const double ratio = sigma(1) / sigma(0);
    checks.check(ratio < 1e-1, "S1 s2/s1 < 1e-1 (N_tol(0.1) = 1)");
    checks.check(ratio > 1e-4, "S1 s2/s1 > 1e-4 (nonzero tail)");
  }
  write_singular_values_csv(config.out_dir / ("reproduce_" + config.reproduce_target + ".csv"),
                            config.echo(), basis);
  return checks.finish(config.reproduce_target);
}

int run_reproduce(const ExperimentConfig& config, std::ostream& log) {
  const std::string& target = config.reproduce_target;
  if (target.rfind("table", 0) == 0) return reproduce_table(config, log);
  if (target == "fig1") return reproduce_fig1(config, log);
  if (target == "fig2") return reproduce_fig2(config, log);
  return reproduce_singular_values(config, log);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(one_of(command, kCommands), "unknown subcommand '" + command + "'");
  require(std::isfinite(h) && h > 0.0 && h <= 1.0, "--h must lie in (0, 1]");
  if (grid.empty()) {
    require(grid_size >= 2, "--grid-size must be at least 2");
    require(std::isfinite(grid_min) && std::isfinite(grid_max) && grid_min < grid_max,
            "--grid-min must be below --grid-max");
    require(grid_min > -1.0, "--grid-min must be > -1");
  } else {
    require(grid.size() >= 2, "--grid needs at least two values");
    require_parameters(grid, "--grid");
    require(std::is_sorted(grid.begin(), grid.end()) &&
                std::adjacent_find(grid.begin(), grid.end()) == grid.end(),
            "--grid must be strictly increasing");
  }
  if (window) {
    require(std::isfinite(window->first) && std::isfinite(window->second) &&
                window->first >= 0.0 && window->first < window->second,
            "--window needs 0 <= LO < HI");
  }
  require(target >= 1, "--target must be at least 1");
  require(tol > 0.0 && tol < 1.0, "--tol must lie in (0, 1)");
  require(!rank || *rank >= 1, "--rank must be at least 1");
  require(!weight || (std::isfinite(*weight) && *weight >= 0.0), "--w must be finite and >= 0");
  require(gate > 0.0, "--gate must be positive");
  require(budget >= 0, "--budget must be >= 0");
  require(std::isfinite(theta) && theta > 0.0, "--theta must be positive");
  require(initial_grid.size() >= 2, "--initial-grid needs at least two values");
  require_parameters(initial_grid, "--initial-grid");
  if (command == "reproduce") {
    require(one_of(reproduce_target, kReproduceTargets),
            "reproduce target must be one of table1|table2|table3|fig1|fig2|fig3|fig4");
  }
}

std::string ExperimentConfig::echo() const {
  std::ostringstream out;
  out << "command=" << command;
  if (command == "reproduce") out << " target=" << reproduce_target;
  out << " h=" << number(h);
  if (grid.empty()) {
    out << " grid=" << number(grid_min) << ':' << number(grid_max) << ':' << grid_size;
  } else {
    out << " grid=" << join(grid);
  }
  const SpectralWindow w = spectral_window();
  out << " window=" << number(w.lo()) << ',' << number(w.hi());
  out << " target_index=" << target << " tol=" << number(tol);
  out << " rank=" << (rank ? std::to_string(*rank) : "auto");
  out << " w=" << (weight ? number(*weight) : "auto") << " gate=" << number(gate);
  out << " budget=" << budget << " theta=" << number(theta)
      << " initial_grid=" << join(initial_grid);
  out << " seed=" << seed;
  return out.str();
}

std::vector<double> ExperimentConfig::parameter_grid() const {
  return grid.empty() ? uniform_grid(grid_min, grid_max, grid_size) : grid;
}

SpectralWindow ExperimentConfig::spectral_window() const {
  return window ? SpectralWindow(window->first, window->second) : default_window(command);
}

SpectralWindow default_window(const std::string& command) {
  if (command == "exact") return {0.0, 40.0};
  if (command == "sweep") return {0.0, 100.0};
  if (command == "match" || command == "refine") return {4.0, 21.0};
  return {0.0, 60.0};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw UsageError("not a number: '" + item + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) throw UsageError("empty list");
  return values;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto values = parse_list(text);
  if (values.size() != 2) throw UsageError("--window expects LO,HI");
  return {values[0], values[1]};
}

void write_csv_atomically(const fs::path& path, const std::string& echo,
                          const std::function<void(std::ostream&)>& body) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string());

  fs::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
    out << "# config: " << echo << '\n';
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + temp.string());
  }
  fs::rename(temp, path, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw std::runtime_error("cannot move output into place: " + path.string());
  }
}

int run(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  if (config.command == "exact") return run_exact(config, log);
  if (config.command == "sweep") return run_sweep(config, log);
  if (config.command == "pod") return run_pod(config, log);
  if (config.command == "match") return run_match(config, log);
  if (config.command == "refine") return run_refine(config, log);
  return run_reproduce(config, log);
}

}  // namespace eigtrack::experiments
