// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigtrack/eigensolver.hpp"

namespace eigtrack::experiments {

/// Invalid configuration; the CLI maps it to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitStatus : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kUsageError = 2,
};

struct ExperimentConfig {
  std::string command;
  double h = 0.1;
  /// Explicit --h given; `reproduce` otherwise runs its default mesh sizes.
  bool h_given = false;
  double grid_min = -0.9;
  double grid_max = 0.9;
  int grid_size = 19;
  std::vector<double> grid;
  std::optional<std::pair<double, double>> window;
  int target = 1;
  double tol = 0.1;
  std::optional<int> rank;
  std::optional<double> weight;
  double gate = 1.0;
  int budget = 6;
  double theta = 0.05;
  std::vector<double> initial_grid{-0.9, 0.0, 0.9};
  std::string reproduce_target;
  bool write_vectors = false;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";

  /// Throws UsageError.
  void validate() const;
  /// One-line description written as a comment into every output file.
  std::string echo() const;
  std::vector<double> parameter_grid() const;
  /// The --window value, or the command's default.
  SpectralWindow spectral_window() const;
};

/// Default spectral window per command.
SpectralWindow default_window(const std::string& command);

/// Parses "LO,HI". Throws UsageError.
std::pair<double, double> parse_window(const std::string& text);
/// Parses a comma-separated list of reals. Throws UsageError.
std::vector<double> parse_list(const std::string& text);

/// Writes `path` via a temporary file and rename; the first line is
/// "# config: <echo>". Throws std::runtime_error naming the path on I/O errors.
void write_csv_atomically(const std::filesystem::path& path, const std::string& echo,
                          const std::function<void(std::ostream&)>& body);

/// Runs one experiment, writing CSV files into config.out_dir and a human
/// summary to `log`. Returns kSuccess or kCheckFailed; throws UsageError.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace eigtrack::experiments
