// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "eigtrack/eigensolver.hpp"
#include "eigtrack/fem.hpp"

namespace eigtrack::matching {

/// Raised when quantities from different meshes are combined.
class MeshMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// min(||u - v||_M, ||u + v||_M). Throws MeshMismatch on length mismatch.
double eigvec_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const SparseMatrix& M);

/// Weight balancing the eigenvalue and eigenvector terms of the cost;
/// the vector term never exceeds sqrt(2).
inline double default_weight(const SpectralWindow& window) { return window.width() / 4.0; }

/// D(j, l) = |lambda_j - lambda_l| + w * eigvec_distance(u_j, u_l), rows from
/// the source set, columns from the target set.
struct CostMatrix {
  Eigen::MatrixXd entries;
  double weight = 0.0;
  double mu_source = 0.0;
  double mu_target = 0.0;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// Throws MeshMismatch when the sets come from different meshes and
/// std::invalid_argument for a negative or non-finite weight.
CostMatrix build_cost_matrix(const EigenSet& source, const EigenSet& target,
                             const SparseMatrix& M, double weight);

/// Cost differences at or below this are treated as ties.
inline constexpr double kAmbiguityTolerance = 1e-9;

struct Assignment {
  /// (row, column) pairs sorted by row; min(rows, cols) of them.
  std::vector<std::pair<int, int>> pairs;
  /// Per pair: another optimal-looking choice exists within kAmbiguityTolerance.
  std::vector<bool> ambiguous;
  double total_cost = 0.0;
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;

  /// Column matched to a row, if any.
  std::optional<int> column_of(int row) const;
};

/// Sum of the selected entries, added in ascending order of value so the
/// result does not depend on how rows and columns are numbered.
double assignment_cost(const Eigen::MatrixXd& cost, std::span<const std::pair<int, int>> pairs);

/// Exact rectangular linear assignment (Kuhn-Munkres with potentials).
/// Among optimal assignments the lexicographically smallest list of
/// (row, column) pairs is returned. Throws std::invalid_argument for an
/// empty or non-finite matrix.
Assignment hungarian(const Eigen::MatrixXd& cost);
inline Assignment hungarian(const CostMatrix& cost) { return hungarian(cost.entries); }

Assignment match_sets(const EigenSet& source, const EigenSet& target, const SparseMatrix& M,
                      double weight);

struct CurvePoint {
  int grid_index = 0;
  double mu = 0.0;
  double lambda = 0.0;
  /// 0-based position in the eigenset at this parameter value.
  int sorted_index = 0;
};

struct Curve {
  int id = 0;
  std::vector<CurvePoint> points;

  double birth_mu() const { return points.front().mu; }
  double death_mu() const { return points.back().mu; }
};

struct TrackingOptions {
  double weight = 1.0;
  /// Hungarian pairs with a larger eigenvector distance are split into a
  /// death and a birth. Infinity chains every pair.
  double gate = 1.0;
};

struct CurveEvent {
  enum class Kind { kBirth, kDeath };
  int curve_id = 0;
  Kind kind = Kind::kBirth;
  double mu = 0.0;
};

/// Eigenvalue curves chained across a sorted parameter grid.
class CurveFamily {
 public:
  const std::vector<EigenSet>& sets() const { return sets_; }
  const std::vector<Curve>& curves() const { return curves_; }
  /// Raw assignment between grid points k and k+1, before gating.
  const std::vector<Assignment>& steps() const { return steps_; }

  const Eigen::VectorXd& vector(const CurvePoint& point) const {
    return sets_[static_cast<std::size_t>(point.grid_index)][static_cast<std::size_t>(point.sorted_index)].vec;
  }
  /// Curve id owning eigenpair `sorted_index` at grid point `grid_index`.
  int curve_at(int grid_index, int sorted_index) const;
  /// Window entries and exits strictly inside the grid.
  std::vector<CurveEvent> events() const;

 private:
  friend CurveFamily track_curves(std::vector<EigenSet> sets, const SparseMatrix& M,
                                  const TrackingOptions& options);

  std::vector<EigenSet> sets_;
  std::vector<Curve> curves_;
  std::vector<Assignment> steps_;
  std::vector<std::vector<int>> owner_;
};

/// Sequential left-to-right chaining of pairwise matches. `sets` must be
/// sorted by mu with at least two entries.
CurveFamily track_curves(std::vector<EigenSet> sets, const SparseMatrix& M,
                         const TrackingOptions& options);

/// Solves the model problem on `grid` and tracks the curves.
CurveFamily track_curves(EigenSweep& sweep, std::span<const double> grid,
                         const TrackingOptions& options);

void write_curves_csv(std::ostream& out, const CurveFamily& family);
void write_events_csv(std::ostream& out, const CurveFamily& family);

struct IntervalIndicator {
  double mu_left = 0.0;
  double mu_right = 0.0;
  double value = 0.0;
};

struct RefinementStep {
  int iteration = 0;
  std::vector<IntervalIndicator> indicators;
  /// Midpoint inserted after this evaluation, if any.
  std::optional<double> inserted;
};

struct RefinementOptions {
  double weight = 1.0;
  double gate = 1.0;
  int budget = 0;
  double theta = 0.05;
  /// lambda_max - lambda_min, the scale of the prediction term.
  double window_width = 1.0;
};

struct RefinementResult {
  std::vector<double> grid;
  std::vector<RefinementStep> history;
};

using EigenSetProvider = std::function<EigenSet(double mu)>;

/// Per-interval indicator on a tracked family: for every Hungarian pair
/// across the interval, the misfit of the right (or left) eigenvalue
/// against the linear extrapolation of the curve's two neighbouring points,
/// scaled by the window width, plus w * eigvec_distance / sqrt(2). The
/// interval value is the maximum over pairs.
std::vector<IntervalIndicator> interval_indicators(const CurveFamily& family,
                                                   const SparseMatrix& M,
                                                   const RefinementOptions& options);

/// Greedy bisection: repeatedly inserts the midpoint of the interval with
/// the largest indicator until the budget is spent or every indicator is
/// below theta.
RefinementResult refine_grid(std::span<const double> initial, const EigenSetProvider& provider,
                             const SparseMatrix& M, const RefinementOptions& options);

void write_grid_csv(std::ostream& out, std::span<const double> grid);
void write_indicators_csv(std::ostream& out, const RefinementResult& result);

}  // namespace eigtrack::matching
