// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eigtrack/eigensolver.hpp"
#include "eigtrack/fem.hpp"

namespace eigtrack::pod {

/// Columns are the target_index-th eigenvectors (1-based, ascending order)
/// at each sampled parameter value.
struct SnapshotMatrix {
  Eigen::MatrixXd columns;
  std::vector<double> mu_values;
  int target_index = 1;
  fem::MeshId mesh;
};

/// Throws std::invalid_argument for target_index < 1 and
/// std::runtime_error when some solve yields fewer than target_index pairs.
SnapshotMatrix build_snapshots(EigenSweep& sweep, std::span<const double> grid, int target_index);

/// Smallest N with sigma[N] / sigma[0] < tol (0-based sigma), or all of them.
int truncation_rank(const Eigen::VectorXd& singular_values, double tol);

/// Thin SVD of a snapshot matrix with the retained left singular vectors.
class PodBasis {
 public:
  PodBasis(Eigen::VectorXd singular_values, Eigen::MatrixXd left_vectors, double tol, int rank);

  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  double tol() const { return tol_; }
  int rank() const { return rank_; }
  /// First rank() left singular vectors, Euclidean-orthonormal columns.
  Eigen::MatrixXd retained() const { return left_vectors_.leftCols(rank_); }
  /// Same decomposition truncated to a fixed number of vectors.
  PodBasis with_rank(int rank) const;

 private:
  Eigen::VectorXd singular_values_;
  Eigen::MatrixXd left_vectors_;
  double tol_;
  int rank_;
};

/// Throws std::invalid_argument for an empty matrix or tol outside (0, 1).
PodBasis svd_truncate(const SnapshotMatrix& snapshots, double tol);

struct ReducedPair {
  double lambda = 0.0;
  Eigen::VectorXd reduced;
  /// basis * reduced, M-normalized and sign-fixed.
  Eigen::VectorXd lifted;
};

/// Galerkin projection onto span(basis) and dense solve of the reduced
/// pencil, ascending. Throws std::runtime_error when the reduced mass matrix
/// is numerically singular.
std::vector<ReducedPair> reduce_and_solve(const Eigen::MatrixXd& basis,
                                          const fem::AssembledOperators& ops);

/// 0-based index of the reduced pair with the smallest matching cost
/// |lambda - lambda_ref| + w * eigvec_distance against the reference.
std::size_t select_reduced_match(std::span<const ReducedPair> reduced, const EigenPair& reference,
                                 const SparseMatrix& M, double weight);

/// One row of the FEM versus reduced-basis comparison.
struct RbComparison {
  double h = 0.0;
  double mu = 0.0;
  double lambda_fem = 0.0;
  double lambda_rb = 0.0;
  /// 0-based index of the matched reduced eigenpair.
  std::size_t reduced_index = 0;
  std::vector<double> reduced_lambdas;

  double relative_gap() const { return std::abs(lambda_rb - lambda_fem) / lambda_fem; }
};

/// For each mu: full solve, reduced solve on `basis`, and the matched pair
/// for the target_index-th FEM eigenpair.
std::vector<RbComparison> compare_fem_rb(EigenSweep& sweep, const Eigen::MatrixXd& basis,
                                         int target_index, std::span<const double> mu_values,
                                         double weight);

}  // namespace eigtrack::pod
