// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigtrack/pod.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "eigtrack/matching.hpp"

namespace eigtrack::pod {

SnapshotMatrix build_snapshots(EigenSweep& sweep, std::span<const double> grid, int target_index) {
  if (target_index < 1) {
    throw std::invalid_argument("build_snapshots: target_index starts at 1");
  }
  if (grid.empty()) {
    throw std::invalid_argument("build_snapshots: empty parameter grid");
  }
  SnapshotMatrix snapshots;
  snapshots.target_index = target_index;
  snapshots.mesh = sweep.problem().mesh().id();
  snapshots.columns.resize(sweep.problem().mesh().num_dofs(), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const EigenSet& set = sweep.at(grid[j]);
    if (set.size() < static_cast<std::size_t>(target_index)) {
      std::ostringstream msg;
      msg << "build_snapshots: only " << set.size() << " eigenpairs in the window at mu = "
          << grid[j] << ", need " << target_index;
      throw std::runtime_error(msg.str());
    }
    snapshots.columns.col(static_cast<Eigen::Index>(j)) =
        set[static_cast<std::size_t>(target_index - 1)].vec;
    snapshots.mu_values.push_back(grid[j]);
  }
  return snapshots;
}

int truncation_rank(const Eigen::VectorXd& singular_values, double tol) {
  const auto count = static_cast<int>(singular_values.size());
  if (count == 0) return 0;
  const double leading = singular_values[0];
  for (int n = 1; n < count; ++n) {
    if (singular_values[n] / leading < tol) return n;
  }
  return count;
}

PodBasis::PodBasis(Eigen::VectorXd singular_values, Eigen::MatrixXd left_vectors, double tol,
                   int rank)
    : singular_values_(std::move(singular_values)),
      left_vectors_(std::move(left_vectors)),
      tol_(tol),
      rank_(rank) {
  if (rank < 1 || rank > left_vectors_.cols()) {
    throw std::invalid_argument("PodBasis: rank out of range");
  }
}

PodBasis PodBasis::with_rank(int rank) const {
  return PodBasis(singular_values_, left_vectors_, tol_, rank);
}

PodBasis svd_truncate(const SnapshotMatrix& snapshots, double tol) {
  if (snapshots.columns.size() == 0) {
    throw std::invalid_argument("svd_truncate: empty snapshot matrix");
  }
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("svd_truncate: tol must lie in (0, 1)");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(snapshots.columns, Eigen::ComputeThinU);
  Eigen::VectorXd sigma = svd.singularValues();
  const int rank = std::max(1, truncation_rank(sigma, tol));
  return PodBasis(std::move(sigma), svd.matrixU(), tol, rank);
}

std::vector<ReducedPair> reduce_and_solve(const Eigen::MatrixXd& basis,
                                          const fem::AssembledOperators& ops) {
  if (basis.rows() != ops.K().rows()) {
    throw std::invalid_argument("reduce_and_solve: basis and operators differ in dimension");
  }
  const Eigen::MatrixXd k_basis = ops.K() * basis;
  const Eigen::MatrixXd m_basis = ops.M() * basis;
  Eigen::MatrixXd k_reduced = basis.transpose() * k_basis;
  Eigen::MatrixXd m_reduced = basis.transpose() * m_basis;
  k_reduced = 0.5 * (k_reduced + k_reduced.transpose()).eval();
  m_reduced = 0.5 * (m_reduced + m_reduced.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mass_spectrum(m_reduced, Eigen::EigenvaluesOnly);
  const auto& mass_eigs = mass_spectrum.eigenvalues();
  if (!(mass_eigs.minCoeff() > 1e-12 * mass_eigs.maxCoeff())) {
    throw std::runtime_error("reduce_and_solve: reduced mass matrix is numerically singular");
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(k_reduced, m_reduced);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("reduce_and_solve: reduced eigensolve failed");
  }
  std::vector<ReducedPair> pairs;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    ReducedPair pair;
    pair.lambda = solver.eigenvalues()[i];
    pair.reduced = solver.eigenvectors().col(i);
    pair.lifted = normalize_fix_sign(basis * pair.reduced, ops.M());
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::size_t select_reduced_match(std::span<const ReducedPair> reduced, const EigenPair& reference,
                                 const SparseMatrix& M, double weight) {
  if (reduced.empty()) {
    throw std::invalid_argument("select_reduced_match: no reduced eigenpairs");
  }
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const double cost = std::abs(reduced[i].lambda - reference.lambda) +
                        weight * matching::eigvec_distance(reduced[i].lifted, reference.vec, M);
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return best;
}

std::vector<RbComparison> compare_fem_rb(EigenSweep& sweep, const Eigen::MatrixXd& basis,
                                         int target_index, std::span<const double> mu_values,
                                         double weight) {
  if (target_index < 1) throw std::invalid_argument("compare_fem_rb: target_index starts at 1");
  std::vector<RbComparison> rows;
  for (double mu : mu_values) {
    const EigenSet& fem_set = sweep.at(mu);
    if (fem_set.size() < static_cast<std::size_t>(target_index)) {
      throw std::runtime_error("compare_fem_rb: too few FEM eigenpairs in the window");
    }
    const EigenPair& reference = fem_set[static_cast<std::size_t>(target_index - 1)];
    const auto ops = sweep.problem().operators(mu);
    const auto reduced = reduce_and_solve(basis, ops);

    RbComparison row;
    row.h = sweep.problem().mesh().hx();
    row.mu = mu;
    row.lambda_fem = reference.lambda;
    row.reduced_index = select_reduced_match(reduced, reference, ops.M(), weight);
    row.lambda_rb = reduced[row.reduced_index].lambda;
    for (const auto& pair : reduced) row.reduced_lambdas.push_back(pair.lambda);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace eigtrack::pod
