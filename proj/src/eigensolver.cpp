// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigtrack/eigensolver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace eigtrack {

SpectralWindow::SpectralWindow(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || !(lo < hi)) {
    std::ostringstream msg;
    msg << "SpectralWindow: need 0 <= lo < hi, got [" << lo << ", " << hi << "]";
    throw std::invalid_argument(msg.str());
  }
}

EigenSet solve_generalized(const SparseMatrix& K, const SparseMatrix& M,
                           const SpectralWindow& window, double mu, fem::MeshId mesh) {
  const auto n = static_cast<lapack_int>(K.rows());
  if (K.cols() != n || M.rows() != n || M.cols() != n) {
    throw std::invalid_argument("solve_generalized: K and M must be square and of equal size");
  }
  EigenSet result;
  result.mu = mu;
  result.mesh = mesh;
  if (n == 0) return result;

  Eigen::MatrixXd a = Eigen::MatrixXd(K);
  Eigen::MatrixXd b = Eigen::MatrixXd(M);
  Eigen::MatrixXd z(n, n);
  Eigen::VectorXd w(n);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;

  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsygvx(
      LAPACK_COL_MAJOR, 1, 'V', 'V', 'L', n, a.data(), n, b.data(), n,
      window.lo() - window.guard(), window.hi() + window.guard(), 0, 0, abstol, &found,
      w.data(), z.data(), n, ifail.data());
  if (info > n) {
    throw std::runtime_error("solve_generalized: mass matrix is not positive definite (leading minor " +
                             std::to_string(info - n) + ")");
  }
  if (info != 0) {
    throw std::runtime_error("solve_generalized: LAPACK dsygvx failed, info = " +
                             std::to_string(info));
  }

  result.pairs.reserve(static_cast<std::size_t>(found));
  for (lapack_int k = 0; k < found; ++k) {
    if (!window.contains(w[k])) continue;
    result.pairs.push_back({w[k], normalize_fix_sign(z.col(k), M)});
  }
  return result;
}

EigenSet solve_generalized(const fem::AssembledOperators& ops, const SpectralWindow& window) {
  return solve_generalized(ops.K(), ops.M(), window, ops.mu, ops.mesh);
}

Eigen::VectorXd normalize_fix_sign(const Eigen::VectorXd& vec, const SparseMatrix& M) {
  if (vec.size() != M.rows()) {
    throw std::invalid_argument("normalize_fix_sign: vector length does not match M");
  }
  const double norm_sq = vec.dot(M * vec);
  if (!(norm_sq > 0.0)) {
    throw std::invalid_argument("normalize_fix_sign: zero vector");
  }
  Eigen::Index pivot = 0;
  vec.cwiseAbs().maxCoeff(&pivot);  // first occurrence on ties
  Eigen::VectorXd out = vec / std::sqrt(norm_sq);
  if (out[pivot] < 0.0) out = -out;
  return out;
}

double residual(const SparseMatrix& K, const SparseMatrix& M, double lambda,
                const Eigen::VectorXd& vec) {
  if (vec.size() != K.cols() || vec.size() != M.cols()) {
    throw std::invalid_argument("residual: shape mismatch");
  }
  const Eigen::VectorXd kv = K * vec;
  const double denom = kv.norm();
  if (denom == 0.0) {
    throw std::invalid_argument("residual: K * vec vanishes");
  }
  return (kv - lambda * (M * vec)).norm() / denom;
}

EigenSweep::EigenSweep(const fem::ModelProblem& problem, SpectralWindow window)
    : problem_(&problem), window_(window) {}

const EigenSet& EigenSweep::at(double mu) {
  if (auto it = cache_.find(mu); it != cache_.end()) return it->second;
  try {
    auto set = solve_generalized(problem_->operators(mu), window_);
    return cache_.emplace(mu, std::move(set)).first->second;
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "eigensolve failed at mu = " << mu << ": " << e.what();
    throw std::runtime_error(msg.str());
  }
}

std::vector<EigenSet> EigenSweep::over(std::span<const double> grid) {
  std::vector<EigenSet> sets;
  sets.reserve(grid.size());
  for (double mu : grid) sets.push_back(at(mu));
  return sets;
}

void write_eigenvalues_csv(std::ostream& out, std::span<const EigenSet> sets) {
  out << "mu,index,lambda\n";
  out.precision(17);
  for (const auto& set : sets) {
    for (std::size_t k = 0; k < set.size(); ++k) {
      out << set.mu << ',' << k + 1 << ',' << set[k].lambda << '\n';
    }
  }
}

void write_eigenvectors_csv(std::ostream& out, const EigenSet& set) {
  out.precision(17);
  out << "# mu=" << set.mu << '\n' << "dof";
  for (std::size_t k = 0; k < set.size(); ++k) out << ",vec_" << k + 1;
  out << '\n';
  const Eigen::Index n = set.empty() ? 0 : set[0].vec.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    out << i;
    for (const auto& pair : set.pairs) out << ',' << pair.vec[i];
    out << '\n';
  }
}

}  // namespace eigtrack
