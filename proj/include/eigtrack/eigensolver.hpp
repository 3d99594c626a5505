// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eigtrack/fem.hpp"

namespace eigtrack {

/// Interval [lo, hi] of eigenvalues of interest.
class SpectralWindow {
 public:
  /// Throws std::invalid_argument unless 0 <= lo < hi (both finite).
  SpectralWindow(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  /// Eigenvalues within this distance of an edge count as inside.
  double guard() const { return 1e-9 * hi_; }
  bool contains(double lambda) const {
    return lambda >= lo_ - guard() && lambda <= hi_ + guard();
  }

 private:
  double lo_;
  double hi_;
};

struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd vec;
};

/// Every eigenpair of K(mu) x = lambda M x inside a window, sorted
/// ascending. Vectors are M-normalized with a positive largest entry.
struct EigenSet {
  double mu = 0.0;
  fem::MeshId mesh;
  std::vector<EigenPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  const EigenPair& operator[](std::size_t i) const { return pairs[i]; }
};

/// Solves the generalized symmetric problem densely. Throws
/// std::runtime_error when M is not positive definite or LAPACK fails to
/// converge. An empty window result is not an error.
EigenSet solve_generalized(const SparseMatrix& K, const SparseMatrix& M,
                           const SpectralWindow& window, double mu = 0.0,
                           fem::MeshId mesh = {});

EigenSet solve_generalized(const fem::AssembledOperators& ops, const SpectralWindow& window);

/// Scales vec to unit M-norm and flips it so the entry of largest magnitude
/// (lowest index on ties) is positive. Throws std::invalid_argument for a
/// zero vector.
Eigen::VectorXd normalize_fix_sign(const Eigen::VectorXd& vec, const SparseMatrix& M);

/// ||K v - lambda M v|| / ||K v||. Throws std::invalid_argument if K v = 0
/// or the shapes disagree.
double residual(const SparseMatrix& K, const SparseMatrix& M, double lambda,
                const Eigen::VectorXd& vec);

inline double residual(const fem::AssembledOperators& ops, double lambda,
                       const Eigen::VectorXd& vec) {
  return residual(ops.K(), ops.M(), lambda, vec);
}

/// Solves the model problem on demand and memoizes by parameter value.
class EigenSweep {
 public:
  EigenSweep(const fem::ModelProblem& problem, SpectralWindow window);

  const fem::ModelProblem& problem() const { return *problem_; }
  const SpectralWindow& window() const { return window_; }

  /// Throws std::runtime_error naming mu if the solve fails.
  const EigenSet& at(double mu);
  std::vector<EigenSet> over(std::span<const double> grid);

 private:
  const fem::ModelProblem* problem_;
  SpectralWindow window_;
  std::map<double, EigenSet> cache_;
};

/// `mu,index,lambda` rows, index 1-based.
void write_eigenvalues_csv(std::ostream& out, std::span<const EigenSet> sets);

/// Node-major vector dump: one row per dof, one column per eigenpair.
void write_eigenvectors_csv(std::ostream& out, const EigenSet& set);

}  // namespace eigtrack
