// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "eigtrack/eigensolver.hpp"
#include "eigtrack/fem.hpp"

// Closed-form spectrum of -div(diag(1, 1+mu) grad u) = lambda u on (0,2)^2
// with homogeneous Dirichlet conditions.
namespace eigtrack::analytic {

/// Mode (m, n): m half-waves along x, n along y. Both start at 1.
struct ModeLabel {
  int m = 1;
  int n = 1;

  auto operator<=>(const ModeLabel&) const = default;
};

std::ostream& operator<<(std::ostream& out, const ModeLabel& label);

/// pi^2/4 * (m^2 + (1 + mu) n^2). Throws std::domain_error for mu <= -1 or
/// a label index below 1.
double exact_eigenvalue(ModeLabel label, double mu);

/// sin(m pi x / 2) sin(n pi y / 2), shifted to the mesh domain's corner.
double exact_eigenfunction(ModeLabel label, const fem::Rectangle& domain, double x, double y);

/// Nodal interpolant on the interior dofs, M-normalized and sign-fixed.
Eigen::VectorXd exact_eigenfunction_coeffs(ModeLabel label, const fem::Mesh& mesh,
                                           const SparseMatrix& mass);
Eigen::VectorXd exact_eigenfunction_coeffs(ModeLabel label, const fem::Mesh& mesh);

struct LabeledEigenvalue {
  double lambda = 0.0;
  ModeLabel label;
};

/// All analytic eigenvalues inside the window, ascending; equal eigenvalues
/// are ordered by (m, n). The search box is capped at max_index per axis.
std::vector<LabeledEigenvalue> exact_sorted_spectrum(double mu, const SpectralWindow& window,
                                                     int max_index);

struct ModeIdentification {
  std::vector<ModeLabel> candidates;

  bool ambiguous() const { return candidates.size() > 1; }
  const ModeLabel& label() const { return candidates.front(); }
  bool accepts(const ModeLabel& label) const;
};

/// Labels whose exact eigenvalue lies within relative tol of lambda. Several
/// candidates mean a (near-)crossing. Throws std::runtime_error when nothing
/// qualifies and std::invalid_argument for tol <= 0.
ModeIdentification identify_mode(double lambda, double mu, double tol,
                                 std::optional<int> max_index = std::nullopt);

struct ShapeIdentification {
  ModeLabel label;
  /// |<u, phi>_M| with the best-matching interpolated mode phi.
  double overlap = 0.0;
  ModeLabel runner_up;
  double runner_up_overlap = 0.0;

  bool ambiguous(double threshold = 0.9) const { return overlap < threshold; }
  bool accepts(const ModeLabel& candidate, double threshold = 0.9) const;
};

/// Precomputed interpolated modes used to label discrete eigenvectors by shape.
class ModeCatalog {
 public:
  ModeCatalog(const fem::Mesh& mesh, const SparseMatrix& mass, int max_index);

  /// vec must be M-normalized.
  ShapeIdentification identify(const Eigen::VectorXd& vec) const;

 private:
  std::vector<ModeLabel> labels_;
  Eigen::MatrixXd mass_times_modes_;
};

}  // namespace eigtrack::analytic
