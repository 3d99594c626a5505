// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigtrack/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eigtrack::analytic {
namespace {

constexpr double kQuarterPiSq = std::numbers::pi * std::numbers::pi / 4.0;

void check_label(ModeLabel label) {
  if (label.m < 1 || label.n < 1) {
    throw std::domain_error("mode indices start at 1");
  }
}

// Largest index k with scale * k^2 <= bound.
int index_bound(double bound, double scale) {
  if (bound <= 0.0) return 0;
  return static_cast<int>(std::floor(std::sqrt(bound / scale)));
}

}  // namespace

std::ostream& operator<<(std::ostream& out, const ModeLabel& label) {
  return out << '(' << label.m << ',' << label.n << ')';
}

double exact_eigenvalue(ModeLabel label, double mu) {
  check_label(label);
  if (!(mu > -1.0)) {
    throw std::domain_error("exact_eigenvalue: mu must exceed -1");
  }
  const double m2 = static_cast<double>(label.m) * label.m;
  const double n2 = static_cast<double>(label.n) * label.n;
  return kQuarterPiSq * (m2 + (1.0 + mu) * n2);
}

double exact_eigenfunction(ModeLabel label, const fem::Rectangle& domain, double x, double y) {
  check_label(label);
  const double sx = std::sin(label.m * std::numbers::pi * (x - domain.x0) / domain.width());
  const double sy = std::sin(label.n * std::numbers::pi * (y - domain.y0) / domain.height());
  return sx * sy;
}

Eigen::VectorXd exact_eigenfunction_coeffs(ModeLabel label, const fem::Mesh& mesh,
                                           const SparseMatrix& mass) {
  Eigen::VectorXd coeffs(mesh.num_dofs());
  for (int dof = 0; dof < mesh.num_dofs(); ++dof) {
    const auto p = mesh.dof_coordinates(dof);
    coeffs[dof] = exact_eigenfunction(label, mesh.domain(), p.x(), p.y());
  }
  return normalize_fix_sign(coeffs, mass);
}

Eigen::VectorXd exact_eigenfunction_coeffs(ModeLabel label, const fem::Mesh& mesh) {
  return exact_eigenfunction_coeffs(label, mesh, fem::assemble_mass(mesh));
}

std::vector<LabeledEigenvalue> exact_sorted_spectrum(double mu, const SpectralWindow& window,
                                                     int max_index) {
  const double top = window.hi() + window.guard();
  const int m_max = std::min(max_index, index_bound(top, kQuarterPiSq));
  const int n_max = std::min(max_index, index_bound(top, kQuarterPiSq * (1.0 + mu)));
  std::vector<LabeledEigenvalue> spectrum;
  for (int m = 1; m <= m_max; ++m) {
    for (int n = 1; n <= n_max; ++n) {
      const ModeLabel label{m, n};
      const double lambda = exact_eigenvalue(label, mu);
      if (window.contains(lambda)) spectrum.push_back({lambda, label});
    }
  }
  std::stable_sort(spectrum.begin(), spectrum.end(),
                   [](const LabeledEigenvalue& a, const LabeledEigenvalue& b) {
                     if (a.lambda != b.lambda) return a.lambda < b.lambda;
                     return a.label < b.label;
                   });
  return spectrum;
}

bool ModeIdentification::accepts(const ModeLabel& label) const {
  return std::find(candidates.begin(), candidates.end(), label) != candidates.end();
}

ModeIdentification identify_mode(double lambda, double mu, double tol,
                                 std::optional<int> max_index) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("identify_mode: tolerance must be positive");
  }
  const double radius = tol * std::abs(lambda);
  const double top = lambda + radius;
  int m_max = index_bound(top, kQuarterPiSq);
  int n_max = index_bound(top, kQuarterPiSq * (1.0 + mu));
  if (max_index) {
    m_max = std::min(m_max, *max_index);
    n_max = std::min(n_max, *max_index);
  }

  std::vector<std::pair<double, ModeLabel>> hits;
  for (int m = 1; m <= m_max; ++m) {
    for (int n = 1; n <= n_max; ++n) {
      const double gap = std::abs(exact_eigenvalue({m, n}, mu) - lambda);
      if (gap <= radius) hits.emplace_back(gap, ModeLabel{m, n});
    }
  }
  if (hits.empty()) {
    std::ostringstream msg;
    msg << "identify_mode: no candidate within relative tolerance " << tol << " of lambda = "
        << lambda << " at mu = " << mu;
    throw std::runtime_error(msg.str());
  }
  std::sort(hits.begin(), hits.end());
  ModeIdentification id;
  for (const auto& [gap, label] : hits) id.candidates.push_back(label);
  return id;
}

bool ShapeIdentification::accepts(const ModeLabel& candidate, double threshold) const {
  if (candidate == label) return true;
  return ambiguous(threshold) && candidate == runner_up;
}

ModeCatalog::ModeCatalog(const fem::Mesh& mesh, const SparseMatrix& mass, int max_index) {
  if (max_index < 1) throw std::invalid_argument("ModeCatalog: max_index must be >= 1");
  // Interpolants of modes m and 2*nx - m coincide up to sign on the grid.
  const int m_cap = std::min(max_index, mesh.nx() - 1);
  const int n_cap = std::min(max_index, mesh.ny() - 1);
  for (int m = 1; m <= m_cap; ++m) {
    for (int n = 1; n <= n_cap; ++n) labels_.push_back({m, n});
  }
  mass_times_modes_.resize(mesh.num_dofs(), static_cast<Eigen::Index>(labels_.size()));
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    Eigen::VectorXd coeffs(mesh.num_dofs());
    for (int dof = 0; dof < mesh.num_dofs(); ++dof) {
      const auto p = mesh.dof_coordinates(dof);
      coeffs[dof] = exact_eigenfunction(labels_[k], mesh.domain(), p.x(), p.y());
    }
    const double norm_sq = coeffs.dot(mass * coeffs);
    if (norm_sq <= 1e-20) {
      mass_times_modes_.col(static_cast<Eigen::Index>(k)).setZero();
      continue;
    }
    mass_times_modes_.col(static_cast<Eigen::Index>(k)) = mass * coeffs / std::sqrt(norm_sq);
  }
}

ShapeIdentification ModeCatalog::identify(const Eigen::VectorXd& vec) const {
  if (vec.size() != mass_times_modes_.rows()) {
    throw std::invalid_argument("ModeCatalog::identify: vector length mismatch");
  }
  const Eigen::VectorXd overlaps = (mass_times_modes_.transpose() * vec).cwiseAbs();
  ShapeIdentification id;
  for (Eigen::Index k = 0; k < overlaps.size(); ++k) {
    const auto label = labels_[static_cast<std::size_t>(k)];
    if (overlaps[k] > id.overlap) {
      id.runner_up = id.label;
      id.runner_up_overlap = id.overlap;
      id.label = label;
      id.overlap = overlaps[k];
    } else if (overlaps[k] > id.runner_up_overlap) {
      id.runner_up = label;
      id.runner_up_overlap = overlaps[k];
    }
  }
  return id;
}

}  // namespace eigtrack::analytic
