// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace eigtrack {

using SparseMatrix = Eigen::SparseMatrix<double>;

namespace fem {

/// Axis-aligned rectangle (x0, x1) x (y0, y1).
struct Rectangle {
  double x0 = 0.0;
  double x1 = 2.0;
  double y0 = 0.0;
  double y1 = 2.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// How each rectangular cell is split into two right triangles.
enum class Triangulation {
  /// Diagonals point toward the centre of the rectangle in every quadrant;
  /// the mesh is symmetric under both axis reflections and the x<->y swap.
  kCentered,
  /// Every cell is split along its lower-left to upper-right diagonal.
  kUniform,
};

/// Identity token of a mesh. Quantities computed on different meshes carry
/// different tokens and must not be combined.
class MeshId {
 public:
  constexpr MeshId() = default;
  constexpr explicit MeshId(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }
  constexpr auto operator<=>(const MeshId&) const = default;

 private:
  std::uint64_t value_ = 0;
};

/// Structured triangulation of a rectangle with homogeneous Dirichlet
/// boundary. Nodes are numbered row-major (y outer, x inner); only interior
/// nodes carry degrees of freedom.
class Mesh {
 public:
  Mesh(int nx, int ny, Rectangle domain, Triangulation triangulation);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Rectangle& domain() const { return domain_; }
  Triangulation triangulation() const { return triangulation_; }
  double hx() const { return domain_.width() / nx_; }
  double hy() const { return domain_.height() / ny_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_dofs() const { return static_cast<int>(dof_nodes_.size()); }

  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }
  /// Counter-clockwise vertex triples.
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  bool on_boundary(int node) const { return dof_of_node_[node] < 0; }
  /// Degree of freedom of a node, or -1 for boundary nodes.
  int dof_of_node(int node) const { return dof_of_node_[node]; }
  int node_of_dof(int dof) const { return dof_nodes_[dof]; }
  Eigen::Vector2d dof_coordinates(int dof) const { return nodes_[dof_nodes_[dof]]; }

  MeshId id() const { return id_; }

 private:
  int nx_;
  int ny_;
  Rectangle domain_;
  Triangulation triangulation_;
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> dof_of_node_;
  std::vector<int> dof_nodes_;
  MeshId id_;
};

/// Builds the mesh with cell count round(extent / h) per axis, at least 2.
/// Throws std::invalid_argument for non-positive h or a degenerate domain.
Mesh build_mesh(double h, const Rectangle& domain = {},
                Triangulation triangulation = Triangulation::kCentered);

/// Signed area of a mesh triangle (positive for counter-clockwise order).
double signed_area(const Mesh& mesh, int triangle);

/// Writes `node,x,y,boundary` rows.
void write_mesh_csv(std::ostream& out, const Mesh& mesh);

/// Parameter of the anisotropic diffusion A(mu) = diag(1, 1 + mu).
class DiffusionCoefficient {
 public:
  /// Throws std::domain_error when mu <= -1 (A(mu) is no longer coercive).
  explicit DiffusionCoefficient(double mu);

  double mu() const { return mu_; }
  double axx() const { return 1.0; }
  double ayy() const { return 1.0 + mu_; }

 private:
  double mu_;
};

/// P1 stiffness matrix of (A(mu) grad w, grad v) on the interior dofs.
SparseMatrix assemble_stiffness(const Mesh& mesh, const DiffusionCoefficient& coeff);

/// Consistent P1 mass matrix of (w, v) on the interior dofs.
SparseMatrix assemble_mass(const Mesh& mesh);

/// Mass matrix over all nodes, boundary included.
SparseMatrix assemble_mass_full(const Mesh& mesh);

struct AssembledOperators {
  double mu = 0.0;
  SparseMatrix stiffness;
  std::shared_ptr<const SparseMatrix> mass;
  MeshId mesh;

  const SparseMatrix& K() const { return stiffness; }
  const SparseMatrix& M() const { return *mass; }
};

/// The model problem on a fixed mesh. The mass matrix is assembled once and
/// shared by all operators produced for different parameter values.
class ModelProblem {
 public:
  explicit ModelProblem(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const SparseMatrix& mass() const { return *mass_; }
  std::shared_ptr<const SparseMatrix> shared_mass() const { return mass_; }

  AssembledOperators operators(double mu) const;

 private:
  Mesh mesh_;
  std::shared_ptr<const SparseMatrix> mass_;
};

}  // namespace fem
}  // namespace eigtrack
