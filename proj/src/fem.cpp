// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigtrack/fem.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eigtrack::fem {
namespace {

// FNV-1a over the quantities that determine the discretization.
class Fnv1a {
 public:
  void mix(std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      hash_ ^= (word >> (8 * byte)) & 0xffU;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void mix(double value) { mix(std::bit_cast<std::uint64_t>(value)); }
  std::uint64_t value() const { return hash_ == 0 ? 1 : hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

int cell_count(double extent, double h) {
  const double ratio = extent / h;
  if (!std::isfinite(ratio) || ratio > 1e7) {
    throw std::invalid_argument("build_mesh: grid spacing too small for the domain");
  }
  return std::max(2, static_cast<int>(std::lround(ratio)));
}

// Barycentric gradient coefficients scaled by twice the area:
// grad(phi_a) = (b[a], c[a]) / (2 * area).
struct ElementGeometry {
  std::array<double, 3> b;
  std::array<double, 3> c;
  double area;
};

ElementGeometry element_geometry(const Mesh& mesh, const std::array<int, 3>& tri) {
  const auto& p0 = mesh.nodes()[tri[0]];
  const auto& p1 = mesh.nodes()[tri[1]];
  const auto& p2 = mesh.nodes()[tri[2]];
  ElementGeometry g;
  g.b = {p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y()};
  g.c = {p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x()};
  g.area = 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
  return g;
}

template <typename Kernel>
SparseMatrix assemble(const Mesh& mesh, bool interior_only, Kernel&& element_entry) {
  const int n = interior_only ? mesh.num_dofs() : mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangles().size() * 9);
  for (const auto& tri : mesh.triangles()) {
    const ElementGeometry g = element_geometry(mesh, tri);
    for (int a = 0; a < 3; ++a) {
      const int row = interior_only ? mesh.dof_of_node(tri[a]) : tri[a];
      if (row < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int col = interior_only ? mesh.dof_of_node(tri[b]) : tri[b];
        if (col < 0) continue;
        triplets.emplace_back(row, col, element_entry(g, a, b));
      }
    }
  }
  SparseMatrix matrix(n, n);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  matrix.makeCompressed();
  return matrix;
}

double mass_entry(const ElementGeometry& g, int a, int b) {
  return (a == b ? 2.0 : 1.0) * g.area / 12.0;
}

}  // namespace

Mesh::Mesh(int nx, int ny, Rectangle domain, Triangulation triangulation)
    : nx_(nx), ny_(ny), domain_(domain), triangulation_(triangulation) {
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("Mesh: at least 2 cells per axis are required");
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw std::invalid_argument("Mesh: degenerate domain");
  }

  const auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  nodes_.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  dof_of_node_.assign(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Interpolate from both ends so the far edge lands exactly on x1 / y1.
      const double x = (domain.x0 * (nx - i) + domain.x1 * i) / nx;
      const double y = (domain.y0 * (ny - j) + domain.y1 * j) / ny;
      nodes_.emplace_back(x, y);
      if (i > 0 && i < nx && j > 0 && j < ny) {
        dof_of_node_[node(i, j)] = static_cast<int>(dof_nodes_.size());
        dof_nodes_.push_back(node(i, j));
      }
    }
  }

  triangles_.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v0 = node(i, j);
      const int v1 = node(i + 1, j);
      const int v2 = node(i + 1, j + 1);
      const int v3 = node(i, j + 1);
      bool rising = true;
      if (triangulation == Triangulation::kCentered) {
        // Cell centre relative to the domain centre, in cell units (exact).
        const int dx = 2 * i + 1 - nx;
        const int dy = 2 * j + 1 - ny;
        rising = static_cast<long>(dx) * dy >= 0;
      }
      if (rising) {
        triangles_.push_back({v0, v1, v2});
        triangles_.push_back({v0, v2, v3});
      } else {
        triangles_.push_back({v0, v1, v3});
        triangles_.push_back({v1, v2, v3});
      }
    }
  }

  Fnv1a hash;
  hash.mix(static_cast<std::uint64_t>(nx));
  hash.mix(static_cast<std::uint64_t>(ny));
  hash.mix(domain.x0);
  hash.mix(domain.x1);
  hash.mix(domain.y0);
  hash.mix(domain.y1);
  hash.mix(static_cast<std::uint64_t>(triangulation));
  id_ = MeshId(hash.value());
}

Mesh build_mesh(double h, const Rectangle& domain, Triangulation triangulation) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("build_mesh: grid spacing must be positive, got " +
                                std::to_string(h));
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw std::invalid_argument("build_mesh: degenerate domain");
  }
  return Mesh(cell_count(domain.width(), h), cell_count(domain.height(), h), domain,
              triangulation);
}

double signed_area(const Mesh& mesh, int triangle) {
  return element_geometry(mesh, mesh.triangles()[triangle]).area;
}

void write_mesh_csv(std::ostream& out, const Mesh& mesh) {
  out << "node,x,y,boundary\n";
  out.precision(17);
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    out << k << ',' << mesh.nodes()[k].x() << ',' << mesh.nodes()[k].y() << ','
        << (mesh.on_boundary(k) ? 1 : 0) << '\n';
  }
}

DiffusionCoefficient::DiffusionCoefficient(double mu) : mu_(mu) {
  if (!(mu > -1.0) || !std::isfinite(mu)) {
    throw std::domain_error("DiffusionCoefficient: mu must exceed -1 (got " +
                            std::to_string(mu) + "); A(mu) is not coercive");
  }
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const DiffusionCoefficient& coeff) {
  const double axx = coeff.axx();
  const double ayy = coeff.ayy();
  return assemble(mesh, true, [axx, ayy](const ElementGeometry& g, int a, int b) {
    return (axx * (g.b[a] * g.b[b]) + ayy * (g.c[a] * g.c[b])) / (4.0 * g.area);
  });
}

SparseMatrix assemble_mass(const Mesh& mesh) { return assemble(mesh, true, mass_entry); }

SparseMatrix assemble_mass_full(const Mesh& mesh) { return assemble(mesh, false, mass_entry); }

ModelProblem::ModelProblem(Mesh mesh)
    : mesh_(std::move(mesh)),
      mass_(std::make_shared<const SparseMatrix>(assemble_mass(mesh_))) {}

AssembledOperators ModelProblem::operators(double mu) const {
  AssembledOperators ops;
  ops.mu = mu;
  ops.stiffness = assemble_stiffness(mesh_, DiffusionCoefficient(mu));
  ops.mass = mass_;
  ops.mesh = mesh_.id();
  return ops;
}

}  // namespace eigtrack::fem
