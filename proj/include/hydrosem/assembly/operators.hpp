// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_ASSEMBLY_OPERATORS_HPP
#define HYDROSEM_ASSEMBLY_OPERATORS_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/assembly/dofmap.hpp"
#include "hydrosem/linalg/solver.hpp"

namespace hydrosem::assembly
{

using linalg::SparseMatrix;
using ScalarField = std::function<double(const Eigen::Vector3d &)>;

// Volume stiffness: integral of grad(N_i) . grad(N_j).
SparseMatrix AssembleStiffness(const HybridMesh &mesh, const DofMap &dofs);
// Volume mass: integral of N_i N_j.
SparseMatrix AssembleMass(const HybridMesh &mesh, const DofMap &dofs);
// Load vector: integral of f N_i.
Eigen::VectorXd AssembleSource(const HybridMesh &mesh, const DofMap &dofs, const ScalarField &f);

// Quadrature data on a set of boundary facets, laid out facet by facet.
struct BoundaryQuadrature
{
  struct Facet
  {
    int facet = -1;  // index into HybridMesh::Facets()
    int element = -1;
    BoundaryTag tag;
    int offset = 0;               // first row in points/normals/weights
    const Eigen::MatrixXd *interp = nullptr;  // Nfq x Np reference table
  };
  std::vector<Facet> facets;
  Eigen::MatrixXd points;   // Nq x 3
  Eigen::MatrixXd normals;  // Nq x 3, out of the fluid
  Eigen::VectorXd weights;

  Eigen::Index NumPoints() const { return weights.size(); }
};

// Throws DomainError when none of the tags is present.
BoundaryQuadrature BuildBoundaryQuadrature(const HybridMesh &mesh, const DofMap &dofs,
                                           const std::vector<BoundaryTag> &tags);

// b_i = sum_q w_q q_q N_i(x_q) for flux values at the quadrature points.
Eigen::VectorXd NeumannLoad(const BoundaryQuadrature &bq, const DofMap &dofs,
                            const HybridMesh &mesh, const Eigen::VectorXd &flux);
// Sparse form of the same map: b = L * flux, L of size N_DOF x Nq.
SparseMatrix NeumannLoadMatrix(const BoundaryQuadrature &bq, const DofMap &dofs,
                               const HybridMesh &mesh);
// Nodal field evaluated at the quadrature points.
Eigen::VectorXd EvaluateAtPoints(const BoundaryQuadrature &bq, const DofMap &dofs,
                                 const Eigen::VectorXd &field);

// Symmetric elimination of constrained rows and columns. The reduced
// operator keeps full size with unit diagonal on constrained rows.
class DirichletSystem
{
public:
  DirichletSystem(const SparseMatrix &a, std::vector<int> constrained);

  const SparseMatrix &matrix() const { return reduced_; }
  const std::vector<int> &constrained() const { return constrained_; }
  const std::vector<char> &mask() const { return mask_; }
  // b' = b - A_{:,c} g on free rows, g on constrained rows.
  Eigen::VectorXd Rhs(const Eigen::VectorXd &b, const Eigen::VectorXd &values) const;

private:
  std::vector<int> constrained_;
  std::vector<char> mask_;
  SparseMatrix reduced_;
  SparseMatrix coupling_;  // N x Nc: A restricted to free rows, constrained columns
};

// Operators on the free-surface trace. FS nodes are the global dofs on
// FreeSurface-tagged facets.
struct FreeSurfaceOperators
{
  std::vector<int> dofs;        // FS node -> global dof
  std::vector<int> fs_index;    // global dof -> FS node or -1
  Eigen::MatrixXd xy;           // FS node coordinates
  SparseMatrix mass;            // integral N_i N_j over the free surface
  SparseMatrix stiffness;       // integral grad_h N_i . grad_h N_j
  SparseMatrix dz_collocation;  // Nfs x N_DOF: d/dz at FS nodes, averaged over prisms

  int size() const { return static_cast<int>(dofs.size()); }
};

FreeSurfaceOperators BuildFreeSurfaceOperators(const HybridMesh &mesh, const DofMap &dofs);

// Free-surface stiffness weighted by c(x, y): integral c grad_h N_i . grad_h N_j.
SparseMatrix WeightedFreeSurfaceStiffness(const HybridMesh &mesh, const DofMap &dofs,
                                          const FreeSurfaceOperators &fs,
                                          const std::function<double(double, double)> &c);

}  // namespace hydrosem::assembly

#endif  // HYDROSEM_ASSEMBLY_OPERATORS_HPP
