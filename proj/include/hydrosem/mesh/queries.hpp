// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_MESH_QUERIES_HPP
#define HYDROSEM_MESH_QUERIES_HPP

#include <vector>

#include <Eigen/Dense>

#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::mesh
{

// Smallest free-surface trace edge times the smallest Gauss-Lobatto gap
// fraction of order P (1 for P = 1, 1/2 for P = 2, ...).
// Throws DomainError when the mesh has no free surface.
double MinSpacing(const HybridMesh &mesh, int order = 1);

// Smallest Gauss-Lobatto node gap on [-1,1] divided by 2.
double LobattoGapFraction(int order);

struct FacetSample
{
  int facet = -1;           // index into HybridMesh::Facets()
  Eigen::MatrixXd points;   // Nq x 3
  Eigen::MatrixXd normals;  // Nq x 3, unit, out of the fluid
  Eigen::VectorXd weights;  // surface quadrature weights
};

// Quadrature points and outward unit normals on every facet carrying tag,
// using the face rule of polynomial order `order`. GeometryError for
// degenerate facets, TaggingError when the tag is absent.
std::vector<FacetSample> FacetNormals(const HybridMesh &mesh, const BoundaryTag &tag,
                                      int order = 1);

}  // namespace hydrosem::mesh

#endif  // HYDROSEM_MESH_QUERIES_HPP
