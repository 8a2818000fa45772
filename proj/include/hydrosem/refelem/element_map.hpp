// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_REFELEM_ELEMENT_MAP_HPP
#define HYDROSEM_REFELEM_ELEMENT_MAP_HPP

#include <vector>

#include <Eigen/Dense>

#include "hydrosem/mesh/hybrid_mesh.hpp"
#include "hydrosem/refelem/reference_element.hpp"

namespace hydrosem::refelem
{

// Geometric factors of one element at the volume quadrature points.
// jacobian[q](d, c) = dx_d / dr_c.
struct ElementMap
{
  std::vector<Eigen::Matrix3d> jacobian;
  std::vector<Eigen::Matrix3d> inverse_transpose;
  Eigen::VectorXd det;
  Eigen::MatrixXd node_coords;  // physical coordinates of the solution nodes: Np x 3
  Eigen::MatrixXd quad_coords;  // physical coordinates of the quadrature points: Nq x 3
};

// Surface factors on one face: physical points, unit normals (out of the
// element) and weights including the surface Jacobian.
struct FaceMap
{
  Eigen::MatrixXd points;   // Nfq x 3
  Eigen::MatrixXd normals;  // Nfq x 3
  Eigen::VectorXd weights;  // reference weight * dS/dA
};

// geometry: Ng x 3 geometry nodes (vertices, or gmsh quadratic nodes).
// Throws GeometryError when det <= 0 at a quadrature point.
ElementMap GeometricFactors(const ReferenceElement &ref, const Eigen::MatrixXd &geometry);
FaceMap FaceFactors(const ReferenceElement &ref, const Eigen::MatrixXd &geometry, int face);

// Physical coordinates of the solution nodes only.
Eigen::MatrixXd NodeCoordinates(const ReferenceElement &ref, const Eigen::MatrixXd &geometry);

// Geometry nodes of a mesh element as a matrix.
Eigen::MatrixXd ElementGeometry(const mesh::HybridMesh &m, int element);

// Nodal interpolation from element nodes to reference targets; throws
// DomainError for targets outside the reference element beyond 1e-10.
Eigen::VectorXd Interpolate(const ReferenceElement &ref, const Eigen::VectorXd &nodal,
                            const Points &targets);

}  // namespace hydrosem::refelem

#endif  // HYDROSEM_REFELEM_ELEMENT_MAP_HPP
