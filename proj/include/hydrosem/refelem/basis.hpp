// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_REFELEM_BASIS_HPP
#define HYDROSEM_REFELEM_BASIS_HPP

#include <Eigen/Dense>

#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::refelem
{

using mesh::Shape;

// Points are stored row-wise: column 0 = r, 1 = s, 2 = t.
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

int NumModes(Shape shape, int order);
int NumTriangleModes(int order);

// Warp-and-blend nodes on the bi-unit tetrahedron with vertices
// (-1,-1,-1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
Points TetNodes(int order);
// Triangle nodes (r,s) taken from the t = -1 face of TetNodes so that prism
// and tet faces carry identical node sets.
Eigen::MatrixXd TriangleNodes(int order);
// Triangle nodes extruded along Gauss-Lobatto points in t; index tri + Ntri*k.
Points PrismNodes(int order);

// Orthonormal modal basis evaluated at points: (num points) x (num modes).
Eigen::MatrixXd Vandermonde(Shape shape, int order, const Points &pts);
// Derivatives of the modal basis with respect to r, s and t.
void GradVandermonde(Shape shape, int order, const Points &pts, Eigen::MatrixXd &vr,
                     Eigen::MatrixXd &vs, Eigen::MatrixXd &vt);

// Orthonormal Dubiner basis on the triangle {r,s >= -1, r+s <= 0}.
Eigen::MatrixXd Vandermonde2D(int order, const Eigen::VectorXd &r, const Eigen::VectorXd &s);
void GradVandermonde2D(int order, const Eigen::VectorXd &r, const Eigen::VectorXd &s,
                       Eigen::MatrixXd &vr, Eigen::MatrixXd &vs);

// Signed distance-like measure of how far a point lies outside the reference
// element (<= 0 inside).
double OutsideDistance(Shape shape, double r, double s, double t);

// Reference vertex coordinates.
Points ReferenceVertices(Shape shape);
double ReferenceVolume(Shape shape);

}  // namespace hydrosem::refelem

#endif  // HYDROSEM_REFELEM_BASIS_HPP
