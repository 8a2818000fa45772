// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_REFELEM_REFERENCE_ELEMENT_HPP
#define HYDROSEM_REFELEM_REFERENCE_ELEMENT_HPP

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/refelem/basis.hpp"

namespace hydrosem::refelem
{

constexpr int kMaxOrder = 10;

struct Quadrature
{
  Points points;
  Eigen::VectorXd weights;
};

// Tables for evaluating the geometry map of order 1 (vertices) or 2 (gmsh
// tet10 / prism18 nodes) at the solution nodes and quadrature points.
struct GeometryTables
{
  int order = 1;
  Points nodes;            // reference positions of the geometry nodes
  Eigen::MatrixXd at_nodes;                    // Np x Ng
  std::array<Eigen::MatrixXd, 3> grad_at_nodes;  // d/dr,s,t: Np x Ng
  Eigen::MatrixXd at_quad;                     // Nq x Ng
  std::array<Eigen::MatrixXd, 3> grad_at_quad;
  std::vector<Eigen::MatrixXd> at_face_quad;   // per face: Nfq x Ng
  std::vector<std::array<Eigen::MatrixXd, 3>> grad_at_face_quad;
};

struct ReferenceFace
{
  bool triangle = true;
  std::vector<int> nodes;   // volume node indices lying on the face
  Quadrature quad;          // points in volume reference coordinates, face weights
  Eigen::Vector3d normal;   // unit outward reference normal
  Eigen::Vector3d du, dv;   // d(r,s,t)/du and d(r,s,t)/dv of the face parametrization
  Eigen::MatrixXd interp;   // nodal basis at face quadrature points: Nfq x Np
};

class ReferenceElement
{
public:
  ReferenceElement(Shape shape, int order);

  Shape shape() const { return shape_; }
  int order() const { return order_; }
  int num_nodes() const { return static_cast<int>(nodes_.rows()); }
  const Points &nodes() const { return nodes_; }
  const Eigen::MatrixXd &vandermonde() const { return v_; }
  const Eigen::MatrixXd &inverse_vandermonde() const { return vinv_; }
  double vandermonde_condition() const { return cond_; }
  // Nodal differentiation matrices.
  const Eigen::MatrixXd &Dr() const { return d_[0]; }
  const Eigen::MatrixXd &Ds() const { return d_[1]; }
  const Eigen::MatrixXd &Dt() const { return d_[2]; }
  const std::array<Eigen::MatrixXd, 3> &D() const { return d_; }

  // Volume quadrature of degree 2P+3 and nodal basis tables on it.
  const Quadrature &quadrature() const { return quad_; }
  const Eigen::MatrixXd &interp_quad() const { return bq_; }
  const std::array<Eigen::MatrixXd, 3> &grad_quad() const { return bq_grad_; }

  const std::vector<ReferenceFace> &faces() const { return faces_; }

  const GeometryTables &geometry(int geometry_order) const { return geo_[geometry_order - 1]; }

  // Nodal basis evaluated at arbitrary reference points: rows = points.
  Eigen::MatrixXd InterpolationMatrix(const Points &targets) const;
  void GradInterpolationMatrix(const Points &targets, Eigen::MatrixXd &dr, Eigen::MatrixXd &ds,
                               Eigen::MatrixXd &dt) const;

private:
  GeometryTables BuildGeometry(int geometry_order) const;

  Shape shape_;
  int order_;
  Points nodes_;
  Eigen::MatrixXd v_, vinv_;
  double cond_ = 0.0;
  std::array<Eigen::MatrixXd, 3> d_;
  Quadrature quad_;
  Eigen::MatrixXd bq_;
  std::array<Eigen::MatrixXd, 3> bq_grad_;
  std::vector<ReferenceFace> faces_;
  std::array<GeometryTables, 2> geo_;
};

// Cached, thread-safe access; the returned object lives for the program.
const ReferenceElement &GetReference(Shape shape, int order);

// Collapsed-coordinate Gauss-Jacobi rules with n points per direction.
Quadrature TetQuadrature(int n);
Quadrature PrismQuadrature(int n);
// Rules on the reference triangle {u,v >= -1, u+v <= 0} and on [-1,1]^2, as
// (u,v) pairs in columns 0 and 1.
Quadrature TriangleQuadrature(int n);
Quadrature SquareQuadrature(int n);

// Reference coordinates of the gmsh quadratic geometry nodes.
Points QuadraticGeometryNodes(Shape shape);

}  // namespace hydrosem::refelem

#endif  // HYDROSEM_REFELEM_REFERENCE_ELEMENT_HPP
