// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/refelem/element_map.hpp"

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::refelem
{

namespace
{

const GeometryTables &Tables(const ReferenceElement &ref, const Eigen::MatrixXd &geometry)
{
  const int nv = ref.shape() == Shape::Tet ? 4 : 6;
  if (geometry.rows() == nv)
  {
    return ref.geometry(1);
  }
  if (geometry.rows() == mesh::NumQuadraticGeometryNodes(ref.shape()))
  {
    return ref.geometry(2);
  }
  throw GeometryError(fmt::format("unexpected number of geometry nodes ({})", geometry.rows()));
}

Eigen::Matrix3d JacobianAt(const std::array<Eigen::MatrixXd, 3> &grad, Eigen::Index q,
                           const Eigen::MatrixXd &geometry)
{
  Eigen::Matrix3d J;
  for (int c = 0; c < 3; ++c)
  {
    J.col(c) = (grad[c].row(q) * geometry).transpose();
  }
  return J;
}

}  // namespace

ElementMap GeometricFactors(const ReferenceElement &ref, const Eigen::MatrixXd &geometry)
{
  const GeometryTables &t = Tables(ref, geometry);
  ElementMap m;
  const Eigen::Index nq = ref.quadrature().weights.size();
  m.jacobian.resize(nq);
  m.inverse_transpose.resize(nq);
  m.det.resize(nq);
  for (Eigen::Index q = 0; q < nq; ++q)
  {
    const Eigen::Matrix3d J = JacobianAt(t.grad_at_quad, q, geometry);
    const double det = J.determinant();
    if (!(det > 0.0))
    {
      throw GeometryError(fmt::format("non-positive Jacobian determinant {:.3e}", det));
    }
    m.jacobian[q] = J;
    m.inverse_transpose[q] = J.inverse().transpose();
    m.det(q) = det;
  }
  m.node_coords = t.at_nodes * geometry;
  m.quad_coords = t.at_quad * geometry;
  return m;
}

FaceMap FaceFactors(const ReferenceElement &ref, const Eigen::MatrixXd &geometry, int face)
{
  const GeometryTables &t = Tables(ref, geometry);
  const ReferenceFace &rf = ref.faces()[face];
  FaceMap fm;
  const Eigen::Index nq = rf.quad.weights.size();
  fm.points = t.at_face_quad[face] * geometry;
  fm.normals.resize(nq, 3);
  fm.weights.resize(nq);
  for (Eigen::Index q = 0; q < nq; ++q)
  {
    const Eigen::Matrix3d J = JacobianAt(t.grad_at_face_quad[face], q, geometry);
    const Eigen::Vector3d xu = J * rf.du;
    const Eigen::Vector3d xv = J * rf.dv;
    const double area = xu.cross(xv).norm();
    if (!(area > 0.0))
    {
      throw GeometryError("degenerate boundary facet (zero area)");
    }
    Eigen::Vector3d n = J.inverse().transpose() * rf.normal;
    n.normalize();
    fm.normals.row(q) = n.transpose();
    fm.weights(q) = rf.quad.weights(q) * area;
  }
  return fm;
}

Eigen::MatrixXd NodeCoordinates(const ReferenceElement &ref, const Eigen::MatrixXd &geometry)
{
  return Tables(ref, geometry).at_nodes * geometry;
}

Eigen::MatrixXd ElementGeometry(const mesh::HybridMesh &m, int element)
{
  const auto g = m.GeometryNodes(element);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(g.size()), 3);
  for (std::size_t i = 0; i < g.size(); ++i)
  {
    out.row(static_cast<Eigen::Index>(i)) << g[i][0], g[i][1], g[i][2];
  }
  return out;
}

Eigen::VectorXd Interpolate(const ReferenceElement &ref, const Eigen::VectorXd &nodal,
                            const Points &targets)
{
  for (Eigen::Index i = 0; i < targets.rows(); ++i)
  {
    if (OutsideDistance(ref.shape(), targets(i, 0), targets(i, 1), targets(i, 2)) > 1e-10)
    {
      throw DomainError(fmt::format("interpolation target ({}, {}, {}) outside the element",
                                    targets(i, 0), targets(i, 1), targets(i, 2)));
    }
  }
  return ref.InterpolationMatrix(targets) * nodal;
}

}  // namespace hydrosem::refelem
