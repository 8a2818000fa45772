// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/refelem/reference_element.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/refelem/jacobi.hpp"

namespace hydrosem::refelem
{

namespace
{

constexpr double kFaceTol = 1e-10;

Eigen::Vector3d Vertex(const Points &v, int i) { return v.row(i).transpose(); }

}  // namespace

Quadrature TetQuadrature(int n)
{
  const Rule1D ra = JacobiGQ(0.0, 0.0, n);
  const Rule1D rb = JacobiGQ(1.0, 0.0, n);
  const Rule1D rc = JacobiGQ(2.0, 0.0, n);
  Quadrature q;
  q.points.resize(n * n * n, 3);
  q.weights.resize(n * n * n);
  int m = 0;
  for (int k = 0; k < n; ++k)
  {
    for (int j = 0; j < n; ++j)
    {
      for (int i = 0; i < n; ++i)
      {
        const double a = ra.x(i), b = rb.x(j), c = rc.x(k);
        q.points.row(m) << (1.0 + a) * (1.0 - b) * (1.0 - c) / 4.0 - 1.0,
            (1.0 + b) * (1.0 - c) / 2.0 - 1.0, c;
        q.weights(m) = ra.w(i) * rb.w(j) / 2.0 * rc.w(k) / 4.0;
        ++m;
      }
    }
  }
  return q;
}

Quadrature TriangleQuadrature(int n)
{
  const Rule1D ra = JacobiGQ(0.0, 0.0, n);
  const Rule1D rb = JacobiGQ(1.0, 0.0, n);
  Quadrature q;
  q.points = Points::Zero(n * n, 3);
  q.weights.resize(n * n);
  int m = 0;
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      const double a = ra.x(i), b = rb.x(j);
      q.points(m, 0) = (1.0 + a) * (1.0 - b) / 2.0 - 1.0;
      q.points(m, 1) = b;
      q.weights(m) = ra.w(i) * rb.w(j) / 2.0;
      ++m;
    }
  }
  return q;
}

Quadrature SquareQuadrature(int n)
{
  const Rule1D r = JacobiGQ(0.0, 0.0, n);
  Quadrature q;
  q.points = Points::Zero(n * n, 3);
  q.weights.resize(n * n);
  int m = 0;
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      q.points(m, 0) = r.x(i);
      q.points(m, 1) = r.x(j);
      q.weights(m) = r.w(i) * r.w(j);
      ++m;
    }
  }
  return q;
}

Quadrature PrismQuadrature(int n)
{
  const Quadrature tri = TriangleQuadrature(n);
  const Rule1D rt = JacobiGQ(0.0, 0.0, n);
  Quadrature q;
  const Eigen::Index nt = tri.weights.size();
  q.points.resize(nt * n, 3);
  q.weights.resize(nt * n);
  for (int k = 0; k < n; ++k)
  {
    for (Eigen::Index i = 0; i < nt; ++i)
    {
      q.points.row(i + nt * k) << tri.points(i, 0), tri.points(i, 1), rt.x(k);
      q.weights(i + nt * k) = tri.weights(i) * rt.w(k);
    }
  }
  return q;
}

Points QuadraticGeometryNodes(Shape shape)
{
  const Points v = ReferenceVertices(shape);
  auto mid = [&](std::initializer_list<int> ids) {
    Eigen::RowVector3d c = Eigen::RowVector3d::Zero();
    for (int i : ids)
    {
      c += v.row(i);
    }
    return Eigen::RowVector3d(c / static_cast<double>(ids.size()));
  };
  if (shape == Shape::Tet)
  {
    Points g(10, 3);
    g.topRows(4) = v;
    g.row(4) = mid({0, 1});
    g.row(5) = mid({1, 2});
    g.row(6) = mid({0, 2});
    g.row(7) = mid({0, 3});
    g.row(8) = mid({2, 3});
    g.row(9) = mid({1, 3});
    return g;
  }
  Points g(18, 3);
  g.topRows(6) = v;
  g.row(6) = mid({0, 1});
  g.row(7) = mid({0, 2});
  g.row(8) = mid({0, 3});
  g.row(9) = mid({1, 2});
  g.row(10) = mid({1, 4});
  g.row(11) = mid({2, 5});
  g.row(12) = mid({3, 4});
  g.row(13) = mid({3, 5});
  g.row(14) = mid({4, 5});
  g.row(15) = mid({0, 1, 4, 3});
  g.row(16) = mid({0, 2, 5, 3});
  g.row(17) = mid({1, 2, 5, 4});
  return g;
}

ReferenceElement::ReferenceElement(Shape shape, int order) : shape_(shape), order_(order)
{
  if (order < 1 || order > kMaxOrder)
  {
    throw ParameterError(fmt::format("polynomial order {} outside [1, {}]", order, kMaxOrder));
  }
  nodes_ = shape == Shape::Tet ? TetNodes(order) : PrismNodes(order);
  v_ = Vandermonde(shape, order, nodes_);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v_);
  if (!lu.isInvertible())
  {
    throw ParameterError("singular Vandermonde matrix");
  }
  vinv_ = lu.inverse();
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v_);
    const auto &sv = svd.singularValues();
    cond_ = sv(0) / sv(sv.size() - 1);
  }
  Eigen::MatrixXd vr, vs, vt;
  GradVandermonde(shape, order, nodes_, vr, vs, vt);
  d_[0] = vr * vinv_;
  d_[1] = vs * vinv_;
  d_[2] = vt * vinv_;
  // Negative-sum trick: exact annihilation of constants despite roundoff.
  for (auto &d : d_)
  {
    for (Eigen::Index i = 0; i < d.rows(); ++i)
    {
      d(i, i) -= d.row(i).sum();
    }
  }

  const int nq = order + 2;
  quad_ = shape == Shape::Tet ? TetQuadrature(nq) : PrismQuadrature(nq);
  bq_ = InterpolationMatrix(quad_.points);
  GradInterpolationMatrix(quad_.points, bq_grad_[0], bq_grad_[1], bq_grad_[2]);

  const Points verts = ReferenceVertices(shape);
  const int nfaces = mesh::NumFaces(shape);
  const Quadrature tri = TriangleQuadrature(nq);
  const Quadrature sq = SquareQuadrature(nq);
  for (int f = 0; f < nfaces; ++f)
  {
    ReferenceFace face;
    const auto fv = mesh::FaceVertices(shape, f);
    face.triangle = fv.size() == 3;
    const Eigen::Vector3d A = Vertex(verts, fv[0]);
    const Eigen::Vector3d B = Vertex(verts, fv[1]);
    const Eigen::Vector3d C = Vertex(verts, fv[2]);
    face.du = (B - A) / 2.0;
    face.dv = face.triangle ? Eigen::Vector3d((C - A) / 2.0)
                            : Eigen::Vector3d((Vertex(verts, fv[3]) - A) / 2.0);
    Eigen::Vector3d n = face.du.cross(face.dv).normalized();
    // Orient outward: away from the reference centroid.
    Eigen::Vector3d centroid = verts.colwise().mean().transpose();
    if (n.dot(A - centroid) < 0.0)
    {
      n = -n;
    }
    face.normal = n;
    const Quadrature &base = face.triangle ? tri : sq;
    face.quad.weights = base.weights;
    face.quad.points.resize(base.weights.size(), 3);
    for (Eigen::Index q = 0; q < base.weights.size(); ++q)
    {
      const double u = base.points(q, 0);
      const double v = base.points(q, 1);
      Eigen::Vector3d x;
      if (face.triangle)
      {
        x = A * (-(u + v) / 2.0) + B * ((1.0 + u) / 2.0) + C * ((1.0 + v) / 2.0);
      }
      else
      {
        x = A + face.du * (1.0 + u) + face.dv * (1.0 + v);
      }
      face.quad.points.row(q) = x.transpose();
    }
    face.interp = InterpolationMatrix(face.quad.points);
    for (int i = 0; i < num_nodes(); ++i)
    {
      const Eigen::Vector3d x = nodes_.row(i).transpose();
      if (std::abs(n.dot(x - A)) < kFaceTol)
      {
        face.nodes.push_back(i);
      }
    }
    faces_.push_back(std::move(face));
  }
  geo_[0] = BuildGeometry(1);
  geo_[1] = BuildGeometry(2);
}

Eigen::MatrixXd ReferenceElement::InterpolationMatrix(const Points &targets) const
{
  return Vandermonde(shape_, order_, targets) * vinv_;
}

void ReferenceElement::GradInterpolationMatrix(const Points &targets, Eigen::MatrixXd &dr,
                                               Eigen::MatrixXd &ds, Eigen::MatrixXd &dt) const
{
  Eigen::MatrixXd vr, vs, vt;
  GradVandermonde(shape_, order_, targets, vr, vs, vt);
  dr = vr * vinv_;
  ds = vs * vinv_;
  dt = vt * vinv_;
}

GeometryTables ReferenceElement::BuildGeometry(int g) const
{
  GeometryTables t;
  t.order = g;
  t.nodes = g == 1 ? ReferenceVertices(shape_) : QuadraticGeometryNodes(shape_);
  const Eigen::MatrixXd vg = Vandermonde(shape_, g, t.nodes);
  const Eigen::MatrixXd vginv = vg.inverse();
  auto eval = [&](const Points &pts, Eigen::MatrixXd &val, std::array<Eigen::MatrixXd, 3> &grad) {
    val = Vandermonde(shape_, g, pts) * vginv;
    Eigen::MatrixXd vr, vs, vt;
    GradVandermonde(shape_, g, pts, vr, vs, vt);
    grad[0] = vr * vginv;
    grad[1] = vs * vginv;
    grad[2] = vt * vginv;
  };
  eval(nodes_, t.at_nodes, t.grad_at_nodes);
  eval(quad_.points, t.at_quad, t.grad_at_quad);
  t.at_face_quad.resize(faces_.size());
  t.grad_at_face_quad.resize(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f)
  {
    eval(faces_[f].quad.points, t.at_face_quad[f], t.grad_at_face_quad[f]);
  }
  return t;
}

const ReferenceElement &GetReference(Shape shape, int order)
{
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<ReferenceElement>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(static_cast<int>(shape), order);
  auto it = cache.find(key);
  if (it == cache.end())
  {
    it = cache.emplace(key, std::make_unique<ReferenceElement>(shape, order)).first;
  }
  return *it->second;
}

}  // namespace hydrosem::refelem
