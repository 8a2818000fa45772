// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/refelem/basis.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hydrosem/error.hpp"
#include "hydrosem/refelem/jacobi.hpp"

namespace hydrosem::refelem
{

namespace
{

constexpr double kTol = 1e-10;

// Warp of the equidistant 1D distribution onto Gauss-Lobatto points,
// evaluated at xout. Matches the blend construction of Warburton.
Eigen::VectorXd EvalWarp(int p, const Eigen::VectorXd &xnodes, const Eigen::VectorXd &xout)
{
  Eigen::VectorXd warp = Eigen::VectorXd::Zero(xout.size());
  Eigen::VectorXd xeq(p + 1);
  for (int i = 0; i <= p; ++i)
  {
    xeq(i) = -1.0 + 2.0 * (p - i) / p;
  }
  for (int i = 0; i <= p; ++i)
  {
    Eigen::VectorXd d = Eigen::VectorXd::Constant(xout.size(), xnodes(i) - xeq(i));
    for (int j = 1; j < p; ++j)
    {
      if (i != j)
      {
        d = d.array() * (xout.array() - xeq(j)) / (xeq(i) - xeq(j));
      }
    }
    if (i != 0)
    {
      d = -d / (xeq(i) - xeq(0));
    }
    if (i != p)
    {
      d = d / (xeq(i) - xeq(p));
    }
    warp += d;
  }
  return warp;
}

void EvalShift(int p, double pval, const Eigen::VectorXd &l1, const Eigen::VectorXd &l2,
               const Eigen::VectorXd &l3, Eigen::VectorXd &dx, Eigen::VectorXd &dy)
{
  const Eigen::VectorXd gauss = -JacobiGL(0.0, 0.0, p);
  const Eigen::VectorXd w1 = EvalWarp(p, gauss, l3 - l2);
  const Eigen::VectorXd w2 = EvalWarp(p, gauss, l1 - l3);
  const Eigen::VectorXd w3 = EvalWarp(p, gauss, l2 - l1);
  const Eigen::ArrayXd b1 = l2.array() * l3.array();
  const Eigen::ArrayXd b2 = l1.array() * l3.array();
  const Eigen::ArrayXd b3 = l1.array() * l2.array();
  const Eigen::ArrayXd f1 = 4.0 * b1 * w1.array() * (1.0 + (pval * l1.array()).square());
  const Eigen::ArrayXd f2 = 4.0 * b2 * w2.array() * (1.0 + (pval * l2.array()).square());
  const Eigen::ArrayXd f3 = 4.0 * b3 * w3.array() * (1.0 + (pval * l3.array()).square());
  const double c2 = std::cos(2.0 * std::numbers::pi / 3.0);
  const double c4 = std::cos(4.0 * std::numbers::pi / 3.0);
  const double s2 = std::sin(2.0 * std::numbers::pi / 3.0);
  const double s4 = std::sin(4.0 * std::numbers::pi / 3.0);
  dx = (f1 + c2 * f2 + c4 * f3).matrix();
  dy = (s2 * f2 + s4 * f3).matrix();
}

using Row3 = Eigen::RowVector3d;

void TetCollapse(const Points &pts, Eigen::VectorXd &a, Eigen::VectorXd &b, Eigen::VectorXd &c)
{
  const Eigen::Index n = pts.rows();
  a.resize(n);
  b.resize(n);
  c.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const double r = pts(i, 0);
    const double s = pts(i, 1);
    const double t = pts(i, 2);
    a(i) = std::abs(s + t) > 1e-14 ? 2.0 * (1.0 + r) / (-s - t) - 1.0 : -1.0;
    b(i) = std::abs(t - 1.0) > 1e-14 ? 2.0 * (1.0 + s) / (1.0 - t) - 1.0 : -1.0;
    c(i) = t;
  }
}

void TriCollapse(const Eigen::VectorXd &r, const Eigen::VectorXd &s, Eigen::VectorXd &a,
                 Eigen::VectorXd &b)
{
  a.resize(r.size());
  b = s;
  for (Eigen::Index i = 0; i < r.size(); ++i)
  {
    a(i) = std::abs(s(i) - 1.0) > 1e-14 ? 2.0 * (1.0 + r(i)) / (1.0 - s(i)) - 1.0 : -1.0;
  }
}

}  // namespace

int NumTriangleModes(int order) { return (order + 1) * (order + 2) / 2; }

int NumModes(Shape shape, int order)
{
  if (shape == Shape::Tet)
  {
    return (order + 1) * (order + 2) * (order + 3) / 6;
  }
  return NumTriangleModes(order) * (order + 1);
}

Points TetNodes(int p)
{
  static const double alpopt[15] = {0,      0,      0,      0.1002, 1.1332,
                                    1.5608, 1.3413, 1.2577, 1.1603, 1.10153,
                                    0.6080, 0.4523, 0.8856, 0.8717, 0.9655};
  const double alpha = p <= 15 ? alpopt[p - 1] : 1.0;
  const int np = NumModes(Shape::Tet, p);

  Eigen::VectorXd r(np), s(np), t(np);
  int sk = 0;
  for (int n = 0; n <= p; ++n)
  {
    for (int m = 0; m <= p - n; ++m)
    {
      for (int q = 0; q <= p - n - m; ++q)
      {
        r(sk) = -1.0 + 2.0 * q / p;
        s(sk) = -1.0 + 2.0 * m / p;
        t(sk) = -1.0 + 2.0 * n / p;
        ++sk;
      }
    }
  }
  const Eigen::VectorXd L1 = (1.0 + t.array()) / 2.0;
  const Eigen::VectorXd L2 = (1.0 + s.array()) / 2.0;
  const Eigen::VectorXd L3 = -(1.0 + r.array() + s.array() + t.array()) / 2.0;
  const Eigen::VectorXd L4 = (1.0 + r.array()) / 2.0;

  const Row3 v1(-1.0, -1.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0));
  const Row3 v2(1.0, -1.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0));
  const Row3 v3(0.0, 2.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0));
  const Row3 v4(0.0, 0.0, 3.0 / std::sqrt(6.0));
  std::array<Row3, 4> t1{v2 - v1, v2 - v1, v3 - v2, v3 - v1};
  std::array<Row3, 4> t2{v3 - 0.5 * (v1 + v2), v4 - 0.5 * (v1 + v2), v4 - 0.5 * (v2 + v3),
                         v4 - 0.5 * (v1 + v3)};
  for (int f = 0; f < 4; ++f)
  {
    t1[f].normalize();
    t2[f].normalize();
  }

  Eigen::MatrixXd xyz(np, 3);
  for (int i = 0; i < np; ++i)
  {
    xyz.row(i) = L3(i) * v1 + L4(i) * v2 + L2(i) * v3 + L1(i) * v4;
  }
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(np, 3);
  for (int face = 0; face < 4; ++face)
  {
    const Eigen::VectorXd *La, *Lb, *Lc, *Ld;
    switch (face)
    {
      case 0:
        La = &L1, Lb = &L2, Lc = &L3, Ld = &L4;
        break;
      case 1:
        La = &L2, Lb = &L1, Lc = &L3, Ld = &L4;
        break;
      case 2:
        La = &L3, Lb = &L1, Lc = &L4, Ld = &L2;
        break;
      default:
        La = &L4, Lb = &L1, Lc = &L3, Ld = &L2;
        break;
    }
    Eigen::VectorXd w1, w2;
    EvalShift(p, alpha, *Lb, *Lc, *Ld, w1, w2);
    for (int i = 0; i < np; ++i)
    {
      const double la = (*La)(i), lb = (*Lb)(i), lc = (*Lc)(i), ld = (*Ld)(i);
      double blend = lb * lc * ld;
      const double denom = (lb + 0.5 * la) * (lc + 0.5 * la) * (ld + 0.5 * la);
      if (denom > kTol)
      {
        blend = (1.0 + (alpha * la) * (alpha * la)) * blend / denom;
      }
      shift.row(i) += blend * w1(i) * t1[face] + blend * w2(i) * t2[face];
      const int inside = (lb > kTol) + (lc > kTol) + (ld > kTol);
      if (la < kTol && inside < 3)
      {
        shift.row(i) = w1(i) * t1[face] + w2(i) * t2[face];
      }
    }
  }
  xyz += shift;

  // Back to (r,s,t).
  Eigen::Matrix3d A;
  A.col(0) = 0.5 * (v2 - v1).transpose();
  A.col(1) = 0.5 * (v3 - v1).transpose();
  A.col(2) = 0.5 * (v4 - v1).transpose();
  const Eigen::Vector3d off = 0.5 * (v2 + v3 + v4 - v1).transpose();
  const Eigen::Matrix3d Ainv = A.inverse();
  Points out(np, 3);
  for (int i = 0; i < np; ++i)
  {
    out.row(i) = (Ainv * (xyz.row(i).transpose() - off)).transpose();
  }
  return out;
}

Eigen::MatrixXd TriangleNodes(int p)
{
  const Points tet = TetNodes(p);
  Eigen::MatrixXd out(NumTriangleModes(p), 2);
  int k = 0;
  for (Eigen::Index i = 0; i < tet.rows(); ++i)
  {
    if (std::abs(tet(i, 2) + 1.0) < kTol)
    {
      out(k, 0) = tet(i, 0);
      out(k, 1) = tet(i, 1);
      ++k;
    }
  }
  if (k != out.rows())
  {
    throw ParameterError("inconsistent tetrahedral face nodes");
  }
  return out;
}

Points PrismNodes(int p)
{
  const Eigen::MatrixXd tri = TriangleNodes(p);
  const Eigen::VectorXd gl = JacobiGL(0.0, 0.0, p);
  const Eigen::Index nt = tri.rows();
  Points out(nt * (p + 1), 3);
  for (int k = 0; k <= p; ++k)
  {
    for (Eigen::Index i = 0; i < nt; ++i)
    {
      out.row(i + nt * k) << tri(i, 0), tri(i, 1), gl(k);
    }
  }
  return out;
}

Eigen::MatrixXd Vandermonde2D(int p, const Eigen::VectorXd &r, const Eigen::VectorXd &s)
{
  Eigen::VectorXd a, b;
  TriCollapse(r, s, a, b);
  Eigen::MatrixXd V(r.size(), NumTriangleModes(p));
  int col = 0;
  for (int i = 0; i <= p; ++i)
  {
    const Eigen::VectorXd h1 = JacobiP(a, 0.0, 0.0, i);
    for (int j = 0; j <= p - i; ++j)
    {
      const Eigen::VectorXd h2 = JacobiP(b, 2.0 * i + 1.0, 0.0, j);
      V.col(col++) = std::sqrt(2.0) * h1.array() * h2.array() * (1.0 - b.array()).pow(i);
    }
  }
  return V;
}

void GradVandermonde2D(int p, const Eigen::VectorXd &r, const Eigen::VectorXd &s,
                       Eigen::MatrixXd &vr, Eigen::MatrixXd &vs)
{
  Eigen::VectorXd a, b;
  TriCollapse(r, s, a, b);
  vr.resize(r.size(), NumTriangleModes(p));
  vs.resize(r.size(), NumTriangleModes(p));
  const Eigen::ArrayXd hb = 0.5 * (1.0 - b.array());
  int col = 0;
  for (int id = 0; id <= p; ++id)
  {
    const Eigen::ArrayXd fa = JacobiP(a, 0.0, 0.0, id).array();
    const Eigen::ArrayXd dfa = GradJacobiP(a, 0.0, 0.0, id).array();
    for (int jd = 0; jd <= p - id; ++jd)
    {
      const Eigen::ArrayXd gb = JacobiP(b, 2.0 * id + 1.0, 0.0, jd).array();
      const Eigen::ArrayXd dgb = GradJacobiP(b, 2.0 * id + 1.0, 0.0, jd).array();
      Eigen::ArrayXd dr = dfa * gb;
      if (id > 0)
      {
        dr *= hb.pow(id - 1);
      }
      Eigen::ArrayXd ds = dfa * gb * (0.5 * (1.0 + a.array()));
      if (id > 0)
      {
        ds *= hb.pow(id - 1);
      }
      Eigen::ArrayXd tmp = dgb * hb.pow(id);
      if (id > 0)
      {
        tmp -= 0.5 * id * gb * hb.pow(id - 1);
      }
      ds += fa * tmp;
      const double scale = std::pow(2.0, id + 0.5);
      vr.col(col) = scale * dr.matrix();
      vs.col(col) = scale * ds.matrix();
      ++col;
    }
  }
}

Eigen::MatrixXd Vandermonde(Shape shape, int p, const Points &pts)
{
  if (shape == Shape::Prism)
  {
    const Eigen::MatrixXd tri = Vandermonde2D(p, pts.col(0), pts.col(1));
    const Eigen::Index nt = tri.cols();
    Eigen::MatrixXd V(pts.rows(), nt * (p + 1));
    for (int k = 0; k <= p; ++k)
    {
      const Eigen::VectorXd leg = JacobiP(pts.col(2), 0.0, 0.0, k);
      for (Eigen::Index m = 0; m < nt; ++m)
      {
        V.col(m + nt * k) = tri.col(m).cwiseProduct(leg);
      }
    }
    return V;
  }
  Eigen::VectorXd a, b, c;
  TetCollapse(pts, a, b, c);
  Eigen::MatrixXd V(pts.rows(), NumModes(Shape::Tet, p));
  int col = 0;
  for (int i = 0; i <= p; ++i)
  {
    const Eigen::ArrayXd h1 = JacobiP(a, 0.0, 0.0, i).array();
    for (int j = 0; j <= p - i; ++j)
    {
      const Eigen::ArrayXd h2 = JacobiP(b, 2.0 * i + 1.0, 0.0, j).array();
      for (int k = 0; k <= p - i - j; ++k)
      {
        const Eigen::ArrayXd h3 = JacobiP(c, 2.0 * (i + j) + 2.0, 0.0, k).array();
        V.col(col++) = (2.0 * std::sqrt(2.0) * h1 * h2 * (1.0 - b.array()).pow(i) * h3 *
                        (1.0 - c.array()).pow(i + j))
                           .matrix();
      }
    }
  }
  return V;
}

void GradVandermonde(Shape shape, int p, const Points &pts, Eigen::MatrixXd &vr,
                     Eigen::MatrixXd &vs, Eigen::MatrixXd &vt)
{
  const Eigen::Index n = pts.rows();
  if (shape == Shape::Prism)
  {
    const Eigen::MatrixXd tri = Vandermonde2D(p, pts.col(0), pts.col(1));
    Eigen::MatrixXd tr, ts;
    GradVandermonde2D(p, pts.col(0), pts.col(1), tr, ts);
    const Eigen::Index nt = tri.cols();
    vr.resize(n, nt * (p + 1));
    vs.resize(n, nt * (p + 1));
    vt.resize(n, nt * (p + 1));
    for (int k = 0; k <= p; ++k)
    {
      const Eigen::VectorXd leg = JacobiP(pts.col(2), 0.0, 0.0, k);
      const Eigen::VectorXd dleg = GradJacobiP(pts.col(2), 0.0, 0.0, k);
      for (Eigen::Index m = 0; m < nt; ++m)
      {
        vr.col(m + nt * k) = tr.col(m).cwiseProduct(leg);
        vs.col(m + nt * k) = ts.col(m).cwiseProduct(leg);
        vt.col(m + nt * k) = tri.col(m).cwiseProduct(dleg);
      }
    }
    return;
  }
  Eigen::VectorXd a, b, c;
  TetCollapse(pts, a, b, c);
  const int nm = NumModes(Shape::Tet, p);
  vr.resize(n, nm);
  vs.resize(n, nm);
  vt.resize(n, nm);
  const Eigen::ArrayXd hb = 0.5 * (1.0 - b.array());
  const Eigen::ArrayXd hc = 0.5 * (1.0 - c.array());
  int col = 0;
  for (int id = 0; id <= p; ++id)
  {
    const Eigen::ArrayXd fa = JacobiP(a, 0.0, 0.0, id).array();
    const Eigen::ArrayXd dfa = GradJacobiP(a, 0.0, 0.0, id).array();
    for (int jd = 0; jd <= p - id; ++jd)
    {
      const Eigen::ArrayXd gb = JacobiP(b, 2.0 * id + 1.0, 0.0, jd).array();
      const Eigen::ArrayXd dgb = GradJacobiP(b, 2.0 * id + 1.0, 0.0, jd).array();
      for (int kd = 0; kd <= p - id - jd; ++kd)
      {
        const double ac = 2.0 * (id + jd) + 2.0;
        const Eigen::ArrayXd hcv = JacobiP(c, ac, 0.0, kd).array();
        const Eigen::ArrayXd dhc = GradJacobiP(c, ac, 0.0, kd).array();

        Eigen::ArrayXd dr = dfa * gb * hcv;
        if (id > 0)
        {
          dr *= hb.pow(id - 1);
        }
        if (id + jd > 0)
        {
          dr *= hc.pow(id + jd - 1);
        }
        Eigen::ArrayXd ds = 0.5 * (1.0 + a.array()) * dr;
        Eigen::ArrayXd tmp = dgb * hb.pow(id);
        if (id > 0)
        {
          tmp += -0.5 * id * gb * hb.pow(id - 1);
        }
        if (id + jd > 0)
        {
          tmp *= hc.pow(id + jd - 1);
        }
        tmp = fa * tmp * hcv;
        ds += tmp;
        Eigen::ArrayXd dt = 0.5 * (1.0 + a.array()) * dr + 0.5 * (1.0 + b.array()) * tmp;
        Eigen::ArrayXd tmp2 = dhc * hc.pow(id + jd);
        if (id + jd > 0)
        {
          tmp2 -= 0.5 * (id + jd) * hcv * hc.pow(id + jd - 1);
        }
        tmp2 = fa * gb * tmp2 * hb.pow(id);
        dt += tmp2;
        const double scale = std::pow(2.0, 2 * id + jd + 1.5);
        vr.col(col) = scale * dr.matrix();
        vs.col(col) = scale * ds.matrix();
        vt.col(col) = scale * dt.matrix();
        ++col;
      }
    }
  }
}

double OutsideDistance(Shape shape, double r, double s, double t)
{
  if (shape == Shape::Tet)
  {
    return std::max({-1.0 - r, -1.0 - s, -1.0 - t, (r + s + t + 1.0) / std::sqrt(3.0)});
  }
  return std::max({-1.0 - r, -1.0 - s, (r + s) / std::sqrt(2.0), -1.0 - t, t - 1.0});
}

Points ReferenceVertices(Shape shape)
{
  if (shape == Shape::Tet)
  {
    Points v(4, 3);
    v << -1, -1, -1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
    return v;
  }
  Points v(6, 3);
  v << -1, -1, -1, 1, -1, -1, -1, 1, -1, -1, -1, 1, 1, -1, 1, -1, 1, 1;
  return v;
}

double ReferenceVolume(Shape shape) { return shape == Shape::Tet ? 4.0 / 3.0 : 4.0; }

}  // namespace hydrosem::refelem
