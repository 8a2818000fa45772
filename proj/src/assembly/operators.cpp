// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/assembly/operators.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/refelem/element_map.hpp"

namespace hydrosem::assembly
{

namespace
{

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix FromTriplets(Eigen::Index rows, Eigen::Index cols, const Triplets &t)
{
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void Scatter(Triplets &t, const std::vector<int> &rows, const std::vector<int> &cols,
             const Eigen::MatrixXd &ke)
{
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (std::size_t j = 0; j < cols.size(); ++j)
    {
      t.emplace_back(rows[i], cols[j], ke(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
}

// Physical gradients of the nodal basis at the volume quadrature points:
// three Nq x Np matrices.
std::array<Eigen::MatrixXd, 3> PhysicalGradients(const refelem::ReferenceElement &ref,
                                                 const refelem::ElementMap &m)
{
  const auto &g = ref.grad_quad();
  const Eigen::Index nq = g[0].rows();
  std::array<Eigen::MatrixXd, 3> out;
  for (auto &o : out)
  {
    o.resize(nq, g[0].cols());
  }
  for (Eigen::Index q = 0; q < nq; ++q)
  {
    const Eigen::Matrix3d &G = m.inverse_transpose[q];
    for (int d = 0; d < 3; ++d)
    {
      out[d].row(q) = G(d, 0) * g[0].row(q) + G(d, 1) * g[1].row(q) + G(d, 2) * g[2].row(q);
    }
  }
  return out;
}

}  // namespace

SparseMatrix AssembleStiffness(const HybridMesh &mesh, const DofMap &dofs)
{
  Triplets t;
  for (int e = 0; e < mesh.NumElements(); ++e)
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[e].shape, dofs.order);
    const auto m = refelem::GeometricFactors(ref, refelem::ElementGeometry(mesh, e));
    const auto grad = PhysicalGradients(ref, m);
    const Eigen::VectorXd w = ref.quadrature().weights.cwiseProduct(m.det);
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(ref.num_nodes(), ref.num_nodes());
    for (int d = 0; d < 3; ++d)
    {
      ke.noalias() += grad[d].transpose() * w.asDiagonal() * grad[d];
    }
    Scatter(t, dofs.l2g[e], dofs.l2g[e], ke);
  }
  return FromTriplets(dofs.num_dofs, dofs.num_dofs, t);
}

SparseMatrix AssembleMass(const HybridMesh &mesh, const DofMap &dofs)
{
  Triplets t;
  for (int e = 0; e < mesh.NumElements(); ++e)
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[e].shape, dofs.order);
    const auto m = refelem::GeometricFactors(ref, refelem::ElementGeometry(mesh, e));
    const Eigen::VectorXd w = ref.quadrature().weights.cwiseProduct(m.det);
    const Eigen::MatrixXd me = ref.interp_quad().transpose() * w.asDiagonal() * ref.interp_quad();
    Scatter(t, dofs.l2g[e], dofs.l2g[e], me);
  }
  return FromTriplets(dofs.num_dofs, dofs.num_dofs, t);
}

Eigen::VectorXd AssembleSource(const HybridMesh &mesh, const DofMap &dofs, const ScalarField &f)
{
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.num_dofs);
  for (int e = 0; e < mesh.NumElements(); ++e)
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[e].shape, dofs.order);
    const auto m = refelem::GeometricFactors(ref, refelem::ElementGeometry(mesh, e));
    Eigen::VectorXd fw(m.det.size());
    for (Eigen::Index q = 0; q < fw.size(); ++q)
    {
      fw(q) = f(m.quad_coords.row(q).transpose()) * ref.quadrature().weights(q) * m.det(q);
    }
    const Eigen::VectorXd be = ref.interp_quad().transpose() * fw;
    for (int i = 0; i < ref.num_nodes(); ++i)
    {
      b(dofs.l2g[e][i]) += be(i);
    }
  }
  return b;
}

BoundaryQuadrature BuildBoundaryQuadrature(const HybridMesh &mesh, const DofMap &dofs,
                                           const std::vector<BoundaryTag> &tags)
{
  if (std::none_of(tags.begin(), tags.end(), [&](const BoundaryTag &t) { return mesh.HasTag(t); }))
  {
    throw DomainError("none of the requested boundary tags is present in the mesh");
  }
  BoundaryQuadrature bq;
  std::vector<refelem::FaceMap> maps;
  Eigen::Index total = 0;
  const auto &facets = mesh.Facets();
  for (std::size_t i = 0; i < facets.size(); ++i)
  {
    if (std::find(tags.begin(), tags.end(), facets[i].tag) == tags.end())
    {
      continue;
    }
    const int e = facets[i].element;
    const auto &ref = refelem::GetReference(mesh.Elements()[e].shape, dofs.order);
    maps.push_back(refelem::FaceFactors(ref, refelem::ElementGeometry(mesh, e), facets[i].face));
    bq.facets.push_back({static_cast<int>(i), e, facets[i].tag, static_cast<int>(total),
                         &ref.faces()[facets[i].face].interp});
    total += maps.back().weights.size();
  }
  bq.points.resize(total, 3);
  bq.normals.resize(total, 3);
  bq.weights.resize(total);
  for (std::size_t k = 0; k < maps.size(); ++k)
  {
    const Eigen::Index off = bq.facets[k].offset;
    const Eigen::Index n = maps[k].weights.size();
    bq.points.middleRows(off, n) = maps[k].points;
    bq.normals.middleRows(off, n) = maps[k].normals;
    bq.weights.segment(off, n) = maps[k].weights;
  }
  return bq;
}

Eigen::VectorXd NeumannLoad(const BoundaryQuadrature &bq, const DofMap &dofs,
                            const HybridMesh &mesh, const Eigen::VectorXd &flux)
{
  (void)mesh;
  if (flux.size() != bq.NumPoints())
  {
    throw ParameterError("flux values do not match the boundary quadrature");
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.num_dofs);
  for (const auto &f : bq.facets)
  {
    const Eigen::MatrixXd &interp = *f.interp;
    const Eigen::Index n = interp.rows();
    const Eigen::VectorXd wq =
        bq.weights.segment(f.offset, n).cwiseProduct(flux.segment(f.offset, n));
    const Eigen::VectorXd be = interp.transpose() * wq;
    const auto &map = dofs.l2g[f.element];
    for (Eigen::Index i = 0; i < be.size(); ++i)
    {
      b(map[i]) += be(i);
    }
  }
  return b;
}

SparseMatrix NeumannLoadMatrix(const BoundaryQuadrature &bq, const DofMap &dofs,
                               const HybridMesh &mesh)
{
  (void)mesh;
  Triplets t;
  for (const auto &f : bq.facets)
  {
    const Eigen::MatrixXd &interp = *f.interp;
    const auto &map = dofs.l2g[f.element];
    for (Eigen::Index q = 0; q < interp.rows(); ++q)
    {
      const double w = bq.weights(f.offset + q);
      for (Eigen::Index i = 0; i < interp.cols(); ++i)
      {
        const double v = interp(q, i) * w;
        if (v != 0.0)
        {
          t.emplace_back(map[i], f.offset + q, v);
        }
      }
    }
  }
  return FromTriplets(dofs.num_dofs, bq.NumPoints(), t);
}

Eigen::VectorXd EvaluateAtPoints(const BoundaryQuadrature &bq, const DofMap &dofs,
                                 const Eigen::VectorXd &field)
{
  Eigen::VectorXd out(bq.NumPoints());
  for (const auto &f : bq.facets)
  {
    const Eigen::MatrixXd &interp = *f.interp;
    const auto &map = dofs.l2g[f.element];
    Eigen::VectorXd local(interp.cols());
    for (Eigen::Index i = 0; i < local.size(); ++i)
    {
      local(i) = field(map[i]);
    }
    out.segment(f.offset, interp.rows()) = interp * local;
  }
  return out;
}

DirichletSystem::DirichletSystem(const SparseMatrix &a, std::vector<int> constrained)
    : constrained_(std::move(constrained)), mask_(a.rows(), 0)
{
  std::sort(constrained_.begin(), constrained_.end());
  constrained_.erase(std::unique(constrained_.begin(), constrained_.end()), constrained_.end());
  std::vector<int> column(a.rows(), -1);
  for (std::size_t k = 0; k < constrained_.size(); ++k)
  {
    mask_[constrained_[k]] = 1;
    column[constrained_[k]] = static_cast<int>(k);
  }
  Triplets tr, tc;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i)
  {
    if (mask_[i])
    {
      tr.emplace_back(i, i, 1.0);
      continue;
    }
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
    {
      if (mask_[it.col()])
      {
        tc.emplace_back(i, column[it.col()], it.value());
      }
      else
      {
        tr.emplace_back(i, it.col(), it.value());
      }
    }
  }
  reduced_ = FromTriplets(a.rows(), a.cols(), tr);
  coupling_ = FromTriplets(a.rows(), static_cast<Eigen::Index>(constrained_.size()), tc);
}

Eigen::VectorXd DirichletSystem::Rhs(const Eigen::VectorXd &b, const Eigen::VectorXd &values) const
{
  if (values.size() != static_cast<Eigen::Index>(constrained_.size()))
  {
    throw ParameterError("Dirichlet values do not match the constrained set");
  }
  Eigen::VectorXd out = b;
  if (!constrained_.empty())
  {
    out.noalias() -= coupling_ * values;
  }
  for (std::size_t k = 0; k < constrained_.size(); ++k)
  {
    out(constrained_[k]) = values(static_cast<Eigen::Index>(k));
  }
  return out;
}

namespace
{

struct FsFacet
{
  int element;
  int face;
};

std::vector<FsFacet> FreeSurfaceFacets(const HybridMesh &mesh)
{
  std::vector<FsFacet> out;
  for (const auto &f : mesh.Facets())
  {
    if (f.tag == BoundaryTag::FreeSurface())
    {
      out.push_back({f.element, f.face});
    }
  }
  return out;
}

// Horizontal gradients of the nodal basis at the face quadrature points of
// a flat z = 0 face; columns restricted to the face nodes.
void FaceOperators(const HybridMesh &mesh, const DofMap &dofs, const FsFacet &ff,
                   Eigen::MatrixXd &n, Eigen::MatrixXd &gx, Eigen::MatrixXd &gy,
                   Eigen::VectorXd &w, Eigen::MatrixXd &pts)
{
  const auto &ref = refelem::GetReference(mesh.Elements()[ff.element].shape, dofs.order);
  const Eigen::MatrixXd geo = refelem::ElementGeometry(mesh, ff.element);
  const auto &rf = ref.faces()[ff.face];
  const auto fm = refelem::FaceFactors(ref, geo, ff.face);
  const auto &tables = ref.geometry(geo.rows() == (ref.shape() == mesh::Shape::Tet ? 4 : 6) ? 1 : 2);
  Eigen::MatrixXd dr, ds, dt;
  ref.GradInterpolationMatrix(rf.quad.points, dr, ds, dt);
  const Eigen::Index nq = rf.quad.weights.size();
  const Eigen::Index nf = static_cast<Eigen::Index>(rf.nodes.size());
  n.resize(nq, nf);
  gx.resize(nq, nf);
  gy.resize(nq, nf);
  for (Eigen::Index q = 0; q < nq; ++q)
  {
    Eigen::Matrix3d J;
    for (int c = 0; c < 3; ++c)
    {
      J.col(c) = (tables.grad_at_face_quad[ff.face][c].row(q) * geo).transpose();
    }
    const Eigen::Matrix3d G = J.inverse().transpose();
    for (Eigen::Index k = 0; k < nf; ++k)
    {
      const int i = rf.nodes[k];
      n(q, k) = rf.interp(q, i);
      gx(q, k) = G(0, 0) * dr(q, i) + G(0, 1) * ds(q, i) + G(0, 2) * dt(q, i);
      gy(q, k) = G(1, 0) * dr(q, i) + G(1, 1) * ds(q, i) + G(1, 2) * dt(q, i);
    }
  }
  w = fm.weights;
  pts = fm.points;
}

}  // namespace

FreeSurfaceOperators BuildFreeSurfaceOperators(const HybridMesh &mesh, const DofMap &dofs)
{
  FreeSurfaceOperators fs;
  fs.dofs = dofs.Nodes(BoundaryTag::FreeSurface());
  if (fs.dofs.empty())
  {
    throw DomainError("mesh has no free surface");
  }
  fs.fs_index.assign(dofs.num_dofs, -1);
  fs.xy.resize(fs.size(), 2);
  for (int k = 0; k < fs.size(); ++k)
  {
    fs.fs_index[fs.dofs[k]] = k;
    fs.xy.row(k) = dofs.coords.row(fs.dofs[k]).head<2>();
  }
  Triplets tm, ts, tz;
  std::vector<int> count(fs.size(), 0);
  for (const auto &ff : FreeSurfaceFacets(mesh))
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[ff.element].shape, dofs.order);
    const auto &rf = ref.faces()[ff.face];
    std::vector<int> rows;
    for (int i : rf.nodes)
    {
      rows.push_back(fs.fs_index[dofs.l2g[ff.element][i]]);
    }
    Eigen::MatrixXd n, gx, gy, pts;
    Eigen::VectorXd w;
    FaceOperators(mesh, dofs, ff, n, gx, gy, w, pts);
    Scatter(tm, rows, rows, n.transpose() * w.asDiagonal() * n);
    Scatter(ts, rows, rows,
            gx.transpose() * w.asDiagonal() * gx + gy.transpose() * w.asDiagonal() * gy);

    // d/dz at the face nodes by the chain rule on the element.
    const Eigen::MatrixXd geo = refelem::ElementGeometry(mesh, ff.element);
    const auto &tables = ref.geometry(geo.rows() == 6 ? 1 : 2);
    for (std::size_t k = 0; k < rf.nodes.size(); ++k)
    {
      const int i = rf.nodes[k];
      Eigen::Matrix3d J;
      for (int c = 0; c < 3; ++c)
      {
        J.col(c) = (tables.grad_at_nodes[c].row(i) * geo).transpose();
      }
      const Eigen::Matrix3d G = J.inverse().transpose();
      const Eigen::RowVectorXd dz =
          G(2, 0) * ref.Dr().row(i) + G(2, 1) * ref.Ds().row(i) + G(2, 2) * ref.Dt().row(i);
      for (Eigen::Index j = 0; j < dz.size(); ++j)
      {
        tz.emplace_back(rows[k], dofs.l2g[ff.element][j], dz(j));
      }
      ++count[rows[k]];
    }
  }
  fs.mass = FromTriplets(fs.size(), fs.size(), tm);
  fs.stiffness = FromTriplets(fs.size(), fs.size(), ts);
  fs.dz_collocation = FromTriplets(fs.size(), dofs.num_dofs, tz);
  for (int k = 0; k < fs.size(); ++k)
  {
    fs.dz_collocation.row(k) /= static_cast<double>(count[k]);
  }
  return fs;
}

SparseMatrix WeightedFreeSurfaceStiffness(const HybridMesh &mesh, const DofMap &dofs,
                                          const FreeSurfaceOperators &fs,
                                          const std::function<double(double, double)> &c)
{
  Triplets t;
  for (const auto &ff : FreeSurfaceFacets(mesh))
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[ff.element].shape, dofs.order);
    const auto &rf = ref.faces()[ff.face];
    std::vector<int> rows;
    for (int i : rf.nodes)
    {
      rows.push_back(fs.fs_index[dofs.l2g[ff.element][i]]);
    }
    Eigen::MatrixXd n, gx, gy, pts;
    Eigen::VectorXd w;
    FaceOperators(mesh, dofs, ff, n, gx, gy, w, pts);
    for (Eigen::Index q = 0; q < w.size(); ++q)
    {
      w(q) *= c(pts(q, 0), pts(q, 1));
    }
    if (w.cwiseAbs().maxCoeff() == 0.0)
    {
      continue;
    }
    Scatter(t, rows, rows,
            gx.transpose() * w.asDiagonal() * gx + gy.transpose() * w.asDiagonal() * gy);
  }
  return FromTriplets(fs.size(), fs.size(), t);
}

}  // namespace hydrosem::assembly
