// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/sim/model.hpp"

#include <algorithm>
#include <cmath>

#include <boost/algorithm/string/case_conv.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/mesh/queries.hpp"

namespace hydrosem::sim
{

namespace
{

using ColMatrix = Eigen::SparseMatrix<double>;

// Rows `keep` of a square matrix restricted to the same columns.
ColMatrix Restrict(const SparseMatrix &a, const std::vector<int> &keep)
{
  std::vector<int> pos(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i)
  {
    pos[keep[i]] = static_cast<int>(i);
  }
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < keep.size(); ++i)
  {
    for (SparseMatrix::InnerIterator it(a, keep[i]); it; ++it)
    {
      if (pos[it.col()] >= 0)
      {
        t.emplace_back(static_cast<int>(i), pos[it.col()], it.value());
      }
    }
  }
  ColMatrix out(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace

Discretization::Discretization(const HybridMesh &mesh, int order)
    : mesh_(&mesh), dofs_(assembly::BuildDofMap(mesh, order))
{
  stiffness_ = assembly::AssembleStiffness(mesh, dofs_);
  fs_ = assembly::BuildFreeSurfaceOperators(mesh, dofs_);
  std::vector<BoundaryTag> tags;
  for (const auto &t : mesh.Tags())
  {
    if (t.kind == BoundaryTag::Kind::Body || t.kind == BoundaryTag::Kind::Special)
    {
      tags.push_back(t);
    }
  }
  if (!tags.empty())
  {
    wetted_ = assembly::BuildBoundaryQuadrature(mesh, dofs_, tags);
    wetted_load_ = assembly::NeumannLoadMatrix(wetted_, dofs_, mesh);
  }
  else
  {
    wetted_load_.resize(dofs_.num_dofs, 0);
  }
}

double Discretization::MinSpacing() const
{
  return mesh::MinSpacing(*mesh_, dofs_.order);
}

ModeShape RigidMode(int k, const Eigen::Vector3d &reference)
{
  if (k < 1 || k > 6)
  {
    throw ParameterError(fmt::format("rigid mode index {} outside 1..6", k));
  }
  ModeShape m;
  m.index = k;
  m.tags = {BoundaryTag::Body()};
  m.parity = symmetry::RigidParity(k);
  m.normal = [k, reference](const Eigen::Vector3d &x, const Eigen::Vector3d &n) {
    if (k <= 3)
    {
      return n(k - 1);
    }
    return (x - reference).cross(n)(k - 4);
  };
  return m;
}

Eigen::VectorXd ModeFlux(const Discretization &d, const ModeShape &mode)
{
  const auto &bq = d.wetted();
  Eigen::VectorXd flux = Eigen::VectorXd::Zero(bq.NumPoints());
  for (std::size_t f = 0; f < bq.facets.size(); ++f)
  {
    const auto &fc = bq.facets[f];
    if (std::find(mode.tags.begin(), mode.tags.end(), fc.tag) == mode.tags.end())
    {
      continue;
    }
    const Eigen::Index end =
        f + 1 < bq.facets.size() ? bq.facets[f + 1].offset : bq.NumPoints();
    for (Eigen::Index q = fc.offset; q < end; ++q)
    {
      flux(q) = mode.normal(bq.points.row(q).transpose(), bq.normals.row(q).transpose());
    }
  }
  return flux;
}

Eigen::VectorXd ModeLoad(const Discretization &d, const ModeShape &mode)
{
  for (const auto &t : mode.tags)
  {
    if (!d.mesh().HasTag(t))
    {
      throw TaggingError(fmt::format("mode {} refers to missing boundary '{}'", mode.index, t.Name()));
    }
  }
  if (d.wetted().NumPoints() == 0)
  {
    return Eigen::VectorXd::Zero(d.dofs().num_dofs);
  }
  return d.wetted_load() * ModeFlux(d, mode);
}

DzMethod DzMethodFromName(const std::string &name)
{
  const std::string n = boost::algorithm::to_lower_copy(name);
  if (n == "flux")
  {
    return DzMethod::Flux;
  }
  if (n == "collocation")
  {
    return DzMethod::Collocation;
  }
  throw ParameterError(fmt::format("unknown dz method '{}' (flux, collocation)", name));
}

std::string DzMethodName(DzMethod m)
{
  return m == DzMethod::Flux ? "flux" : "collocation";
}

SurfaceSolver::SurfaceSolver(const Discretization &d, const waves::Environment &env,
                             SurfaceOptions opt)
    : d_(&d), env_(env), opt_(std::move(opt))
{
  // g = 0 is allowed here: it decouples the surface equations.
  if (!(env_.g >= 0.0) || !(env_.depth > 0.0) || !(env_.rho > 0.0))
  {
    throw ParameterError(fmt::format("environment needs g >= 0, depth, rho > 0 (got {}, {}, {})",
                                     env_.g, env_.depth, env_.rho));
  }
  linalg::Validate(opt_.solver);
  const auto &fs = d.fs();
  const auto &dofs = d.dofs();
  const auto &mesh = d.mesh();

  std::vector<char> frozen(static_cast<std::size_t>(dofs.num_dofs), 0);
  std::vector<int> constrained = fs.dofs;
  const std::pair<bool, BoundaryTag> planes[] = {{opt_.theta_x, BoundaryTag::SymX()},
                                                 {opt_.theta_y, BoundaryTag::SymY()}};
  for (const auto &[neumann, tag] : planes)
  {
    if (!neumann && mesh.HasTag(tag))
    {
      for (int i : dofs.Nodes(tag))
      {
        frozen[i] = 1;
        constrained.push_back(i);
      }
    }
  }
  active_.assign(static_cast<std::size_t>(fs.size()), 1);
  for (int k = 0; k < fs.size(); ++k)
  {
    if (frozen[fs.dofs[k]])
    {
      active_[k] = 0;
    }
    else
    {
      active_index_.push_back(k);
    }
  }
  sys_ = std::make_unique<assembly::DirichletSystem>(d.stiffness(), constrained);
  pcg_ = std::make_unique<linalg::PcgSolver>(sys_->matrix(), opt_.solver);
  for (int dof : sys_->constrained())
  {
    const int k = fs.fs_index[dof];
    constrained_fs_.push_back(k >= 0 && active_[k] ? k : -1);
  }
  mass_.compute(Restrict(fs.mass, active_index_));
  if (mass_.info() != Eigen::Success)
  {
    throw GeometryError("free-surface mass matrix is not positive definite");
  }

  const Eigen::Vector3d lo(mesh.BoundingMin()[0], mesh.BoundingMin()[1], 0.0);
  const Eigen::Vector3d hi(mesh.BoundingMax()[0], mesh.BoundingMax()[1], 0.0);
  for (const auto &z : opt_.zones)
  {
    waves::Validate(z, lo.x(), hi.x(), lo.y(), hi.y());
  }
  c_ = waves::DampingProfile(opt_.zones, fs.xy);
  for (int k : active_index_)
  {
    if (c_(k) > 0.0)
    {
      damped_.push_back(k);
    }
  }
  if (!damped_.empty())
  {
    const auto zones = opt_.zones;
    kc_ = assembly::WeightedFreeSurfaceStiffness(mesh, dofs, fs, [zones](double x, double y) {
      double c = 0.0;
      for (const auto &z : zones)
      {
        c += z.Profile(x, y);
      }
      return c;
    });
    pd_.compute(Restrict(fs.stiffness, damped_));
    if (pd_.info() != Eigen::Success)
    {
      throw GeometryError("damping-pressure system is singular (zone covers the whole surface?)");
    }
  }
  phi_ = Eigen::VectorXd::Zero(dofs.num_dofs);
}

const Eigen::VectorXd &SurfaceSolver::SolveLaplace(const Eigen::VectorXd &phi_fs,
                                                   const Eigen::VectorXd &b)
{
  Eigen::VectorXd values(static_cast<Eigen::Index>(constrained_fs_.size()));
  for (std::size_t i = 0; i < constrained_fs_.size(); ++i)
  {
    const int k = constrained_fs_[i];
    values(static_cast<Eigen::Index>(i)) = k >= 0 ? phi_fs(k) : 0.0;
  }
  const auto rep = pcg_->Solve(sys_->Rhs(b, values), phi_);
  iterations_ += rep.iterations;
  ++solves_;
  return phi_;
}

Eigen::VectorXd SurfaceSolver::SurfaceDz(const Eigen::VectorXd &b) const
{
  const auto &fs = d_->fs();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(fs.size());
  if (opt_.dz == DzMethod::Collocation)
  {
    w = fs.dz_collocation * phi_;
  }
  else
  {
    const Eigen::VectorXd r = d_->stiffness() * phi_ - b;
    Eigen::VectorXd ra(static_cast<Eigen::Index>(active_index_.size()));
    for (std::size_t i = 0; i < active_index_.size(); ++i)
    {
      ra(static_cast<Eigen::Index>(i)) = r(fs.dofs[active_index_[i]]);
    }
    const Eigen::VectorXd wa = mass_.solve(ra);
    for (std::size_t i = 0; i < active_index_.size(); ++i)
    {
      w(active_index_[i]) = wa(static_cast<Eigen::Index>(i));
    }
  }
  for (int k = 0; k < fs.size(); ++k)
  {
    if (!active_[k])
    {
      w(k) = 0.0;
    }
  }
  return w;
}

Eigen::VectorXd SurfaceSolver::PressureDamping(const Eigen::VectorXd &phi_fs) const
{
  Eigen::VectorXd p = Eigen::VectorXd::Zero(fs_size());
  if (damped_.empty())
  {
    return p;
  }
  const Eigen::VectorXd kphi = kc_ * phi_fs;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(damped_.size()));
  for (std::size_t i = 0; i < damped_.size(); ++i)
  {
    rhs(static_cast<Eigen::Index>(i)) = -kphi(damped_[i]);
  }
  const Eigen::VectorXd pd = pd_.solve(rhs);
  for (std::size_t i = 0; i < damped_.size(); ++i)
  {
    p(damped_[i]) = pd(static_cast<Eigen::Index>(i));
  }
  return p;
}

Eigen::VectorXd SurfaceSolver::Rhs(const Eigen::VectorXd &y, const Eigen::VectorXd &b)
{
  const int n = fs_size();
  const Eigen::VectorXd phi_fs = y.head(n);
  const Eigen::VectorXd eta = y.tail(n);
  SolveLaplace(phi_fs, b);
  const Eigen::VectorXd w = SurfaceDz(b);
  Eigen::VectorXd dy(2 * n);
  dy.head(n) = -env_.g * eta + PressureDamping(phi_fs);
  dy.tail(n) = w - c_.cwiseProduct(eta);
  for (int k = 0; k < n; ++k)
  {
    if (!active_[k])
    {
      dy(k) = 0.0;
      dy(n + k) = 0.0;
    }
  }
  const auto &m = d_->fs().mass;
  last_energy_ = 0.5 * env_.g * eta.dot(m * eta) + 0.5 * phi_fs.dot(m * w);
  return dy;
}

}  // namespace hydrosem::sim
