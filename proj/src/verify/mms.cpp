// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/verify/mms.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hydrosem/assembly/operators.hpp"
#include "hydrosem/error.hpp"
#include "hydrosem/refelem/element_map.hpp"

namespace hydrosem::verify
{

MmsCase TrigCase(double kx, double ky, double kz)
{
  MmsCase c;
  c.name = fmt::format("cos({}x)cos({}y)cos({}z)", kx, ky, kz);
  c.phi = [=](const Eigen::Vector3d &p) {
    return std::cos(kx * p.x()) * std::cos(ky * p.y()) * std::cos(kz * p.z());
  };
  c.grad = [=](const Eigen::Vector3d &p) {
    const double cx = std::cos(kx * p.x()), cy = std::cos(ky * p.y()), cz = std::cos(kz * p.z());
    const double sx = std::sin(kx * p.x()), sy = std::sin(ky * p.y()), sz = std::sin(kz * p.z());
    return Eigen::Vector3d(-kx * sx * cy * cz, -ky * cx * sy * cz, -kz * cx * cy * sz);
  };
  c.laplacian = [=](const Eigen::Vector3d &p) {
    return -(kx * kx + ky * ky + kz * kz) * std::cos(kx * p.x()) * std::cos(ky * p.y()) *
           std::cos(kz * p.z());
  };
  return c;
}

MmsCase BoxCase(double lx, double ly, double lz)
{
  return TrigCase(M_PI / lx, M_PI / ly, M_PI / lz);
}

MmsCase LinearCase(double a, double b, double c)
{
  MmsCase m;
  m.name = fmt::format("{}x+{}y+{}z", a, b, c);
  m.phi = [=](const Eigen::Vector3d &p) { return a * p.x() + b * p.y() + c * p.z(); };
  m.grad = [=](const Eigen::Vector3d &) { return Eigen::Vector3d(a, b, c); };
  m.laplacian = [](const Eigen::Vector3d &) { return 0.0; };
  return m;
}

MmsCase ZeroCase()
{
  MmsCase m;
  m.name = "zero";
  m.phi = [](const Eigen::Vector3d &) { return 0.0; };
  m.grad = [](const Eigen::Vector3d &) { return Eigen::Vector3d::Zero(); };
  m.laplacian = [](const Eigen::Vector3d &) { return 0.0; };
  return m;
}

double MaxEdge(const mesh::HybridMesh &mesh)
{
  double h = 0.0;
  const auto &x = mesh.Vertices();
  for (const auto &el : mesh.Elements())
  {
    const int n = el.NumVertices();
    for (int a = 0; a < n; ++a)
    {
      for (int b = a + 1; b < n; ++b)
      {
        const auto &p = x[el.v[a]];
        const auto &q = x[el.v[b]];
        h = std::max(h, std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
      }
    }
  }
  return h;
}

MmsResult RunMms(const mesh::HybridMesh &mesh, int order, const MmsCase &mms,
                 const linalg::SolverConfig &cfg)
{
  using mesh::BoundaryTag;
  const auto dofs = assembly::BuildDofMap(mesh, order);
  const auto a = assembly::AssembleStiffness(mesh, dofs);
  Eigen::VectorXd b =
      -assembly::AssembleSource(mesh, dofs, [&](const Eigen::Vector3d &p) { return mms.laplacian(p); });
  std::vector<BoundaryTag> neumann;
  for (const auto &tag : mesh.Tags())
  {
    if (tag != BoundaryTag::FreeSurface())
    {
      neumann.push_back(tag);
    }
  }
  if (!neumann.empty())
  {
    const auto bq = assembly::BuildBoundaryQuadrature(mesh, dofs, neumann);
    Eigen::VectorXd flux(bq.NumPoints());
    for (Eigen::Index q = 0; q < flux.size(); ++q)
    {
      flux(q) = mms.grad(bq.points.row(q).transpose()).dot(bq.normals.row(q).transpose());
    }
    b += assembly::NeumannLoad(bq, dofs, mesh, flux);
  }
  const auto &top = dofs.Nodes(BoundaryTag::FreeSurface());
  Eigen::VectorXd g(top.size());
  for (std::size_t k = 0; k < top.size(); ++k)
  {
    g(k) = mms.phi(dofs.coords.row(top[k]).transpose());
  }
  linalg::SolverConfig solver_cfg = cfg;
  solver_cfg.deflate_constants = top.empty();
  const assembly::DirichletSystem sys(a, top);
  const linalg::PcgSolver solver(sys.matrix(), solver_cfg);
  Eigen::VectorXd phi;
  const auto report = solver.Solve(sys.Rhs(b, g), phi);

  MmsResult r;
  r.order = order;
  r.num_elements = mesh.NumElements();
  r.num_dofs = dofs.num_dofs;
  r.h = MaxEdge(mesh);
  r.iterations = report.iterations;
  for (int e = 0; e < mesh.NumElements(); ++e)
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[e].shape, order);
    const auto m = refelem::GeometricFactors(ref, refelem::ElementGeometry(mesh, e));
    Eigen::VectorXd local(ref.num_nodes());
    for (int i = 0; i < ref.num_nodes(); ++i)
    {
      local(i) = phi(dofs.l2g[e][i]);
    }
    const Eigen::VectorXd at_q = ref.interp_quad() * local;
    for (Eigen::Index q = 0; q < at_q.size(); ++q)
    {
      const double exact = mms.phi(m.quad_coords.row(q).transpose());
      const double w = ref.quadrature().weights(q) * m.det(q);
      r.error += w * std::abs(exact - at_q(q));
      r.magnitude += w * std::abs(exact);
    }
  }
  return r;
}

ConvergenceReport PSweep(const mesh::HybridMesh &mesh, const std::vector<int> &orders,
                         const MmsCase &mms, const linalg::SolverConfig &cfg)
{
  ConvergenceReport rep;
  for (int p : orders)
  {
    rep.rows.push_back(RunMms(mesh, p, mms, cfg));
  }
  return rep;
}

double FitRate(const std::vector<double> &h, const std::vector<double> &error, double magnitude)
{
  const double floor = 1e-14 * std::max(magnitude, 1e-300);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    if (error[i] > 10.0 * floor)
    {
      lx.push_back(std::log(h[i]));
      ly.push_back(std::log(error[i]));
    }
  }
  if (lx.size() < 3)
  {
    throw StatisticsError(
        fmt::format("rate fit needs at least 3 levels above the round-off floor, have {}", lx.size()));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i)
  {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport HSweep(const std::vector<mesh::HybridMesh> &meshes,
                         const std::vector<int> &orders, const MmsCase &mms,
                         const linalg::SolverConfig &cfg)
{
  if (meshes.size() < 3)
  {
    throw StatisticsError(fmt::format("h-sweep needs at least 3 meshes, have {}", meshes.size()));
  }
  ConvergenceReport rep;
  for (int p : orders)
  {
    std::vector<double> h, err;
    double magnitude = 0.0;
    for (const auto &m : meshes)
    {
      rep.rows.push_back(RunMms(m, p, mms, cfg));
      h.push_back(rep.rows.back().h);
      err.push_back(rep.rows.back().error);
      magnitude = rep.rows.back().magnitude;
    }
    rep.orders.push_back(p);
    rep.rates.push_back(FitRate(h, err, magnitude));
  }
  return rep;
}

std::string ReportCsv(const ConvergenceReport &report)
{
  std::string out = "order,elements,dofs,h,l1_error\n";
  for (const auto &r : report.rows)
  {
    out += fmt::format("{},{},{},{:.17g},{:.17g}\n", r.order, r.num_elements, r.num_dofs, r.h,
                       r.error);
  }
  return out;
}

}  // namespace hydrosem::verify
