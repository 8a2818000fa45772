// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/sim/runs.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hydrosem/assembly/operators.hpp"
#include "hydrosem/error.hpp"
#include "hydrosem/linalg/solver.hpp"
#include "hydrosem/sim/rk4.hpp"

namespace hydrosem::sim
{

namespace
{

// Largest terminal |dm/dt| relative to its peak over all moments.
double DecayRatio(const BodyRecord &rec)
{
  double ratio = 0.0;
  for (const auto &[j, m] : rec.moments)
  {
    const long n = static_cast<long>(m.size());
    if (n < 3)
    {
      continue;
    }
    std::vector<double> dm(static_cast<std::size_t>(n - 2));
    for (long i = 1; i + 1 < n; ++i)
    {
      dm[i - 1] = std::abs(m[i + 1] - m[i - 1]) / (2.0 * rec.dt);
    }
    const double peak = *std::max_element(dm.begin(), dm.end());
    if (peak == 0.0)
    {
      continue;
    }
    // Last tenth of the record, so a slow ringing tail cannot pass on a
    // zero crossing.
    const long tail = std::min<long>(static_cast<long>(dm.size()),
                                     std::max<long>(5, static_cast<long>(dm.size()) / 10));
    const double end = *std::max_element(dm.end() - tail, dm.end());
    ratio = std::max(ratio, end / peak);
  }
  return ratio;
}

}  // namespace

BodyRecord Integrate(SurfaceSolver &solver, const LoadFunction &load,
                     const std::map<int, Eigen::VectorXd> &force_loads, const RunOptions &opt,
                     Eigen::VectorXd *state)
{
  const double dt = opt.grid.dt;
  if (!(dt > 0.0) || opt.grid.steps < 1)
  {
    throw ParameterError("time grid needs dt > 0 and at least one step");
  }
  const int ndof = solver.discretization().dofs().num_dofs;
  Eigen::VectorXd y = state && state->size() == solver.state_size()
                          ? *state
                          : Eigen::VectorXd::Zero(solver.state_size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ndof);

  BodyRecord rec;
  rec.dt = dt;
  rec.t_start = opt.t_start;
  for (const auto &[j, r] : force_loads)
  {
    rec.moments[j].reserve(static_cast<std::size_t>(opt.grid.steps + 1));
  }
  const long before = solver.total_iterations();

  auto f = [&](double t, const Eigen::VectorXd &s) {
    b.setZero();
    load(t, std::llround(2.0 * (t - opt.t_start) / dt), b);
    return solver.Rhs(s, b);
  };

  long target = opt.grid.steps;
  const long hard_cap =
      opt.auto_extend ? std::max(target, static_cast<long>(std::ceil(opt.cap / dt - 1e-9))) : target;
  long n = 0;
  while (true)
  {
    const double t = opt.t_start + n * dt;
    Eigen::VectorXd k1;
    try
    {
      k1 = f(t, y);
    }
    catch (const ConvergenceError &e)
    {
      throw ConvergenceError(fmt::format("step {} (t = {:.6g}): {}", n, t, e.what()),
                             e.best_iterate(), e.residual_history());
    }
    const Eigen::VectorXd &phi = solver.phi_volume();
    for (const auto &[j, r] : force_loads)
    {
      rec.moments[j].push_back(r.dot(phi));
    }
    rec.energy.push_back(solver.LastEnergy());
    if (n == target)
    {
      rec.decay_ratio = DecayRatio(rec);
      if (!opt.auto_extend || rec.decay_ratio <= opt.decay_tolerance || target >= hard_cap)
      {
        break;
      }
      target = std::min(hard_cap, target + std::max<long>(1, opt.grid.steps / 4));
    }
    try
    {
      y = Rk4Step(f, t, y, dt, k1);
    }
    catch (const ConvergenceError &e)
    {
      throw ConvergenceError(fmt::format("step {} (t = {:.6g}): {}", n, t, e.what()),
                             e.best_iterate(), e.residual_history());
    }
    ++n;
    if (opt.observer)
    {
      opt.observer(static_cast<int>(n), y);
    }
  }
  rec.truncated = opt.auto_extend && rec.decay_ratio > opt.decay_tolerance;
  rec.iterations = solver.total_iterations() - before;
  if (state)
  {
    *state = y;
  }
  return rec;
}

BodyRecord RunRadiation(SurfaceSolver &solver, const Eigen::VectorXd &mode_load,
                        const waves::PseudoImpulse &impulse,
                        const std::map<int, Eigen::VectorXd> &force_loads, const RunOptions &opt)
{
  auto load = [&](double t, long, Eigen::VectorXd &b) { b = impulse.Velocity(t) * mode_load; };
  return Integrate(solver, load, force_loads, opt);
}

DiffractionForcing BuildDiffractionForcing(const Discretization &d, const waves::Environment &env,
                                           const waves::PseudoImpulse &impulse,
                                           const symmetry::SymmetryConfig &cfg,
                                           symmetry::BlockLabel label, double beta, double dt,
                                           double duration, double quiet)
{
  if (!(dt > 0.0) || !(duration > 0.0))
  {
    throw ParameterError("diffraction forcing needs dt > 0 and duration > 0");
  }
  if (!(quiet > 0.0 && quiet < 1.0))
  {
    throw ParameterError(fmt::format("forcing quiet level {} outside (0, 1)", quiet));
  }
  DiffractionForcing out;
  out.half_dt = 0.5 * dt;
  const auto &bq = d.wetted();
  const auto &l = d.wetted_load();

  // Body rows of the load matrix only.
  std::vector<int> row(static_cast<std::size_t>(l.rows()), -1);
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < l.outerSize(); ++i)
  {
    for (SparseMatrix::InnerIterator it(l, i); it; ++it)
    {
      if (row[i] < 0)
      {
        row[i] = static_cast<int>(out.dofs.size());
        out.dofs.push_back(static_cast<int>(i));
      }
      t.emplace_back(row[i], static_cast<int>(it.col()), it.value());
    }
  }
  Eigen::SparseMatrix<double> lc(static_cast<Eigen::Index>(out.dofs.size()), l.cols());
  lc.setFromTriplets(t.begin(), t.end());
  const long tail = static_cast<long>(std::ceil(duration / out.half_dt)) + 2;
  if (bq.NumPoints() == 0)
  {
    out.load = Eigen::MatrixXd::Zero(lc.rows(), tail);
    return out;
  }

  symmetry::ForcingRequest req;
  req.env = env;
  req.impulse = &impulse;
  req.cfg = cfg;
  req.label = label;
  req.beta = beta;
  req.dt = out.half_dt;
  // Widen the lead (in whole steps) until the load is quiet at its start.
  long lead = std::max<long>(1, std::lround(std::ceil(impulse.t0() / dt)));
  for (int attempt = 0;; ++attempt)
  {
    req.t_start = -lead * dt;
    req.num_samples = static_cast<int>(tail + 2 * lead);
    out.load = Eigen::MatrixXd::Zero(lc.rows(), req.num_samples);
    symmetry::BodyForcing(req, bq.points, bq.normals,
                          [&](Eigen::Index first, const Eigen::MatrixXd &block) {
                            out.load += lc.middleCols(first, block.rows()) * block;
                          });
    const Eigen::VectorXd level = out.load.cwiseAbs().colwise().maxCoeff();
    const double peak = level.maxCoeff();
    long first = 0;
    while (first < level.size() && level(first) <= quiet * peak)
    {
      ++first;
    }
    if (first >= 4 || peak == 0.0)
    {
      // Trim to two quiet samples before the first loud one, on the dt grid.
      const long drop = std::max<long>(0, (first - 2) / 2);
      out.t_start = -(lead - drop) * dt;
      out.load = out.load.rightCols(out.load.cols() - 2 * drop).eval();
      return out;
    }
    if (attempt == 8)
    {
      throw ParameterError(fmt::format(
          "diffraction forcing still above {:.1e} of peak {:.4g} s before t = 0", quiet, lead * dt));
    }
    lead *= 2;
  }
}

BodyRecord RunDiffraction(SurfaceSolver &solver, const DiffractionForcing &forcing,
                          const std::map<int, Eigen::VectorXd> &force_loads, const RunOptions &opt)
{
  auto load = [&](double, long h, Eigen::VectorXd &b) {
    if (h < 0 || h >= forcing.samples())
    {
      return;
    }
    for (std::size_t i = 0; i < forcing.dofs.size(); ++i)
    {
      b(forcing.dofs[i]) = forcing.load(static_cast<Eigen::Index>(i), h);
    }
  };
  if (std::abs(2.0 * forcing.half_dt - opt.grid.dt) > 1e-12 * opt.grid.dt)
  {
    throw ParameterError(fmt::format("forcing built for dt = {} but the run uses dt = {}",
                                     2.0 * forcing.half_dt, opt.grid.dt));
  }
  RunOptions shifted = opt;
  const long lead = std::lround(-forcing.t_start / opt.grid.dt);
  shifted.t_start = forcing.t_start;
  shifted.grid.steps += static_cast<int>(lead);
  shifted.cap = opt.cap - forcing.t_start;
  return Integrate(solver, load, force_loads, shifted);
}

std::map<int, double> SolveInfiniteFrequency(const Discretization &d, const waves::Environment &env,
                                             const Eigen::VectorXd &mode_load,
                                             const std::map<int, Eigen::VectorXd> &force_loads,
                                             bool theta_x, bool theta_y, double multiplier,
                                             const linalg::SolverConfig &cfg)
{
  const auto &dofs = d.dofs();
  std::vector<int> constrained = d.fs().dofs;
  const std::pair<bool, BoundaryTag> planes[] = {{theta_x, BoundaryTag::SymX()},
                                                 {theta_y, BoundaryTag::SymY()}};
  for (const auto &[neumann, tag] : planes)
  {
    if (!neumann && d.mesh().HasTag(tag))
    {
      const auto nodes = dofs.Nodes(tag);
      constrained.insert(constrained.end(), nodes.begin(), nodes.end());
    }
  }
  const assembly::DirichletSystem sys(d.stiffness(), constrained);
  Eigen::VectorXd phi;
  linalg::PcgSolver(sys.matrix(), cfg)
      .Solve(sys.Rhs(mode_load, Eigen::VectorXd::Zero(
                                    static_cast<Eigen::Index>(sys.constrained().size()))),
             phi);
  std::map<int, double> out;
  for (const auto &[j, r] : force_loads)
  {
    out[j] = env.rho * multiplier * r.dot(phi);
  }
  return out;
}

}  // namespace hydrosem::sim
