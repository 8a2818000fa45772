// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "hydrosem/error.hpp"
#include "hydrosem/sim/model.hpp"
#include "hydrosem/sim/rk4.hpp"
#include "hydrosem/sim/runs.hpp"
#include "hydrosem/sim/timegrid.hpp"
#include "meshgen/desk_meshes.hpp"

using namespace hydrosem;
using namespace hydrosem::sim;

namespace
{

meshgen::FloatingBoxSpec SmallBox()
{
  meshgen::FloatingBoxSpec s;
  s.half_length = 0.5;
  s.half_width = 0.5;
  s.draft = 0.5;
  s.depth = 1.5;
  s.extent = 2.0;
  s.cell = 0.5;
  s.far_cell = 0.75;
  return s;
}

waves::Environment Env(double depth)
{
  waves::Environment e;
  e.depth = depth;
  return e;
}

// Smooth surface state: phi_fs and eta from the surface coordinates.
Eigen::VectorXd SmoothState(const SurfaceSolver &s, double a_phi, double a_eta)
{
  const auto &xy = s.discretization().fs().xy;
  const int n = s.fs_size();
  Eigen::VectorXd y(2 * n);
  for (int k = 0; k < n; ++k)
  {
    const double r2 = xy(k, 0) * xy(k, 0) + xy(k, 1) * xy(k, 1);
    y(k) = s.active()[k] ? a_phi * std::exp(-r2) : 0.0;
    y(n + k) = s.active()[k] ? a_eta * std::cos(0.8 * xy(k, 0)) * std::cos(0.8 * xy(k, 1)) : 0.0;
  }
  return y;
}

std::map<int, Eigen::VectorXd> RigidLoads(const Discretization &d, std::initializer_list<int> modes)
{
  std::map<int, Eigen::VectorXd> out;
  for (int j : modes)
  {
    out[j] = ModeLoad(d, RigidMode(j, Eigen::Vector3d::Zero()));
  }
  return out;
}

}  // namespace

TEST(TimeGrid, CelerityAndStep)
{
  const auto env = Env(5.0);
  EXPECT_NEAR(env.MaxCelerity(), 7.0036, 1e-4);
  const double dt = 0.5 / std::sqrt(49.05);
  const auto g = ComputeTimeGrid(0.5, env, 1.0, 140 * dt);
  EXPECT_NEAR(g.dt, 0.0714, 1e-4);
  EXPECT_NEAR(g.dt, dt, 1e-15);
  EXPECT_EQ(g.steps, 140);
  const auto h = ComputeTimeGrid(0.5, env, 0.5, 140 * dt);
  EXPECT_NEAR(h.dt, 0.5 * g.dt, 1e-15);
  EXPECT_EQ(h.steps, 2 * g.steps);
  // A duration off the grid is covered, not cut short.
  EXPECT_GE(ComputeTimeGrid(0.5, env, 1.0, 10.0).Duration(), 10.0);
}

TEST(TimeGrid, InvalidInputs)
{
  const auto env = Env(1.0);
  EXPECT_THROW(ComputeTimeGrid(0.5, env, 0.0, 1.0), ParameterError);
  EXPECT_THROW(ComputeTimeGrid(0.5, env, 1.5, 1.0), ParameterError);
  EXPECT_THROW(ComputeTimeGrid(0.5, env, 1.0, 0.0), ParameterError);
  EXPECT_THROW(ComputeTimeGrid(0.5, env, 1.0, -2.0), ParameterError);
}

TEST(TimeGrid, DefaultDurationAndCap)
{
  const waves::PseudoImpulse pi(1.0);
  EXPECT_NEAR(DefaultDuration(pi), 2.0 * pi.t0() + 6.0, 1e-12);
  EXPECT_GT(DurationCap(pi), DefaultDuration(pi));
}

TEST(Rk4, ScalarDecay)
{
  // One RK4 step reproduces the Taylor polynomial of exp(-h) to h^4; the
  // local error against exp(-0.1) = 0.90483742 is h^5/120 to leading order.
  const double y1 = Rk4Step([](double, double y) { return -y; }, 0.0, 1.0, 0.1);
  EXPECT_NEAR(y1, 1 - 0.1 + 0.005 - 0.1 * 0.1 * 0.1 / 6 + 1e-4 / 24, 1e-15);
  EXPECT_NEAR(y1 - std::exp(-0.1), 1e-5 / 120, 2e-9);
}

TEST(Rk4, ObservedOrderOnLinearSystem)
{
  // y'' = -y as a system, integrated to t = 2.
  auto f = [](double, const Eigen::Vector2d &y) { return Eigen::Vector2d(y(1), -y(0)); };
  double err[2];
  for (int r = 0; r < 2; ++r)
  {
    const int n = 20 << r;
    Eigen::Vector2d y(1.0, 0.0);
    for (int i = 0; i < n; ++i)
    {
      y = Rk4Step(f, i * 2.0 / n, y, 2.0 / n);
    }
    err[r] = std::abs(y(0) - std::cos(2.0));
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 4.0, 0.3);
}

TEST(Model, RigidModeShapes)
{
  const auto m = RigidMode(5, Eigen::Vector3d(1.0, 0.0, 0.0));
  // (x - r) x n, second component: dz*nx - dx*nz
  EXPECT_NEAR(m.normal(Eigen::Vector3d(2.0, 0.0, -1.0), Eigen::Vector3d(0.0, 0.0, 1.0)), -1.0, 1e-15);
  EXPECT_NEAR(RigidMode(3, Eigen::Vector3d::Zero()).normal(Eigen::Vector3d::Zero(),
                                                           Eigen::Vector3d(0.1, 0.2, 0.3)),
              0.3, 1e-15);
  EXPECT_THROW(RigidMode(7, Eigen::Vector3d::Zero()), ParameterError);
  EXPECT_EQ(DzMethodFromName("Flux"), DzMethod::Flux);
  EXPECT_EQ(DzMethodFromName(DzMethodName(DzMethod::Collocation)), DzMethod::Collocation);
  EXPECT_THROW(DzMethodFromName("spline"), ParameterError);
}

TEST(Model, HeaveLoadIsWaterplaneFreeOnBottom)
{
  // The heave flux integrates n_z over the wetted box: the bottom (area
  // 0.25 in the quarter) with n_z pointing out of the fluid, into the body.
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  const Eigen::VectorXd l3 = ModeLoad(d, RigidMode(3, Eigen::Vector3d::Zero()));
  EXPECT_NEAR(std::abs(l3.sum()), 0.25, 1e-10);
  const Eigen::VectorXd l1 = ModeLoad(d, RigidMode(1, Eigen::Vector3d::Zero()));
  EXPECT_NEAR(std::abs(l1.sum()), 0.25, 1e-10);
}

TEST(Surface, ZeroStateIsAFixedPoint)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  SurfaceSolver s(d, Env(1.5), {});
  RunOptions opt;
  opt.grid = ComputeTimeGrid(d.MinSpacing(), s.env(), 1.0, 0.5);
  Eigen::VectorXd y;
  const auto rec = Integrate(s, [](double, long, Eigen::VectorXd &) {}, RigidLoads(d, {3}), opt, &y);
  EXPECT_EQ(y.size(), s.state_size());
  EXPECT_EQ(y.norm(), 0.0);
  for (double m : rec.moments.at(3))
  {
    EXPECT_EQ(m, 0.0);
  }
}

TEST(Surface, GravityOffDecouplesSurfaceEquations)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  auto env = Env(1.5);
  env.g = 0.0;
  SurfaceSolver s(d, env, {});
  const Eigen::VectorXd b = ModeLoad(d, RigidMode(3, Eigen::Vector3d::Zero()));
  const Eigen::VectorXd y0 = SmoothState(s, 0.3, 0.0);
  const double dt = 0.05;
  const Eigen::VectorXd y1 =
      Rk4Step([&](double, const Eigen::VectorXd &y) { return s.Rhs(y, b); }, 0.0, y0, dt);
  const int n = s.fs_size();
  EXPECT_LT((y1.head(n) - y0.head(n)).norm(), 1e-14);
  s.Rhs(y0, b);
  const Eigen::VectorXd w = s.SurfaceDz(b);
  EXPECT_LT((y1.tail(n) - dt * w).norm(), 1e-8 * (dt * w).norm());
  EXPECT_GT(w.norm(), 0.0);
}

TEST(Surface, FluxDzOfLinearFieldsOnPlainBox)
{
  // With no body and Neumann walls, phi = z + 1 on a box is reproduced from
  // its surface values only if the bottom flux is supplied; phi = const
  // gives zero vertical velocity.
  const auto mesh = meshgen::BoxFluid(2, 2, 2, 1.0, 1.0, 1.0);
  const Discretization d(mesh, 3);
  SurfaceOptions opt;
  opt.solver.rel_tolerance = 1e-13;
  SurfaceSolver s(d, Env(1.0), opt);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(s.state_size());
  y.head(s.fs_size()).setConstant(2.0);
  s.Rhs(y, Eigen::VectorXd::Zero(d.dofs().num_dofs));
  EXPECT_LT(s.SurfaceDz(Eigen::VectorXd::Zero(d.dofs().num_dofs)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(s.phi_volume().minCoeff(), 2.0, 1e-9);
}

TEST(Surface, PressureDampingTrivialCases)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  SurfaceSolver plain(d, Env(1.5), {});
  const Eigen::VectorXd y = SmoothState(plain, 1.0, 0.0);
  EXPECT_EQ(plain.PressureDamping(y.head(plain.fs_size())).norm(), 0.0);

  SurfaceOptions opt;
  opt.zones.push_back({waves::DampingZone::Axis::Radial, 1.2, 2.0, 2.0});
  SurfaceSolver damped(d, Env(1.5), opt);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(damped.fs_size());
  EXPECT_LT(damped.PressureDamping(ones).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::VectorXd p = damped.PressureDamping(y.head(damped.fs_size()));
  EXPECT_GT(p.norm(), 0.0);
  for (int k = 0; k < damped.fs_size(); ++k)
  {
    if (damped.damping()(k) == 0.0)
    {
      EXPECT_EQ(p(k), 0.0);
    }
  }
}

TEST(Surface, EnergyConservedWithoutDamping)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 3);
  SurfaceSolver s(d, Env(1.5), {});
  RunOptions opt;
  opt.grid = ComputeTimeGrid(d.MinSpacing(), s.env(), 1.0, 3.0);
  Eigen::VectorXd y = SmoothState(s, 0.0, 0.05);
  const auto rec = Integrate(s, [](double, long, Eigen::VectorXd &) {}, {}, opt, &y);
  const double e0 = rec.energy.front();
  ASSERT_GT(e0, 0.0);
  for (double e : rec.energy)
  {
    EXPECT_NEAR(e / e0, 1.0, 1e-3);
  }
}

TEST(Surface, TemporalOrderFour)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  const Eigen::VectorXd l3 = ModeLoad(d, RigidMode(3, Eigen::Vector3d::Zero()));
  const auto load = [&](double t, long, Eigen::VectorXd &b) { b = std::sin(3.0 * t) * l3; };
  const double dt0 = 0.8 * d.MinSpacing() / Env(1.5).MaxCelerity();
  auto run = [&](int refine) {
    SurfaceSolver s(d, Env(1.5), {});
    RunOptions opt;
    opt.grid.dt = dt0 / refine;
    opt.grid.steps = 16 * refine;
    Eigen::VectorXd y = SmoothState(s, 0.0, 0.02);
    Integrate(s, load, {}, opt, &y);
    return y;
  };
  const Eigen::VectorXd ref = run(8);
  const double e1 = (run(1) - ref).norm();
  const double e2 = (run(2) - ref).norm();
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

TEST(Radiation, ZeroModeGivesZeroRecord)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  SurfaceSolver s(d, Env(1.5), {});
  const waves::PseudoImpulse pi(1.0);
  RunOptions opt;
  opt.grid = ComputeTimeGrid(d.MinSpacing(), s.env(), 1.0, 2.0);
  const auto rec = RunRadiation(s, Eigen::VectorXd::Zero(d.dofs().num_dofs), pi,
                                RigidLoads(d, {1, 3}), opt);
  EXPECT_EQ(rec.steps(), opt.grid.steps);
  for (const auto &[j, m] : rec.moments)
  {
    for (double v : m)
    {
      EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Radiation, LongerRunLeavesEarlyRecordUnchanged)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  const waves::PseudoImpulse pi(1.0);
  const auto loads = RigidLoads(d, {3});
  auto run = [&](double t) {
    SurfaceSolver s(d, Env(1.5), {});
    RunOptions opt;
    opt.grid = ComputeTimeGrid(d.MinSpacing(), s.env(), 1.0, t);
    return RunRadiation(s, loads.at(3), pi, loads, opt);
  };
  const auto a = run(2.0);
  const auto b = run(4.0);
  ASSERT_GT(b.steps(), a.steps());
  double peak = 0.0;
  for (double v : b.moments.at(3))
  {
    peak = std::max(peak, std::abs(v));
  }
  ASSERT_GT(peak, 0.0);
  for (int n = 0; n <= a.steps(); ++n)
  {
    EXPECT_NEAR(a.moments.at(3)[n], b.moments.at(3)[n], 1e-8 * peak) << n;
  }
  // Nothing happens before the Gaussian rises: the record stays within a
  // small multiple of the body velocity relative to their peaks.
  double vpeak = 0.0;
  for (int n = 0; n <= b.steps(); ++n)
  {
    vpeak = std::max(vpeak, std::abs(pi.Velocity(n * b.dt)));
  }
  for (int n = 0; n * b.dt < pi.t0(); ++n)
  {
    const double level = std::abs(pi.Velocity(n * b.dt)) / vpeak;
    if (level < 1e-6)
    {
      EXPECT_LT(std::abs(b.moments.at(3)[n]), 1e-5 * peak) << n;
    }
  }
}

TEST(Radiation, SurgeDoesNotDriveHeaveOnFullHemisphere)
{
  meshgen::SphereSpec spec;
  spec.radius = 1.0;
  spec.depth = 2.0;
  spec.extent = 3.0;
  spec.cell = 0.5;
  spec.far_cell = 1.0;
  spec.blend_outer = 2.0;
  const auto mesh = meshgen::MirrorQuarter(meshgen::Sphere(spec));
  const Discretization d(mesh, 2);
  SurfaceSolver s(d, Env(2.0), {});
  const waves::PseudoImpulse pi(1.0);
  const auto loads = RigidLoads(d, {1, 3});
  RunOptions opt;
  opt.grid = ComputeTimeGrid(d.MinSpacing(), s.env(), 1.0, 2.5);
  const auto rec = RunRadiation(s, loads.at(1), pi, loads, opt);
  double f11 = 0.0, f31 = 0.0;
  for (int n = 0; n <= rec.steps(); ++n)
  {
    f11 = std::max(f11, std::abs(rec.moments.at(1)[n]));
    f31 = std::max(f31, std::abs(rec.moments.at(3)[n]));
  }
  ASSERT_GT(f11, 0.0);
  EXPECT_LT(f31, 1e-6 * f11);
}

TEST(InfiniteFrequency, AddedMassIsSymmetric)
{
  auto spec = SmallBox();
  spec.quarter = false;
  const auto mesh = meshgen::FloatingBox(spec);
  const Discretization d(mesh, 2);
  const Eigen::Vector3d ref(0.0, 0.0, 0.0);
  std::map<int, Eigen::VectorXd> loads;
  for (int j = 1; j <= 6; ++j)
  {
    loads[j] = ModeLoad(d, RigidMode(j, ref));
  }
  linalg::SolverConfig cfg;
  cfg.rel_tolerance = 1e-12;
  Eigen::Matrix<double, 6, 6> a;
  for (int k = 1; k <= 6; ++k)
  {
    const auto col = SolveInfiniteFrequency(d, Env(1.5), loads.at(k), loads, true, true, 1.0, cfg);
    for (int j = 1; j <= 6; ++j)
    {
      a(j - 1, k - 1) = col.at(j);
    }
  }
  const double scale = a.cwiseAbs().maxCoeff();
  EXPECT_LT((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-6 * scale);
  for (int k = 0; k < 6; ++k)
  {
    EXPECT_GT(a(k, k), 0.0) << k;
  }
}

TEST(InfiniteFrequency, QuarterWithPlanesMatchesFullMesh)
{
  auto spec = SmallBox();
  const auto quarter = meshgen::FloatingBox(spec);
  spec.quarter = false;
  const auto full = meshgen::FloatingBox(spec);
  const Discretization dq(quarter, 2), df(full, 2);
  const auto lq = ModeLoad(dq, RigidMode(3, Eigen::Vector3d::Zero()));
  const auto lf = ModeLoad(df, RigidMode(3, Eigen::Vector3d::Zero()));
  linalg::SolverConfig cfg;
  cfg.rel_tolerance = 1e-12;
  const double aq = SolveInfiniteFrequency(dq, Env(1.5), lq, {{3, lq}}, true, true, 4.0, cfg).at(3);
  const double af = SolveInfiniteFrequency(df, Env(1.5), lf, {{3, lf}}, true, true, 1.0, cfg).at(3);
  EXPECT_NEAR(aq, af, 1e-8 * af);
}

TEST(InfiniteFrequency, MoonpoolPistonIsRegular)
{
  auto spec = SmallBox();
  spec.half_length = 1.0;
  spec.half_width = 1.0;
  spec.extent = 2.5;
  spec.chamber_half_length = 0.5;
  spec.chamber_half_width = 0.5;
  const auto mesh = meshgen::FloatingBox(spec);
  const Discretization d(mesh, 2);
  ModeShape piston;
  piston.index = 7;
  piston.tags = {BoundaryTag::Special(1)};
  piston.normal = [](const Eigen::Vector3d &, const Eigen::Vector3d &n) { return n.z(); };
  const auto l7 = ModeLoad(d, piston);
  EXPECT_GT(l7.norm(), 0.0);
  const auto a = SolveInfiniteFrequency(d, Env(1.5), l7, {{7, l7}}, true, true, 4.0);
  EXPECT_TRUE(std::isfinite(a.at(7)));
  EXPECT_GT(a.at(7), 0.0);
}

TEST(Diffraction, ForcingCoversRequestedSpan)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  const waves::PseudoImpulse pi(1.0);
  symmetry::SymmetryConfig cfg{true, true};
  const double dt = 0.05;
  const auto f = BuildDiffractionForcing(d, Env(1.5), pi, cfg, symmetry::BlockLabel::SS, 0.0, dt, 4.0);
  EXPECT_DOUBLE_EQ(f.half_dt, 0.025);
  EXPECT_LE(f.t_start, 0.0);
  EXPECT_NEAR(f.t_start / dt, std::round(f.t_start / dt), 1e-9);
  EXPECT_GE(f.t_start + (f.samples() - 1) * f.half_dt, 4.0);
  EXPECT_EQ(static_cast<Eigen::Index>(f.dofs.size()), f.load.rows());
  // Quiet at the start of the run, including the lead.
  const double peak = f.load.cwiseAbs().maxCoeff();
  ASSERT_GT(peak, 0.0);
  EXPECT_LT(f.load.col(0).cwiseAbs().maxCoeff(), 1e-6 * peak);
  EXPECT_LT(f.load.col(1).cwiseAbs().maxCoeff(), 1e-6 * peak);
  const auto g = BuildDiffractionForcing(d, Env(1.5), pi, cfg, symmetry::BlockLabel::SS,
                                         2.0 * M_PI, dt, 4.0);
  ASSERT_EQ(g.samples(), f.samples());
  EXPECT_EQ((f.load - g.load).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Diffraction, RunStartsAtTheLeadAndRejectsMismatchedStep)
{
  const auto mesh = meshgen::FloatingBox(SmallBox());
  const Discretization d(mesh, 2);
  const waves::PseudoImpulse pi(1.0);
  SurfaceSolver s(d, Env(1.5), {});
  RunOptions opt;
  opt.grid = ComputeTimeGrid(d.MinSpacing(), s.env(), 1.0, 3.0);
  const auto f = BuildDiffractionForcing(d, s.env(), pi, {true, true}, symmetry::BlockLabel::SS,
                                         0.0, opt.grid.dt, opt.grid.Duration());
  const auto rec = RunDiffraction(s, f, RigidLoads(d, {1, 3}), opt);
  EXPECT_DOUBLE_EQ(rec.t_start, f.t_start);
  EXPECT_NEAR(rec.t_start + rec.steps() * rec.dt, opt.grid.Duration(), 1e-9);
  double peak3 = 0.0;
  for (double v : rec.moments.at(3))
  {
    peak3 = std::max(peak3, std::abs(v));
  }
  EXPECT_GT(peak3, 0.0);
  EXPECT_LT(std::abs(rec.moments.at(3).front()), 1e-6 * peak3);
  RunOptions other = opt;
  other.grid.dt *= 0.5;
  EXPECT_THROW(RunDiffraction(s, f, {}, other), ParameterError);
}
