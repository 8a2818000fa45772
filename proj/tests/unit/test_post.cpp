// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hydrosem/error.hpp"
#include "hydrosem/post/coefficients.hpp"
#include "hydrosem/post/io.hpp"
#include "hydrosem/post/nondim.hpp"
#include "hydrosem/post/spectral.hpp"
#include "hydrosem/waves/incident.hpp"
#include "meshgen/desk_meshes.hpp"

using namespace hydrosem;
using namespace hydrosem::post;

namespace
{

std::vector<double> Sample(double t0, double dt, int n, const std::function<double(double)> &f)
{
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    v[i] = f(t0 + i * dt);
  }
  return v;
}

// Direct DTFT, the oracle for the padded-FFT interpolation.
Complex Dtft(const std::vector<double> &f, double dt, double t0, double w)
{
  Complex s = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n)
  {
    s += f[n] * std::polar(1.0, -w * (t0 + n * dt));
  }
  return s * dt;
}

sim::BodyRecord Record(double dt, int steps, double t_start = 0.0)
{
  sim::BodyRecord r;
  r.dt = dt;
  r.t_start = t_start;
  r.energy.assign(static_cast<std::size_t>(steps + 1), 0.0);
  return r;
}

}  // namespace

TEST(Fd4, PolynomialsAreExact)
{
  for (double dt : {0.37, 0.01, 1.3})
  {
    const auto f = Sample(-1.0, dt, 12, [](double t) { return t * t; });
    const auto d = Fd4Derivative(f, dt);
    for (int i = 0; i < 12; ++i)
    {
      EXPECT_NEAR(d[i], 2.0 * (-1.0 + i * dt), 1e-12) << dt << " " << i;
    }
    const auto q = Fd4Derivative(Sample(0.2, dt, 9, [](double t) { return t * t * t * t - t; }), dt);
    for (int i = 0; i < 9; ++i)
    {
      const double t = 0.2 + i * dt;
      EXPECT_NEAR(q[i], 4 * t * t * t - 1, 1e-10 * (1 + std::abs(4 * t * t * t)));
    }
  }
  for (double v : Fd4Derivative(std::vector<double>(7, 3.5), 0.1))
  {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(Fd4, SineAgainstCosine)
{
  const double dt = 0.01;
  const auto f = Sample(0.0, dt, 700, [](double t) { return std::sin(t); });
  const auto d = Fd4Derivative(f, dt);
  double err = 0.0;
  for (int i = 0; i < 700; ++i)
  {
    err = std::max(err, std::abs(d[i] - std::cos(i * dt)));
  }
  EXPECT_LT(err, 1e-8);
}

TEST(Fd4, ShortSeriesRejected)
{
  EXPECT_THROW(Fd4Derivative({1, 2, 3, 4}, 0.1), ParameterError);
  EXPECT_THROW(Fd4Derivative({1, 2, 3, 4, 5}, 0.0), ParameterError);
}

TEST(Spectrum, UnitPulseIsFlat)
{
  std::vector<double> f(50, 0.0);
  f[0] = 1.0;
  const std::vector<double> w{0.0, 0.3, 1.7, 11.0, 40.0};
  const auto s = ComputeSpectrum(f, 0.05, 0.0, w);
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
  {
    EXPECT_NEAR(std::abs(s.values(i) - 0.05), 0.0, 1e-14);
  }
}

TEST(Spectrum, InterpolationMatchesDirectSum)
{
  const double dt = 0.07;
  const auto f = Sample(-0.4, dt, 137, [](double t) { return std::exp(-0.3 * t) * std::sin(2.1 * t) + 0.1; });
  std::vector<double> w;
  for (int i = 0; i < 40; ++i)
  {
    w.push_back(0.013 + 0.731 * i);
  }
  // On-bin frequencies of the padded grid too.
  w.push_back(2.0 * std::numbers::pi * 3.0 / (2048 * dt));
  const auto s = ComputeSpectrum(f, dt, -0.4, w);
  for (std::size_t i = 0; i < w.size(); ++i)
  {
    const Complex ref = Dtft(f, dt, -0.4, w[i]);
    EXPECT_LT(std::abs(s.values(i) - ref), 1e-11 * std::max(1.0, std::abs(ref))) << w[i];
  }
  EXPECT_FALSE(s.decayed);
}

TEST(Spectrum, SampledGaussianMatchesAnalyticTransform)
{
  for (double sw : {0.4, 1.0})
  {
    const waves::PseudoImpulse pi(sw);
    const double dt = 0.01 / sw;
    const int n = static_cast<int>(std::ceil(2.0 * pi.t0() / dt)) + 1;
    const auto g = Sample(0.0, dt, n, [&](double t) { return pi.Value(t); });
    const auto band = waves::OmegaLimit(pi, waves::ForcingKind::Elevation);
    const auto w = OmegaGrid(band, 200);
    const auto s = ComputeSpectrum(g, dt, 0.0, w);
    EXPECT_TRUE(s.decayed);
    for (std::size_t i = 0; i < w.size(); ++i)
    {
      const Complex ref = pi.Spectrum(w[i]);
      EXPECT_LT(std::abs(s.values(i) - ref), 1e-6 * std::abs(ref)) << sw << " " << w[i];
    }
  }
}

TEST(Spectrum, LinearAndShiftCovariant)
{
  const double dt = 0.1;
  const auto f = Sample(0, dt, 64, [](double t) { return std::exp(-(t - 3) * (t - 3)); });
  const auto g = Sample(0, dt, 64, [](double t) { return std::sin(t) * std::exp(-t); });
  std::vector<double> h(64);
  for (int i = 0; i < 64; ++i)
  {
    h[i] = 2.5 * f[i] - 0.75 * g[i];
  }
  const std::vector<double> w{0.1, 0.9, 2.2, 5.0};
  const auto sf = ComputeSpectrum(f, dt, 0.0, w).values;
  const auto sg = ComputeSpectrum(g, dt, 0.0, w).values;
  const auto sh = ComputeSpectrum(h, dt, 0.0, w).values;
  EXPECT_LT((sh - (2.5 * sf - 0.75 * sg)).norm(), 1e-14 * sh.norm());
  const auto shifted = ComputeSpectrum(f, dt, -1.3, w).values;
  for (std::size_t i = 0; i < w.size(); ++i)
  {
    EXPECT_LT(std::abs(shifted(i) - sf(i) * std::polar(1.0, 1.3 * w[i])), 1e-14);
  }
}

TEST(Spectrum, ExplicitTimesMustBeUniform)
{
  std::vector<double> t{0.0, 0.1, 0.2, 0.31, 0.4};
  std::vector<double> f{0, 1, 0, 0, 0};
  EXPECT_THROW(ComputeSpectrum(t, f, {1.0}), ParameterError);
  t[3] = 0.3;
  const auto s = ComputeSpectrum(t, f, {1.0});
  EXPECT_LT(std::abs(s.values(0) - 0.1 * std::polar(1.0, -0.1)), 1e-15);
  EXPECT_THROW(ComputeSpectrum(f, 0.1, 0.0, {1.0}, {1.5, 1e-3}), ParameterError);
}

TEST(Spectrum, TaperLeavesInteriorAlone)
{
  std::vector<double> ones(101, 1.0);
  std::vector<double> f(101, 0.0);
  f[50] = 1.0;
  const auto a = ComputeSpectrum(f, 0.1, 0.0, {0.7}, {0.2, 1e-3});
  EXPECT_LT(std::abs(a.values(0) - Dtft(f, 0.1, 0.0, 0.7)), 1e-15);
  // Tapered ends pull the edge samples to zero.
  const auto b = ComputeSpectrum(ones, 0.1, 0.0, {0.0}, {1.0, 1e-3});
  EXPECT_NEAR(b.values(0).real(), 0.1 * 50.0, 1e-12);
}

TEST(OmegaGrid, SpansTheBandWithoutZero)
{
  const auto w = OmegaGrid({0.0, 4.0}, 400);
  ASSERT_EQ(w.size(), 400u);
  EXPECT_DOUBLE_EQ(w.front(), 0.01);
  EXPECT_DOUBLE_EQ(w.back(), 4.0);
  const auto v = OmegaGrid({1.0, 3.0}, 5);
  EXPECT_DOUBLE_EQ(v.front(), 1.0);
  EXPECT_DOUBLE_EQ(v[2], 2.0);
  EXPECT_THROW(OmegaGrid({2.0, 1.0}, 5), ParameterError);
}

TEST(Coefficients, InversionIdentity)
{
  const std::vector<double> w{0.5, 1.0, 2.0, 4.0};
  std::vector<Complex> ratio;
  for (double v : w)
  {
    ratio.emplace_back(2.0 * v * v, -3.0 * v);
  }
  std::vector<double> a, b;
  AddedMassDamping(ratio, w, a, b);
  for (std::size_t i = 0; i < w.size(); ++i)
  {
    EXPECT_NEAR(a[i], 2.0, 1e-15);
    EXPECT_NEAR(b[i], 3.0, 1e-15);
  }
  EXPECT_THROW(AddedMassDamping(ratio, {0.0, 1.0, 2.0, 4.0}, a, b), ParameterError);
}

TEST(Coefficients, PipelineRecoversConstants)
{
  // Force F = -a0 x'' - b0 x' has spectrum (w^2 a0 - i w b0) x^.
  const double a0 = 2.0, b0 = 3.0, rho = 1000.0;
  const waves::PseudoImpulse pi(1.0);
  // FD4 transfer error (w dt)^4 / 30 stays below 1e-9 at the band top.
  const double dt = 0.001;
  // Window [-t0, 3 t0] so both ends sit at eps^4.
  const int steps = static_cast<int>(std::ceil(4.0 * pi.t0() / dt));
  auto rec = Record(dt, steps, -std::round(pi.t0() / dt) * dt);
  for (int scale : {1, 10})
  {
    // m with F = -rho dm/dt: m = (a0 x' + b0 x) / rho, x = scale g.
    rec.moments[3] = Sample(rec.t_start, dt, steps + 1, [&](double t) {
      return scale * (a0 * pi.Velocity(t) + b0 * pi.Value(t)) / rho;
    });
    HydroResult r;
    r.omega = OmegaGrid(waves::OmegaLimit(pi, waves::ForcingKind::Velocity), 100);
    waves::Environment env;
    env.rho = rho;
    RadiationCoefficients(rec, 3, pi, env, 1.0, r);
    for (std::size_t i = 0; i < r.omega.size(); ++i)
    {
      EXPECT_NEAR(r.a.at({3, 3})[i], scale * a0, 1e-8 * scale) << r.omega[i];
      EXPECT_NEAR(r.b.at({3, 3})[i], scale * b0, 1e-8 * scale) << r.omega[i];
    }
  }
}

TEST(Coefficients, ForceSeriesIdentity)
{
  const double a0 = -1.5, b0 = 0.25;
  const waves::PseudoImpulse pi(0.4);
  const double dt = 0.01;
  const double t_start = -pi.t0();
  const int n = static_cast<int>(std::ceil(4.0 * pi.t0() / dt)) + 1;
  const auto x = Sample(t_start, dt, n, [&](double t) { return pi.Value(t); });
  const auto f = Sample(t_start, dt, n, [&](double t) {
    return -a0 * pi.Acceleration(t) - b0 * pi.Velocity(t);
  });
  const auto w = OmegaGrid(waves::OmegaLimit(pi, waves::ForcingKind::Velocity), 150);
  const auto xs = ComputeSpectrum(x, dt, t_start, w);
  const auto fs = ComputeSpectrum(f, dt, t_start, w);
  double peak = 0.0;
  for (double v : x)
  {
    peak += dt * v;
  }
  std::vector<double> a, b;
  AddedMassDamping(TransferRatio(fs.values, xs.values, w, peak), w, a, b);
  for (std::size_t i = 0; i < w.size(); ++i)
  {
    EXPECT_NEAR(a[i], a0, 1e-8) << w[i];
    EXPECT_NEAR(b[i], b0, 1e-8) << w[i];
  }
}

TEST(Coefficients, RatioIsInvariantToMotionScale)
{
  const waves::PseudoImpulse pi(1.0);
  const auto rec = Record(0.01, 600);
  const std::vector<double> w{1.0, 2.0, 5.0};
  const auto x = MotionSpectrum(pi, rec, w).values;
  const Eigen::VectorXcd f = x.cwiseProduct(Eigen::VectorXcd::Constant(3, Complex(4.0, -1.0)));
  const auto r1 = TransferRatio(f, x, w, MotionPeak(pi, rec));
  const auto r10 = TransferRatio(10.0 * f, 10.0 * x, w, 10.0 * MotionPeak(pi, rec));
  for (int i = 0; i < 3; ++i)
  {
    EXPECT_LT(std::abs(r1[i] - Complex(4.0, -1.0)), 1e-12);
    EXPECT_LT(std::abs(r10[i] - r1[i]), 1e-12);
  }
}

TEST(Coefficients, GuardOutsideTheBand)
{
  const waves::PseudoImpulse pi(1.0);
  // Long window: the eps-level ends would otherwise leak above the guard.
  const auto rec = Record(0.01, 800, -2.0);
  const std::vector<double> w{1.0, 60.0};
  const auto x = MotionSpectrum(pi, rec, w).values;
  EXPECT_THROW(TransferRatio(x, x, w, MotionPeak(pi, rec)), DivisionGuardError);
  EXPECT_NEAR(MotionPeak(pi, rec), std::abs(MotionSpectrum(pi, rec, {0.0}).values(0)), 1e-13);
}

TEST(Coefficients, PressureForceSign)
{
  // m = t^2 gives F = -rho mult 2t.
  const auto f = PressureForce(Sample(0, 0.1, 8, [](double t) { return t * t; }), 0.1, 1000.0, 4.0);
  EXPECT_NEAR(f[5], -1000.0 * 4.0 * 2.0 * 0.5, 1e-9);
}

TEST(Coefficients, ScatteredExcitationRecombinesAndNormalizes)
{
  const waves::PseudoImpulse pi(1.0);
  const auto rec = Record(0.01, 600);
  const std::vector<double> w{1.0, 2.0};
  const auto zeta = MotionSpectrum(pi, rec, w).values;
  symmetry::SymmetryConfig cfg{true, true};
  std::map<symmetry::BlockLabel, std::map<int, Eigen::VectorXcd>> blocks;
  blocks[symmetry::BlockLabel::SS][3] = 2.0 * zeta;
  blocks[symmetry::BlockLabel::AS][1] = Complex(0.0, 1.0) * zeta;
  const std::map<int, symmetry::ModeParity> parity{{1, symmetry::RigidParity(1)},
                                                    {3, symmetry::RigidParity(3)}};
  const auto x = ScatteredExcitation(cfg, blocks, parity, pi, rec, w);
  for (int i = 0; i < 2; ++i)
  {
    EXPECT_LT(std::abs(x.at(3)[i] - 8.0), 1e-12);
    EXPECT_LT(std::abs(x.at(1)[i] - Complex(0.0, 4.0)), 1e-12);
  }
  blocks.erase(symmetry::BlockLabel::AS);
  EXPECT_THROW(ScatteredExcitation(cfg, blocks, parity, pi, rec, w), SchedulingError);
}

TEST(FroudeKrylov, LongWaveHeaveIsHydrostatic)
{
  meshgen::FloatingBoxSpec s;
  s.half_length = 0.5;
  s.half_width = 0.5;
  s.draft = 0.5;
  s.depth = 1.5;
  s.extent = 2.0;
  s.cell = 0.5;
  s.far_cell = 0.75;
  const auto mesh = meshgen::FloatingBox(s);
  const sim::Discretization d(mesh, 2);
  waves::Environment env;
  env.depth = 1.5;
  std::map<int, sim::ModeShape> forces{{3, sim::RigidMode(3, Eigen::Vector3d::Zero())}};
  const auto x = FroudeKrylov(d, env, {true, true}, forces, 0.3, {1e-3});
  // Waterplane area 1: rho g A.
  EXPECT_NEAR(x.at(3)[0].real(), env.rho * env.g, 1e-3 * env.rho * env.g);
  EXPECT_NEAR(x.at(3)[0].imag(), 0.0, 1e-3 * env.rho * env.g);
}

TEST(FroudeKrylov, QuarterMatchesFullAndMirrorHeadings)
{
  meshgen::FloatingBoxSpec s;
  s.half_length = 0.5;
  s.half_width = 0.5;
  s.draft = 0.5;
  s.depth = 1.5;
  s.extent = 2.0;
  s.cell = 0.5;
  s.far_cell = 0.75;
  const auto quarter = meshgen::FloatingBox(s);
  s.quarter = false;
  const auto full = meshgen::FloatingBox(s);
  const sim::Discretization dq(quarter, 2), df(full, 2);
  waves::Environment env;
  env.depth = 1.5;
  std::map<int, sim::ModeShape> forces;
  for (int j = 1; j <= 6; ++j)
  {
    forces[j] = sim::RigidMode(j, Eigen::Vector3d::Zero());
  }
  const std::vector<double> w{0.8, 2.0, 4.0};
  const double beta = 150.0 * std::numbers::pi / 180.0;
  const auto xq = FroudeKrylov(dq, env, {true, true}, forces, beta, w);
  const auto xf = FroudeKrylov(df, env, {false, false}, forces, beta, w);
  const auto xm = FroudeKrylov(df, env, {false, false}, forces, -beta, w);
  double scale = 0.0;
  for (const auto &[j, v] : xf)
  {
    for (const auto &c : v)
    {
      scale = std::max(scale, std::abs(c));
    }
  }
  for (int j = 1; j <= 6; ++j)
  {
    for (int i = 0; i < 3; ++i)
    {
      EXPECT_LT(std::abs(xq.at(j)[i] - xf.at(j)[i]), 1e-10 * scale) << j << " " << w[i];
      EXPECT_NEAR(std::abs(xm.at(j)[i]), std::abs(xf.at(j)[i]), 1e-10 * scale) << j;
    }
  }
}

TEST(FroudeKrylov, IncidentPressureAtSurfaceAndBottom)
{
  waves::Environment env;
  env.depth = 2.0;
  Eigen::MatrixXd pts(2, 3);
  pts << 0.3, -0.2, 0.0, 0.3, -0.2, -2.0;
  const double w = 1.7;
  const double k = waves::SolveDispersion(w, env);
  const auto f = waves::IncidentFields(env, w, k, waves::PlaneWavePhase(k, 0.4), pts);
  EXPECT_NEAR(std::abs(f[0].p0), env.rho * env.g, 1e-9 * env.rho * env.g);
  EXPECT_LT(std::abs(f[1].grad[2]), 1e-12);
}

TEST(Nondim, ExponentTables)
{
  EXPECT_EQ(CoefficientExponent(3, 3), 3);
  EXPECT_EQ(CoefficientExponent(1, 2), 3);
  EXPECT_EQ(CoefficientExponent(5, 5), 5);
  EXPECT_EQ(CoefficientExponent(4, 6), 5);
  EXPECT_EQ(CoefficientExponent(1, 5), 4);
  EXPECT_EQ(CoefficientExponent(6, 3), 4);
  EXPECT_EQ(ForceExponent(1), 2);
  EXPECT_EQ(ForceExponent(3), 2);
  EXPECT_EQ(ForceExponent(4), 3);
  EXPECT_EQ(ForceExponent(6), 3);
}

TEST(Nondim, ScalesEveryQuantity)
{
  NondimSpec spec{2.0, 1025.0, 9.81};
  HydroResult r;
  r.omega = {1.0, 2.0};
  r.a[{3, 3}] = {2.0 * 1025.0 * 8.0, 4.0 * 1025.0 * 8.0};
  r.b[{5, 5}] = {1025.0 * 32.0, 1025.0 * 32.0};
  r.a_inf[{1, 5}] = 1025.0 * 16.0;
  r.x_0[4] = {Complex(1025.0 * 9.81 * 8.0, 0.0), Complex(0.0, 1025.0 * 9.81 * 8.0)};
  r.x_s[1] = {Complex(1025.0 * 9.81 * 4.0, 0.0), Complex(0.0, 0.0)};
  const auto n = Nondimensionalize(r, spec);
  EXPECT_NEAR(n.omega[1], 2.0 * std::sqrt(2.0 / 9.81), 1e-15);
  EXPECT_NEAR(n.a.at({3, 3})[0], 2.0, 1e-14);
  EXPECT_NEAR(n.b.at({5, 5})[1], 0.5, 1e-14);
  EXPECT_NEAR(n.a_inf.at({1, 5}), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(n.x_0.at(4)[1] - Complex(0.0, 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(n.x_s.at(1)[0].real(), 1.0, 1e-14);
  EXPECT_THROW(Nondimensionalize(r, {0.0, 1025.0, 9.81}), ParameterError);
}

TEST(Output, CsvIsFullPrecisionAndDeterministic)
{
  HydroResult r;
  r.omega = {0.1, 1.0 / 3.0};
  r.a[{3, 3}] = {1.0 / 7.0, 2.0};
  r.b[{3, 3}] = {0.5, std::sqrt(2.0)};
  r.x_0[3] = {Complex(1.0, 2.0), Complex(3.0, 4.0)};
  r.x_s[3] = {Complex(0.5, 0.25), Complex(0.0, -1.0)};
  const auto csv = HydroCsv(r, 1.0, 9.81);
  EXPECT_EQ(csv, HydroCsv(r, 1.0, 9.81));
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "omega,omega_bar,a33,b33,ReX3,ImX3");
  std::getline(in, row);
  std::istringstream cells(row);
  std::string cell;
  std::vector<double> v;
  while (std::getline(cells, cell, ','))
  {
    v.push_back(std::stod(cell));
  }
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v[2], 1.0 / 7.0);
  EXPECT_EQ(v[4], 1.5);
  EXPECT_EQ(v[5], 2.25);

  const auto ts = TimeSeriesCsv(-0.5, 0.25, {{1, {1.0, 2.0, 3.0}}, {3, {0.1, 0.2, 1.0 / 3.0}}});
  EXPECT_EQ(ts.substr(0, ts.find('\n')), "t,F1,F3");
  EXPECT_NE(ts.find("0.33333333333333331"), std::string::npos);

  std::istringstream jl(HydroJsonLines(r));
  std::string line;
  int count = 0;
  while (std::getline(jl, line))
  {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["omega"].get<double>(), r.omega[count]);
    EXPECT_EQ(j["a"]["3,3"].get<double>(), r.a.at({3, 3})[count]);
    ++count;
  }
  EXPECT_EQ(count, 2);
}
