// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hydrosem/error.hpp"
#include "hydrosem/verify/mms.hpp"
#include "meshgen/desk_meshes.hpp"

using namespace hydrosem;
using namespace hydrosem::verify;

namespace
{

constexpr double kPi = std::numbers::pi;

linalg::SolverConfig Tight()
{
  linalg::SolverConfig c;
  c.rel_tolerance = 1e-12;
  return c;
}

mesh::HybridMesh Shifted(const mesh::HybridMesh &m, const Eigen::Vector3d &d)
{
  auto v = m.Vertices();
  for (auto &p : v)
  {
    for (int i = 0; i < 3; ++i)
    {
      p[i] += d(i);
    }
  }
  auto geo = m.QuadraticGeometry();
  for (auto &nodes : geo)
  {
    for (auto &p : nodes)
    {
      for (int i = 0; i < 3; ++i)
      {
        p[i] += d(i);
      }
    }
  }
  return {v, m.Elements(), m.Facets(), geo};
}

double FdLaplacian(const MmsCase &c, const Eigen::Vector3d &p, double h)
{
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(i) = h;
    s += c.phi(p + e) - 2.0 * c.phi(p) + c.phi(p - e);
  }
  return s / (h * h);
}

}  // namespace

TEST(Mms, ForcingMatchesFiniteDifferences)
{
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const auto &c : {TrigCase(1.0, 1.0, 1.0), BoxCase(2.0, 3.0, 1.0), TrigCase(0.3, 2.0, 1.1)})
  {
    for (int n = 0; n < 20; ++n)
    {
      const Eigen::Vector3d p(u(gen), u(gen), u(gen));
      const double f = c.laplacian(p);
      const double scale = std::max(1.0, std::abs(f));
      EXPECT_LT(std::abs(FdLaplacian(c, p, 1e-3) - f), 1e-6 * scale * 10) << c.name;
      for (int i = 0; i < 3; ++i)
      {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(i) = 1e-6;
        EXPECT_NEAR((c.phi(p + e) - c.phi(p - e)) / 2e-6, c.grad(p)(i), 1e-8);
      }
    }
  }
}

TEST(Mms, SineProductLaplacian)
{
  // cos with a quarter-period shift is the sine product.
  const auto c = TrigCase(1.0, 1.0, 1.0);
  const Eigen::Vector3d p(0.2, -0.7, 0.4);
  EXPECT_NEAR(c.laplacian(p), -3.0 * c.phi(p), 1e-14);
}

TEST(Mms, LinearFieldIsExact)
{
  const auto box = meshgen::BoxFluid(2, 2, 2, 1.0, 1.0, 1.0);
  meshgen::FloatingBoxSpec s;
  s.half_length = 0.5;
  s.half_width = 0.5;
  s.draft = 0.5;
  s.depth = 1.5;
  s.extent = 2.0;
  s.cell = 0.5;
  s.far_cell = 0.75;
  const auto hybrid = meshgen::FloatingBox(s);
  const auto c = LinearCase(1.0, 2.0, -1.0);
  for (int p : {1, 2, 3})
  {
    EXPECT_LE(RunMms(box, p, c, Tight()).error, 1e-9) << p;
    EXPECT_LE(RunMms(hybrid, p, c, Tight()).error, 1e-9) << p;
  }
}

TEST(Mms, ZeroSolutionGivesZeroError)
{
  const auto box = meshgen::BoxFluid(2, 2, 2, 1.0, 1.0, 1.0);
  const auto r = RunMms(box, 2, ZeroCase());
  EXPECT_EQ(r.error, 0.0);
  EXPECT_EQ(r.magnitude, 0.0);
}

TEST(Mms, TranslationInvariance)
{
  const auto box = meshgen::BoxFluid(2, 2, 2, 1.0, 1.0, 1.0);
  const Eigen::Vector3d d(3.25, -1.5, 0.0);
  const auto moved = Shifted(box, d);
  const auto c = TrigCase(2.0, 1.5, 1.0);
  MmsCase cm;
  cm.name = "shifted";
  cm.phi = [&](const Eigen::Vector3d &p) { return c.phi(p - d); };
  cm.grad = [&](const Eigen::Vector3d &p) { return c.grad(p - d); };
  cm.laplacian = [&](const Eigen::Vector3d &p) { return c.laplacian(p - d); };
  const auto a = RunMms(box, 3, c, Tight());
  const auto b = RunMms(moved, 3, cm, Tight());
  EXPECT_GT(a.error, 0.0);
  EXPECT_NEAR(b.error, a.error, 1e-8 * a.error);
}

TEST(Mms, AlgebraicOrderOnCubes)
{
  const auto c = BoxCase(1.0, 1.0, 1.0);
  auto family = [](std::initializer_list<int> ns) {
    std::vector<mesh::HybridMesh> f;
    for (int n : ns)
    {
      f.push_back(meshgen::BoxFluid(n, n, n, 1.0, 1.0, 1.0));
    }
    return f;
  };
  // n = 2 is still pre-asymptotic at P = 1.
  const auto linear = HSweep(family({4, 8, 16}), {1}, c, Tight());
  const auto quadratic = HSweep(family({2, 4, 8}), {2}, c, Tight());
  EXPECT_NEAR(linear.rates.at(0), 2.0, 0.3);
  EXPECT_NEAR(quadratic.rates.at(0), 3.0, 0.3);
  for (const auto &row : quadratic.rows)
  {
    EXPECT_GT(row.error, 0.0);
  }
}

TEST(Mms, PSweepDecaysAndFinerMeshIsBelow)
{
  const auto c = BoxCase(1.0, 1.0, 1.0);
  const auto coarse = PSweep(meshgen::BoxFluid(2, 2, 2, 1.0, 1.0, 1.0), {1, 2, 3, 4, 5}, c, Tight());
  const auto fine = PSweep(meshgen::BoxFluid(3, 3, 3, 1.0, 1.0, 1.0), {1, 2, 3, 4, 5}, c, Tight());
  for (std::size_t i = 0; i < coarse.rows.size(); ++i)
  {
    if (i > 0)
    {
      EXPECT_LT(coarse.rows[i].error, coarse.rows[i - 1].error);
    }
    EXPECT_LT(fine.rows[i].error, coarse.rows[i].error) << i;
  }
}

TEST(Mms, FitRateNeedsThreeLevels)
{
  EXPECT_THROW(HSweep({meshgen::BoxFluid(2, 2, 2, 1.0, 1.0, 1.0), meshgen::BoxFluid(4, 4, 4, 1.0, 1.0, 1.0)},
                      {1}, BoxCase(1.0, 1.0, 1.0)),
               StatisticsError);
  // Exact power law.
  EXPECT_NEAR(FitRate({1.0, 0.5, 0.25, 0.125}, {1.0, 0.125, 1.0 / 64, 1.0 / 512}, 1.0), 3.0, 1e-12);
  // Points at the round-off floor are dropped.
  EXPECT_NEAR(FitRate({1.0, 0.5, 0.25, 0.125}, {1.0, 0.25, 0.0625, 1e-16}, 1.0), 2.0, 1e-12);
  EXPECT_THROW(FitRate({1.0, 0.5, 0.25}, {1.0, 0.25, 1e-15}, 1.0), StatisticsError);
}

TEST(Mms, ReportCsv)
{
  ConvergenceReport rep;
  MmsResult r;
  r.order = 2;
  r.num_elements = 12;
  r.num_dofs = 63;
  r.h = 0.5;
  r.error = 1.0 / 3.0;
  rep.rows.push_back(r);
  std::istringstream in(ReportCsv(rep));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.substr(0, 5), "order");
  EXPECT_NE(row.find("0.33333333333333331"), std::string::npos);
}
