// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "hydrosem/assembly/dofmap.hpp"
#include "hydrosem/assembly/operators.hpp"
#include "hydrosem/error.hpp"
#include "hydrosem/refelem/element_map.hpp"
#include "hydrosem/refelem/reference_element.hpp"
#include "hydrosem/verify/mms.hpp"
#include "meshgen/desk_meshes.hpp"

using namespace hydrosem;
using namespace hydrosem::assembly;
using mesh::Element;
using mesh::Shape;
using mesh::Vec3;

namespace
{

std::vector<mesh::BoundaryFacet> TagAll(int element, int faces, BoundaryTag tag)
{
  std::vector<mesh::BoundaryFacet> out;
  for (int f = 0; f < faces; ++f)
  {
    out.push_back({element, f, tag});
  }
  return out;
}

HybridMesh SingleTet()
{
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  Element e;
  e.shape = Shape::Tet;
  e.v = {0, 1, 2, 3, -1, -1};
  return HybridMesh(v, {e}, TagAll(0, 4, BoundaryTag::Body()));
}

// Two tets sharing the face (1,2,3).
HybridMesh TwoTets()
{
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  std::vector<Element> els(2);
  els[0].v = {0, 1, 2, 3, -1, -1};
  els[1].v = {1, 2, 3, 4, -1, -1};
  for (auto &e : els)
  {
    mesh::NormalizeOrientation(v, e, nullptr);
  }
  // Face (1,2,3) is local face 2 of the first tet; find it in the second.
  std::vector<mesh::BoundaryFacet> facets;
  for (int e = 0; e < 2; ++e)
  {
    for (int f = 0; f < 4; ++f)
    {
      auto fv = mesh::FaceVertices(Shape::Tet, f);
      std::vector<int> g;
      for (int i : fv)
      {
        g.push_back(els[e].v[i]);
      }
      std::sort(g.begin(), g.end());
      if (g != std::vector<int>{1, 2, 3})
      {
        facets.push_back({e, f, BoundaryTag::Body()});
      }
    }
  }
  return HybridMesh(v, els, facets);
}

double Volume(const HybridMesh &m)
{
  double vol = 0.0;
  for (const auto &e : m.Elements())
  {
    vol += mesh::SignedVolume(m.Vertices(), e);
  }
  return vol;
}

HybridMesh ReversedElements(const HybridMesh &m)
{
  const int n = m.NumElements();
  std::vector<Element> els(m.Elements().rbegin(), m.Elements().rend());
  std::vector<mesh::BoundaryFacet> facets = m.Facets();
  for (auto &f : facets)
  {
    f.element = n - 1 - f.element;
  }
  return HybridMesh(m.Vertices(), els, facets);
}

}  // namespace

TEST(DofMap, SingleTetCountsMatchPolynomialSpace)
{
  const auto m = SingleTet();
  for (int p = 1; p <= 6; ++p)
  {
    EXPECT_EQ(BuildDofMap(m, p).num_dofs, (p + 1) * (p + 2) * (p + 3) / 6) << "P=" << p;
  }
}

TEST(DofMap, SharedFaceNodesAreMerged)
{
  const auto m = TwoTets();
  EXPECT_EQ(BuildDofMap(m, 1).num_dofs, 5);
  EXPECT_EQ(BuildDofMap(m, 2).num_dofs, 14);
  EXPECT_EQ(BuildDofMap(m, 3).num_dofs, 30);
}

TEST(DofMap, BoxCountsAndFreeSurfaceNodes)
{
  const auto m = meshgen::BoxFluid(2, 3, 2, 1.0, 1.5, 1.0);
  for (int p = 1; p <= 4; ++p)
  {
    const auto d = BuildDofMap(m, p);
    EXPECT_EQ(d.num_dofs, (2 * p + 1) * (3 * p + 1) * (2 * p + 1));
    EXPECT_EQ(static_cast<int>(d.Nodes(BoundaryTag::FreeSurface()).size()),
              (2 * p + 1) * (3 * p + 1));
    for (int i : d.Nodes(BoundaryTag::FreeSurface()))
    {
      EXPECT_NEAR(d.coords(i, 2), 0.0, 1e-14);
    }
  }
}

TEST(DofMap, GlobalNodesCoincideAcrossElements)
{
  const auto m = meshgen::BoxFluid(2, 2, 3, 1.0, 1.0, 1.0);
  const auto d = BuildDofMap(m, 3);
  for (int e = 0; e < m.NumElements(); ++e)
  {
    const auto &ref = refelem::GetReference(m.Elements()[e].shape, 3);
    const Eigen::MatrixXd x =
        refelem::NodeCoordinates(ref, refelem::ElementGeometry(m, e));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
    {
      EXPECT_LT((x.row(i) - d.coords.row(d.l2g[e][i])).norm(), 1e-12);
    }
  }
}

TEST(Assembly, StiffnessIsSymmetricWithConstantNullSpace)
{
  const auto m = meshgen::BoxFluid(2, 2, 3, 1.0, 1.0, 1.0);
  for (int p = 1; p <= 4; ++p)
  {
    const auto d = BuildDofMap(m, p);
    const SparseMatrix a = AssembleStiffness(m, d);
    const SparseMatrix at = a.transpose();
    EXPECT_LT((a - at).norm(), 1e-12 * a.norm());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d.num_dofs);
    EXPECT_LT((a * ones).lpNorm<Eigen::Infinity>(), 1e-11);
  }
}

TEST(Assembly, LinearFieldEnergyEqualsVolume)
{
  const auto m = meshgen::BoxFluid(2, 2, 3, 2.0, 1.0, 1.5);
  for (int p = 1; p <= 4; ++p)
  {
    const auto d = BuildDofMap(m, p);
    const SparseMatrix a = AssembleStiffness(m, d);
    const SparseMatrix mm = AssembleMass(m, d);
    const Eigen::VectorXd x = d.coords.col(0);
    EXPECT_NEAR(x.dot(a * x), 3.0, 1e-11);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d.num_dofs);
    EXPECT_NEAR(ones.dot(mm * ones), 3.0, 1e-11);
    // integral of z over the box is -h^2/2 * lx * ly
    EXPECT_NEAR(AssembleSource(m, d, [](const Eigen::Vector3d &q) { return q.z(); }).sum(),
                -0.5 * 1.5 * 1.5 * 2.0, 1e-11);
  }
}

TEST(Assembly, SingleLinearTetStiffnessHasRankThree)
{
  const auto m = SingleTet();
  const auto d = BuildDofMap(m, 1);
  const Eigen::MatrixXd a = Eigen::MatrixXd(AssembleStiffness(m, d));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  EXPECT_EQ(lu.rank(), 3);
  // Hand-computed P1 stiffness of the unit corner tet.
  Eigen::MatrixXd expect(4, 4);
  expect << 3, -1, -1, -1, -1, 1, 0, 0, -1, 0, 1, 0, -1, 0, 0, 1;
  expect /= 6.0;
  EXPECT_LT((a - expect).norm(), 1e-13);
}

TEST(Assembly, BoundaryLoadIntegratesAreaAndNormals)
{
  const auto m = meshgen::BoxFluid(2, 2, 2, 2.0, 3.0, 1.0);
  const auto d = BuildDofMap(m, 3);
  const auto bq = BuildBoundaryQuadrature(m, d, {BoundaryTag::Bathymetry()});
  const Eigen::VectorXd b =
      NeumannLoad(bq, d, m, Eigen::VectorXd::Ones(bq.NumPoints()));
  EXPECT_NEAR(b.sum(), 6.0, 1e-12);
  for (Eigen::Index q = 0; q < bq.NumPoints(); ++q)
  {
    EXPECT_NEAR(bq.normals(q, 2), -1.0, 1e-14);
  }
  const SparseMatrix l = NeumannLoadMatrix(bq, d, m);
  const Eigen::VectorXd flux = bq.points.col(0);
  EXPECT_LT((l * flux - NeumannLoad(bq, d, m, flux)).norm(), 1e-13);
  EXPECT_NEAR((l * flux).sum(), 0.5 * 4.0 * 3.0, 1e-12);
}

TEST(Assembly, ClosedBodyNormalsIntegrateToZero)
{
  meshgen::SphereSpec s;
  s.radius = 1.0;
  s.centre_depth = 3.0;
  s.depth = 6.0;
  s.extent = 4.0;
  s.blend_outer = 2.0;
  s.cell = 0.5;
  s.far_cell = 1.0;
  const auto m = meshgen::MirrorQuarter(meshgen::Sphere(s));
  const auto d = BuildDofMap(m, 2);
  const auto bq = BuildBoundaryQuadrature(m, d, {BoundaryTag::Body()});
  for (int k = 0; k < 3; ++k)
  {
    const Eigen::VectorXd b = NeumannLoad(bq, d, m, bq.normals.col(k));
    EXPECT_NEAR(b.sum(), 0.0, 1e-10) << "component " << k;
  }
  const double area = bq.weights.sum();
  EXPECT_NEAR(area, 4.0 * M_PI, 0.02 * 4.0 * M_PI);
}

TEST(Assembly, MissingBoundaryTagThrows)
{
  const auto m = meshgen::BoxFluid(1, 1, 2, 1.0, 1.0, 1.0);
  const auto d = BuildDofMap(m, 1);
  EXPECT_THROW(BuildBoundaryQuadrature(m, d, {BoundaryTag::Body()}), DomainError);
}

TEST(Assembly, DirichletProblemReproducesLinearField)
{
  const auto m = meshgen::BoxFluid(2, 2, 3, 1.0, 1.0, 1.0);
  for (int p = 1; p <= 3; ++p)
  {
    const auto d = BuildDofMap(m, p);
    std::vector<int> bnd;
    for (const auto &[tag, nodes] : d.boundary_nodes)
    {
      bnd.insert(bnd.end(), nodes.begin(), nodes.end());
    }
    std::sort(bnd.begin(), bnd.end());
    bnd.erase(std::unique(bnd.begin(), bnd.end()), bnd.end());
    const Eigen::VectorXd exact = d.coords.rowwise().sum();
    Eigen::VectorXd g(bnd.size());
    for (std::size_t i = 0; i < bnd.size(); ++i)
    {
      g(static_cast<Eigen::Index>(i)) = exact(bnd[i]);
    }
    const DirichletSystem sys(AssembleStiffness(m, d), bnd);
    const Eigen::VectorXd rhs = sys.Rhs(Eigen::VectorXd::Zero(d.num_dofs), g);
    linalg::SolverConfig cfg;
    cfg.rel_tolerance = 1e-13;
    Eigen::VectorXd x;
    linalg::PcgSolver(sys.matrix(), cfg).Solve(rhs, x);
    EXPECT_LT((x - exact).lpNorm<Eigen::Infinity>(), 1e-10) << "P=" << p;
  }
}

TEST(Assembly, FreeSurfaceOperators)
{
  const auto m = meshgen::BoxFluid(2, 3, 2, 2.0, 1.5, 1.0);
  for (int p = 1; p <= 4; ++p)
  {
    const auto d = BuildDofMap(m, p);
    const auto fs = BuildFreeSurfaceOperators(m, d);
    ASSERT_EQ(fs.size(), static_cast<int>(d.Nodes(BoundaryTag::FreeSurface()).size()));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(fs.size());
    EXPECT_NEAR(ones.dot(fs.mass * ones), 3.0, 1e-12);
    EXPECT_LT((fs.stiffness * ones).lpNorm<Eigen::Infinity>(), 1e-11);
    // integral |grad_h x|^2 over the surface is its area
    const Eigen::VectorXd x = fs.xy.col(0);
    EXPECT_NEAR(x.dot(fs.stiffness * x), 3.0, 1e-11);
    const SparseMatrix w =
        WeightedFreeSurfaceStiffness(m, d, fs, [](double, double) { return 1.0; });
    EXPECT_LT((w - fs.stiffness).norm(), 1e-12 * fs.stiffness.norm());

    const Eigen::VectorXd z = d.coords.col(2);
    EXPECT_LT(((fs.dz_collocation * z).array() - 1.0).abs().maxCoeff(), 1e-11);
    const Eigen::VectorXd xz = (d.coords.col(0).array() * d.coords.col(2).array()).matrix();
    EXPECT_LT((fs.dz_collocation * xz - x).lpNorm<Eigen::Infinity>(), 1e-11);
    if (p >= 2)
    {
      const Eigen::VectorXd z2 = (z.array() * (z.array() + 2.0)).matrix();
      EXPECT_LT(((fs.dz_collocation * z2).array() - 2.0).abs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Assembly, ElementOrderingDoesNotChangeTheSolution)
{
  const auto m = meshgen::BoxFluid(2, 2, 3, 1.0, 1.0, 1.0);
  const auto r = ReversedElements(m);
  const auto c = verify::TrigCase(0.5 * M_PI, 0.5 * M_PI, 0.5 * M_PI);
  linalg::SolverConfig cfg;
  cfg.rel_tolerance = 1e-13;
  for (int p = 2; p <= 3; ++p)
  {
    const auto a = verify::RunMms(m, p, c, cfg);
    const auto b = verify::RunMms(r, p, c, cfg);
    EXPECT_EQ(a.num_dofs, b.num_dofs);
    EXPECT_NEAR(a.error, b.error, 1e-11 * a.magnitude);
  }
  EXPECT_NEAR(Volume(m), Volume(r), 1e-14);
}
