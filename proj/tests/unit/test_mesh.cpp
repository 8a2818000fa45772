// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "hydrosem/error.hpp"
#include "hydrosem/mesh/hybrid_mesh.hpp"
#include "hydrosem/mesh/mesh_io.hpp"
#include "hydrosem/mesh/msh_reader.hpp"
#include "hydrosem/mesh/queries.hpp"
#include "hydrosem/mesh/stretching.hpp"
#include "meshgen/desk_meshes.hpp"

using namespace hydrosem;
using namespace hydrosem::mesh;

namespace
{

// One prism, bottom at z = -2, top (freesurface) at z = top_z, sides and
// bottom tagged body.
std::string SinglePrismMsh(double top_z = 0.0, const std::string &side_name = "body")
{
  return fmt::format(R"($MeshFormat
4.1 0 8
$EndMeshFormat
$PhysicalNames
3
2 1 "freesurface"
2 2 "{1}"
3 3 "fluid"
$EndPhysicalNames
$Entities
0 0 2 1
1 -1 -1 0 1 1 0 1 1 0
2 -1 -1 -2 1 1 0 1 2 0
1 -1 -1 -2 1 1 0 1 3 0
$EndEntities
$Nodes
1 6 1 6
3 1 0 6
1
2
3
4
5
6
-1 -1 -2
1 -1 -2
-1 1 -2
-1 -1 {0}
1 -1 {0}
-1 1 {0}
$EndNodes
$Elements
4 6 1 6
2 1 2 1
1 4 5 6
2 2 2 1
2 1 2 3
2 2 3 3
3 1 2 5 4
4 2 3 6 5
5 3 1 6 4
3 1 6 1
6 1 2 3 4 5 6
$EndElements
)",
                     top_z, side_name);
}

meshgen::SphereSpec SubmergedSphereSpec()
{
  meshgen::SphereSpec s;
  s.radius = 1.0;
  s.centre_depth = 4.0;
  s.depth = 8.0;
  s.extent = 5.0;
  s.cell = 0.5;
  s.far_cell = 1.0;
  s.blend_outer = 2.0;
  s.prism_height = 0.5;
  return s;
}

}  // namespace

TEST(Msh, SinglePrismParses)
{
  const HybridMesh m = ParseMsh(SinglePrismMsh());
  EXPECT_EQ(m.NumPrisms(), 1);
  EXPECT_EQ(m.NumTets(), 0);
  EXPECT_EQ(m.CountFacets(BoundaryTag::FreeSurface()), 1);
  EXPECT_EQ(m.CountFacets(BoundaryTag::Body()), 4);
  EXPECT_EQ(m.FreeSurface().triangles.size(), 1u);
}

TEST(Msh, SunkenPrismTopIsTopologyError)
{
  EXPECT_THROW(ParseMsh(SinglePrismMsh(-0.1)), TopologyError);
}

TEST(Msh, UnknownPhysicalNameIsTaggingError)
{
  EXPECT_THROW(ParseMsh(SinglePrismMsh(0.0, "symz")), TaggingError);
}

TEST(Msh, MalformedSectionReportsLine)
{
  std::string text = SinglePrismMsh();
  const auto pos = text.find("\n1 -1 -2\n");
  text.replace(pos, 9, "\n1 oops -2\n");
  try
  {
    ParseMsh(text);
    FAIL() << "expected ParseError";
  }
  catch (const ParseError &e)
  {
    EXPECT_EQ(e.line(), 26);
  }
}

TEST(Msh, BinaryRejected)
{
  std::string text = SinglePrismMsh();
  text.replace(text.find("4.1 0 8"), 7, "4.1 1 8");
  EXPECT_THROW(ParseMsh(text), ParseError);
}

TEST(Msh, RoundTripIsIdentical)
{
  const HybridMesh box = meshgen::BoxFluid(3, 2, 3, 3.0, 2.0, 1.5);
  const HybridMesh again = ParseMsh(WriteMsh(box));
  EXPECT_EQ(again.NumElements(), box.NumElements());
  EXPECT_EQ(again.Facets().size(), box.Facets().size());
  EXPECT_TRUE(Identical(ParseMsh(WriteMsh(again)), again));

  meshgen::SphereSpec spec = SubmergedSphereSpec();
  const HybridMesh sphere = meshgen::Sphere(spec);
  ASSERT_EQ(sphere.GeometryOrder(), 2);
  const HybridMesh sphere_again = ParseMsh(WriteMsh(sphere));
  EXPECT_EQ(sphere_again.GeometryOrder(), 2);
  EXPECT_TRUE(Identical(ParseMsh(WriteMsh(sphere_again)), sphere_again));
  EXPECT_TRUE(Identical(Deserialize(Serialize(sphere)), sphere));
}

TEST(Mesh, DeskMeshesSatisfyInvariants)
{
  const HybridMesh box = meshgen::BoxFluid(2, 2, 3, 2.0, 2.0, 1.5);
  EXPECT_EQ(box.NumPrisms(), 8);
  EXPECT_EQ(box.NumTets(), 48);

  meshgen::FloatingBoxSpec fb;
  fb.chamber_half_length = 0.5;
  fb.chamber_half_width = 0.5;
  const HybridMesh owc = meshgen::FloatingBox(fb);
  EXPECT_TRUE(owc.HasTag(BoundaryTag::Special(1)));
  EXPECT_TRUE(owc.HasTag(BoundaryTag::SymX()));
  EXPECT_TRUE(owc.HasTag(BoundaryTag::SymY()));
  fb.quarter = false;
  const HybridMesh full = meshgen::FloatingBox(fb);
  EXPECT_EQ(full.NumElements(), 4 * owc.NumElements());
  EXPECT_FALSE(full.HasTag(BoundaryTag::SymX()));
  EXPECT_EQ(full.CountFacets(BoundaryTag::Body()), 4 * owc.CountFacets(BoundaryTag::Body()));
}

TEST(Mesh, InteriorFacetTagIsRejected)
{
  const HybridMesh box = meshgen::BoxFluid(2, 1, 2, 2.0, 1.0, 1.0);
  auto facets = box.Facets();
  // Face shared by the two prisms of a top-layer cell.
  int prism = 0;
  while (box.Elements()[prism].shape != Shape::Prism)
  {
    ++prism;
  }
  int shared_face = -1;
  for (int f = 0; f < NumFaces(Shape::Prism); ++f)
  {
    const bool boundary = std::any_of(facets.begin(), facets.end(), [&](const BoundaryFacet &b) {
      return b.element == prism && b.face == f;
    });
    if (!boundary)
    {
      shared_face = f;
    }
  }
  ASSERT_GE(shared_face, 0);
  facets.push_back({prism, shared_face, BoundaryTag::Body()});
  EXPECT_THROW(HybridMesh(box.Vertices(), box.Elements(), facets), TaggingError);
}

TEST(Mesh, UntaggedBoundaryIsRejected)
{
  const HybridMesh box = meshgen::BoxFluid(2, 1, 2, 2.0, 1.0, 1.0);
  auto facets = box.Facets();
  facets.pop_back();
  EXPECT_THROW(HybridMesh(box.Vertices(), box.Elements(), facets), TaggingError);
}

TEST(Stretching, GeometricSeriesExample)
{
  const double expected[] = {0.0, 1.0, 3.0, 7.0};
  for (int i = 0; i < 4; ++i)
  {
    EXPECT_NEAR(StretchCoordinate(i, 1.0, 2.0, 1.0), expected[i], 1e-13);
  }
}

TEST(Stretching, NearUnitRatioIsIdentity)
{
  const HybridMesh box = meshgen::BoxFluid(4, 2, 2, 4.0, 2.0, 1.0);
  const HybridMesh s = ApplyStretching(box, {StretchAxis::X, 1.0, 1.0 + 1e-15, 0.0});
  for (std::size_t v = 0; v < box.Vertices().size(); ++v)
  {
    for (int d = 0; d < 3; ++d)
    {
      EXPECT_NEAR(s.Vertices()[v][d], box.Vertices()[v][d], 1e-12);
    }
  }
}

TEST(Stretching, RatioOneIsParameterError)
{
  const HybridMesh box = meshgen::BoxFluid(2, 2, 2, 2.0, 2.0, 1.0);
  EXPECT_THROW(ApplyStretching(box, {StretchAxis::X, 1.0, 1.0, 0.0}), ParameterError);
  EXPECT_THROW(ApplyStretching(box, {StretchAxis::X, 5.0, 2.0, 0.0}), ParameterError);
}

TEST(Stretching, InteriorUnchangedAndTopologyPreserved)
{
  const HybridMesh box = meshgen::BoxFluid(6, 6, 2, 6.0, 6.0, 1.0);
  for (StretchAxis axis : {StretchAxis::X, StretchAxis::Y, StretchAxis::Radial})
  {
    const HybridMesh s = ApplyStretching(box, {axis, 3.0, 1.5, 0.0});
    EXPECT_EQ(s.NumElements(), box.NumElements());
    EXPECT_EQ(s.Facets().size(), box.Facets().size());
    for (std::size_t f = 0; f < s.Facets().size(); ++f)
    {
      EXPECT_EQ(s.Facets()[f].tag, box.Facets()[f].tag);
    }
    for (std::size_t v = 0; v < box.Vertices().size(); ++v)
    {
      const Vec3 &p = box.Vertices()[v];
      const double u = axis == StretchAxis::X   ? p[0]
                       : axis == StretchAxis::Y ? p[1]
                                                : std::hypot(p[0], p[1]);
      if (u <= 3.0)
      {
        EXPECT_EQ(s.Vertices()[v], p);
      }
    }
    for (int e = 0; e < s.NumElements(); ++e)
    {
      EXPECT_GT(SignedVolume(s.Vertices(), s.Elements()[e]), 0.0);
    }
    EXPECT_GT(s.BoundingMax()[0], box.BoundingMax()[0] - 1e-12);
  }
}

TEST(MinSpacing, EquilateralTriangle)
{
  const double h = std::sqrt(3.0);
  std::vector<Vec3> v{{0, 0, -1}, {2, 0, -1}, {1, h, -1}, {0, 0, 0}, {2, 0, 0}, {1, h, 0}};
  Element el;
  el.shape = Shape::Prism;
  el.v = {0, 1, 2, 3, 4, 5};
  std::vector<BoundaryFacet> f{{0, 0, BoundaryTag::Bathymetry()},
                               {0, 1, BoundaryTag::FreeSurface()},
                               {0, 2, BoundaryTag::FarField()},
                               {0, 3, BoundaryTag::FarField()},
                               {0, 4, BoundaryTag::FarField()}};
  const HybridMesh m(v, {el}, f);
  EXPECT_NEAR(MinSpacing(m, 1), 2.0, 1e-14);
  EXPECT_NEAR(MinSpacing(m, 2), 1.0, 1e-14);
}

TEST(MinSpacing, GradedMeshMinimumBelowMean)
{
  const HybridMesh m = meshgen::Sphere(SubmergedSphereSpec());
  const auto &fs = m.FreeSurface();
  double sum = 0.0;
  int n = 0;
  for (const auto &t : fs.triangles)
  {
    for (int a = 0; a < 3; ++a)
    {
      const Vec2 &p = fs.nodes[t[a]];
      const Vec2 &q = fs.nodes[t[(a + 1) % 3]];
      sum += std::hypot(p[0] - q[0], p[1] - q[1]);
      ++n;
    }
  }
  EXPECT_LE(MinSpacing(m, 1), sum / n);
}

TEST(MinSpacing, InvariantUnderVertexReordering)
{
  const HybridMesh box = ApplyStretching(meshgen::BoxFluid(4, 3, 2, 4.0, 3.0, 1.0),
                                         {StretchAxis::X, 2.0, 1.7, 0.0});
  std::vector<int> perm(box.Vertices().size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> v(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
  {
    v[perm[i]] = box.Vertices()[i];
  }
  auto elements = box.Elements();
  for (auto &e : elements)
  {
    for (int k = 0; k < e.NumVertices(); ++k)
    {
      e.v[k] = perm[e.v[k]];
    }
  }
  const HybridMesh shuffled(v, elements, box.Facets());
  EXPECT_EQ(MinSpacing(shuffled, 3), MinSpacing(box, 3));
}

TEST(MinSpacing, NoFreeSurfaceIsDomainError)
{
  std::vector<Vec3> v{{0, 0, -1}, {1, 0, -1}, {0, 1, -1}, {0, 0, -0.5}};
  Element el;
  el.v = {0, 1, 2, 3};
  std::vector<BoundaryFacet> f;
  for (int k = 0; k < 4; ++k)
  {
    f.push_back({0, k, BoundaryTag::Body()});
  }
  const HybridMesh m(v, {el}, f);
  EXPECT_THROW(MinSpacing(m), DomainError);
}

TEST(FacetNormals, BoxBottomPointsDown)
{
  const HybridMesh box = meshgen::BoxFluid(2, 2, 2, 2.0, 2.0, 1.0);
  double area = 0.0;
  for (const auto &s : FacetNormals(box, BoundaryTag::Bathymetry(), 2))
  {
    for (Eigen::Index q = 0; q < s.normals.rows(); ++q)
    {
      EXPECT_NEAR(s.normals(q, 0), 0.0, 1e-14);
      EXPECT_NEAR(s.normals(q, 1), 0.0, 1e-14);
      EXPECT_NEAR(s.normals(q, 2), -1.0, 1e-14);
    }
    area += s.weights.sum();
  }
  EXPECT_NEAR(area, 4.0, 1e-12);
}

TEST(FacetNormals, SphereNormalsPointIntoBody)
{
  const HybridMesh m = meshgen::Sphere(SubmergedSphereSpec());
  const Eigen::RowVector3d centre(0.0, 0.0, -4.0);
  double best = 1e9;
  Eigen::RowVector3d south_normal;
  for (const auto &s : FacetNormals(m, BoundaryTag::Body(), 2))
  {
    for (Eigen::Index q = 0; q < s.normals.rows(); ++q)
    {
      EXPECT_NEAR(s.normals.row(q).norm(), 1.0, 1e-12);
      const Eigen::RowVector3d radial = (s.points.row(q) - centre).normalized();
      EXPECT_LT(s.normals.row(q).dot(radial), -0.9);
      if (s.points(q, 2) < best)
      {
        best = s.points(q, 2);
        south_normal = s.normals.row(q);
      }
    }
  }
  EXPECT_GT(south_normal(2), 0.99);
}

TEST(FacetNormals, ClosedBodyNormalIntegralVanishes)
{
  const HybridMesh m = meshgen::MirrorQuarter(meshgen::Sphere(SubmergedSphereSpec()));
  Eigen::RowVector3d total = Eigen::RowVector3d::Zero();
  double area = 0.0;
  for (const auto &s : FacetNormals(m, BoundaryTag::Body(), 2))
  {
    total += s.weights.transpose() * s.normals;
    area += s.weights.sum();
  }
  EXPECT_NEAR(area, 4.0 * M_PI, 0.05 * 4.0 * M_PI);
  EXPECT_LT(total.norm(), 1e-10 * area);
}

TEST(FacetNormals, MissingTagIsTaggingError)
{
  const HybridMesh box = meshgen::BoxFluid(2, 2, 2, 2.0, 2.0, 1.0);
  EXPECT_THROW(FacetNormals(box, BoundaryTag::Body()), TaggingError);
}
