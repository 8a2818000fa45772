// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/mesh/queries.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/refelem/element_map.hpp"
#include "hydrosem/refelem/jacobi.hpp"

namespace hydrosem::mesh
{

double LobattoGapFraction(int order)
{
  if (order < 1)
  {
    throw ParameterError(fmt::format("polynomial order {} < 1", order));
  }
  const Eigen::VectorXd x = refelem::JacobiGL(0.0, 0.0, order);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < x.size(); ++i)
  {
    gap = std::min(gap, x(i) - x(i - 1));
  }
  return gap / 2.0;
}

double MinSpacing(const HybridMesh &mesh, int order)
{
  const FreeSurfaceTrace &fs = mesh.FreeSurface();
  if (fs.Empty())
  {
    throw DomainError("mesh has no free surface");
  }
  double h = std::numeric_limits<double>::infinity();
  for (const auto &t : fs.triangles)
  {
    for (int a = 0; a < 3; ++a)
    {
      const Vec2 &p = fs.nodes[t[a]];
      const Vec2 &q = fs.nodes[t[(a + 1) % 3]];
      h = std::min(h, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
  }
  return h * LobattoGapFraction(order);
}

std::vector<FacetSample> FacetNormals(const HybridMesh &mesh, const BoundaryTag &tag, int order)
{
  if (!mesh.HasTag(tag))
  {
    throw TaggingError(fmt::format("tag '{}' not present in mesh", tag.Name()));
  }
  std::vector<FacetSample> out;
  const auto &facets = mesh.Facets();
  for (std::size_t i = 0; i < facets.size(); ++i)
  {
    if (facets[i].tag != tag)
    {
      continue;
    }
    const int e = facets[i].element;
    const auto &ref = refelem::GetReference(mesh.Elements()[e].shape, order);
    const refelem::FaceMap fm =
        refelem::FaceFactors(ref, refelem::ElementGeometry(mesh, e), facets[i].face);
    out.push_back({static_cast<int>(i), fm.points, fm.normals, fm.weights});
  }
  return out;
}

}  // namespace hydrosem::mesh
