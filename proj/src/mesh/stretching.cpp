// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/mesh/stretching.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::mesh
{

namespace
{

double Coordinate(const Vec3 &p, StretchAxis axis)
{
  switch (axis)
  {
    case StretchAxis::X:
      return std::abs(p[0]);
    case StretchAxis::Y:
      return std::abs(p[1]);
    case StretchAxis::Radial:
      return std::hypot(p[0], p[1]);
  }
  return 0.0;
}

Vec3 Map(const Vec3 &p, const StretchSpec &spec, double width)
{
  const double u = Coordinate(p, spec.axis);
  if (u <= spec.start)
  {
    return p;
  }
  const double scale = StretchCoordinate(u, spec.start, spec.ratio, width) / u;
  Vec3 q = p;
  switch (spec.axis)
  {
    case StretchAxis::X:
      q[0] *= scale;
      break;
    case StretchAxis::Y:
      q[1] *= scale;
      break;
    case StretchAxis::Radial:
      q[0] *= scale;
      q[1] *= scale;
      break;
  }
  return q;
}

}  // namespace

double StretchCoordinate(double u, double start, double ratio, double width)
{
  if (u <= start)
  {
    return u;
  }
  // expm1/log1p keep ratios within rounding of 1 well conditioned.
  const double d = ratio - 1.0;
  const double growth = std::expm1((u - start) / width * std::log1p(d)) / d;
  return start + width * ratio * growth;
}

HybridMesh ApplyStretching(const HybridMesh &mesh, const StretchSpec &spec)
{
  if (!(spec.ratio > 1.0))
  {
    throw ParameterError(fmt::format("stretching ratio must exceed 1 (got {})", spec.ratio));
  }
  double umax = 0.0;
  for (const auto &p : mesh.Vertices())
  {
    umax = std::max(umax, Coordinate(p, spec.axis));
  }
  if (spec.start < 0.0 || spec.start >= umax)
  {
    throw ParameterError(
        fmt::format("stretching start {} lies outside the mesh (extent {})", spec.start, umax));
  }
  double width = spec.layer_width;
  if (width <= 0.0)
  {
    const double tol = 1e-9 * mesh.Diagonal();
    double first = std::numeric_limits<double>::infinity();
    for (const auto &p : mesh.Vertices())
    {
      const double u = Coordinate(p, spec.axis);
      if (u > spec.start + tol)
      {
        first = std::min(first, u);
      }
    }
    width = first - spec.start;
  }

  std::vector<Vec3> vertices;
  vertices.reserve(mesh.Vertices().size());
  for (const auto &p : mesh.Vertices())
  {
    vertices.push_back(Map(p, spec, width));
  }
  std::vector<std::vector<Vec3>> geometry = mesh.QuadraticGeometry();
  for (auto &g : geometry)
  {
    for (auto &p : g)
    {
      p = Map(p, spec, width);
    }
  }
  std::vector<Element> elements = mesh.Elements();
  for (const auto &e : elements)
  {
    if (SignedVolume(vertices, e) <= 0.0)
    {
      throw TopologyError("stretching inverted an element");
    }
  }
  return HybridMesh(std::move(vertices), std::move(elements), mesh.Facets(),
                    std::move(geometry));
}

}  // namespace hydrosem::mesh
