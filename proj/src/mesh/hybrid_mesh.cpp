// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/mesh/hybrid_mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::mesh
{

namespace
{

constexpr int kTetFaces[4][3] = {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {0, 2, 3}};
constexpr int kPrismFaces[5][4] = {
    {0, 1, 2, -1}, {3, 4, 5, -1}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};

double Det3(const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Vec3 Sub(const Vec3 &a, const Vec3 &b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// Jacobian determinant of the straight-sided prism map at reference (r,s,t).
double PrismDet(const std::vector<Vec3> &x, const Element &e, double r, double s,
                double t)
{
  const double dn_dr[3] = {-0.5, 0.5, 0.0};
  const double dn_ds[3] = {-0.5, 0.0, 0.5};
  const double n[3] = {-(r + s) / 2.0, (1.0 + r) / 2.0, (1.0 + s) / 2.0};
  Vec3 jr{0, 0, 0}, js{0, 0, 0}, jt{0, 0, 0};
  for (int i = 0; i < 3; ++i)
  {
    const Vec3 &b = x[e.v[i]];
    const Vec3 &top = x[e.v[i + 3]];
    for (int d = 0; d < 3; ++d)
    {
      const double xv = 0.5 * (1.0 - t) * b[d] + 0.5 * (1.0 + t) * top[d];
      jr[d] += dn_dr[i] * xv;
      js[d] += dn_ds[i] * xv;
      jt[d] += n[i] * 0.5 * (top[d] - b[d]);
    }
  }
  return Det3(jr, js, jt);
}

using FaceKey = std::array<int, 4>;

FaceKey MakeKey(Shape shape, const Element &e, int face)
{
  FaceKey key{-1, -1, -1, -1};
  auto fv = FaceVertices(shape, face);
  for (std::size_t i = 0; i < fv.size(); ++i)
  {
    key[i] = e.v[fv[i]];
  }
  std::sort(key.begin(), key.begin() + static_cast<long>(fv.size()));
  return key;
}

std::string ToLower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

BoundaryTag BoundaryTag::FromName(const std::string &raw)
{
  const std::string name = ToLower(raw);
  if (name == "freesurface")
  {
    return FreeSurface();
  }
  if (name == "bathymetry")
  {
    return Bathymetry();
  }
  if (name == "farfield")
  {
    return FarField();
  }
  if (name == "body")
  {
    return Body();
  }
  if (name == "symx")
  {
    return SymX();
  }
  if (name == "symy")
  {
    return SymY();
  }
  if (name.rfind("special", 0) == 0 && name.size() > 7)
  {
    const std::string digits = name.substr(7);
    if (std::all_of(digits.begin(), digits.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; }))
    {
      const int idx = std::stoi(digits);
      if (idx >= 1)
      {
        return Special(idx);
      }
    }
  }
  throw TaggingError(fmt::format("unknown boundary name '{}'", raw));
}

std::string BoundaryTag::Name() const
{
  switch (kind)
  {
    case Kind::FreeSurface:
      return "freesurface";
    case Kind::Bathymetry:
      return "bathymetry";
    case Kind::FarField:
      return "farfield";
    case Kind::Body:
      return "body";
    case Kind::SymX:
      return "symx";
    case Kind::SymY:
      return "symy";
    case Kind::Special:
      return "special" + std::to_string(index);
  }
  return "unknown";
}

int NumFaces(Shape shape) { return shape == Shape::Tet ? 4 : 5; }

std::span<const int> FaceVertices(Shape shape, int face)
{
  if (shape == Shape::Tet)
  {
    return {kTetFaces[face], 3};
  }
  return {kPrismFaces[face], face < 2 ? std::size_t{3} : std::size_t{4}};
}

int NumQuadraticGeometryNodes(Shape shape) { return shape == Shape::Tet ? 10 : 18; }

double SignedVolume(const std::vector<Vec3> &x, const Element &e)
{
  if (e.shape == Shape::Tet)
  {
    const Vec3 &p0 = x[e.v[0]];
    return Det3(Sub(x[e.v[1]], p0), Sub(x[e.v[2]], p0), Sub(x[e.v[3]], p0)) / 6.0;
  }
  // Exact for straight-sided prisms: the map is bilinear in (r,s) x t, so the
  // determinant is a polynomial integrated here by a 3x2 rule.
  constexpr double g = 0.57735026918962576;
  const double tri[3][2] = {{-2.0 / 3.0, 1.0 / 3.0}, {-2.0 / 3.0, -2.0 / 3.0}, {1.0 / 3.0, -2.0 / 3.0}};
  double vol = 0.0;
  for (const auto &p : tri)
  {
    for (double t : {-g, g})
    {
      vol += (2.0 / 3.0) * PrismDet(x, e, p[0], p[1], t);
    }
  }
  return vol;
}

void NormalizeOrientation(const std::vector<Vec3> &x, Element &e, std::vector<Vec3> *geo)
{
  if (e.shape == Shape::Tet)
  {
    if (SignedVolume(x, e) < 0.0)
    {
      std::swap(e.v[1], e.v[2]);
      if (geo != nullptr && !geo->empty())
      {
        auto &g = *geo;
        std::swap(g[1], g[2]);
        std::swap(g[4], g[6]);
        std::swap(g[8], g[9]);
      }
    }
    return;
  }
  // Bottom triangle first.
  const double zb = (x[e.v[0]][2] + x[e.v[1]][2] + x[e.v[2]][2]) / 3.0;
  const double zt = (x[e.v[3]][2] + x[e.v[4]][2] + x[e.v[5]][2]) / 3.0;
  if (zb > zt)
  {
    for (int i = 0; i < 3; ++i)
    {
      std::swap(e.v[i], e.v[i + 3]);
    }
    if (geo != nullptr && !geo->empty())
    {
      auto &g = *geo;
      for (int i = 0; i < 3; ++i)
      {
        std::swap(g[i], g[i + 3]);
      }
      std::swap(g[6], g[12]);
      std::swap(g[7], g[13]);
      std::swap(g[9], g[14]);
    }
  }
  // Counter-clockwise seen from above.
  const Vec3 &a = x[e.v[3]];
  const Vec3 &b = x[e.v[4]];
  const Vec3 &c = x[e.v[5]];
  const double cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  if (cross < 0.0)
  {
    std::swap(e.v[1], e.v[2]);
    std::swap(e.v[4], e.v[5]);
    if (geo != nullptr && !geo->empty())
    {
      auto &g = *geo;
      std::swap(g[1], g[2]);
      std::swap(g[4], g[5]);
      std::swap(g[6], g[7]);
      std::swap(g[10], g[11]);
      std::swap(g[12], g[13]);
      std::swap(g[15], g[16]);
    }
  }
}

HybridMesh::HybridMesh(std::vector<Vec3> vertices, std::vector<Element> elements,
                       std::vector<BoundaryFacet> facets,
                       std::vector<std::vector<Vec3>> geometry_nodes)
  : vertices_(std::move(vertices)), elements_(std::move(elements)),
    facets_(std::move(facets)), geometry_nodes_(std::move(geometry_nodes))
{
  Validate();
  BuildFreeSurface();
}

std::vector<Vec3> HybridMesh::GeometryNodes(int e) const
{
  if (!geometry_nodes_.empty())
  {
    return geometry_nodes_[e];
  }
  const Element &el = elements_[e];
  std::vector<Vec3> out;
  out.reserve(el.NumVertices());
  for (int i = 0; i < el.NumVertices(); ++i)
  {
    out.push_back(vertices_[el.v[i]]);
  }
  return out;
}

bool HybridMesh::HasTag(const BoundaryTag &tag) const
{
  return std::any_of(facets_.begin(), facets_.end(),
                     [&](const BoundaryFacet &f) { return f.tag == tag; });
}

std::vector<BoundaryTag> HybridMesh::Tags() const
{
  std::set<BoundaryTag> tags;
  for (const auto &f : facets_)
  {
    tags.insert(f.tag);
  }
  return {tags.begin(), tags.end()};
}

int HybridMesh::CountFacets(const BoundaryTag &tag) const
{
  return static_cast<int>(std::count_if(facets_.begin(), facets_.end(),
                                        [&](const BoundaryFacet &f) { return f.tag == tag; }));
}

double HybridMesh::Diagonal() const
{
  const double dx = bbox_max_[0] - bbox_min_[0];
  const double dy = bbox_max_[1] - bbox_min_[1];
  const double dz = bbox_max_[2] - bbox_min_[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void HybridMesh::Validate()
{
  if (vertices_.empty() || elements_.empty())
  {
    throw TopologyError("mesh has no vertices or no elements");
  }
  bbox_min_ = vertices_[0];
  bbox_max_ = vertices_[0];
  for (const auto &p : vertices_)
  {
    for (int d = 0; d < 3; ++d)
    {
      bbox_min_[d] = std::min(bbox_min_[d], p[d]);
      bbox_max_[d] = std::max(bbox_max_[d], p[d]);
    }
  }
  const double tol = 1e-10 * Diagonal();
  const int nv = static_cast<int>(vertices_.size());

  if (!geometry_nodes_.empty() && geometry_nodes_.size() != elements_.size())
  {
    throw TopologyError("quadratic geometry must be given for every element");
  }

  num_tets_ = 0;
  num_prisms_ = 0;
  for (int e = 0; e < NumElements(); ++e)
  {
    const Element &el = elements_[e];
    for (int i = 0; i < el.NumVertices(); ++i)
    {
      if (el.v[i] < 0 || el.v[i] >= nv)
      {
        throw TopologyError(fmt::format("element {} references vertex out of range", e));
      }
    }
    if (!geometry_nodes_.empty() &&
        static_cast<int>(geometry_nodes_[e].size()) != NumQuadraticGeometryNodes(el.shape))
    {
      throw TopologyError(fmt::format("element {} has wrong number of geometry nodes", e));
    }
    if (el.shape == Shape::Tet)
    {
      ++num_tets_;
      if (SignedVolume(vertices_, el) <= 0.0)
      {
        throw TopologyError(fmt::format("tetrahedron {} has non-positive volume", e));
      }
      continue;
    }
    ++num_prisms_;
    for (int i = 0; i < 3; ++i)
    {
      const Vec3 &top = vertices_[el.v[i + 3]];
      const Vec3 &bot = vertices_[el.v[i]];
      if (std::abs(top[2]) > tol)
      {
        throw TopologyError(
            fmt::format("prism {} top face is not at z = 0 (z = {})", e, top[2]));
      }
      if (std::abs(top[0] - bot[0]) > tol || std::abs(top[1] - bot[1]) > tol)
      {
        throw TopologyError(fmt::format("prism {} is not vertically extruded", e));
      }
      if (bot[2] >= top[2] - tol)
      {
        throw TopologyError(fmt::format("prism {} has zero or negative height", e));
      }
    }
    for (double r : {-1.0, 1.0})
    {
      for (double t : {-1.0, 1.0})
      {
        for (const auto &rs : {std::array{r, -1.0}, std::array{-1.0, r}})
        {
          if (PrismDet(vertices_, el, rs[0], rs[1], t) <= 0.0)
          {
            throw TopologyError(fmt::format("prism {} has non-positive Jacobian", e));
          }
        }
      }
    }
  }

  // Face incidence.
  std::map<FaceKey, std::pair<int, int>> first;  // key -> (element, face)
  std::map<FaceKey, int> count;
  std::set<FaceKey> prism_tops;
  std::set<FaceKey> prism_bottoms;
  for (int e = 0; e < NumElements(); ++e)
  {
    const Element &el = elements_[e];
    for (int f = 0; f < NumFaces(el.shape); ++f)
    {
      const FaceKey key = MakeKey(el.shape, el, f);
      first.emplace(key, std::make_pair(e, f));
      const int c = ++count[key];
      if (c > 2)
      {
        throw TopologyError(fmt::format("face shared by more than two elements at element {}", e));
      }
      if (el.shape == Shape::Prism && f == 0)
      {
        prism_bottoms.insert(key);
      }
      if (el.shape == Shape::Prism && f == 1)
      {
        prism_tops.insert(key);
      }
    }
  }
  for (int e = 0; e < NumElements(); ++e)
  {
    const Element &el = elements_[e];
    if (el.shape == Shape::Prism && prism_tops.count(MakeKey(el.shape, el, 0)) != 0)
    {
      throw TopologyError(
          fmt::format("prism {} sits on top of another prism; prisms must form a single layer", e));
    }
    if (el.shape == Shape::Prism && count[MakeKey(el.shape, el, 1)] != 1)
    {
      throw TopologyError(fmt::format("prism {} top face is not on the boundary", e));
    }
  }

  std::map<FaceKey, int> tagged;
  for (std::size_t i = 0; i < facets_.size(); ++i)
  {
    const auto &bf = facets_[i];
    if (bf.element < 0 || bf.element >= NumElements() ||
        bf.face < 0 || bf.face >= NumFaces(elements_[bf.element].shape))
    {
      throw TopologyError(fmt::format("boundary facet {} references an invalid element face", i));
    }
    const Element &el = elements_[bf.element];
    const FaceKey key = MakeKey(el.shape, el, bf.face);
    if (count[key] != 1)
    {
      throw TaggingError(fmt::format("boundary facet {} lies on an interior face", i));
    }
    if (++tagged[key] > 1)
    {
      throw TaggingError(fmt::format("boundary face of element {} carries more than one tag",
                                     bf.element));
    }
  }
  for (const auto &[key, c] : count)
  {
    if (c == 1 && tagged.count(key) == 0)
    {
      const auto [e, f] = first[key];
      throw TaggingError(fmt::format("boundary face {} of element {} is untagged", f, e));
    }
  }

  std::set<int> specials;
  for (const auto &bf : facets_)
  {
    if (bf.tag.kind == BoundaryTag::Kind::Special)
    {
      specials.insert(bf.tag.index);
    }
  }
  int expected = 1;
  for (int idx : specials)
  {
    if (idx != expected++)
    {
      throw TaggingError("special boundary indices must be contiguous from 1");
    }
  }
}

void HybridMesh::BuildFreeSurface()
{
  free_surface_ = FreeSurfaceTrace{};
  std::unordered_map<int, int> node_of_vertex;
  for (const auto &bf : facets_)
  {
    if (bf.tag.kind != BoundaryTag::Kind::FreeSurface)
    {
      continue;
    }
    const Element &el = elements_[bf.element];
    if (el.shape != Shape::Prism || bf.face != 1)
    {
      throw TaggingError(fmt::format(
          "free-surface facet on element {} is not the top face of a prism", bf.element));
    }
    std::array<int, 3> tri{};
    for (int i = 0; i < 3; ++i)
    {
      const int v = el.v[3 + i];
      auto [it, inserted] =
          node_of_vertex.emplace(v, static_cast<int>(free_surface_.nodes.size()));
      if (inserted)
      {
        free_surface_.nodes.push_back({vertices_[v][0], vertices_[v][1]});
        free_surface_.vertex_of_node.push_back(v);
      }
      tri[i] = it->second;
    }
    free_surface_.triangles.push_back(tri);
    free_surface_.prism_of_triangle.push_back(bf.element);
  }
}

}  // namespace hydrosem::mesh
