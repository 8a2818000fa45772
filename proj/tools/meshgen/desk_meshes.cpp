// SPDX-License-Identifier: Apache-2.0

#include "desk_meshes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "hydrosem/error.hpp"

namespace hydrosem::meshgen
{

using mesh::Element;
using mesh::Shape;

namespace
{

Vec3 Mid(const std::vector<Vec3> &p, std::initializer_list<int> ids)
{
  Vec3 c{0, 0, 0};
  for (int i : ids)
  {
    for (int d = 0; d < 3; ++d)
    {
      c[d] += p[i][d];
    }
  }
  for (double &v : c)
  {
    v /= static_cast<double>(ids.size());
  }
  return c;
}

// Quadratic gmsh-ordered nodes of a straight element given its corners.
std::vector<Vec3> QuadraticNodes(Shape shape, const std::vector<Vec3> &c)
{
  std::vector<Vec3> g = c;
  if (shape == Shape::Tet)
  {
    for (auto e : {std::array{0, 1}, {1, 2}, {0, 2}, {0, 3}, {2, 3}, {1, 3}})
    {
      g.push_back(Mid(c, {e[0], e[1]}));
    }
    return g;
  }
  for (auto e : {std::array{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}})
  {
    g.push_back(Mid(c, {e[0], e[1]}));
  }
  g.push_back(Mid(c, {0, 1, 4, 3}));
  g.push_back(Mid(c, {0, 2, 5, 3}));
  g.push_back(Mid(c, {1, 2, 5, 4}));
  return g;
}

using Key = std::array<long long, 3>;

Key Quantize(const Vec3 &p, double q)
{
  return {std::llround(p[0] / q), std::llround(p[1] / q), std::llround(p[2] / q)};
}

std::array<int, 4> FaceKey(const Element &el, int face)
{
  std::array<int, 4> key{-1, -1, -1, -1};
  auto fv = mesh::FaceVertices(el.shape, face);
  for (std::size_t i = 0; i < fv.size(); ++i)
  {
    key[i] = el.v[fv[i]];
  }
  std::sort(key.begin(), key.begin() + static_cast<long>(fv.size()));
  return key;
}

}  // namespace

std::vector<double> Uniform(double a, double b, int n)
{
  n = std::max(n, 1);
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i)
  {
    v[i] = a + (b - a) * i / n;
  }
  v.back() = b;
  return v;
}

std::vector<double> Join(std::initializer_list<std::vector<double>> parts)
{
  std::vector<double> out;
  for (const auto &p : parts)
  {
    for (double v : p)
    {
      if (out.empty() || v > out.back() + 1e-12 * (1.0 + std::abs(v)))
      {
        out.push_back(v);
      }
    }
  }
  return out;
}

HybridMesh BuildGridMesh(const GridSpec &grid, const GridOptions &opt)
{
  const int nx = static_cast<int>(grid.x.size()) - 1;
  const int ny = static_cast<int>(grid.y.size()) - 1;
  const int nz = static_cast<int>(grid.z.size()) - 1;
  if (nx < 1 || ny < 1 || nz < 2 || std::abs(grid.z.back()) > 1e-14)
  {
    throw ParameterError("grid needs at least 1x1x2 cells and z ending at 0");
  }
  auto node_id = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  auto point = [&](int id) {
    const int i = id % (nx + 1);
    const int j = (id / (nx + 1)) % (ny + 1);
    const int k = id / ((nx + 1) * (ny + 1));
    return Vec3{grid.x[i], grid.y[j], grid.z[k]};
  };
  auto map = [&](const Vec3 &p) { return opt.map ? opt.map(p) : p; };

  std::map<int, int> compact;
  std::vector<Vec3> unmapped;
  auto vid = [&](int id) {
    auto [it, inserted] = compact.emplace(id, static_cast<int>(unmapped.size()));
    if (inserted)
    {
      unmapped.push_back(point(id));
    }
    return it->second;
  };

  std::vector<Element> elements;
  for (int k = 0; k < nz; ++k)
  {
    for (int j = 0; j < ny; ++j)
    {
      for (int i = 0; i < nx; ++i)
      {
        const Vec3 centre{0.5 * (grid.x[i] + grid.x[i + 1]), 0.5 * (grid.y[j] + grid.y[j + 1]),
                          0.5 * (grid.z[k] + grid.z[k + 1])};
        if (opt.solid && opt.solid(centre))
        {
          continue;
        }
        auto c = [&](int dx, int dy, int dz) { return vid(node_id(i + dx, j + dy, k + dz)); };
        if (k == nz - 1)
        {
          for (auto tri : {std::array<std::array<int, 2>, 3>{{{0, 0}, {1, 0}, {1, 1}}},
                           std::array<std::array<int, 2>, 3>{{{0, 0}, {1, 1}, {0, 1}}}})
          {
            Element el;
            el.shape = Shape::Prism;
            for (int m = 0; m < 3; ++m)
            {
              el.v[m] = c(tri[m][0], tri[m][1], 0);
              el.v[m + 3] = c(tri[m][0], tri[m][1], 1);
            }
            elements.push_back(el);
          }
          continue;
        }
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (const auto &perm : perms)
        {
          std::array<int, 3> cur{0, 0, 0};
          Element el;
          el.shape = Shape::Tet;
          el.v[0] = c(0, 0, 0);
          for (int m = 0; m < 3; ++m)
          {
            cur[perm[m]] = 1;
            el.v[m + 1] = c(cur[0], cur[1], cur[2]);
          }
          elements.push_back(el);
        }
      }
    }
  }

  std::vector<Vec3> vertices;
  vertices.reserve(unmapped.size());
  for (const auto &p : unmapped)
  {
    vertices.push_back(map(p));
  }
  std::vector<std::vector<Vec3>> geometry;
  for (auto &el : elements)
  {
    std::vector<Vec3> geo;
    if (opt.quadratic)
    {
      std::vector<Vec3> corners;
      for (int m = 0; m < el.NumVertices(); ++m)
      {
        corners.push_back(unmapped[el.v[m]]);
      }
      geo = QuadraticNodes(el.shape, corners);
      std::vector<Vec3> mapped_corners;
      for (int m = 0; m < el.NumVertices(); ++m)
      {
        mapped_corners.push_back(vertices[el.v[m]]);
      }
      const auto straight = QuadraticNodes(el.shape, mapped_corners);
      for (std::size_t m = 0; m < geo.size(); ++m)
      {
        geo[m] = !opt.curved || opt.curved(geo[m]) ? map(geo[m]) : straight[m];
      }
    }
    mesh::NormalizeOrientation(vertices, el, opt.quadratic ? &geo : nullptr);
    if (opt.quadratic)
    {
      geometry.push_back(std::move(geo));
    }
  }

  // Boundary faces, tagged from unmapped centroids.
  std::map<std::array<int, 4>, std::pair<int, int>> first;
  std::map<std::array<int, 4>, int> count;
  for (int e = 0; e < static_cast<int>(elements.size()); ++e)
  {
    for (int f = 0; f < mesh::NumFaces(elements[e].shape); ++f)
    {
      const auto key = FaceKey(elements[e], f);
      first.emplace(key, std::make_pair(e, f));
      ++count[key];
    }
  }
  const double tol = 1e-9 * (1.0 + std::abs(grid.z.front()) + grid.x.back() - grid.x.front());
  std::vector<mesh::BoundaryFacet> facets;
  for (const auto &[key, n] : count)
  {
    if (n != 1)
    {
      continue;
    }
    const auto [e, f] = first[key];
    Vec3 centroid{0, 0, 0};
    int nv = 0;
    for (int v : key)
    {
      if (v < 0)
      {
        continue;
      }
      for (int d = 0; d < 3; ++d)
      {
        centroid[d] += unmapped[v][d];
      }
      ++nv;
    }
    for (double &c : centroid)
    {
      c /= nv;
    }
    BoundaryTag tag = BoundaryTag::Body();
    if (std::abs(centroid[2]) < tol)
    {
      tag = (opt.lid && opt.lid(centroid)) ? BoundaryTag::Special(1) : BoundaryTag::FreeSurface();
    }
    else if (std::abs(centroid[2] - grid.z.front()) < tol)
    {
      tag = BoundaryTag::Bathymetry();
    }
    else if (std::abs(centroid[0] - grid.x.front()) < tol)
    {
      tag = opt.symy ? BoundaryTag::SymY() : BoundaryTag::FarField();
    }
    else if (std::abs(centroid[1] - grid.y.front()) < tol)
    {
      tag = opt.symx ? BoundaryTag::SymX() : BoundaryTag::FarField();
    }
    else if (std::abs(centroid[0] - grid.x.back()) < tol ||
             std::abs(centroid[1] - grid.y.back()) < tol)
    {
      tag = BoundaryTag::FarField();
    }
    facets.push_back({e, f, tag});
  }
  return HybridMesh(std::move(vertices), std::move(elements), std::move(facets),
                    std::move(geometry));
}

HybridMesh MirrorQuarter(const HybridMesh &quarter)
{
  const double q = 1e-9 * quarter.Diagonal();
  std::map<Key, int> index;
  std::vector<Vec3> vertices;
  std::vector<Element> elements;
  std::vector<std::vector<Vec3>> geometry;
  std::vector<mesh::BoundaryFacet> pending;  // facet of the copy, face given by vertex key
  std::vector<std::array<int, 4>> pending_keys;
  const bool quadratic = quarter.GeometryOrder() == 2;

  for (int sx : {1, -1})
  {
    for (int sy : {1, -1})
    {
      auto reflect = [&](Vec3 p) {
        p[0] *= sx;
        p[1] *= sy;
        return p;
      };
      std::vector<int> local(quarter.Vertices().size());
      for (std::size_t v = 0; v < quarter.Vertices().size(); ++v)
      {
        const Vec3 p = reflect(quarter.Vertices()[v]);
        auto [it, inserted] = index.emplace(Quantize(p, q), static_cast<int>(vertices.size()));
        if (inserted)
        {
          vertices.push_back(p);
        }
        local[v] = it->second;
      }
      for (int e = 0; e < quarter.NumElements(); ++e)
      {
        Element el = quarter.Elements()[e];
        for (int m = 0; m < el.NumVertices(); ++m)
        {
          el.v[m] = local[el.v[m]];
        }
        std::vector<Vec3> geo;
        if (quadratic)
        {
          for (const auto &p : quarter.QuadraticGeometry()[e])
          {
            geo.push_back(reflect(p));
          }
        }
        mesh::NormalizeOrientation(vertices, el, quadratic ? &geo : nullptr);
        elements.push_back(el);
        if (quadratic)
        {
          geometry.push_back(std::move(geo));
        }
      }
      for (const auto &f : quarter.Facets())
      {
        if (f.tag.kind == BoundaryTag::Kind::SymX || f.tag.kind == BoundaryTag::Kind::SymY)
        {
          continue;
        }
        const Element &orig = quarter.Elements()[f.element];
        std::array<int, 4> key{-1, -1, -1, -1};
        auto fv = mesh::FaceVertices(orig.shape, f.face);
        for (std::size_t i = 0; i < fv.size(); ++i)
        {
          key[i] = local[orig.v[fv[i]]];
        }
        std::sort(key.begin(), key.begin() + static_cast<long>(fv.size()));
        pending.push_back(f);
        pending_keys.push_back(key);
      }
    }
  }
  std::map<std::array<int, 4>, std::pair<int, int>> face_of;
  for (int e = 0; e < static_cast<int>(elements.size()); ++e)
  {
    for (int f = 0; f < mesh::NumFaces(elements[e].shape); ++f)
    {
      face_of.emplace(FaceKey(elements[e], f), std::make_pair(e, f));
    }
  }
  std::vector<mesh::BoundaryFacet> facets;
  for (std::size_t i = 0; i < pending.size(); ++i)
  {
    const auto [e, f] = face_of.at(pending_keys[i]);
    facets.push_back({e, f, pending[i].tag});
  }
  return HybridMesh(std::move(vertices), std::move(elements), std::move(facets),
                    std::move(geometry));
}

HybridMesh BoxFluid(int nx, int ny, int nz, double lx, double ly, double h)
{
  GridSpec g{Uniform(0.0, lx, nx), Uniform(0.0, ly, ny), Uniform(-h, 0.0, nz)};
  return BuildGridMesh(g, GridOptions{});
}

namespace
{

int Cells(double length, double size) { return std::max(1, static_cast<int>(std::ceil(length / size - 1e-9))); }

std::vector<double> Axis(std::initializer_list<double> breaks, double cell, double far_cell,
                         double near_limit)
{
  std::vector<double> out;
  double prev = 0.0;
  bool first = true;
  for (double b : breaks)
  {
    if (first)
    {
      prev = b;
      first = false;
      out.push_back(b);
      continue;
    }
    const double size = prev < near_limit - 1e-12 ? cell : far_cell;
    const auto seg = Uniform(prev, b, Cells(b - prev, size));
    out.insert(out.end(), seg.begin() + 1, seg.end());
    prev = b;
  }
  return out;
}

}  // namespace

HybridMesh FloatingBox(const FloatingBoxSpec &s)
{
  if (s.prism_height >= s.draft || s.draft >= s.depth)
  {
    throw ParameterError("floating box needs prism_height < draft < depth");
  }
  const double near = 2.0 * std::max(s.half_length, s.half_width);
  std::vector<double> xb{0.0};
  if (s.chamber_half_length > 0.0)
  {
    xb.push_back(s.chamber_half_length);
  }
  auto axis = [&](double half, double chamber) {
    std::vector<double> br{0.0};
    if (chamber > 0.0)
    {
      br.push_back(chamber);
    }
    br.push_back(half);
    if (near < s.extent)
    {
      br.push_back(near);
    }
    br.push_back(s.extent);
    std::vector<double> out{0.0};
    for (std::size_t i = 1; i < br.size(); ++i)
    {
      const double size = br[i - 1] < near - 1e-12 ? s.cell : s.far_cell;
      const auto seg = Uniform(br[i - 1], br[i], Cells(br[i] - br[i - 1], size));
      out.insert(out.end(), seg.begin() + 1, seg.end());
    }
    return out;
  };
  GridSpec g;
  g.x = axis(s.half_length, s.chamber_half_length);
  g.y = axis(s.half_width, s.chamber_half_width);
  g.z = Join({Uniform(-s.depth, -s.draft, Cells(s.depth - s.draft, s.far_cell)),
              Uniform(-s.draft, -s.prism_height, Cells(s.draft - s.prism_height, s.cell)),
              std::vector<double>{-s.prism_height, 0.0}});
  GridOptions opt;
  opt.symx = true;
  opt.symy = true;
  const bool chamber = s.chamber_half_length > 0.0 && s.chamber_half_width > 0.0;
  opt.solid = [&](const Vec3 &c) {
    const bool in_body = c[0] < s.half_length && c[1] < s.half_width && c[2] > -s.draft;
    const bool in_chamber = chamber && c[0] < s.chamber_half_length && c[1] < s.chamber_half_width;
    return in_body && !in_chamber;
  };
  if (chamber)
  {
    opt.lid = [&](const Vec3 &c) {
      return c[0] < s.chamber_half_length && c[1] < s.chamber_half_width;
    };
  }
  HybridMesh quarter = BuildGridMesh(g, opt);
  return s.quarter ? quarter : MirrorQuarter(quarter);
}

HybridMesh Sphere(const SphereSpec &s)
{
  const double a = s.radius;
  const double bo = s.blend_outer;
  const bool floating = s.centre_depth <= 0.0;
  const double zc = floating ? 0.0 : -s.centre_depth;
  if (bo <= a || bo >= s.extent)
  {
    throw ParameterError("sphere blend region must satisfy radius < blend_outer < extent");
  }
  if (!floating && s.centre_depth - bo <= s.prism_height)
  {
    throw ParameterError("submerged sphere blend region reaches the prism layer");
  }
  GridSpec g;
  g.x = Axis({0.0, a, bo, s.extent}, s.cell, s.far_cell, bo);
  g.y = g.x;
  if (floating)
  {
    g.z = Join({Uniform(-s.depth, -bo, Cells(s.depth - bo, s.far_cell)),
                Uniform(-bo, -a, Cells(bo - a, s.cell)),
                Uniform(-a, -s.prism_height, Cells(a - s.prism_height, s.cell)),
                std::vector<double>{-s.prism_height, 0.0}});
  }
  else
  {
    const double top_of_blend = zc + bo;
    g.z = Join({Uniform(-s.depth, zc - bo, Cells(s.depth + zc - bo, s.far_cell)),
                Uniform(zc - bo, zc - a, Cells(bo - a, s.cell)),
                Uniform(zc - a, zc + a, Cells(2 * a, s.cell)),
                Uniform(zc + a, top_of_blend, Cells(bo - a, s.cell)),
                Uniform(top_of_blend, -s.prism_height,
                        Cells(-s.prism_height - top_of_blend, s.far_cell)),
                std::vector<double>{-s.prism_height, 0.0}});
  }
  const double z_prism = -s.prism_height;
  GridOptions opt;
  opt.symx = true;
  opt.symy = true;
  opt.quadratic = s.quadratic;
  opt.solid = [=](const Vec3 &c) {
    return std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2] - zc)}) < a;
  };
  const double zref = floating ? z_prism : zc;
  opt.curved = [=](const Vec3 &p) {
    const double dz = floating && p[2] > z_prism ? zref : p[2] - zc;
    const double c = std::max({std::abs(p[0]), std::abs(p[1]), std::abs(dz)});
    return std::abs(c - a) < 1e-9 * a;
  };
  // Radial blend between the cube |.|_inf = a (sent to the sphere) and the
  // cube |.|_inf = bo (left in place). Prisms stay vertical, so a floating
  // body gets a short wall in the top layer, mapped as its bottom slice.
  opt.map = [=](const Vec3 &p) {
    const bool planar = floating && p[2] > z_prism;
    const double dz = planar ? z_prism : p[2] - zc;
    const double c = std::max({std::abs(p[0]), std::abs(p[1]), std::abs(dz)});
    if (c >= bo || c <= 0.0)
    {
      return p;
    }
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + dz * dz);
    const double lambda = std::clamp((c - a) / (bo - a), 0.0, 1.0);
    const double sigma = (1.0 - lambda) * (a * c / a) / r + lambda;
    Vec3 q = p;
    q[0] *= sigma;
    q[1] *= sigma;
    if (!planar)
    {
      q[2] = zc + dz * sigma;
    }
    return q;
  };
  return BuildGridMesh(g, opt);
}

}  // namespace hydrosem::meshgen
