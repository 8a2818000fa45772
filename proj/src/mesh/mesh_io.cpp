// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/mesh/mesh_io.hpp"

#include <sstream>

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::mesh
{

namespace
{

constexpr const char *kMagic = "hydrosem-mesh";
constexpr int kVersion = 1;

void AppendPoint(std::string &out, const Vec3 &p)
{
  out += fmt::format("{:.17g} {:.17g} {:.17g}\n", p[0], p[1], p[2]);
}

class Reader
{
public:
  explicit Reader(std::string_view text) : in_(std::string(text)) {}

  std::istringstream Line()
  {
    std::string l;
    if (!std::getline(in_, l))
    {
      throw ParseError("unexpected end of mesh file", line_);
    }
    ++line_;
    return std::istringstream(l);
  }

  template <typename... T>
  void Get(std::istringstream &s, T &...v)
  {
    if (!(s >> ... >> v))
    {
      throw ParseError("malformed mesh record", line_);
    }
  }

  void Keyword(std::istringstream &s, const std::string &expected)
  {
    std::string k;
    Get(s, k);
    if (k != expected)
    {
      throw ParseError(fmt::format("expected '{}', got '{}'", expected, k), line_);
    }
  }

  std::size_t line() const { return line_; }

private:
  std::istringstream in_;
  std::size_t line_ = 0;
};

}  // namespace

std::string Serialize(const HybridMesh &mesh)
{
  std::string out = fmt::format("{} {}\n", kMagic, kVersion);
  out += fmt::format("vertices {}\n", mesh.Vertices().size());
  for (const auto &p : mesh.Vertices())
  {
    AppendPoint(out, p);
  }
  out += fmt::format("elements {}\n", mesh.NumElements());
  for (const auto &e : mesh.Elements())
  {
    out += e.shape == Shape::Tet ? "tet" : "prism";
    for (int i = 0; i < e.NumVertices(); ++i)
    {
      out += fmt::format(" {}", e.v[i]);
    }
    out += "\n";
  }
  out += fmt::format("facets {}\n", mesh.Facets().size());
  for (const auto &f : mesh.Facets())
  {
    out += fmt::format("{} {} {}\n", f.element, f.face, f.tag.Name());
  }
  const auto &geo = mesh.QuadraticGeometry();
  out += fmt::format("geometry {}\n", geo.size());
  for (const auto &g : geo)
  {
    out += fmt::format("{}\n", g.size());
    for (const auto &p : g)
    {
      AppendPoint(out, p);
    }
  }
  out += "end\n";
  return out;
}

HybridMesh Deserialize(std::string_view text)
{
  Reader r(text);
  {
    auto s = r.Line();
    std::string magic;
    int version = 0;
    r.Get(s, magic, version);
    if (magic != kMagic || version != kVersion)
    {
      throw ParseError(fmt::format("not a {} {} file", kMagic, kVersion), r.line());
    }
  }
  std::size_t n = 0;
  {
    auto s = r.Line();
    r.Keyword(s, "vertices");
    r.Get(s, n);
  }
  std::vector<Vec3> vertices(n);
  for (auto &p : vertices)
  {
    auto s = r.Line();
    r.Get(s, p[0], p[1], p[2]);
  }
  {
    auto s = r.Line();
    r.Keyword(s, "elements");
    r.Get(s, n);
  }
  std::vector<Element> elements(n);
  for (auto &e : elements)
  {
    auto s = r.Line();
    std::string kind;
    r.Get(s, kind);
    if (kind == "tet")
    {
      e.shape = Shape::Tet;
    }
    else if (kind == "prism")
    {
      e.shape = Shape::Prism;
    }
    else
    {
      throw ParseError(fmt::format("unknown element kind '{}'", kind), r.line());
    }
    for (int i = 0; i < e.NumVertices(); ++i)
    {
      r.Get(s, e.v[i]);
    }
  }
  {
    auto s = r.Line();
    r.Keyword(s, "facets");
    r.Get(s, n);
  }
  std::vector<BoundaryFacet> facets(n);
  for (auto &f : facets)
  {
    auto s = r.Line();
    std::string name;
    r.Get(s, f.element, f.face, name);
    f.tag = BoundaryTag::FromName(name);
  }
  {
    auto s = r.Line();
    r.Keyword(s, "geometry");
    r.Get(s, n);
  }
  std::vector<std::vector<Vec3>> geo(n);
  for (auto &g : geo)
  {
    auto s = r.Line();
    std::size_t m = 0;
    r.Get(s, m);
    g.resize(m);
    for (auto &p : g)
    {
      auto ps = r.Line();
      r.Get(ps, p[0], p[1], p[2]);
    }
  }
  {
    auto s = r.Line();
    r.Keyword(s, "end");
  }
  return HybridMesh(std::move(vertices), std::move(elements), std::move(facets), std::move(geo));
}

bool Identical(const HybridMesh &a, const HybridMesh &b)
{
  if (a.Vertices() != b.Vertices() || a.NumElements() != b.NumElements() ||
      a.Facets().size() != b.Facets().size() || a.QuadraticGeometry() != b.QuadraticGeometry())
  {
    return false;
  }
  for (int e = 0; e < a.NumElements(); ++e)
  {
    const auto &x = a.Elements()[e];
    const auto &y = b.Elements()[e];
    if (x.shape != y.shape || x.v != y.v)
    {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.Facets().size(); ++i)
  {
    const auto &x = a.Facets()[i];
    const auto &y = b.Facets()[i];
    if (x.element != y.element || x.face != y.face || !(x.tag == y.tag))
    {
      return false;
    }
  }
  return true;
}

}  // namespace hydrosem::mesh
