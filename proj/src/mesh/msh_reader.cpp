// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/mesh/msh_reader.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::mesh
{

namespace
{

// gmsh edge tables for the quadratic nodes, in gmsh order.
constexpr int kTet10Edges[6][2] = {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {2, 3}, {1, 3}};
constexpr int kPrism18Edges[9][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 4},
                                     {2, 5}, {3, 4}, {3, 5}, {4, 5}};
constexpr int kPrism18Faces[3][4] = {{0, 1, 4, 3}, {0, 2, 5, 3}, {1, 2, 5, 4}};

class LineReader
{
public:
  explicit LineReader(std::string_view text)
  {
    std::size_t start = 0;
    while (start <= text.size())
    {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos)
      {
        end = text.size();
      }
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r')
      {
        line.remove_suffix(1);
      }
      lines_.push_back(line);
      start = end + 1;
    }
  }

  bool AtEnd() const { return pos_ >= lines_.size(); }
  std::size_t LineNumber() const { return pos_; }  // 1-based number of last line read

  std::string_view Next()
  {
    if (AtEnd())
    {
      throw ParseError("unexpected end of file", lines_.size());
    }
    return lines_[pos_++];
  }

  std::istringstream NextStream() { return std::istringstream(std::string(Next())); }

  [[noreturn]] void Fail(const std::string &msg) const { throw ParseError(msg, pos_); }

  template <typename... T>
  void Read(std::istringstream &in, T &...values) const
  {
    if (!(in >> ... >> values))
    {
      Fail("malformed line");
    }
  }

  void Expect(std::string_view marker)
  {
    std::string_view line = Next();
    if (Trim(line) != marker)
    {
      Fail(fmt::format("expected {}", marker));
    }
  }

  static std::string_view Trim(std::string_view s)
  {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    {
      s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    {
      s.remove_suffix(1);
    }
    return s;
  }

private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

struct RawElement
{
  int type;
  int entity_dim;
  int entity_tag;
  std::vector<std::size_t> nodes;
  std::size_t line;
};

int NodesPerType(int type)
{
  switch (type)
  {
    case 15:
      return 1;
    case 1:
      return 2;
    case 8:
      return 3;
    case 2:
      return 3;
    case 3:
      return 4;
    case 9:
      return 6;
    case 10:
      return 9;
    case 16:
      return 8;
    case 4:
      return 4;
    case 6:
      return 6;
    case 11:
      return 10;
    case 18:
      return 18;
    default:
      return -1;
  }
}

std::array<int, 4> SortedKey(const std::vector<int> &v)
{
  std::array<int, 4> key{-1, -1, -1, -1};
  std::copy(v.begin(), v.end(), key.begin());
  std::sort(key.begin(), key.begin() + static_cast<long>(v.size()));
  return key;
}

}  // namespace

HybridMesh ParseMsh(std::string_view text)
{
  LineReader in(text);
  std::map<std::pair<int, int>, std::string> physical_names;       // (dim, tag) -> name
  std::map<std::pair<int, int>, std::vector<int>> entity_physicals;  // (dim, tag) -> tags
  std::unordered_map<std::size_t, Vec3> nodes;
  std::vector<RawElement> raw;
  bool have_format = false;
  bool have_nodes = false;
  bool have_elements = false;

  while (!in.AtEnd())
  {
    std::string_view line = LineReader::Trim(in.Next());
    if (line.empty())
    {
      continue;
    }
    if (line == "$MeshFormat")
    {
      auto s = in.NextStream();
      std::string version;
      int file_type = 0;
      int data_size = 0;
      in.Read(s, version, file_type, data_size);
      if (file_type != 0)
      {
        in.Fail("binary MSH files are not supported; save as ASCII");
      }
      if (version != "4.1")
      {
        in.Fail(fmt::format("unsupported MSH version {} (need 4.1)", version));
      }
      in.Expect("$EndMeshFormat");
      have_format = true;
    }
    else if (line == "$PhysicalNames")
    {
      auto s = in.NextStream();
      int count = 0;
      in.Read(s, count);
      for (int i = 0; i < count; ++i)
      {
        std::string_view l = in.Next();
        std::istringstream ls{std::string(l)};
        int dim = 0;
        int tag = 0;
        in.Read(ls, dim, tag);
        const auto q0 = l.find('"');
        const auto q1 = l.rfind('"');
        if (q0 == std::string_view::npos || q1 == q0)
        {
          in.Fail("physical name must be quoted");
        }
        physical_names[{dim, tag}] = std::string(l.substr(q0 + 1, q1 - q0 - 1));
      }
      in.Expect("$EndPhysicalNames");
    }
    else if (line == "$Entities")
    {
      auto s = in.NextStream();
      std::size_t counts[4] = {0, 0, 0, 0};
      in.Read(s, counts[0], counts[1], counts[2], counts[3]);
      for (int dim = 0; dim < 4; ++dim)
      {
        for (std::size_t i = 0; i < counts[dim]; ++i)
        {
          auto es = in.NextStream();
          int tag = 0;
          double bb[6];
          in.Read(es, tag, bb[0], bb[1], bb[2]);
          if (dim > 0)
          {
            in.Read(es, bb[3], bb[4], bb[5]);
          }
          std::size_t nphys = 0;
          in.Read(es, nphys);
          std::vector<int> phys(nphys);
          for (auto &p : phys)
          {
            in.Read(es, p);
          }
          entity_physicals[{dim, tag}] = std::move(phys);
        }
      }
      in.Expect("$EndEntities");
    }
    else if (line == "$Nodes")
    {
      auto s = in.NextStream();
      std::size_t nblocks = 0;
      std::size_t nnodes = 0;
      std::size_t min_tag = 0;
      std::size_t max_tag = 0;
      in.Read(s, nblocks, nnodes, min_tag, max_tag);
      nodes.reserve(nnodes);
      for (std::size_t b = 0; b < nblocks; ++b)
      {
        auto hs = in.NextStream();
        int dim = 0;
        int tag = 0;
        int parametric = 0;
        std::size_t n = 0;
        in.Read(hs, dim, tag, parametric, n);
        std::vector<std::size_t> tags(n);
        for (auto &t : tags)
        {
          auto ts = in.NextStream();
          in.Read(ts, t);
        }
        for (std::size_t i = 0; i < n; ++i)
        {
          auto cs = in.NextStream();
          Vec3 p{};
          in.Read(cs, p[0], p[1], p[2]);
          if (!nodes.emplace(tags[i], p).second)
          {
            in.Fail(fmt::format("duplicate node tag {}", tags[i]));
          }
        }
      }
      if (nodes.size() != nnodes)
      {
        in.Fail(fmt::format("expected {} nodes, found {}", nnodes, nodes.size()));
      }
      in.Expect("$EndNodes");
      have_nodes = true;
    }
    else if (line == "$Elements")
    {
      auto s = in.NextStream();
      std::size_t nblocks = 0;
      std::size_t nelem = 0;
      std::size_t min_tag = 0;
      std::size_t max_tag = 0;
      in.Read(s, nblocks, nelem, min_tag, max_tag);
      for (std::size_t b = 0; b < nblocks; ++b)
      {
        auto hs = in.NextStream();
        int dim = 0;
        int tag = 0;
        int type = 0;
        std::size_t n = 0;
        in.Read(hs, dim, tag, type, n);
        const int npe = NodesPerType(type);
        if (npe < 0 || (dim == 3 && type != 4 && type != 6 && type != 11 && type != 18))
        {
          in.Fail(fmt::format("unsupported element type {}", type));
        }
        for (std::size_t i = 0; i < n; ++i)
        {
          auto es = in.NextStream();
          RawElement re{type, dim, tag, std::vector<std::size_t>(npe), in.LineNumber()};
          std::size_t etag = 0;
          in.Read(es, etag);
          for (auto &nd : re.nodes)
          {
            in.Read(es, nd);
          }
          raw.push_back(std::move(re));
        }
      }
      in.Expect("$EndElements");
      have_elements = true;
    }
    else if (line.size() > 1 && line[0] == '$')
    {
      // Unknown section: skip to its end marker.
      const std::string end = "$End" + std::string(line.substr(1));
      while (LineReader::Trim(in.Next()) != end)
      {
      }
    }
    else
    {
      in.Fail(fmt::format("unexpected content '{}'", line));
    }
  }
  if (!have_format || !have_nodes || !have_elements)
  {
    throw ParseError("missing $MeshFormat, $Nodes or $Elements section", in.LineNumber());
  }

  auto node_at = [&](std::size_t tag, std::size_t line) -> const Vec3 & {
    auto it = nodes.find(tag);
    if (it == nodes.end())
    {
      throw ParseError(fmt::format("element references unknown node {}", tag), line);
    }
    return it->second;
  };

  // Corner nodes of volume elements become mesh vertices.
  std::vector<Vec3> vertices;
  std::unordered_map<std::size_t, int> vertex_of_tag;
  bool quadratic = false;
  for (const auto &re : raw)
  {
    if (re.entity_dim != 3)
    {
      continue;
    }
    quadratic = quadratic || re.type == 11 || re.type == 18;
    const int nc = (re.type == 4 || re.type == 11) ? 4 : 6;
    for (int i = 0; i < nc; ++i)
    {
      if (vertex_of_tag.emplace(re.nodes[i], static_cast<int>(vertices.size())).second)
      {
        vertices.push_back(node_at(re.nodes[i], re.line));
      }
    }
  }

  std::vector<Element> elements;
  std::vector<std::vector<Vec3>> geometry;
  for (const auto &re : raw)
  {
    if (re.entity_dim != 3)
    {
      continue;
    }
    Element el;
    el.shape = (re.type == 4 || re.type == 11) ? Shape::Tet : Shape::Prism;
    for (int i = 0; i < el.NumVertices(); ++i)
    {
      el.v[i] = vertex_of_tag.at(re.nodes[i]);
    }
    std::vector<Vec3> geo;
    if (quadratic)
    {
      for (std::size_t i = 0; i < re.nodes.size(); ++i)
      {
        geo.push_back(node_at(re.nodes[i], re.line));
      }
      auto mid = [&](int a, int b) {
        return Vec3{0.5 * (geo[a][0] + geo[b][0]), 0.5 * (geo[a][1] + geo[b][1]),
                    0.5 * (geo[a][2] + geo[b][2])};
      };
      if (re.type == 4)
      {
        for (const auto &e : kTet10Edges)
        {
          geo.push_back(mid(e[0], e[1]));
        }
      }
      else if (re.type == 6)
      {
        for (const auto &e : kPrism18Edges)
        {
          geo.push_back(mid(e[0], e[1]));
        }
        for (const auto &f : kPrism18Faces)
        {
          Vec3 c{0, 0, 0};
          for (int k : f)
          {
            for (int d = 0; d < 3; ++d)
            {
              c[d] += 0.25 * geo[k][d];
            }
          }
          geo.push_back(c);
        }
      }
    }
    NormalizeOrientation(vertices, el, quadratic ? &geo : nullptr);
    elements.push_back(el);
    if (quadratic)
    {
      geometry.push_back(std::move(geo));
    }
  }

  std::map<std::array<int, 4>, std::pair<int, int>> face_of_key;
  for (int e = 0; e < static_cast<int>(elements.size()); ++e)
  {
    const Element &el = elements[e];
    for (int f = 0; f < NumFaces(el.shape); ++f)
    {
      std::vector<int> fv;
      for (int lv : FaceVertices(el.shape, f))
      {
        fv.push_back(el.v[lv]);
      }
      face_of_key.emplace(SortedKey(fv), std::make_pair(e, f));
    }
  }

  std::vector<BoundaryFacet> facets;
  for (const auto &re : raw)
  {
    if (re.entity_dim != 2)
    {
      continue;
    }
    auto phys = entity_physicals.find({2, re.entity_tag});
    if (phys == entity_physicals.end() || phys->second.empty())
    {
      continue;
    }
    auto name = physical_names.find({2, phys->second.front()});
    if (name == physical_names.end())
    {
      throw TaggingError(fmt::format("surface entity {} has a physical group without a name",
                                     re.entity_tag));
    }
    const BoundaryTag tag = BoundaryTag::FromName(name->second);
    const int nc = (re.type == 2 || re.type == 9) ? 3 : 4;
    std::vector<int> fv;
    for (int i = 0; i < nc; ++i)
    {
      auto it = vertex_of_tag.find(re.nodes[i]);
      if (it == vertex_of_tag.end())
      {
        throw ParseError("boundary facet does not lie on any volume element", re.line);
      }
      fv.push_back(it->second);
    }
    auto it = face_of_key.find(SortedKey(fv));
    if (it == face_of_key.end())
    {
      throw ParseError("boundary facet does not match any element face", re.line);
    }
    facets.push_back({it->second.first, it->second.second, tag});
  }

  return HybridMesh(std::move(vertices), std::move(elements), std::move(facets),
                    std::move(geometry));
}

HybridMesh ReadMshFile(const std::string &path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
  {
    throw Error(fmt::format("cannot open mesh file '{}'", path));
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ParseMsh(ss.str());
}

std::string WriteMsh(const HybridMesh &mesh)
{
  const auto tags = mesh.Tags();
  const bool quadratic = mesh.GeometryOrder() == 2;
  std::string out;
  out += "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n";
  out += fmt::format("$PhysicalNames\n{}\n", tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i)
  {
    out += fmt::format("2 {} \"{}\"\n", i + 1, tags[i].Name());
  }
  out += "$EndPhysicalNames\n";
  out += fmt::format("$Entities\n0 0 {} 1\n", tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i)
  {
    out += fmt::format("{} 0 0 0 0 0 0 1 {} 0\n", i + 1, i + 1);
  }
  out += "1 0 0 0 0 0 0 0 0\n$EndEntities\n";

  // Vertices first, then per-element higher-order nodes.
  const auto &verts = mesh.Vertices();
  std::vector<Vec3> extra;
  std::vector<std::vector<std::size_t>> extra_ids(mesh.NumElements());
  if (quadratic)
  {
    for (int e = 0; e < mesh.NumElements(); ++e)
    {
      const auto &g = mesh.QuadraticGeometry()[e];
      const int nv = mesh.Elements()[e].NumVertices();
      for (std::size_t k = nv; k < g.size(); ++k)
      {
        extra_ids[e].push_back(verts.size() + extra.size() + 1);
        extra.push_back(g[k]);
      }
    }
  }
  const std::size_t nn = verts.size() + extra.size();
  out += fmt::format("$Nodes\n1 {} 1 {}\n3 1 0 {}\n", nn, nn, nn);
  for (std::size_t i = 1; i <= nn; ++i)
  {
    out += fmt::format("{}\n", i);
  }
  for (const auto &p : verts)
  {
    out += fmt::format("{:.17g} {:.17g} {:.17g}\n", p[0], p[1], p[2]);
  }
  for (const auto &p : extra)
  {
    out += fmt::format("{:.17g} {:.17g} {:.17g}\n", p[0], p[1], p[2]);
  }
  out += "$EndNodes\n";

  std::vector<std::string> blocks;
  std::size_t etag = 1;
  std::size_t nelem = 0;
  for (std::size_t i = 0; i < tags.size(); ++i)
  {
    for (int nc : {3, 4})
    {
      std::string body;
      std::size_t count = 0;
      for (const auto &f : mesh.Facets())
      {
        if (!(f.tag == tags[i]))
        {
          continue;
        }
        const Element &el = mesh.Elements()[f.element];
        auto fv = FaceVertices(el.shape, f.face);
        if (static_cast<int>(fv.size()) != nc)
        {
          continue;
        }
        body += fmt::format("{}", etag++);
        for (int lv : fv)
        {
          body += fmt::format(" {}", el.v[lv] + 1);
        }
        body += "\n";
        ++count;
      }
      if (count > 0)
      {
        blocks.push_back(fmt::format("2 {} {} {}\n", i + 1, nc == 3 ? 2 : 3, count) + body);
        nelem += count;
      }
    }
  }
  for (Shape shape : {Shape::Tet, Shape::Prism})
  {
    std::string body;
    std::size_t count = 0;
    for (int e = 0; e < mesh.NumElements(); ++e)
    {
      const Element &el = mesh.Elements()[e];
      if (el.shape != shape)
      {
        continue;
      }
      body += fmt::format("{}", etag++);
      for (int k = 0; k < el.NumVertices(); ++k)
      {
        body += fmt::format(" {}", el.v[k] + 1);
      }
      for (std::size_t id : extra_ids[e])
      {
        body += fmt::format(" {}", id);
      }
      body += "\n";
      ++count;
    }
    if (count > 0)
    {
      int type = shape == Shape::Tet ? (quadratic ? 11 : 4) : (quadratic ? 18 : 6);
      blocks.push_back(fmt::format("3 1 {} {}\n", type, count) + body);
      nelem += count;
    }
  }
  out += fmt::format("$Elements\n{} {} 1 {}\n", blocks.size(), nelem, nelem);
  for (const auto &b : blocks)
  {
    out += b;
  }
  out += "$EndElements\n";
  return out;
}

}  // namespace hydrosem::mesh
