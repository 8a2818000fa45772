// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/assembly/dofmap.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/refelem/element_map.hpp"

namespace hydrosem::assembly
{

namespace
{

using Key = std::vector<std::pair<int, long long>>;

constexpr double kWeightScale = 1e9;

// Vertex weights of a reference point: barycentric on the tet, barycentric
// times linear-in-t on the prism.
std::array<double, 6> VertexWeights(mesh::Shape shape, double r, double s, double t)
{
  std::array<double, 6> w{};
  if (shape == mesh::Shape::Tet)
  {
    w[0] = -(1.0 + r + s + t) / 2.0;
    w[1] = (1.0 + r) / 2.0;
    w[2] = (1.0 + s) / 2.0;
    w[3] = (1.0 + t) / 2.0;
    return w;
  }
  const double l[3] = {-(r + s) / 2.0, (1.0 + r) / 2.0, (1.0 + s) / 2.0};
  for (int i = 0; i < 3; ++i)
  {
    w[i] = l[i] * (1.0 - t) / 2.0;
    w[i + 3] = l[i] * (1.0 + t) / 2.0;
  }
  return w;
}

}  // namespace

const std::vector<int> &DofMap::Nodes(const BoundaryTag &tag) const
{
  static const std::vector<int> empty;
  auto it = boundary_nodes.find(tag);
  return it == boundary_nodes.end() ? empty : it->second;
}

DofMap BuildDofMap(const HybridMesh &mesh, int order)
{
  DofMap dm;
  dm.order = order;
  dm.l2g.resize(mesh.NumElements());
  std::map<Key, int> index;
  std::vector<Eigen::RowVector3d> coords;
  for (int e = 0; e < mesh.NumElements(); ++e)
  {
    const mesh::Element &el = mesh.Elements()[e];
    const auto &ref = refelem::GetReference(el.shape, order);
    const Eigen::MatrixXd x = refelem::NodeCoordinates(ref, refelem::ElementGeometry(mesh, e));
    auto &map = dm.l2g[e];
    map.resize(ref.num_nodes());
    for (int i = 0; i < ref.num_nodes(); ++i)
    {
      const auto w =
          VertexWeights(el.shape, ref.nodes()(i, 0), ref.nodes()(i, 1), ref.nodes()(i, 2));
      Key key;
      for (int v = 0; v < el.NumVertices(); ++v)
      {
        const long long q = std::llround(w[v] * kWeightScale);
        if (q != 0)
        {
          key.emplace_back(el.v[v], q);
        }
      }
      std::sort(key.begin(), key.end());
      auto [it, inserted] = index.emplace(std::move(key), static_cast<int>(coords.size()));
      if (inserted)
      {
        coords.push_back(x.row(i));
      }
      map[i] = it->second;
    }
  }
  dm.num_dofs = static_cast<int>(coords.size());
  dm.coords.resize(dm.num_dofs, 3);
  for (int i = 0; i < dm.num_dofs; ++i)
  {
    dm.coords.row(i) = coords[i];
  }

  // Shared faces must see the same node set from both sides.
  std::map<std::vector<int>, std::vector<int>> face_nodes;
  for (int e = 0; e < mesh.NumElements(); ++e)
  {
    const mesh::Element &el = mesh.Elements()[e];
    const auto &ref = refelem::GetReference(el.shape, order);
    for (int f = 0; f < mesh::NumFaces(el.shape); ++f)
    {
      std::vector<int> verts;
      for (int v : mesh::FaceVertices(el.shape, f))
      {
        verts.push_back(el.v[v]);
      }
      std::sort(verts.begin(), verts.end());
      std::vector<int> nodes;
      for (int i : ref.faces()[f].nodes)
      {
        nodes.push_back(dm.l2g[e][i]);
      }
      std::sort(nodes.begin(), nodes.end());
      auto [it, inserted] = face_nodes.emplace(verts, nodes);
      if (!inserted && it->second != nodes)
      {
        throw TopologyError(
            fmt::format("element {} face {} is not conforming with its neighbour", e, f));
      }
    }
  }

  std::map<BoundaryTag, std::set<int>> sets;
  for (const auto &bf : mesh.Facets())
  {
    const auto &ref = refelem::GetReference(mesh.Elements()[bf.element].shape, order);
    auto &s = sets[bf.tag];
    for (int i : ref.faces()[bf.face].nodes)
    {
      s.insert(dm.l2g[bf.element][i]);
    }
  }
  for (auto &[tag, s] : sets)
  {
    dm.boundary_nodes[tag] = std::vector<int>(s.begin(), s.end());
  }
  return dm;
}

}  // namespace hydrosem::assembly
