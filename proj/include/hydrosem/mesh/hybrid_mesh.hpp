// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_MESH_HYBRID_MESH_HPP
#define HYDROSEM_MESH_HYBRID_MESH_HPP

#include <array>
#include <compare>
#include <span>
#include <string>
#include <vector>

namespace hydrosem::mesh
{

using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

enum class Shape
{
  Tet,
  Prism
};

// Boundary classification. Special boundaries carry a 1-based index.
struct BoundaryTag
{
  enum class Kind
  {
    FreeSurface,
    Bathymetry,
    FarField,
    Body,
    SymX,  // the y = 0 plane
    SymY,  // the x = 0 plane
    Special
  };

  Kind kind = Kind::FreeSurface;
  int index = 0;

  static BoundaryTag FreeSurface() { return {Kind::FreeSurface, 0}; }
  static BoundaryTag Bathymetry() { return {Kind::Bathymetry, 0}; }
  static BoundaryTag FarField() { return {Kind::FarField, 0}; }
  static BoundaryTag Body() { return {Kind::Body, 0}; }
  static BoundaryTag SymX() { return {Kind::SymX, 0}; }
  static BoundaryTag SymY() { return {Kind::SymY, 0}; }
  static BoundaryTag Special(int i) { return {Kind::Special, i}; }

  // Case-insensitive physical-group name ("freesurface", "special2", ...).
  // Throws TaggingError for unknown names.
  static BoundaryTag FromName(const std::string &name);
  std::string Name() const;

  auto operator<=>(const BoundaryTag &) const = default;
};

struct Element
{
  Shape shape = Shape::Tet;
  // Tets use the first four entries. Prisms list the bottom triangle (0,1,2)
  // followed by the top triangle (3,4,5) with vertex i+3 directly above i.
  std::array<int, 6> v{-1, -1, -1, -1, -1, -1};

  int NumVertices() const { return shape == Shape::Tet ? 4 : 6; }
};

struct BoundaryFacet
{
  int element = -1;
  int face = -1;
  BoundaryTag tag;
};

// Triangulated z = 0 surface formed by the tops of prisms tagged FreeSurface.
struct FreeSurfaceTrace
{
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> vertex_of_node;     // 2D node -> 3D mesh vertex
  std::vector<int> prism_of_triangle;  // 2D triangle -> element index
  bool Empty() const { return triangles.empty(); }
};

// Local face tables. Tet faces: 0:(0,1,2) 1:(0,1,3) 2:(1,2,3) 3:(0,2,3).
// Prism faces: 0:bottom(0,1,2) 1:top(3,4,5) 2:(0,1,4,3) 3:(1,2,5,4) 4:(2,0,3,5).
int NumFaces(Shape shape);
std::span<const int> FaceVertices(Shape shape, int face);

// Number of quadratic geometry nodes (tet10 / prism18 in gmsh ordering).
int NumQuadraticGeometryNodes(Shape shape);

// Tessellation of the fluid volume into one vertical layer of prisms at the
// free surface over an unstructured tetrahedral volume. Immutable once built;
// construction validates every invariant and throws TopologyError,
// TaggingError or GeometryError on violation.
class HybridMesh
{
public:
  HybridMesh() = default;

  // geometry_nodes: empty (straight-sided) or one entry per element with the
  // quadratic geometry nodes in gmsh order (10 for tets, 18 for prisms).
  HybridMesh(std::vector<Vec3> vertices, std::vector<Element> elements,
             std::vector<BoundaryFacet> facets,
             std::vector<std::vector<Vec3>> geometry_nodes = {});

  const std::vector<Vec3> &Vertices() const { return vertices_; }
  const std::vector<Element> &Elements() const { return elements_; }
  const std::vector<BoundaryFacet> &Facets() const { return facets_; }
  const FreeSurfaceTrace &FreeSurface() const { return free_surface_; }

  int NumElements() const { return static_cast<int>(elements_.size()); }
  int NumTets() const { return num_tets_; }
  int NumPrisms() const { return num_prisms_; }

  // 1 for straight-sided meshes, 2 when quadratic geometry nodes are stored.
  int GeometryOrder() const { return geometry_nodes_.empty() ? 1 : 2; }
  // Geometry nodes of element e. For straight-sided meshes these are the
  // element vertices.
  std::vector<Vec3> GeometryNodes(int e) const;
  const std::vector<std::vector<Vec3>> &QuadraticGeometry() const
  {
    return geometry_nodes_;
  }

  bool HasTag(const BoundaryTag &tag) const;
  std::vector<BoundaryTag> Tags() const;
  int CountFacets(const BoundaryTag &tag) const;

  Vec3 BoundingMin() const { return bbox_min_; }
  Vec3 BoundingMax() const { return bbox_max_; }
  double Diagonal() const;

private:
  void Validate();
  void BuildFreeSurface();

  std::vector<Vec3> vertices_;
  std::vector<Element> elements_;
  std::vector<BoundaryFacet> facets_;
  std::vector<std::vector<Vec3>> geometry_nodes_;
  FreeSurfaceTrace free_surface_;
  int num_tets_ = 0;
  int num_prisms_ = 0;
  Vec3 bbox_min_{0.0, 0.0, 0.0};
  Vec3 bbox_max_{0.0, 0.0, 0.0};
};

// Flips negatively oriented elements and turns upside-down prisms so that the
// conventions above hold. Quadratic geometry nodes are permuted alongside.
void NormalizeOrientation(const std::vector<Vec3> &vertices, Element &elem,
                          std::vector<Vec3> *geometry_nodes);

// Signed volume of the straight-sided element spanned by the vertices.
double SignedVolume(const std::vector<Vec3> &vertices, const Element &elem);

}  // namespace hydrosem::mesh

#endif  // HYDROSEM_MESH_HYBRID_MESH_HPP
