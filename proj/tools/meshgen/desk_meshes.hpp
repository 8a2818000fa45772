// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_TOOLS_DESK_MESHES_HPP
#define HYDROSEM_TOOLS_DESK_MESHES_HPP

#include <functional>
#include <vector>

#include "hydrosem/mesh/hybrid_mesh.hpp"

// Structured hybrid meshes for tests and examples. This is not a general
// mesher: fluid cells of a tensor grid are split into two prisms (top cell
// layer) or six tetrahedra (all other layers), and an optional point map
// bends the grid around curved bodies.
namespace hydrosem::meshgen
{

using mesh::BoundaryTag;
using mesh::HybridMesh;
using mesh::Vec3;

struct GridSpec
{
  std::vector<double> x, y, z;  // ascending; z ends at 0
};

struct GridOptions
{
  // Cells whose (unmapped) centre satisfies this are solid (removed).
  std::function<bool(const Vec3 &)> solid;
  // z = 0 faces whose (unmapped) centroid satisfies this become special1.
  std::function<bool(const Vec3 &)> lid;
  // Point map applied to vertices and geometry nodes.
  std::function<Vec3(const Vec3 &)> map;
  // When set, only geometry nodes whose (unmapped) position satisfies this
  // take the map; the rest are interpolated from the mapped vertices.
  std::function<bool(const Vec3 &)> curved;
  bool symx = false;   // y = y.front() is the y = 0 symmetry plane
  bool symy = false;   // x = x.front() is the x = 0 symmetry plane
  bool quadratic = false;
};

HybridMesh BuildGridMesh(const GridSpec &grid, const GridOptions &options);

// n equal intervals on [a,b] (n+1 points).
std::vector<double> Uniform(double a, double b, int n);
// Concatenate coordinate segments, dropping duplicated joints.
std::vector<double> Join(std::initializer_list<std::vector<double>> parts);

// Mirrors a quarter mesh (symx and symy planes at y = 0 and x = 0) into the
// full domain; symmetry facets become interior.
HybridMesh MirrorQuarter(const HybridMesh &quarter);

// Box fluid [0,lx] x [0,ly] x [-h,0] with n cells per direction; top face
// freesurface, bottom bathymetry, sides farfield.
HybridMesh BoxFluid(int nx, int ny, int nz, double lx, double ly, double h);

struct FloatingBoxSpec
{
  double half_length = 1.0;  // body half-size in x
  double half_width = 1.0;   // body half-size in y
  double draft = 1.0;
  double depth = 4.0;
  double extent = 6.0;       // domain half-size
  double cell = 0.5;         // cell size near the body
  double far_cell = 1.0;
  double prism_height = 0.25;
  bool quarter = true;
  // Moonpool: open chamber of these half sizes (0 = none), lid tagged special1.
  double chamber_half_length = 0.0;
  double chamber_half_width = 0.0;
};
HybridMesh FloatingBox(const FloatingBoxSpec &spec);

struct SphereSpec
{
  double radius = 1.0;
  double centre_depth = 0.0;  // 0 = floating hemisphere
  double depth = 5.0;         // water depth
  double extent = 6.0;        // domain half-size in x and y
  double cell = 0.5;          // cell size near the body (radius / cell integer)
  double far_cell = 1.0;
  double blend_outer = 2.5;   // outer cube half-size of the blending region
  double prism_height = 0.25;
  bool quadratic = true;
};
// Quarter domain around a floating hemisphere (centre_depth = 0) or a fully
// submerged sphere.
HybridMesh Sphere(const SphereSpec &spec);

}  // namespace hydrosem::meshgen

#endif  // HYDROSEM_TOOLS_DESK_MESHES_HPP
