// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_MESH_STRETCHING_HPP
#define HYDROSEM_MESH_STRETCHING_HPP

#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::mesh
{

enum class StretchAxis
{
  X,
  Y,
  Radial
};

// Geometric stretching of the horizontal coordinate beyond |u| = start. A
// node that sat i layers of width `layer_width` past the start moves to
// start + w*(r + r^2 + ... + r^i); positions in between follow the smooth
// interpolant w*r*(r^(d/w) - 1)/(r - 1). layer_width = 0 takes the distance
// from start to the first node coordinate beyond it.
struct StretchSpec
{
  StretchAxis axis = StretchAxis::X;
  double start = 0.0;
  double ratio = 1.0;
  double layer_width = 0.0;
};

// Only x and y change, so the prism layer stays vertical. Throws
// ParameterError for ratio <= 1 or a start outside the mesh, TopologyError
// when an element inverts.
HybridMesh ApplyStretching(const HybridMesh &mesh, const StretchSpec &spec);

// The scalar map used above, exposed for tests.
double StretchCoordinate(double u, double start, double ratio, double layer_width);

}  // namespace hydrosem::mesh

#endif  // HYDROSEM_MESH_STRETCHING_HPP
