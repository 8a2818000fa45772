// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_MESH_MSH_READER_HPP
#define HYDROSEM_MESH_MSH_READER_HPP

#include <string>
#include <string_view>

#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::mesh
{

// Reads a gmsh MSH 4.1 ASCII file. Volume elements: type 4 (tet4), 6
// (prism6), 11 (tet10), 18 (prism18). Boundary facets: 2, 3, 9, 10, 16.
// Facets are tagged from the physical-group name of their surface entity.
// When any volume element is quadratic, straight-sided ones are promoted so
// that every element carries quadratic geometry nodes.
HybridMesh ParseMsh(std::string_view text);
HybridMesh ReadMshFile(const std::string &path);

// Writes an MSH 4.1 ASCII file readable by ParseMsh. One surface entity per
// boundary tag, one volume entity for all elements.
std::string WriteMsh(const HybridMesh &mesh);

}  // namespace hydrosem::mesh

#endif  // HYDROSEM_MESH_MSH_READER_HPP
