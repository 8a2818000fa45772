// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_MESH_MESH_IO_HPP
#define HYDROSEM_MESH_MESH_IO_HPP

#include <string>
#include <string_view>

#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::mesh
{

// Plain-text serialization used for golden files. The first line is
// "hydrosem-mesh 1"; coordinates are written with 17 significant digits so
// that Deserialize(Serialize(m)) reproduces m exactly.
std::string Serialize(const HybridMesh &mesh);
HybridMesh Deserialize(std::string_view text);

bool Identical(const HybridMesh &a, const HybridMesh &b);

}  // namespace hydrosem::mesh

#endif  // HYDROSEM_MESH_MESH_IO_HPP
