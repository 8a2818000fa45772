// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_ASSEMBLY_DOFMAP_HPP
#define HYDROSEM_ASSEMBLY_DOFMAP_HPP

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::assembly
{

using mesh::BoundaryTag;
using mesh::HybridMesh;

// Continuous global numbering of the nodal degrees of freedom.
struct DofMap
{
  int order = 1;
  int num_dofs = 0;
  std::vector<std::vector<int>> l2g;  // per element: local node -> global dof
  Eigen::MatrixXd coords;             // num_dofs x 3 physical node positions
  std::map<BoundaryTag, std::vector<int>> boundary_nodes;  // sorted, unique

  const std::vector<int> &Nodes(const BoundaryTag &tag) const;
};

// Nodes are matched topologically: each reference node is keyed by the
// global vertices it depends on and its (vertex-linear) weights, so shared
// faces get identical indices regardless of local orientation. Throws
// TopologyError when neighbours disagree on a shared face.
DofMap BuildDofMap(const HybridMesh &mesh, int order);

}  // namespace hydrosem::assembly

#endif  // HYDROSEM_ASSEMBLY_DOFMAP_HPP
