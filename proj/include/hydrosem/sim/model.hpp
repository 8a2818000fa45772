// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_SIM_MODEL_HPP
#define HYDROSEM_SIM_MODEL_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "hydrosem/assembly/dofmap.hpp"
#include "hydrosem/assembly/operators.hpp"
#include "hydrosem/linalg/solver.hpp"
#include "hydrosem/symmetry/symmetry.hpp"
#include "hydrosem/waves/damping.hpp"
#include "hydrosem/waves/environment.hpp"

namespace hydrosem::sim
{

using assembly::BoundaryQuadrature;
using assembly::DofMap;
using linalg::SparseMatrix;
using mesh::BoundaryTag;
using mesh::HybridMesh;

// Operators shared by every problem on one mesh and order. Keeps a
// reference to the mesh.
class Discretization
{
public:
  Discretization(const HybridMesh &mesh, int order);

  const HybridMesh &mesh() const { return *mesh_; }
  int order() const { return dofs_.order; }
  const DofMap &dofs() const { return dofs_; }
  const SparseMatrix &stiffness() const { return stiffness_; }
  const assembly::FreeSurfaceOperators &fs() const { return fs_; }

  // Quadrature on the body and every special surface, and the matching
  // load matrix (N_DOF x Nq).
  const BoundaryQuadrature &wetted() const { return wetted_; }
  const SparseMatrix &wetted_load() const { return wetted_load_; }

  double MinSpacing() const;

private:
  const HybridMesh *mesh_;
  DofMap dofs_;
  SparseMatrix stiffness_;
  assembly::FreeSurfaceOperators fs_;
  BoundaryQuadrature wetted_;
  SparseMatrix wetted_load_;
};

// Generalized normal n_k on a set of tagged surfaces.
struct ModeShape
{
  int index = 0;
  std::vector<BoundaryTag> tags;
  std::function<double(const Eigen::Vector3d &x, const Eigen::Vector3d &n)> normal;
  symmetry::ModeParity parity;
};

// Rigid mode k = 1..6 on the body: n for k <= 3, (x - ref) x n for 4..6.
ModeShape RigidMode(int k, const Eigen::Vector3d &reference = Eigen::Vector3d::Zero());

// n_k at the wetted quadrature points, zero away from the mode's tags.
Eigen::VectorXd ModeFlux(const Discretization &d, const ModeShape &mode);
// Load vector r_k = integral of n_k N_i over the mode's surfaces.
Eigen::VectorXd ModeLoad(const Discretization &d, const ModeShape &mode);

enum class DzMethod
{
  Flux,         // consistent boundary flux from the Laplace residual
  Collocation   // chain rule at the surface nodes, averaged over prisms
};
DzMethod DzMethodFromName(const std::string &name);
std::string DzMethodName(DzMethod m);

struct SurfaceOptions
{
  // Neumann (true) or Dirichlet (false) on the planes present in the mesh.
  bool theta_x = true;
  bool theta_y = true;
  std::vector<waves::DampingZone> zones;
  DzMethod dz = DzMethod::Flux;
  linalg::SolverConfig solver;
};

// Free-surface ODE system y = [phi_fs; eta]:
//   d phi/dt = -g eta + p_D,  d eta/dt = dz(phi) + v_D,
// with phi from a Laplace solve (Dirichlet phi_fs on the surface, Neumann
// load b elsewhere). Surface nodes on Dirichlet symmetry planes are frozen
// at zero. Holds the warm start, so one instance serves one run at a time.
class SurfaceSolver
{
public:
  SurfaceSolver(const Discretization &d, const waves::Environment &env, SurfaceOptions opt);

  int fs_size() const { return d_->fs().size(); }
  int state_size() const { return 2 * fs_size(); }
  const std::vector<char> &active() const { return active_; }
  const Eigen::VectorXd &damping() const { return c_; }
  const SurfaceOptions &options() const { return opt_; }
  const waves::Environment &env() const { return env_; }
  const Discretization &discretization() const { return *d_; }

  // Volume potential for surface values phi_fs and Neumann load b.
  const Eigen::VectorXd &SolveLaplace(const Eigen::VectorXd &phi_fs, const Eigen::VectorXd &b);
  // dz(phi) at the surface nodes from the last Laplace solve (0 on frozen nodes).
  Eigen::VectorXd SurfaceDz(const Eigen::VectorXd &b) const;
  // p_D from -K p = K_c phi with p = 0 where c_p vanishes.
  Eigen::VectorXd PressureDamping(const Eigen::VectorXd &phi_fs) const;

  Eigen::VectorXd Rhs(const Eigen::VectorXd &y, const Eigen::VectorXd &b);

  // 1/2 g eta^T M eta + 1/2 phi_fs^T M dz(phi), using the last Rhs call.
  double LastEnergy() const { return last_energy_; }
  const Eigen::VectorXd &phi_volume() const { return phi_; }
  long total_iterations() const { return iterations_; }
  int solves() const { return solves_; }

private:
  const Discretization *d_;
  waves::Environment env_;
  SurfaceOptions opt_;
  std::vector<char> active_;
  std::vector<int> active_index_;    // active FS nodes
  std::unique_ptr<assembly::DirichletSystem> sys_;
  std::unique_ptr<linalg::PcgSolver> pcg_;
  std::vector<int> constrained_fs_;  // per constrained dof: FS node or -1
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_;
  Eigen::VectorXd c_;
  std::vector<int> damped_;          // FS nodes with c > 0 (p_D unknowns)
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> pd_;
  SparseMatrix kc_;
  Eigen::VectorXd phi_;
  double last_energy_ = 0.0;
  long iterations_ = 0;
  int solves_ = 0;
};

}  // namespace hydrosem::sim

#endif  // HYDROSEM_SIM_MODEL_HPP
