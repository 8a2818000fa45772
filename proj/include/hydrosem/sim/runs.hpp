// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_SIM_RUNS_HPP
#define HYDROSEM_SIM_RUNS_HPP

#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/sim/model.hpp"
#include "hydrosem/sim/timegrid.hpp"
#include "hydrosem/symmetry/symmetry.hpp"
#include "hydrosem/waves/impulse.hpp"

namespace hydrosem::sim
{

// Uniformly sampled body quantities, t_n = t_start + n dt for n = 0..steps.
struct BodyRecord
{
  double dt = 0.0;
  double t_start = 0.0;
  // m_j(t) = integral over the computational body of phi n_j, per force j.
  std::map<int, std::vector<double>> moments;
  std::vector<double> energy;   // surface energy per sample
  double decay_ratio = 0.0;     // terminal / peak |dm/dt|
  bool truncated = false;       // decay criterion not met at the cap
  long iterations = 0;
  int steps() const { return static_cast<int>(energy.size()) - 1; }
};

struct RunOptions
{
  TimeGrid grid;
  double t_start = 0.0;         // calm state at this time; grid.steps counted from here
  bool auto_extend = false;     // keep stepping until the decay criterion holds
  double cap = 0.0;             // longest duration after t_start when extending
  double decay_tolerance = 1e-4;
  // Called after each completed step with the step count and state.
  std::function<void(int, const Eigen::VectorXd &)> observer;
};

// Neumann load at time t; `half_step` is the index of t on the dt/2 grid
// counted from t_start.
using LoadFunction = std::function<void(double t, long half_step, Eigen::VectorXd &b)>;

// Generic driver from a calm (or given) initial state.
BodyRecord Integrate(SurfaceSolver &solver, const LoadFunction &load,
                     const std::map<int, Eigen::VectorXd> &force_loads, const RunOptions &opt,
                     Eigen::VectorXd *state = nullptr);

// Radiation: body velocity dx_k/dt of the impulse times the mode load.
BodyRecord RunRadiation(SurfaceSolver &solver, const Eigen::VectorXd &mode_load,
                        const waves::PseudoImpulse &impulse,
                        const std::map<int, Eigen::VectorXd> &force_loads, const RunOptions &opt);

// Scattered-wave forcing projected onto the body dofs on the dt/2 grid
// starting at t_start = -lead. Decomposed blocks and upstream short waves
// reach the body well before t0, so the run starts early enough for the
// load there to be below `quiet` times its peak.
struct DiffractionForcing
{
  std::vector<int> dofs;        // rows of `load`
  Eigen::MatrixXd load;         // dofs x samples
  double half_dt = 0.0;
  double t_start = 0.0;         // a non-positive multiple of dt
  long samples() const { return load.cols(); }
};

// Synthesizes -n . grad(phi0) for one block on every wetted quadrature
// point and projects it with the wetted load matrix. Samples cover
// [t_start, duration] on the dt/2 grid.
DiffractionForcing BuildDiffractionForcing(const Discretization &d, const waves::Environment &env,
                                           const waves::PseudoImpulse &impulse,
                                           const symmetry::SymmetryConfig &cfg,
                                           symmetry::BlockLabel label, double beta, double dt,
                                           double duration, double quiet = 1e-6);

// Runs from forcing.t_start; opt.grid.steps and opt.cap count from t = 0 and
// are extended by the lead.
BodyRecord RunDiffraction(SurfaceSolver &solver, const DiffractionForcing &forcing,
                          const std::map<int, Eigen::VectorXd> &force_loads, const RunOptions &opt);

// Infinite-frequency added mass: phi = 0 on the free surface, dphi/dn = n_k,
// a_jk = rho * multiplier * r_j^T phi.
std::map<int, double> SolveInfiniteFrequency(const Discretization &d, const waves::Environment &env,
                                             const Eigen::VectorXd &mode_load,
                                             const std::map<int, Eigen::VectorXd> &force_loads,
                                             bool theta_x, bool theta_y, double multiplier,
                                             const linalg::SolverConfig &cfg = {});

}  // namespace hydrosem::sim

#endif  // HYDROSEM_SIM_RUNS_HPP
