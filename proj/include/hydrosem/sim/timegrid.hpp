// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_SIM_TIMEGRID_HPP
#define HYDROSEM_SIM_TIMEGRID_HPP

#include "hydrosem/mesh/hybrid_mesh.hpp"
#include "hydrosem/waves/environment.hpp"
#include "hydrosem/waves/impulse.hpp"

namespace hydrosem::sim
{

struct TimeGrid
{
  double dt = 0.0;
  int steps = 0;
  double cfl = 1.0;
  double dx_min = 0.0;
  double u_max = 0.0;

  double Duration() const { return dt * steps; }
};

// dt = C dx_min / sqrt(g h), steps = ceil(T / dt). Throws ParameterError for
// C outside (0, 1], T <= 0 or dx_min <= 0.
TimeGrid ComputeTimeGrid(double dx_min, const waves::Environment &env, double cfl, double duration);
TimeGrid ComputeTimeGrid(const mesh::HybridMesh &mesh, int order, const waves::Environment &env,
                         double cfl, double duration);

// 2 t0 + 6 / s. Automatic extension may add at most 8 t0 on top.
double DefaultDuration(const waves::PseudoImpulse &pi);
double DurationCap(const waves::PseudoImpulse &pi);

}  // namespace hydrosem::sim

#endif  // HYDROSEM_SIM_TIMEGRID_HPP
