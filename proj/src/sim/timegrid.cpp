// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/sim/timegrid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/mesh/queries.hpp"

namespace hydrosem::sim
{

TimeGrid ComputeTimeGrid(double dx_min, const waves::Environment &env, double cfl, double duration)
{
  waves::Validate(env);
  if (!(cfl > 0.0 && cfl <= 1.0))
  {
    throw ParameterError(fmt::format("CFL constant must lie in (0, 1] (got {})", cfl));
  }
  if (!(duration > 0.0))
  {
    throw ParameterError(fmt::format("simulated time must be positive (got {})", duration));
  }
  if (!(dx_min > 0.0))
  {
    throw ParameterError(fmt::format("minimum spacing must be positive (got {})", dx_min));
  }
  TimeGrid g;
  g.cfl = cfl;
  g.dx_min = dx_min;
  g.u_max = env.MaxCelerity();
  g.dt = cfl * dx_min / g.u_max;
  g.steps = static_cast<int>(std::ceil(duration / g.dt - 1e-9));
  return g;
}

TimeGrid ComputeTimeGrid(const mesh::HybridMesh &mesh, int order, const waves::Environment &env,
                         double cfl, double duration)
{
  return ComputeTimeGrid(mesh::MinSpacing(mesh, order), env, cfl, duration);
}

double DefaultDuration(const waves::PseudoImpulse &pi)
{
  return 2.0 * pi.t0() + 6.0 / pi.s();
}

double DurationCap(const waves::PseudoImpulse &pi)
{
  return DefaultDuration(pi) + 8.0 * pi.t0();
}

}  // namespace hydrosem::sim
