// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_SIM_RK4_HPP
#define HYDROSEM_SIM_RK4_HPP

#include <utility>

namespace hydrosem::sim
{

// Classical four-stage Runge-Kutta step for y' = f(t, y). State needs
// addition and scaling by double (Eigen vectors, double).
// Same step with the first stage slope k1 = f(t, y) already evaluated.
template <class State, class F>
State Rk4Step(F &&f, double t, const State &y, double dt, const State &k1)
{
  const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = f(t + dt, State(y + dt * k3));
  return State(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

template <class State, class F>
State Rk4Step(F &&f, double t, const State &y, double dt)
{
  const State k1 = f(t, y);
  return Rk4Step(std::forward<F>(f), t, y, dt, k1);
}

}  // namespace hydrosem::sim

#endif  // HYDROSEM_SIM_RK4_HPP
