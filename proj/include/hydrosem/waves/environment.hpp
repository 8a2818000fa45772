// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_WAVES_ENVIRONMENT_HPP
#define HYDROSEM_WAVES_ENVIRONMENT_HPP

namespace hydrosem::waves
{

struct Environment
{
  double g = 9.81;
  double depth = 1.0;
  double rho = 1000.0;

  // Shallow-water celerity sqrt(g h).
  double MaxCelerity() const;
};

// Throws ParameterError unless g, depth and rho are all positive.
void Validate(const Environment &env);

// Wavenumber k > 0 with g k tanh(k h) = omega^2. Returns 0 at omega = 0.
// Newton with a bisection fallback inside a bracket from the shallow and
// deep water asymptotes.
double SolveDispersion(double omega, const Environment &env);

// g k / omega, continuous through omega = 0 where it tends to sqrt(g / h).
double GroupFactor(double omega, const Environment &env);

}  // namespace hydrosem::waves

#endif  // HYDROSEM_WAVES_ENVIRONMENT_HPP
