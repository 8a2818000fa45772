// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_WAVES_INCIDENT_HPP
#define HYDROSEM_WAVES_INCIDENT_HPP

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/waves/environment.hpp"

namespace hydrosem::waves
{

using Complex = std::complex<double>;

// Horizontal factor B(x, y) of an incident wave. The plane wave uses
// B = exp(-i k (x cos b + y sin b)); symmetry blocks substitute their own
// decomposed factors. Derivatives are stored divided by k so that they stay
// finite as k -> 0.
struct PhaseValue
{
  Complex value;
  Complex dx;  // (dB/dx) / k
  Complex dy;  // (dB/dy) / k
};
using PhaseFunction = std::function<PhaseValue(double x, double y)>;

PhaseFunction PlaneWavePhase(double k, double beta);

struct IncidentSample
{
  Complex psi;                   // velocity potential amplitude
  std::array<Complex, 3> grad;   // gradient of psi
  Complex p0;                    // dynamic pressure amplitude
};

// cosh(k (h + z)) / cosh(k h) and its z derivative, evaluated without
// overflow for large k h.
double DepthFactor(double k, double h, double z);
double DepthFactorDz(double k, double h, double z);

// Psi = (i g / w) C(z) B(x, y), p0 = rho g C(z) B(x, y). At w = 0 the
// potential diverges and psi is returned as 0, but the gradient keeps its
// finite limit. Throws DomainError for points with z outside [-h, 0].
std::vector<IncidentSample> IncidentFields(const Environment &env, double omega,
                                           const PhaseFunction &phase,
                                           const Eigen::MatrixXd &points);

// Same with the wavenumber supplied (k = SolveDispersion(omega, env)).
std::vector<IncidentSample> IncidentFields(const Environment &env, double omega, double k,
                                           const PhaseFunction &phase,
                                           const Eigen::MatrixXd &points);

}  // namespace hydrosem::waves

#endif  // HYDROSEM_WAVES_INCIDENT_HPP
