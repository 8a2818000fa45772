// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_WAVES_IMPULSE_HPP
#define HYDROSEM_WAVES_IMPULSE_HPP

#include <complex>

#include "hydrosem/waves/environment.hpp"

namespace hydrosem::waves
{

using Complex = std::complex<double>;

// Unit-height Gaussian g(t) = exp(-2 pi^2 s^2 (t - t0)^2), with t0 placed so
// that g(0) = eps.
class PseudoImpulse
{
public:
  // Throws ParameterError for s <= 0 or eps outside (0, 1).
  explicit PseudoImpulse(double s, double eps = 1e-8);

  double s() const { return s_; }
  double eps() const { return eps_; }
  double t0() const { return t0_; }

  double Value(double t) const;
  double Velocity(double t) const;
  double Acceleration(double t) const;

  // Continuous transform of g with the e^{-i w t} kernel.
  Complex Spectrum(double omega) const;

private:
  double s_;
  double eps_;
  double t0_;
};

enum class ForcingKind
{
  Velocity,   // radiation: body velocity spectrum w |g(w)|
  Elevation   // diffraction: wave elevation spectrum |g(w)|
};

struct FrequencyBand
{
  double lo = 0.0;
  double hi = 0.0;
  bool Contains(double w) const { return w >= lo && w <= hi; }
};

// Band where the forcing spectrum holds at least `fraction` of its peak.
FrequencyBand OmegaLimit(const PseudoImpulse &pi, ForcingKind kind, double fraction = 0.1);

// Shortest wavelength inside the band (at its upper end).
double ShortestWavelength(const PseudoImpulse &pi, ForcingKind kind, const Environment &env);

}  // namespace hydrosem::waves

#endif  // HYDROSEM_WAVES_IMPULSE_HPP
