// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_POST_SPECTRAL_HPP
#define HYDROSEM_POST_SPECTRAL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/waves/impulse.hpp"

namespace hydrosem::post
{

using Complex = std::complex<double>;

// Fourth-order finite-difference derivative of a uniformly sampled series.
// Central 5-point stencil inside, one-sided 5-point stencils at both ends.
std::vector<double> Fd4Derivative(const std::vector<double> &f, double dt);

struct SpectrumOptions
{
  // Tukey taper fraction in [0, 1]; 0 leaves the series untouched.
  double taper = 0.0;
  // Terminal |f| above this fraction of the peak flags the series.
  double decay_tolerance = 1e-3;
};

struct Spectrum
{
  Eigen::VectorXcd values;   // at the requested omegas
  double terminal_ratio = 0.0;
  bool decayed = true;
};

// dt * sum_n f_n exp(-i w t_n), t_n = t_start + n dt, evaluated through a
// zero-padded FFT (length a power of two >= 8 N) and exact trigonometric
// interpolation between its bins.
Spectrum ComputeSpectrum(const std::vector<double> &f, double dt, double t_start,
                         const std::vector<double> &omega, const SpectrumOptions &opt = {});

// Same for explicit sample times; ParameterError unless uniform.
Spectrum ComputeSpectrum(const std::vector<double> &t, const std::vector<double> &f,
                         const std::vector<double> &omega, const SpectrumOptions &opt = {});

// n uniform frequencies spanning the band; a band starting at 0 starts at
// hi / n instead.
std::vector<double> OmegaGrid(const waves::FrequencyBand &band, int n = 400);

}  // namespace hydrosem::post

#endif  // HYDROSEM_POST_SPECTRAL_HPP
