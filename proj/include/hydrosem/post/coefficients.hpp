// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_POST_COEFFICIENTS_HPP
#define HYDROSEM_POST_COEFFICIENTS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hydrosem/post/spectral.hpp"
#include "hydrosem/sim/model.hpp"
#include "hydrosem/sim/runs.hpp"
#include "hydrosem/symmetry/symmetry.hpp"
#include "hydrosem/waves/environment.hpp"

namespace hydrosem::post
{

using ModePair = std::pair<int, int>;  // (j, k)

struct HydroResult
{
  std::vector<double> omega;
  std::map<ModePair, std::vector<double>> a, b;
  std::map<ModePair, double> a_inf;
  std::map<int, std::vector<Complex>> x_s, x_0;   // per unit incident amplitude
  std::map<std::string, std::string> provenance;

  // X_D = X_0 + X_s for forces present in both.
  std::map<int, std::vector<Complex>> Total() const;
};

// F_j(t) = -rho * multiplier * d/dt (r_j^T phi) from a record of moments.
std::vector<double> PressureForce(const std::vector<double> &moment, double dt, double rho,
                                  double multiplier);

// Spectrum of the sampled body motion x_k(t) = g(t) on the record's grid.
Spectrum MotionSpectrum(const waves::PseudoImpulse &impulse, const sim::BodyRecord &rec,
                        const std::vector<double> &omega);

// ratio = F^ / x^; DivisionGuardError where |x^| < guard * max |x^|.
std::vector<Complex> TransferRatio(const Eigen::VectorXcd &force, const Eigen::VectorXcd &motion,
                                   const std::vector<double> &omega, double motion_peak,
                                   double guard = 1e-12);

// w^2 a - i w b = ratio.
void AddedMassDamping(const std::vector<Complex> &ratio, const std::vector<double> &omega,
                      std::vector<double> &a, std::vector<double> &b);

// Largest |x^| of the sampled motion over the padded FFT bins.
double MotionPeak(const waves::PseudoImpulse &impulse, const sim::BodyRecord &rec);

// a_jk, b_jk for every recorded force j of one radiation run in mode k.
void RadiationCoefficients(const sim::BodyRecord &rec, int k, const waves::PseudoImpulse &impulse,
                           const waves::Environment &env, double multiplier, HydroResult &out,
                           const SpectrumOptions &opt = {});

// Force spectra of one diffraction block on the computational body,
// referenced to the true time axis. The symmetry multiplier is applied when
// blocks are recombined.
std::map<int, Eigen::VectorXcd> BlockForceSpectra(const sim::BodyRecord &rec,
                                                  const waves::Environment &env,
                                                  const std::vector<double> &omega,
                                                  const SpectrumOptions &opt = {});

// X_s,j = F_s,j^ / zeta0^ after recombining the blocks.
std::map<int, std::vector<Complex>> ScatteredExcitation(
    const symmetry::SymmetryConfig &cfg,
    const std::map<symmetry::BlockLabel, std::map<int, Eigen::VectorXcd>> &blocks,
    const std::map<int, symmetry::ModeParity> &parity, const waves::PseudoImpulse &impulse,
    const sim::BodyRecord &reference, const std::vector<double> &omega);

// X_0,j = multiplier * integral of p0 n_j over the computational body,
// using the block of the incident phase that survives for force j.
std::map<int, std::vector<Complex>> FroudeKrylov(const sim::Discretization &d,
                                                 const waves::Environment &env,
                                                 const symmetry::SymmetryConfig &cfg,
                                                 const std::map<int, sim::ModeShape> &forces,
                                                 double beta, const std::vector<double> &omega);

}  // namespace hydrosem::post

#endif  // HYDROSEM_POST_COEFFICIENTS_HPP
