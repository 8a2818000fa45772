// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/post/coefficients.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/waves/incident.hpp"

namespace hydrosem::post
{

namespace
{

std::vector<double> MotionSamples(const waves::PseudoImpulse &impulse, const sim::BodyRecord &rec)
{
  std::vector<double> x(static_cast<std::size_t>(rec.steps() + 1));
  for (std::size_t n = 0; n < x.size(); ++n)
  {
    x[n] = impulse.Value(rec.t_start + static_cast<double>(n) * rec.dt);
  }
  return x;
}

}  // namespace

std::map<int, std::vector<Complex>> HydroResult::Total() const
{
  std::map<int, std::vector<Complex>> out;
  for (const auto &[j, x0] : x_0)
  {
    const auto it = x_s.find(j);
    if (it == x_s.end())
    {
      continue;
    }
    std::vector<Complex> t(x0.size());
    for (std::size_t i = 0; i < t.size(); ++i)
    {
      t[i] = x0[i] + it->second[i];
    }
    out[j] = std::move(t);
  }
  return out;
}

std::vector<double> PressureForce(const std::vector<double> &moment, double dt, double rho,
                                  double multiplier)
{
  auto f = Fd4Derivative(moment, dt);
  for (auto &v : f)
  {
    v *= -rho * multiplier;
  }
  return f;
}

Spectrum MotionSpectrum(const waves::PseudoImpulse &impulse, const sim::BodyRecord &rec,
                        const std::vector<double> &omega)
{
  return ComputeSpectrum(MotionSamples(impulse, rec), rec.dt, rec.t_start, omega);
}

double MotionPeak(const waves::PseudoImpulse &impulse, const sim::BodyRecord &rec)
{
  // g >= 0, so |x^| is largest at w = 0.
  double sum = 0.0;
  for (double v : MotionSamples(impulse, rec))
  {
    sum += v;
  }
  return sum * rec.dt;
}

std::vector<Complex> TransferRatio(const Eigen::VectorXcd &force, const Eigen::VectorXcd &motion,
                                   const std::vector<double> &omega, double motion_peak,
                                   double guard)
{
  if (force.size() != motion.size() || force.size() != static_cast<Eigen::Index>(omega.size()))
  {
    throw ParameterError("force and motion spectra differ in length");
  }
  std::vector<Complex> r(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i)
  {
    const Complex x = motion(static_cast<Eigen::Index>(i));
    if (std::abs(x) < guard * motion_peak)
    {
      throw DivisionGuardError(fmt::format(
          "motion spectrum |x^| = {:.3e} at w = {:.6g} is below {:.0e} of its peak; w is outside "
          "the impulse band",
          std::abs(x), omega[i], guard));
    }
    r[i] = force(static_cast<Eigen::Index>(i)) / x;
  }
  return r;
}

void AddedMassDamping(const std::vector<Complex> &ratio, const std::vector<double> &omega,
                      std::vector<double> &a, std::vector<double> &b)
{
  a.resize(omega.size());
  b.resize(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i)
  {
    if (!(omega[i] > 0.0))
    {
      throw ParameterError("added mass and damping need w > 0");
    }
    a[i] = ratio[i].real() / (omega[i] * omega[i]);
    b[i] = -ratio[i].imag() / omega[i];
  }
}

void RadiationCoefficients(const sim::BodyRecord &rec, int k, const waves::PseudoImpulse &impulse,
                           const waves::Environment &env, double multiplier, HydroResult &out,
                           const SpectrumOptions &opt)
{
  const auto &w = out.omega;
  const Spectrum x = MotionSpectrum(impulse, rec, w);
  const double peak = MotionPeak(impulse, rec);
  for (const auto &[j, m] : rec.moments)
  {
    const auto f = PressureForce(m, rec.dt, env.rho, multiplier);
    const Spectrum fs = ComputeSpectrum(f, rec.dt, rec.t_start, w, opt);
    if (!fs.decayed)
    {
      out.provenance[fmt::format("warning.F{}_{}", j, k)] =
          fmt::format("terminal/peak {:.3e} above {:.0e}", fs.terminal_ratio, opt.decay_tolerance);
    }
    AddedMassDamping(TransferRatio(fs.values, x.values, w, peak), w, out.a[{j, k}], out.b[{j, k}]);
  }
}

std::map<int, Eigen::VectorXcd> BlockForceSpectra(const sim::BodyRecord &rec,
                                                  const waves::Environment &env,
                                                  const std::vector<double> &omega,
                                                  const SpectrumOptions &opt)
{
  std::map<int, Eigen::VectorXcd> out;
  for (const auto &[j, m] : rec.moments)
  {
    out[j] = ComputeSpectrum(PressureForce(m, rec.dt, env.rho, 1.0), rec.dt, rec.t_start, omega,
                             opt)
                 .values;
  }
  return out;
}

std::map<int, std::vector<Complex>> ScatteredExcitation(
    const symmetry::SymmetryConfig &cfg,
    const std::map<symmetry::BlockLabel, std::map<int, Eigen::VectorXcd>> &blocks,
    const std::map<int, symmetry::ModeParity> &parity, const waves::PseudoImpulse &impulse,
    const sim::BodyRecord &reference, const std::vector<double> &omega)
{
  std::map<symmetry::BlockLabel, std::map<int, symmetry::ForceSeries>> solved;
  for (const auto &[label, forces] : blocks)
  {
    for (const auto &[j, v] : forces)
    {
      solved[label][j] = symmetry::ForceSeries(v.data(), v.data() + v.size());
    }
  }
  const auto total = symmetry::RecombineForces(cfg, solved, parity);
  const Spectrum zeta = MotionSpectrum(impulse, reference, omega);
  const double peak = MotionPeak(impulse, reference);
  std::map<int, std::vector<Complex>> out;
  for (const auto &[j, f] : total)
  {
    out[j] = TransferRatio(Eigen::Map<const Eigen::VectorXcd>(f.data(), static_cast<Eigen::Index>(f.size())),
                           zeta.values, omega, peak);
  }
  return out;
}

std::map<int, std::vector<Complex>> FroudeKrylov(const sim::Discretization &d,
                                                 const waves::Environment &env,
                                                 const symmetry::SymmetryConfig &cfg,
                                                 const std::map<int, sim::ModeShape> &forces,
                                                 double beta, const std::vector<double> &omega)
{
  const auto &bq = d.wetted();
  const double mult = cfg.Multiplier();
  std::map<int, std::vector<Complex>> out;
  for (const auto &[j, mode] : forces)
  {
    const Eigen::VectorXd nj = sim::ModeFlux(d, mode);
    const auto label = symmetry::ForceBlock(cfg, mode.parity);
    std::vector<Complex> x(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i)
    {
      const double k = waves::SolveDispersion(omega[i], env);
      const auto phase = symmetry::DecomposedPhase(cfg, label, k, beta);
      const auto f = waves::IncidentFields(env, omega[i], k, phase, bq.points);
      Complex acc = 0.0;
      for (Eigen::Index q = 0; q < bq.NumPoints(); ++q)
      {
        acc += bq.weights(q) * nj(q) * f[static_cast<std::size_t>(q)].p0;
      }
      x[i] = mult * acc;
    }
    out[j] = std::move(x);
  }
  return out;
}

}  // namespace hydrosem::post
