// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/waves/impulse.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::waves
{

namespace
{

constexpr double kPi = std::numbers::pi;

// Root of f on [a, b] to about 1e-14 relative.
template <class F>
double Bracketed(F f, double a, double b)
{
  std::uintmax_t iters = 200;
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto r = boost::math::tools::toms748_solve(f, a, b, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

PseudoImpulse::PseudoImpulse(double s, double eps) : s_(s), eps_(eps)
{
  if (!(s > 0.0) || !std::isfinite(s))
  {
    throw ParameterError(fmt::format("impulse width parameter s must be positive (got {})", s));
  }
  if (!(eps > 0.0 && eps < 1.0))
  {
    throw ParameterError(fmt::format("impulse cutoff eps must lie in (0, 1) (got {})", eps));
  }
  t0_ = std::sqrt(std::log(eps) / (-2.0 * kPi * kPi * s * s));
}

double PseudoImpulse::Value(double t) const
{
  const double d = t - t0_;
  return std::exp(-2.0 * kPi * kPi * s_ * s_ * d * d);
}

double PseudoImpulse::Velocity(double t) const
{
  return -4.0 * kPi * kPi * s_ * s_ * (t - t0_) * Value(t);
}

double PseudoImpulse::Acceleration(double t) const
{
  const double a = 4.0 * kPi * kPi * s_ * s_;
  const double d = t - t0_;
  return a * (a * d * d - 1.0) * Value(t);
}

Complex PseudoImpulse::Spectrum(double omega) const
{
  const double mag =
      std::exp(-omega * omega / (8.0 * kPi * kPi * s_ * s_)) / (s_ * std::sqrt(2.0 * kPi));
  return std::polar(mag, -omega * t0_);
}

FrequencyBand OmegaLimit(const PseudoImpulse &pi, ForcingKind kind, double fraction)
{
  if (!(fraction > 0.0 && fraction < 1.0))
  {
    throw ParameterError(fmt::format("band fraction must lie in (0, 1) (got {})", fraction));
  }
  const double a = 8.0 * kPi * kPi * pi.s() * pi.s();
  if (kind == ForcingKind::Elevation)
  {
    return {0.0, std::sqrt(a * std::log(1.0 / fraction))};
  }
  // w exp(-w^2/a) peaks at w* = sqrt(a/2) = 2 pi s.
  const double ws = std::sqrt(0.5 * a);
  auto rel = [&](double w) {
    return std::log(w / ws) - (w * w - ws * ws) / a - std::log(fraction);
  };
  const double lo = Bracketed(rel, ws * fraction * 1e-3, ws);
  double top = 2.0 * ws;
  while (rel(top) > 0.0)
  {
    top *= 2.0;
  }
  const double hi = Bracketed(rel, ws, top);
  return {lo, hi};
}

double ShortestWavelength(const PseudoImpulse &pi, ForcingKind kind, const Environment &env)
{
  const double k = SolveDispersion(OmegaLimit(pi, kind).hi, env);
  return 2.0 * kPi / k;
}

}  // namespace hydrosem::waves
