// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/waves/environment.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::waves
{

double Environment::MaxCelerity() const
{
  return std::sqrt(g * depth);
}

void Validate(const Environment &env)
{
  if (!(env.g > 0.0) || !(env.depth > 0.0) || !(env.rho > 0.0))
  {
    throw ParameterError(fmt::format("environment needs g, depth, rho > 0 (got {}, {}, {})", env.g,
                                     env.depth, env.rho));
  }
}

double SolveDispersion(double omega, const Environment &env)
{
  Validate(env);
  omega = std::abs(omega);
  if (omega == 0.0)
  {
    return 0.0;
  }
  const double w2 = omega * omega;
  const double h = env.depth;
  // Both asymptotes undershoot the root.
  double lo = std::max(w2 / env.g, omega / std::sqrt(env.g * h));
  double hi = 2.0 * lo;
  auto residual = [&](double k) { return env.g * k * std::tanh(k * h) - w2; };
  while (residual(hi) < 0.0)
  {
    hi *= 2.0;
  }
  auto f = [&](double k) {
    const double th = std::tanh(k * h);
    const double dres = env.g * (th + k * h * (1.0 - th * th));
    return std::make_pair(env.g * k * th - w2, dres);
  };
  std::uintmax_t iters = 100;
  const double guess = residual(lo) >= 0.0 ? lo : 0.5 * (lo + hi);
  return boost::math::tools::newton_raphson_iterate(f, guess, lo, hi, 50, iters);
}

double GroupFactor(double omega, const Environment &env)
{
  if (omega == 0.0)
  {
    Validate(env);
    return std::sqrt(env.g / env.depth);
  }
  const double k = SolveDispersion(omega, env);
  return env.g * k / std::abs(omega);
}

}  // namespace hydrosem::waves
