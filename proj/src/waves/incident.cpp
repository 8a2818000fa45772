// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/waves/incident.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::waves
{

namespace
{

constexpr Complex kI{0.0, 1.0};

// sinh(k (h + z)) / cosh(k h)
double SinhRatio(double k, double h, double z)
{
  const double e2 = std::exp(-2.0 * k * h);
  return (std::exp(k * z) - std::exp(-k * (2.0 * h + z))) / (1.0 + e2);
}

}  // namespace

PhaseFunction PlaneWavePhase(double k, double beta)
{
  const double c = std::cos(beta), s = std::sin(beta);
  return [=](double x, double y) {
    const Complex b = std::polar(1.0, -k * (x * c + y * s));
    return PhaseValue{b, -kI * c * b, -kI * s * b};
  };
}

double DepthFactor(double k, double h, double z)
{
  const double e2 = std::exp(-2.0 * k * h);
  return (std::exp(k * z) + std::exp(-k * (2.0 * h + z))) / (1.0 + e2);
}

double DepthFactorDz(double k, double h, double z)
{
  return k * SinhRatio(k, h, z);
}

std::vector<IncidentSample> IncidentFields(const Environment &env, double omega,
                                           const PhaseFunction &phase,
                                           const Eigen::MatrixXd &points)
{
  return IncidentFields(env, omega, SolveDispersion(omega, env), phase, points);
}

std::vector<IncidentSample> IncidentFields(const Environment &env, double omega, double k,
                                           const PhaseFunction &phase,
                                           const Eigen::MatrixXd &points)
{
  Validate(env);
  const double h = env.depth;
  const double kappa = omega == 0.0 ? std::sqrt(env.g / h) : env.g * k / std::abs(omega);
  const double slack = 1e-9 * h;
  std::vector<IncidentSample> out(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i)
  {
    const double x = points(i, 0), y = points(i, 1), z = points(i, 2);
    if (z > slack || z < -h - slack)
    {
      throw DomainError(fmt::format("incident field point z = {} outside [-{}, 0]", z, h));
    }
    const PhaseValue b = phase(x, y);
    const double c = DepthFactor(k, h, z);
    IncidentSample &s = out[static_cast<std::size_t>(i)];
    s.psi = omega == 0.0 ? Complex{} : kI * (env.g / omega) * c * b.value;
    s.grad[0] = kI * kappa * c * b.dx;
    s.grad[1] = kI * kappa * c * b.dy;
    s.grad[2] = kI * kappa * SinhRatio(k, h, z) * b.value;
    s.p0 = env.rho * env.g * c * b.value;
  }
  return out;
}

}  // namespace hydrosem::waves
