// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/post/nondim.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::post
{

namespace
{

bool Rotation(int j) { return j >= 4 && j <= 6; }

}  // namespace

int CoefficientExponent(int j, int k)
{
  if (!Rotation(j) && !Rotation(k))
  {
    return 3;
  }
  return Rotation(j) && Rotation(k) ? 5 : 4;
}

int ForceExponent(int j) { return Rotation(j) ? 3 : 2; }

HydroResult Nondimensionalize(const HydroResult &r, const NondimSpec &spec)
{
  if (!(spec.length > 0.0) || !(spec.rho > 0.0) || !(spec.g > 0.0))
  {
    throw ParameterError(fmt::format("nondimensionalization needs L, rho, g > 0 (got {}, {}, {})",
                                     spec.length, spec.rho, spec.g));
  }
  const double l = spec.length;
  HydroResult out;
  out.provenance = r.provenance;
  out.provenance["nondimensional.length"] = fmt::format("{:.17g}", l);
  out.omega.resize(r.omega.size());
  for (std::size_t i = 0; i < r.omega.size(); ++i)
  {
    out.omega[i] = r.omega[i] * std::sqrt(l / spec.g);
  }
  for (const auto &[jk, a] : r.a)
  {
    const double s = spec.rho * std::pow(l, CoefficientExponent(jk.first, jk.second));
    auto &na = out.a[jk];
    for (double v : a)
    {
      na.push_back(v / s);
    }
  }
  for (const auto &[jk, b] : r.b)
  {
    const double s = spec.rho * std::pow(l, CoefficientExponent(jk.first, jk.second));
    auto &nb = out.b[jk];
    for (std::size_t i = 0; i < b.size(); ++i)
    {
      nb.push_back(b[i] / (s * r.omega[i]));
    }
  }
  for (const auto &[jk, a] : r.a_inf)
  {
    out.a_inf[jk] = a / (spec.rho * std::pow(l, CoefficientExponent(jk.first, jk.second)));
  }
  auto scale_x = [&](const std::map<int, std::vector<Complex>> &in,
                     std::map<int, std::vector<Complex>> &dst) {
    for (const auto &[j, x] : in)
    {
      const double s = spec.rho * spec.g * std::pow(l, ForceExponent(j));
      auto &nx = dst[j];
      for (const auto &v : x)
      {
        nx.push_back(v / s);
      }
    }
  };
  scale_x(r.x_s, out.x_s);
  scale_x(r.x_0, out.x_0);
  return out;
}

}  // namespace hydrosem::post
