// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/post/io.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "hydrosem/error.hpp"

namespace hydrosem::post
{

namespace
{

std::string PairName(const char *prefix, const ModePair &jk)
{
  return jk.first < 10 && jk.second < 10 ? fmt::format("{}{}{}", prefix, jk.first, jk.second)
                                         : fmt::format("{}{}_{}", prefix, jk.first, jk.second);
}

std::string Num(double v) { return fmt::format("{:.17g}", v); }

// X_D where both parts exist, otherwise whichever part is present.
std::map<int, std::vector<Complex>> Excitation(const HydroResult &r)
{
  auto x = r.Total();
  for (const auto *part : {&r.x_0, &r.x_s})
  {
    for (const auto &[j, v] : *part)
    {
      x.emplace(j, v);
    }
  }
  return x;
}

}  // namespace

std::string TimeSeriesCsv(double t_start, double dt, const std::map<int, std::vector<double>> &forces)
{
  std::string out = "t";
  std::size_t n = 0;
  for (const auto &[j, f] : forces)
  {
    out += fmt::format(",F{}", j);
    n = std::max(n, f.size());
  }
  out += '\n';
  for (std::size_t i = 0; i < n; ++i)
  {
    out += Num(t_start + static_cast<double>(i) * dt);
    for (const auto &[j, f] : forces)
    {
      out += ',';
      out += i < f.size() ? Num(f[i]) : std::string();
    }
    out += '\n';
  }
  return out;
}

std::string HydroCsv(const HydroResult &r, double length, double g)
{
  const auto x = Excitation(r);
  std::string out = "omega,omega_bar";
  for (const auto &[jk, v] : r.a)
  {
    out += "," + PairName("a", jk);
  }
  for (const auto &[jk, v] : r.b)
  {
    out += "," + PairName("b", jk);
  }
  for (const auto &[j, v] : x)
  {
    out += fmt::format(",ReX{}", j);
  }
  for (const auto &[j, v] : x)
  {
    out += fmt::format(",ImX{}", j);
  }
  out += '\n';
  for (std::size_t i = 0; i < r.omega.size(); ++i)
  {
    out += Num(r.omega[i]) + "," + Num(r.omega[i] * std::sqrt(length / g));
    for (const auto &[jk, v] : r.a)
    {
      out += "," + Num(v[i]);
    }
    for (const auto &[jk, v] : r.b)
    {
      out += "," + Num(v[i]);
    }
    for (const auto &[j, v] : x)
    {
      out += "," + Num(v[i].real());
    }
    for (const auto &[j, v] : x)
    {
      out += "," + Num(v[i].imag());
    }
    out += '\n';
  }
  return out;
}

std::string ExcitationCsv(const HydroResult &r, double length, double g)
{
  const auto xd = r.Total();
  const std::pair<const char *, const std::map<int, std::vector<Complex>> *> parts[] = {
      {"X0_", &r.x_0}, {"Xs_", &r.x_s}, {"XD_", &xd}};
  std::string out = "omega,omega_bar";
  for (const auto &[name, part] : parts)
  {
    for (const auto &[j, v] : *part)
    {
      out += fmt::format(",Re{}{},Im{}{}", name, j, name, j);
    }
  }
  out += '\n';
  for (std::size_t i = 0; i < r.omega.size(); ++i)
  {
    out += Num(r.omega[i]) + "," + Num(r.omega[i] * std::sqrt(length / g));
    for (const auto &[name, part] : parts)
    {
      for (const auto &[j, v] : *part)
      {
        out += "," + Num(v[i].real()) + "," + Num(v[i].imag());
      }
    }
    out += '\n';
  }
  return out;
}

std::string InfiniteFrequencyCsv(const HydroResult &r)
{
  std::string out = "j,k,a_inf\n";
  for (const auto &[jk, v] : r.a_inf)
  {
    out += fmt::format("{},{},{}\n", jk.first, jk.second, Num(v));
  }
  return out;
}

std::string HydroJsonLines(const HydroResult &r)
{
  std::string out;
  auto cplx = [](const Complex &c) { return nlohmann::json::array({c.real(), c.imag()}); };
  for (std::size_t i = 0; i < r.omega.size(); ++i)
  {
    nlohmann::json row;
    row["omega"] = r.omega[i];
    for (const auto &[jk, v] : r.a)
    {
      row["a"][fmt::format("{},{}", jk.first, jk.second)] = v[i];
    }
    for (const auto &[jk, v] : r.b)
    {
      row["b"][fmt::format("{},{}", jk.first, jk.second)] = v[i];
    }
    for (const auto &[j, v] : r.x_0)
    {
      row["X0"][std::to_string(j)] = cplx(v[i]);
    }
    for (const auto &[j, v] : r.x_s)
    {
      row["Xs"][std::to_string(j)] = cplx(v[i]);
    }
    out += row.dump() + '\n';
  }
  return out;
}

void WriteText(const std::string &path, const std::string &text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
  {
    throw ConfigError({fmt::format("cannot write '{}'", path)});
  }
  f << text;
  if (!f)
  {
    throw ConfigError({fmt::format("write to '{}' failed", path)});
  }
}

}  // namespace hydrosem::post
