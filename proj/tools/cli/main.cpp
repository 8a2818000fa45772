// SPDX-License-Identifier: Apache-2.0

// hydrosem command line: run, mms, p-sweep, h-sweep, inspect-mesh,
// impulse-diagnose. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "hydrosem/cli/config.hpp"
#include "hydrosem/cli/pipeline.hpp"
#include "hydrosem/error.hpp"
#include "hydrosem/mesh/mesh_io.hpp"
#include "hydrosem/mesh/msh_reader.hpp"
#include "hydrosem/mesh/queries.hpp"
#include "hydrosem/post/io.hpp"
#include "hydrosem/verify/mms.hpp"
#include "hydrosem/version.hpp"
#include "hydrosem/waves/impulse.hpp"
#include "meshgen/desk_meshes.hpp"

namespace fs = std::filesystem;
using namespace hydrosem;

namespace
{

struct Common
{
  std::string config;
  std::string output_dir;
  int threads = 1;
  unsigned seed = 0;
};

mesh::HybridMesh ReadMesh(const std::string &path)
{
  if (!fs::exists(path))
  {
    throw ConfigError({fmt::format("mesh file '{}' does not exist", path)});
  }
  if (fs::path(path).extension() == ".msh")
  {
    return mesh::ReadMshFile(path);
  }
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh::Deserialize(ss.str());
}

// Mesh from --mesh, or an n^3 unit box fluid from --box n.
struct MeshSource
{
  std::vector<std::string> files;
  std::vector<int> boxes;

  std::vector<mesh::HybridMesh> Load() const
  {
    std::vector<mesh::HybridMesh> out;
    for (const auto &f : files)
    {
      out.push_back(ReadMesh(f));
    }
    for (int n : boxes)
    {
      out.push_back(meshgen::BoxFluid(n, n, n, 1.0, 1.0, 1.0));
    }
    if (out.empty())
    {
      throw ConfigError({"give at least one --mesh file or --box size"});
    }
    return out;
  }
};

void AddMeshOptions(CLI::App *app, MeshSource &src)
{
  app->add_option("--mesh", src.files, "mesh file(s): .msh (gmsh 4.1 ASCII) or native format");
  app->add_option("--box", src.boxes, "unit box fluid with n cells per direction");
}

verify::MmsCase FieldFor(const mesh::HybridMesh &m)
{
  const auto lo = m.BoundingMin();
  const auto hi = m.BoundingMax();
  return verify::BoxCase(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]);
}

fs::path OutputDir(const Common &c, const fs::path &fallback)
{
  return c.output_dir.empty() ? fallback : fs::path(c.output_dir);
}

void Emit(const Common &c, const std::string &name, const std::string &text)
{
  std::cout << text;
  if (!c.output_dir.empty())
  {
    fs::create_directories(c.output_dir);
    post::WriteText((fs::path(c.output_dir) / name).string(), text);
  }
}

std::string MmsCsv(const verify::ConvergenceReport &rep)
{
  std::string out = verify::ReportCsv(rep);
  if (!rep.rates.empty())
  {
    out += "# fitted rates\n";
    for (std::size_t i = 0; i < rep.rates.size(); ++i)
    {
      out += fmt::format("# P={} rate={:.4f} (expected {})\n", rep.orders[i], rep.rates[i], rep.orders[i] + 1);
    }
  }
  return out;
}

int RunCommand(const Common &c)
{
  if (c.config.empty())
  {
    throw ConfigError({"run needs --config"});
  }
  auto cfg = cli::LoadConfig(c.config);
  const auto mesh = cli::LoadMesh(cfg);
  const auto out = cli::Run(cfg, mesh, c.threads, [](const std::string &s) { std::cerr << s << '\n'; });
  const fs::path dir = OutputDir(c, cfg.output_dir);
  auto result = out;
  result.manifest["config"] = fs::absolute(c.config).string();
  result.manifest["threads"] = c.threads;
  result.manifest["seed"] = c.seed;
  cli::WriteOutputs(result, dir);
  std::cout << fmt::format("wrote {} files to {}\n", result.files.size() + 1, dir.string());
  for (const auto &w : result.manifest["warnings"])
  {
    std::cerr << "warning: " << w.get<std::string>() << '\n';
  }
  return 0;
}

int InspectMesh(const Common &c, const MeshSource &src, int order)
{
  std::vector<mesh::HybridMesh> meshes;
  if (!c.config.empty() && src.files.empty() && src.boxes.empty())
  {
    const auto cfg = cli::LoadConfig(c.config);
    meshes.push_back(cli::LoadMesh(cfg));
    order = cfg.order;
  }
  else
  {
    meshes = src.Load();
  }
  for (const auto &m : meshes)
  {
    const auto lo = m.BoundingMin();
    const auto hi = m.BoundingMax();
    std::cout << fmt::format("elements {} (prisms {}, tets {}), vertices {}, geometry order {}\n",
                             m.NumElements(), m.NumPrisms(), m.NumTets(), m.Vertices().size(),
                             m.GeometryOrder());
    std::cout << fmt::format("bounding box [{:.6g}, {:.6g}] x [{:.6g}, {:.6g}] x [{:.6g}, {:.6g}]\n",
                             lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]);
    for (const auto &tag : m.Tags())
    {
      std::cout << fmt::format("  {:<12} {} facets\n", tag.Name(), m.CountFacets(tag));
    }
    std::cout << fmt::format("free-surface triangles {}\n", m.FreeSurface().triangles.size());
    std::cout << fmt::format("dx_min at P={}: {:.6g}\n", order, mesh::MinSpacing(m, order));
  }
  return 0;
}

int ImpulseDiagnose(const Common &c, std::optional<double> s, double eps, std::optional<double> depth,
                    double g, const MeshSource &src, int order, double courant)
{
  std::optional<mesh::HybridMesh> m;
  waves::Environment env;
  env.g = g;
  std::vector<std::pair<std::string, double>> widths;
  if (!c.config.empty())
  {
    const auto cfg = cli::LoadConfig(c.config);
    env = cfg.env;
    order = cfg.order;
    courant = cfg.courant;
    eps = cfg.eps;
    m = cli::LoadMesh(cfg);
    if (cfg.radiation_s > 0)
    {
      widths.emplace_back("radiation", cfg.radiation_s);
    }
    if (cfg.diffraction_s > 0)
    {
      widths.emplace_back("diffraction", cfg.diffraction_s);
    }
  }
  else
  {
    if (!src.files.empty() || !src.boxes.empty())
    {
      m = src.Load().front();
    }
    if (depth)
    {
      env.depth = *depth;
    }
    else if (m)
    {
      env.depth = -m->BoundingMin()[2];
    }
    else
    {
      throw ConfigError({"impulse-diagnose needs --depth, --mesh or --config"});
    }
  }
  if (s)
  {
    widths = {{"impulse", *s}};
  }
  if (widths.empty())
  {
    throw ConfigError({"impulse-diagnose needs --s or a config with impulse widths"});
  }
  waves::Validate(env);
  nlohmann::json report;
  for (const auto &[name, width] : widths)
  {
    const waves::PseudoImpulse pi(width, eps);
    nlohmann::json r;
    r["s"] = width;
    r["t0"] = pi.t0();
    for (auto [kind, label] : {std::pair{waves::ForcingKind::Velocity, "velocity"},
                               std::pair{waves::ForcingKind::Elevation, "elevation"}})
    {
      const auto band = waves::OmegaLimit(pi, kind);
      const double lambda = waves::ShortestWavelength(pi, kind, env);
      r[label] = {{"omega_lo", band.lo}, {"omega_hi", band.hi}, {"shortest_wavelength", lambda}};
      if (m)
      {
        const double dx = mesh::MinSpacing(*m, order);
        r[label]["wavelength_over_dx_min"] = lambda / dx;
      }
    }
    if (m)
    {
      const double dx = mesh::MinSpacing(*m, order);
      const double dt = courant * dx / env.MaxCelerity();
      r["dx_min"] = dx;
      r["dt"] = dt;
      r["steps_default"] = static_cast<long>(std::ceil((2.0 * pi.t0() + 6.0 / width) / dt));
    }
    report[name] = r;
  }
  Emit(c, "impulse.json", report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"hydrosem: spectral-element pseudo-impulsive radiation and diffraction"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config, "run configuration (INI)");
  app.add_option("--output-dir", c.output_dir, "output directory");
  app.add_option("--threads", c.threads, "concurrent problems")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "seed for randomized property checks");

  auto *run = app.add_subcommand("run", "radiation and diffraction run from a configuration");

  MeshSource mesh_src;
  int order = 3;
  std::vector<int> orders;

  auto *mms = app.add_subcommand("mms", "manufactured-solution error on one mesh and order");
  AddMeshOptions(mms, mesh_src);
  mms->add_option("--order", order, "polynomial order")->check(CLI::Range(1, 10));

  auto *psweep = app.add_subcommand("p-sweep", "manufactured-solution error over polynomial orders");
  AddMeshOptions(psweep, mesh_src);
  psweep->add_option("--orders", orders, "orders (default 1..6)");

  auto *hsweep = app.add_subcommand("h-sweep", "manufactured-solution rates over a mesh family");
  AddMeshOptions(hsweep, mesh_src);
  hsweep->add_option("--orders", orders, "orders (default 1 2 3)");

  auto *inspect = app.add_subcommand("inspect-mesh", "mesh statistics and tags");
  AddMeshOptions(inspect, mesh_src);
  inspect->add_option("--order", order, "order for dx_min")->check(CLI::Range(1, 10));

  auto *diag = app.add_subcommand("impulse-diagnose", "omega_limit and resolution for an impulse");
  std::optional<double> s, depth;
  double eps = 1e-8, g = 9.81, courant = 1.0;
  diag->add_option("--s", s, "impulse width parameter (1/s)");
  diag->add_option("--eps", eps, "impulse cutoff");
  diag->add_option("--depth", depth, "water depth (default: from the mesh)");
  diag->add_option("--g", g, "gravity");
  diag->add_option("--courant", courant, "Courant number for the step estimate");
  diag->add_option("--order", order, "polynomial order")->check(CLI::Range(1, 10));
  AddMeshOptions(diag, mesh_src);

  for (auto *sub : {run, mms, psweep, hsweep, inspect, diag})
  {
    sub->fallthrough();
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try
  {
    if (*run)
    {
      return RunCommand(c);
    }
    if (*mms)
    {
      verify::ConvergenceReport rep;
      for (const auto &m : mesh_src.Load())
      {
        rep.rows.push_back(verify::RunMms(m, order, FieldFor(m)));
      }
      Emit(c, "mms.csv", MmsCsv(rep));
      return 0;
    }
    if (*psweep)
    {
      if (orders.empty())
      {
        orders = {1, 2, 3, 4, 5, 6};
      }
      verify::ConvergenceReport rep;
      for (const auto &m : mesh_src.Load())
      {
        const auto r = verify::PSweep(m, orders, FieldFor(m));
        rep.rows.insert(rep.rows.end(), r.rows.begin(), r.rows.end());
      }
      Emit(c, "p_sweep.csv", MmsCsv(rep));
      return 0;
    }
    if (*hsweep)
    {
      if (orders.empty())
      {
        orders = {1, 2, 3};
      }
      const auto meshes = mesh_src.Load();
      Emit(c, "h_sweep.csv", MmsCsv(verify::HSweep(meshes, orders, FieldFor(meshes.front()))));
      return 0;
    }
    if (*inspect)
    {
      return InspectMesh(c, mesh_src, order);
    }
    if (*diag)
    {
      return ImpulseDiagnose(c, s, eps, depth, g, mesh_src, order, courant);
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
