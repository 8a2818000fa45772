// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/cli/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/post/io.hpp"
#include "hydrosem/post/nondim.hpp"
#include "hydrosem/sim/runs.hpp"
#include "hydrosem/sim/timegrid.hpp"
#include "hydrosem/version.hpp"

namespace hydrosem::cli
{
namespace
{

using symmetry::BlockLabel;
using symmetry::Plane;

bool Flag(const symmetry::SymmetryConfig &sym, int k, Plane plane, const symmetry::ModeParity &p)
{
  const bool present = plane == Plane::X ? sym.x : sym.y;
  return !present || symmetry::RadiationFlag(k, plane, &p);
}

// Forces j whose full-body integral survives for a mode of parity p.
bool SameParity(const symmetry::SymmetryConfig &sym, const sim::ModeShape &a, const sim::ModeShape &b)
{
  return Flag(sym, a.index, Plane::X, a.parity) == Flag(sym, b.index, Plane::X, b.parity) &&
         Flag(sym, a.index, Plane::Y, a.parity) == Flag(sym, b.index, Plane::Y, b.parity);
}

// Runs tasks on up to n threads; rethrows the first failure in task order.
void RunTasks(const std::vector<std::function<void()>> &tasks, int n)
{
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
    {
      try
      {
        tasks[i]();
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(n, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

nlohmann::json Band(const waves::FrequencyBand &b) { return {{"lo", b.lo}, {"hi", b.hi}}; }

}  // namespace

void RethrowWithContext(const std::string &context)
{
  const std::string c = context + ": ";
  try
  {
    throw;
  }
  catch (const ConvergenceError &e)
  {
    throw ConvergenceError(c + e.what(), e.best_iterate(), e.residual_history());
  }
  catch (const ConfigError &e)
  {
    std::vector<std::string> v;
    for (const auto &s : e.violations())
    {
      v.push_back(c + s);
    }
    throw ConfigError(v);
  }
  catch (const ParseError &)
  {
    throw;
  }
#define HYDROSEM_RETHROW(T) \
  catch (const T &e) { throw T(c + e.what()); }
  HYDROSEM_RETHROW(TaggingError)
  HYDROSEM_RETHROW(TopologyError)
  HYDROSEM_RETHROW(GeometryError)
  HYDROSEM_RETHROW(ParameterError)
  HYDROSEM_RETHROW(DomainError)
  HYDROSEM_RETHROW(ParityError)
  HYDROSEM_RETHROW(SpectralInputError)
  HYDROSEM_RETHROW(SchedulingError)
  HYDROSEM_RETHROW(StatisticsError)
  HYDROSEM_RETHROW(DivisionGuardError)
#undef HYDROSEM_RETHROW
}

RunOutput Run(const RunConfig &cfg, const mesh::HybridMesh &mesh, int threads, const Logger &log)
{
  auto say = [&](const std::string &s) {
    if (log)
    {
      log(s);
    }
  };
  const auto wall0 = std::chrono::steady_clock::now();
  ValidateAgainstMesh(cfg, mesh);
  const auto &sym = cfg.symmetry;
  const double mult = sym.Multiplier();
  const double beta = cfg.heading_deg * std::numbers::pi / 180.0;

  // Everything that can fail on the request itself fails here, before any solve.
  std::map<int, sim::ModeShape> shapes;
  for (int j : cfg.Forces())
  {
    shapes[j] = cfg.Mode(j);
  }
  std::set<BlockLabel> labels;
  std::map<int, symmetry::ModeParity> diff_parity;
  if (cfg.diffraction)
  {
    for (int j : cfg.diffraction_forces)
    {
      labels.insert(symmetry::ForceBlock(sym, shapes[j].parity));
      diff_parity[j] = shapes[j].parity;
    }
  }

  say(fmt::format("mesh: {} elements ({} prisms, {} tets), P = {}", mesh.NumElements(),
                  mesh.NumPrisms(), mesh.NumTets(), cfg.order));
  const sim::Discretization d(mesh, cfg.order);
  std::map<int, Eigen::VectorXd> loads;
  for (const auto &[j, s] : shapes)
  {
    try
    {
      loads[j] = sim::ModeLoad(d, s);
    }
    catch (...)
    {
      RethrowWithContext(fmt::format("mode {}", j));
    }
  }
  say(fmt::format("{} dofs, {} free-surface nodes", d.dofs().num_dofs, d.fs().size()));

  auto options = [&](const waves::PseudoImpulse &pi) {
    sim::RunOptions opt;
    const double duration = cfg.duration.value_or(sim::DefaultDuration(pi));
    opt.grid = sim::ComputeTimeGrid(mesh, cfg.order, cfg.env, cfg.courant, duration);
    opt.auto_extend = cfg.extend;
    opt.cap = std::max(duration, sim::DurationCap(pi));
    return opt;
  };
  auto surface = [&](bool tx, bool ty) {
    sim::SurfaceOptions so;
    so.theta_x = tx;
    so.theta_y = ty;
    so.zones = cfg.zones;
    so.dz = cfg.dz;
    so.solver = cfg.solver;
    return so;
  };

  RunOutput out;
  std::vector<std::function<void()>> tasks;
  std::vector<ProblemReport> reports;
  std::mutex report_mutex;
  auto report = [&](ProblemReport r) {
    std::lock_guard<std::mutex> lock(report_mutex);
    reports.push_back(std::move(r));
  };

  // Radiation.
  std::optional<waves::PseudoImpulse> rad_pi;
  std::map<int, sim::BodyRecord> rad_records;
  std::map<int, std::map<int, double>> inf_results;
  if (!cfg.radiation_modes.empty())
  {
    rad_pi.emplace(cfg.radiation_s, cfg.eps);
    for (int k : cfg.radiation_modes)
    {
      rad_records[k];
      if (cfg.infinite_frequency)
      {
        inf_results[k];
      }
    }
  }
  for (int k : cfg.radiation_modes)
  {
    const auto &sk = shapes[k];
    std::map<int, Eigen::VectorXd> fl;
    for (const auto &[j, s] : shapes)
    {
      if (SameParity(sym, s, sk))
      {
        fl[j] = loads[j];
      }
    }
    const bool tx = Flag(sym, k, Plane::X, sk.parity);
    const bool ty = Flag(sym, k, Plane::Y, sk.parity);
    tasks.push_back([&, k, fl, tx, ty] {
      const std::string name = fmt::format("radiation k={}", k);
      try
      {
        const auto opt = options(*rad_pi);
        sim::SurfaceSolver s(d, cfg.env, surface(tx, ty));
        say(fmt::format("{}: dt = {:.6g}, {} steps", name, opt.grid.dt, opt.grid.steps));
        auto rec = sim::RunRadiation(s, loads.at(k), *rad_pi, fl, opt);
        report({name, rec.dt, rec.steps(), rec.t_start, rec.decay_ratio, rec.truncated,
                rec.iterations, s.solves()});
        rad_records[k] = std::move(rec);
      }
      catch (...)
      {
        RethrowWithContext(name);
      }
    });
    if (cfg.infinite_frequency)
    {
      tasks.push_back([&, k, fl, tx, ty] {
        const std::string name = fmt::format("infinite-frequency k={}", k);
        try
        {
          inf_results[k] = sim::SolveInfiniteFrequency(d, cfg.env, loads.at(k), fl, tx, ty, mult, cfg.solver);
          report({name, 0.0, 0, 0.0, 0.0, false, 0, 1});
        }
        catch (...)
        {
          RethrowWithContext(name);
        }
      });
    }
  }

  // Diffraction blocks.
  std::optional<waves::PseudoImpulse> dif_pi;
  std::map<BlockLabel, sim::BodyRecord> dif_records;
  if (cfg.diffraction)
  {
    dif_pi.emplace(cfg.diffraction_s, cfg.eps);
    for (auto label : labels)
    {
      dif_records[label];
    }
  }
  for (const auto &block : symmetry::DiffractionBlocks(sym))
  {
    if (!labels.count(block.label))
    {
      continue;
    }
    std::map<int, Eigen::VectorXd> fl;
    for (int j : cfg.diffraction_forces)
    {
      if (symmetry::ForceBlock(sym, shapes[j].parity) == block.label)
      {
        fl[j] = loads[j];
      }
    }
    tasks.push_back([&, block, fl] {
      const std::string name = fmt::format("diffraction {}", symmetry::LabelName(block.label));
      try
      {
        const auto opt = options(*dif_pi);
        const double span = opt.auto_extend ? opt.cap : opt.grid.Duration();
        const auto forcing = sim::BuildDiffractionForcing(d, cfg.env, *dif_pi, sym, block.label, beta,
                                                          opt.grid.dt, span);
        sim::SurfaceSolver s(d, cfg.env, surface(block.theta_x, block.theta_y));
        say(fmt::format("{}: dt = {:.6g}, {} steps from t = {:.6g}", name, opt.grid.dt,
                        opt.grid.steps, forcing.t_start));
        auto rec = sim::RunDiffraction(s, forcing, fl, opt);
        report({name, rec.dt, rec.steps(), rec.t_start, rec.decay_ratio, rec.truncated,
                rec.iterations, s.solves()});
        dif_records[block.label] = std::move(rec);
      }
      catch (...)
      {
        RethrowWithContext(name);
      }
    });
  }

  RunTasks(tasks, threads);
  std::sort(reports.begin(), reports.end(),
            [](const ProblemReport &a, const ProblemReport &b) { return a.name < b.name; });
  out.problems = reports;

  // Post-processing.
  nlohmann::json warnings = nlohmann::json::array();
  if (rad_pi)
  {
    const auto band = waves::OmegaLimit(*rad_pi, waves::ForcingKind::Velocity);
    out.radiation.omega = post::OmegaGrid(band, cfg.omega_points);
    for (const auto &[k, rec] : rad_records)
    {
      try
      {
        post::RadiationCoefficients(rec, k, *rad_pi, cfg.env, mult, out.radiation);
      }
      catch (...)
      {
        RethrowWithContext(fmt::format("radiation k={} post-processing", k));
      }
    }
    for (const auto &[k, row] : inf_results)
    {
      for (const auto &[j, v] : row)
      {
        out.radiation.a_inf[{j, k}] = v;
      }
    }
    out.manifest["radiation"]["omega_limit"] = Band(band);
    out.manifest["radiation"]["s"] = cfg.radiation_s;
    out.manifest["radiation"]["t0"] = rad_pi->t0();
  }
  if (dif_pi)
  {
    const auto band = waves::OmegaLimit(*dif_pi, waves::ForcingKind::Elevation);
    out.excitation.omega = post::OmegaGrid(band, cfg.omega_points);
    std::map<BlockLabel, std::map<int, Eigen::VectorXcd>> blocks;
    try
    {
      for (const auto &[label, rec] : dif_records)
      {
        blocks[label] = post::BlockForceSpectra(rec, cfg.env, out.excitation.omega);
      }
      out.excitation.x_s = post::ScatteredExcitation(sym, blocks, diff_parity, *dif_pi,
                                                     dif_records.begin()->second, out.excitation.omega);
      std::map<int, sim::ModeShape> dshapes;
      for (int j : cfg.diffraction_forces)
      {
        dshapes[j] = shapes[j];
      }
      out.excitation.x_0 = post::FroudeKrylov(d, cfg.env, sym, dshapes, beta, out.excitation.omega);
    }
    catch (...)
    {
      RethrowWithContext("diffraction post-processing");
    }
    out.manifest["diffraction"]["omega_limit"] = Band(band);
    out.manifest["diffraction"]["s"] = cfg.diffraction_s;
    out.manifest["diffraction"]["t0"] = dif_pi->t0();
    out.manifest["diffraction"]["heading_deg"] = cfg.heading_deg;
  }
  for (const auto *r : {&out.radiation, &out.excitation})
  {
    for (const auto &[key, value] : r->provenance)
    {
      warnings.push_back(key + ": " + value);
    }
  }

  const double g = cfg.env.g;
  const post::NondimSpec spec{cfg.length, cfg.env.rho, g};
  if (rad_pi)
  {
    out.files["radiation.csv"] = post::HydroCsv(out.radiation, cfg.length, g);
    out.files["radiation_nondim.jsonl"] = post::HydroJsonLines(post::Nondimensionalize(out.radiation, spec));
    if (!out.radiation.a_inf.empty())
    {
      out.files["infinite_frequency.csv"] = post::InfiniteFrequencyCsv(out.radiation);
      out.files["infinite_frequency_nondim.csv"] =
          post::InfiniteFrequencyCsv(post::Nondimensionalize(out.radiation, spec));
    }
    if (cfg.time_series)
    {
      for (const auto &[k, rec] : rad_records)
      {
        std::map<int, std::vector<double>> f;
        for (const auto &[j, m] : rec.moments)
        {
          f[j] = post::PressureForce(m, rec.dt, cfg.env.rho, mult);
        }
        out.files[fmt::format("radiation_force_k{}.csv", k)] = post::TimeSeriesCsv(rec.t_start, rec.dt, f);
      }
    }
  }
  if (dif_pi)
  {
    out.files["excitation.csv"] = post::ExcitationCsv(out.excitation, cfg.length, g);
    out.files["excitation_nondim.jsonl"] = post::HydroJsonLines(post::Nondimensionalize(out.excitation, spec));
    if (cfg.time_series)
    {
      for (const auto &[label, rec] : dif_records)
      {
        std::map<int, std::vector<double>> f;
        for (const auto &[j, m] : rec.moments)
        {
          f[j] = post::PressureForce(m, rec.dt, cfg.env.rho, 1.0);
        }
        out.files[fmt::format("diffraction_force_{}.csv", symmetry::LabelName(label))] =
            post::TimeSeriesCsv(rec.t_start, rec.dt, f);
      }
    }
  }

  auto &m = out.manifest;
  m["version"] = kVersion;
  m["mesh"] = {{"path", cfg.mesh_path.string()},
               {"elements", mesh.NumElements()},
               {"prisms", mesh.NumPrisms()},
               {"tets", mesh.NumTets()},
               {"dofs", d.dofs().num_dofs},
               {"free_surface_nodes", d.fs().size()},
               {"dx_min", d.MinSpacing()}};
  m["order"] = cfg.order;
  m["environment"] = {{"g", cfg.env.g}, {"depth", cfg.env.depth}, {"rho", cfg.env.rho}};
  m["symmetry"] = {{"symx", sym.x}, {"symy", sym.y}, {"multiplier", mult}};
  m["solver"] = {{"tolerance", cfg.solver.rel_tolerance},
                 {"preconditioner", linalg::PreconditionerName(cfg.solver.preconditioner)},
                 {"dz", sim::DzMethodName(cfg.dz)}};
  m["courant"] = cfg.courant;
  for (const auto &p : out.problems)
  {
    m["problems"].push_back({{"name", p.name},
                             {"dt", p.dt},
                             {"steps", p.steps},
                             {"t_start", p.t_start},
                             {"decay_ratio", p.decay_ratio},
                             {"truncated", p.truncated},
                             {"pcg_iterations", p.iterations},
                             {"laplace_solves", p.solves}});
    if (p.truncated)
    {
      warnings.push_back(fmt::format("{}: decay criterion not met at the duration cap", p.name));
    }
  }
  m["warnings"] = warnings;
  m["files"] = nlohmann::json::array();
  for (const auto &[name, text] : out.files)
  {
    m["files"].push_back(name);
  }
  m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return out;
}

void WriteOutputs(const RunOutput &out, const std::filesystem::path &dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw ConfigError({fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message())});
  }
  for (const auto &[name, text] : out.files)
  {
    post::WriteText((dir / name).string(), text);
  }
  post::WriteText((dir / "manifest.json").string(), out.manifest.dump(2) + "\n");
}

}  // namespace hydrosem::cli
