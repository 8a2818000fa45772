// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "hydrosem/mesh/mesh_io.hpp"
#include "hydrosem/mesh/msh_reader.hpp"
#include "hydrosem/refelem/reference_element.hpp"

namespace hydrosem::cli
{
namespace
{

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"mesh", {"file", "order"}},
    {"environment", {"g", "depth", "rho"}},
    {"symmetry", {"planes"}},
    {"impulse", {"radiation_s", "diffraction_s", "eps"}},
    {"radiation", {"modes", "infinite_frequency"}},
    {"diffraction", {"enabled", "heading", "forces"}},
    {"mode", {"tags", "normal", "parity_x", "parity_y"}},
    {"stretch", {"axis", "start", "ratio", "layer_width"}},
    {"damping", {"axis", "start", "end", "peak"}},
    {"time", {"courant", "duration", "extend", "dz"}},
    {"solver", {"tolerance", "max_iterations", "preconditioner"}},
    {"output", {"directory", "length", "omega_points", "reference", "time_series"}},
};

// Splits "mode7" into ("mode", 7); plain names get index 0.
std::pair<std::string, int> SectionKind(const std::string &name)
{
  std::size_t i = name.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1])))
  {
    --i;
  }
  if (i == name.size())
  {
    return {name, 0};
  }
  return {name.substr(0, i), std::stoi(name.substr(i))};
}

std::vector<std::string> Words(const std::string &s)
{
  std::vector<std::string> out;
  boost::split(out, s, boost::is_any_of(" \t,"), boost::token_compress_on);
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

class Reader
{
public:
  std::vector<std::string> violations;

  template <class T>
  std::optional<T> Get(const ptree &sec, const std::string &where, const std::string &key)
  {
    const auto raw = sec.get_optional<std::string>(key);
    if (!raw)
    {
      return std::nullopt;
    }
    const std::string text = boost::trim_copy(*raw);
    if constexpr (std::is_same_v<T, bool>)
    {
      const std::string v = boost::to_lower_copy(text);
      if (v == "true" || v == "yes" || v == "on" || v == "1")
      {
        return true;
      }
      if (v == "false" || v == "no" || v == "off" || v == "0")
      {
        return false;
      }
      violations.push_back(fmt::format("[{}] {} = '{}' is not a boolean", where, key, text));
      return std::nullopt;
    }
    else
    {
      try
      {
        return boost::lexical_cast<T>(text);
      }
      catch (const boost::bad_lexical_cast &)
      {
        violations.push_back(fmt::format("[{}] {} = '{}' is not a valid number", where, key, text));
        return std::nullopt;
      }
    }
  }

  template <class T, class Check>
  void Read(const ptree &sec, const std::string &where, const std::string &key, T &target,
            Check check, const char *requirement)
  {
    if (auto v = Get<T>(sec, where, key))
    {
      if (!check(*v))
      {
        violations.push_back(fmt::format("[{}] {} = {} must be {}", where, key, *v, requirement));
        return;
      }
      target = *v;
    }
  }

  std::vector<int> Indices(const ptree &sec, const std::string &where, const std::string &key)
  {
    std::vector<int> out;
    for (const auto &w : Words(sec.get<std::string>(key, "")))
    {
      try
      {
        const int k = boost::lexical_cast<int>(w);
        if (k < 1)
        {
          throw boost::bad_lexical_cast();
        }
        if (std::find(out.begin(), out.end(), k) == out.end())
        {
          out.push_back(k);
        }
      }
      catch (const boost::bad_lexical_cast &)
      {
        violations.push_back(fmt::format("[{}] {}: '{}' is not a mode index", where, key, w));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<symmetry::Parity> ParityOf(const ptree &sec, const std::string &where,
                                           const std::string &key)
  {
    const auto raw = sec.get_optional<std::string>(key);
    if (!raw)
    {
      return std::nullopt;
    }
    const std::string v = boost::to_lower_copy(boost::trim_copy(*raw));
    if (v == "even" || v == "symmetric")
    {
      return symmetry::Parity::Even;
    }
    if (v == "odd" || v == "antisymmetric")
    {
      return symmetry::Parity::Odd;
    }
    violations.push_back(fmt::format("[{}] {} = '{}' must be even or odd", where, key, *raw));
    return std::nullopt;
  }

  template <class F>
  void Try(const std::string &where, F &&f)
  {
    try
    {
      f();
    }
    catch (const ConfigError &e)
    {
      for (const auto &v : e.violations())
      {
        violations.push_back(fmt::format("[{}] {}", where, v));
      }
    }
    catch (const Error &e)
    {
      violations.push_back(fmt::format("[{}] {}", where, e.what()));
    }
  }
};

auto Positive = [](double v) { return std::isfinite(v) && v > 0.0; };
auto NonNegative = [](double v) { return std::isfinite(v) && v >= 0.0; };
auto Finite = [](double v) { return std::isfinite(v); };

}  // namespace

std::vector<int> RunConfig::Forces() const
{
  std::set<int> all(radiation_modes.begin(), radiation_modes.end());
  if (diffraction)
  {
    all.insert(diffraction_forces.begin(), diffraction_forces.end());
  }
  return {all.begin(), all.end()};
}

sim::ModeShape RunConfig::Mode(int j) const
{
  if (j <= 6)
  {
    return sim::RigidMode(j, reference);
  }
  const auto &g = generalized.at(j);
  sim::ModeShape m;
  m.index = j;
  m.tags = g.tags;
  m.parity = g.parity;
  const Expression e = g.normal;
  m.normal = [e](const Eigen::Vector3d &x, const Eigen::Vector3d &n) { return e(x, n); };
  return m;
}

RunConfig ParseConfig(const std::string &text, const std::filesystem::path &base_dir)
{
  ptree root;
  try
  {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, root);
  }
  catch (const boost::property_tree::ini_parser_error &e)
  {
    throw ConfigError({fmt::format("line {}: {}", e.line(), e.message())});
  }

  RunConfig cfg;
  Reader r;
  const ptree empty;
  auto section = [&](const std::string &name) -> const ptree & {
    const auto it = root.find(name);
    return it == root.not_found() ? empty : it->second;
  };

  for (const auto &[name, sec] : root)
  {
    if (sec.empty() && !sec.data().empty())
    {
      r.violations.push_back(fmt::format("key '{}' outside any section", name));
      continue;
    }
    const auto [kind, index] = SectionKind(name);
    const auto schema = kSchema.find(kind);
    const bool indexed = kind == "mode" || kind == "stretch" || kind == "damping";
    if (schema == kSchema.end() || indexed != (index > 0))
    {
      r.violations.push_back(fmt::format("unknown section [{}]", name));
      continue;
    }
    for (const auto &[key, value] : sec)
    {
      if (!schema->second.count(key))
      {
        r.violations.push_back(fmt::format("[{}] unknown key '{}'", name, key));
      }
    }
  }

  // [mesh]
  const auto &mesh_sec = section("mesh");
  if (const auto file = mesh_sec.get_optional<std::string>("file"))
  {
    std::filesystem::path p = boost::trim_copy(*file);
    cfg.mesh_path = p.is_absolute() ? p : base_dir / p;
  }
  else
  {
    r.violations.push_back("[mesh] file is required");
  }
  r.Read(mesh_sec, "mesh", "order", cfg.order,
         [](int p) { return p >= 1 && p <= refelem::kMaxOrder; }, "in 1..10");

  // [environment]
  const auto &env_sec = section("environment");
  r.Read(env_sec, "environment", "g", cfg.env.g, Positive, "positive");
  r.Read(env_sec, "environment", "rho", cfg.env.rho, Positive, "positive");
  if (!env_sec.get_optional<std::string>("depth"))
  {
    r.violations.push_back("[environment] depth is required");
  }
  r.Read(env_sec, "environment", "depth", cfg.env.depth, Positive, "positive");

  // [symmetry]
  for (const auto &w : Words(section("symmetry").get<std::string>("planes", "")))
  {
    if (boost::iequals(w, "none"))
    {
      continue;
    }
    r.Try("symmetry", [&] {
      const auto tag = mesh::BoundaryTag::FromName(w);
      if (tag == mesh::BoundaryTag::SymX())
      {
        cfg.symmetry.x = true;
      }
      else if (tag == mesh::BoundaryTag::SymY())
      {
        cfg.symmetry.y = true;
      }
      else
      {
        throw ConfigError({fmt::format("planes: '{}' is not a symmetry plane tag", w)});
      }
    });
  }

  // [impulse]
  const auto &imp = section("impulse");
  r.Read(imp, "impulse", "radiation_s", cfg.radiation_s, Positive, "positive");
  r.Read(imp, "impulse", "diffraction_s", cfg.diffraction_s, Positive, "positive");
  r.Read(imp, "impulse", "eps", cfg.eps, [](double v) { return v > 0.0 && v < 1.0; }, "in (0, 1)");

  // [radiation]
  const auto &rad = section("radiation");
  cfg.radiation_modes = r.Indices(rad, "radiation", "modes");
  r.Read(rad, "radiation", "infinite_frequency", cfg.infinite_frequency, [](bool) { return true; }, "");
  if (!cfg.radiation_modes.empty() && !(cfg.radiation_s > 0.0))
  {
    r.violations.push_back("[impulse] radiation_s is required for radiation modes");
  }

  // [diffraction]
  const auto &dif = section("diffraction");
  r.Read(dif, "diffraction", "enabled", cfg.diffraction, [](bool) { return true; }, "");
  r.Read(dif, "diffraction", "heading", cfg.heading_deg, Finite, "finite");
  cfg.diffraction_forces = r.Indices(dif, "diffraction", "forces");
  if (cfg.diffraction)
  {
    if (!(cfg.diffraction_s > 0.0))
    {
      r.violations.push_back("[impulse] diffraction_s is required for diffraction");
    }
    if (cfg.diffraction_forces.empty())
    {
      cfg.diffraction_forces = cfg.radiation_modes;
    }
    if (cfg.diffraction_forces.empty())
    {
      r.violations.push_back("[diffraction] forces is required when no radiation modes are given");
    }
  }
  if (cfg.radiation_modes.empty() && !cfg.diffraction)
  {
    r.violations.push_back("nothing to run: no radiation modes and diffraction disabled");
  }

  // [modeN], [stretchN], [dampingN]
  for (const auto &[name, sec] : root)
  {
    const auto [kind, index] = SectionKind(name);
    if (kind == "mode" && index > 0)
    {
      if (index <= 6)
      {
        r.violations.push_back(fmt::format("[{}] generalized modes start at 7", name));
        continue;
      }
      GeneralizedModeConfig g;
      g.index = index;
      for (const auto &w : Words(sec.get<std::string>("tags", "")))
      {
        r.Try(name, [&] {
          const auto tag = mesh::BoundaryTag::FromName(w);
          if (tag.kind != mesh::BoundaryTag::Kind::Body && tag.kind != mesh::BoundaryTag::Kind::Special)
          {
            throw ConfigError({fmt::format("tags: '{}' is not a body or special surface", w)});
          }
          g.tags.push_back(tag);
        });
      }
      if (g.tags.empty())
      {
        r.violations.push_back(fmt::format("[{}] tags is required", name));
      }
      if (const auto n = sec.get_optional<std::string>("normal"))
      {
        r.Try(name, [&] { g.normal = Expression::Parse(boost::trim_copy(*n)); });
      }
      else
      {
        r.violations.push_back(fmt::format("[{}] normal is required", name));
      }
      g.parity.x = r.ParityOf(sec, name, "parity_x");
      g.parity.y = r.ParityOf(sec, name, "parity_y");
      cfg.generalized[index] = std::move(g);
    }
    else if (kind == "stretch" && index > 0)
    {
      mesh::StretchSpec s;
      const std::string axis = boost::to_lower_copy(sec.get<std::string>("axis", "x"));
      if (axis == "x")
      {
        s.axis = mesh::StretchAxis::X;
      }
      else if (axis == "y")
      {
        s.axis = mesh::StretchAxis::Y;
      }
      else if (axis == "radial")
      {
        s.axis = mesh::StretchAxis::Radial;
      }
      else
      {
        r.violations.push_back(fmt::format("[{}] axis '{}' must be x, y or radial", name, axis));
      }
      r.Read(sec, name, "start", s.start, Finite, "finite");
      r.Read(sec, name, "ratio", s.ratio, [](double v) { return v > 1.0; }, "greater than 1");
      r.Read(sec, name, "layer_width", s.layer_width, NonNegative, "non-negative");
      if (!sec.get_optional<std::string>("ratio"))
      {
        r.violations.push_back(fmt::format("[{}] ratio is required", name));
      }
      cfg.stretching.push_back(s);
    }
    else if (kind == "damping" && index > 0)
    {
      waves::DampingZone z;
      r.Try(name, [&] { z.axis = waves::AxisFromName(sec.get<std::string>("axis", "radial")); });
      r.Read(sec, name, "start", z.start, Finite, "finite");
      r.Read(sec, name, "end", z.end, Finite, "finite");
      r.Read(sec, name, "peak", z.peak, Positive, "positive");
      if (!(z.end > z.start))
      {
        r.violations.push_back(fmt::format("[{}] end must exceed start", name));
      }
      cfg.zones.push_back(z);
    }
  }
  for (int j : cfg.Forces())
  {
    if (j > 6 && !cfg.generalized.count(j))
    {
      r.violations.push_back(fmt::format("mode {} is requested but has no [mode{}] section", j, j));
    }
  }

  // [time]
  const auto &time = section("time");
  r.Read(time, "time", "courant", cfg.courant, [](double c) { return c > 0.0 && c <= 1.0; }, "in (0, 1]");
  if (const auto d = time.get_optional<std::string>("duration"))
  {
    if (!boost::iequals(boost::trim_copy(*d), "auto"))
    {
      double v = 0.0;
      r.Read(time, "time", "duration", v, Positive, "positive or auto");
      if (v > 0.0)
      {
        cfg.duration = v;
      }
    }
  }
  r.Read(time, "time", "extend", cfg.extend, [](bool) { return true; }, "");
  if (const auto dz = time.get_optional<std::string>("dz"))
  {
    r.Try("time", [&] { cfg.dz = sim::DzMethodFromName(boost::trim_copy(*dz)); });
  }

  // [solver]
  const auto &sol = section("solver");
  r.Read(sol, "solver", "tolerance", cfg.solver.rel_tolerance,
         [](double t) { return t > 0.0 && t <= 1e-2; }, "in (0, 1e-2]");
  r.Read(sol, "solver", "max_iterations", cfg.solver.max_iterations, [](int n) { return n >= 0; },
         "non-negative");
  if (const auto p = sol.get_optional<std::string>("preconditioner"))
  {
    r.Try("solver", [&] { cfg.solver.preconditioner = linalg::PreconditionerFromName(boost::trim_copy(*p)); });
  }

  // [output]
  const auto &out = section("output");
  if (const auto d = out.get_optional<std::string>("directory"))
  {
    std::filesystem::path p = boost::trim_copy(*d);
    cfg.output_dir = p.is_absolute() ? p : base_dir / p;
  }
  else
  {
    cfg.output_dir = base_dir / cfg.output_dir;
  }
  r.Read(out, "output", "length", cfg.length, Positive, "positive");
  r.Read(out, "output", "omega_points", cfg.omega_points, [](int n) { return n >= 2; }, "at least 2");
  r.Read(out, "output", "time_series", cfg.time_series, [](bool) { return true; }, "");
  if (const auto ref = out.get_optional<std::string>("reference"))
  {
    const auto w = Words(*ref);
    bool ok = w.size() == 3;
    for (int i = 0; ok && i < 3; ++i)
    {
      ok = boost::conversion::try_lexical_convert(w[i], cfg.reference(i)) && std::isfinite(cfg.reference(i));
    }
    if (!ok)
    {
      r.violations.push_back(fmt::format("[output] reference '{}' must be three numbers", *ref));
    }
  }

  if (!r.violations.empty())
  {
    throw ConfigError(r.violations);
  }
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError({fmt::format("cannot open configuration '{}'", path.string())});
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

void ValidateAgainstMesh(const RunConfig &cfg, const mesh::HybridMesh &mesh)
{
  Reader r;
  r.Try("symmetry", [&] { symmetry::Validate(cfg.symmetry, mesh); });
  const auto forces = cfg.Forces();
  const bool rigid = std::any_of(forces.begin(), forces.end(), [](int j) { return j <= 6; });
  if (rigid && !mesh.HasTag(mesh::BoundaryTag::Body()))
  {
    r.violations.push_back("rigid modes requested but the mesh has no body surface");
  }
  for (const auto &[k, g] : cfg.generalized)
  {
    for (const auto &tag : g.tags)
    {
      if (!mesh.HasTag(tag))
      {
        r.violations.push_back(fmt::format("[mode{}] tag '{}' not present in the mesh", k, tag.Name()));
      }
    }
  }
  for (int j : forces)
  {
    const std::string where = fmt::format("mode{}", j);
    const auto shape = cfg.Mode(j);
    r.Try(where, [&] {
      if (cfg.symmetry.x)
      {
        symmetry::RadiationFlag(j, symmetry::Plane::X, &shape.parity);
      }
      if (cfg.symmetry.y)
      {
        symmetry::RadiationFlag(j, symmetry::Plane::Y, &shape.parity);
      }
      if (cfg.diffraction)
      {
        symmetry::ForceBlock(cfg.symmetry, shape.parity);
      }
    });
  }
  const auto lo = mesh.BoundingMin();
  const auto hi = mesh.BoundingMax();
  for (std::size_t i = 0; i < cfg.zones.size(); ++i)
  {
    r.Try(fmt::format("damping{}", i + 1), [&] { waves::Validate(cfg.zones[i], lo[0], hi[0], lo[1], hi[1]); });
  }
  if (!r.violations.empty())
  {
    throw ConfigError(r.violations);
  }
}

mesh::HybridMesh LoadMesh(const RunConfig &cfg)
{
  if (!std::filesystem::exists(cfg.mesh_path))
  {
    throw ConfigError({fmt::format("[mesh] file '{}' does not exist", cfg.mesh_path.string())});
  }
  mesh::HybridMesh m;
  if (cfg.mesh_path.extension() == ".msh")
  {
    m = mesh::ReadMshFile(cfg.mesh_path.string());
  }
  else
  {
    std::ifstream in(cfg.mesh_path);
    std::stringstream ss;
    ss << in.rdbuf();
    m = mesh::Deserialize(ss.str());
  }
  for (std::size_t i = 0; i < cfg.stretching.size(); ++i)
  {
    try
    {
      m = mesh::ApplyStretching(m, cfg.stretching[i]);
    }
    catch (const ParameterError &e)
    {
      throw ConfigError({fmt::format("[stretch{}] {}", i + 1, e.what())});
    }
  }
  return m;
}

}  // namespace hydrosem::cli
