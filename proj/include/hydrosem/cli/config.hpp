// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_CLI_CONFIG_HPP
#define HYDROSEM_CLI_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/cli/expression.hpp"
#include "hydrosem/linalg/solver.hpp"
#include "hydrosem/mesh/hybrid_mesh.hpp"
#include "hydrosem/mesh/stretching.hpp"
#include "hydrosem/sim/model.hpp"
#include "hydrosem/symmetry/symmetry.hpp"
#include "hydrosem/waves/damping.hpp"
#include "hydrosem/waves/environment.hpp"

namespace hydrosem::cli
{

// Mode k > 6 with a user normal on tagged surfaces.
struct GeneralizedModeConfig
{
  int index = 0;
  std::vector<mesh::BoundaryTag> tags;
  Expression normal;
  symmetry::ModeParity parity;
};

struct RunConfig
{
  std::filesystem::path mesh_path;  // resolved against the config directory
  int order = 3;
  waves::Environment env;
  symmetry::SymmetryConfig symmetry;
  std::vector<mesh::StretchSpec> stretching;
  std::vector<waves::DampingZone> zones;

  double radiation_s = 0.0;
  double diffraction_s = 0.0;
  double eps = 1e-8;

  std::vector<int> radiation_modes;
  bool infinite_frequency = true;
  bool diffraction = false;
  double heading_deg = 0.0;
  std::vector<int> diffraction_forces;
  std::map<int, GeneralizedModeConfig> generalized;
  Eigen::Vector3d reference = Eigen::Vector3d::Zero();

  double courant = 1.0;
  std::optional<double> duration;  // unset: 2 t0 + 6/s with automatic extension
  bool extend = true;
  sim::DzMethod dz = sim::DzMethod::Flux;
  linalg::SolverConfig solver;

  std::filesystem::path output_dir = "results";
  double length = 1.0;  // non-dimensionalization length L
  int omega_points = 200;
  bool time_series = true;

  // Every force index the run reports (radiation modes and diffraction forces).
  std::vector<int> Forces() const;
  sim::ModeShape Mode(int j) const;
};

// Parses the INI text; relative paths resolve against base_dir. Collects every
// violation into one ConfigError.
RunConfig ParseConfig(const std::string &text, const std::filesystem::path &base_dir = ".");
RunConfig LoadConfig(const std::filesystem::path &path);

// Checks tags, symmetry planes and parity declarations against the mesh, and
// that every requested force can be scheduled. Throws ConfigError.
void ValidateAgainstMesh(const RunConfig &cfg, const mesh::HybridMesh &mesh);

// Reads the mesh (.msh, or the native serialization otherwise) and applies
// the configured stretching.
mesh::HybridMesh LoadMesh(const RunConfig &cfg);

}  // namespace hydrosem::cli

#endif  // HYDROSEM_CLI_CONFIG_HPP
