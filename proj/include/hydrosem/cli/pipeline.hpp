// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_CLI_PIPELINE_HPP
#define HYDROSEM_CLI_PIPELINE_HPP

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydrosem/cli/config.hpp"
#include "hydrosem/post/coefficients.hpp"

namespace hydrosem::cli
{

struct ProblemReport
{
  std::string name;  // e.g. "radiation k=3", "diffraction SS", "infinite k=3"
  double dt = 0.0;
  int steps = 0;
  double t_start = 0.0;
  double decay_ratio = 0.0;
  bool truncated = false;
  long iterations = 0;
  int solves = 0;
};

struct RunOutput
{
  post::HydroResult radiation;   // a, b, a_inf on the radiation band
  post::HydroResult excitation;  // X_0, X_s on the diffraction band
  std::vector<ProblemReport> problems;
  std::map<std::string, std::string> files;  // relative name -> contents
  nlohmann::json manifest;
};

using Logger = std::function<void(const std::string &)>;

// Schedules every radiation mode, infinite-frequency solve and diffraction
// block, runs them on up to `threads` workers and post-processes. Errors are
// rethrown with the problem name prepended.
RunOutput Run(const RunConfig &cfg, const mesh::HybridMesh &mesh, int threads = 1,
              const Logger &log = {});

// Writes every file and manifest.json. Throws ConfigError when the directory
// cannot be created.
void WriteOutputs(const RunOutput &out, const std::filesystem::path &dir);

// Re-throws the active library error as the same type with `context: `
// prepended. Call inside a catch block.
[[noreturn]] void RethrowWithContext(const std::string &context);

}  // namespace hydrosem::cli

#endif  // HYDROSEM_CLI_PIPELINE_HPP
