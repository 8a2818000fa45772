// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_VERIFY_MMS_HPP
#define HYDROSEM_VERIFY_MMS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/linalg/solver.hpp"
#include "hydrosem/mesh/hybrid_mesh.hpp"

namespace hydrosem::verify
{

// Manufactured field with its gradient and Laplacian. Dirichlet data on the
// free surface (top), Neumann data on every other boundary.
struct MmsCase
{
  std::string name;
  std::function<double(const Eigen::Vector3d &)> phi;
  std::function<Eigen::Vector3d(const Eigen::Vector3d &)> grad;
  std::function<double(const Eigen::Vector3d &)> laplacian;
};

// cos(kx x) cos(ky y) cos(kz z).
MmsCase TrigCase(double kx, double ky, double kz);
// The default field cos(pi x/Lx) cos(pi y/Ly) cos(pi z/Lz) for a box.
MmsCase BoxCase(double lx, double ly, double lz);
// a x + b y + c z (harmonic).
MmsCase LinearCase(double a, double b, double c);
// phi = 0.
MmsCase ZeroCase();

struct MmsResult
{
  int order = 0;
  int num_elements = 0;
  int num_dofs = 0;
  double h = 0.0;         // largest element edge
  double error = 0.0;     // global L1 error
  double magnitude = 0.0; // L1 norm of phi
  int iterations = 0;
};

MmsResult RunMms(const mesh::HybridMesh &mesh, int order, const MmsCase &mms,
                 const linalg::SolverConfig &cfg = {});

// Largest straight edge of any element.
double MaxEdge(const mesh::HybridMesh &mesh);

struct ConvergenceReport
{
  std::vector<MmsResult> rows;
  // h-sweeps: one fitted rate per order, in the order requested.
  std::vector<int> orders;
  std::vector<double> rates;
};

ConvergenceReport PSweep(const mesh::HybridMesh &mesh, const std::vector<int> &orders,
                         const MmsCase &mms, const linalg::SolverConfig &cfg = {});

// Throws StatisticsError for fewer than three meshes.
ConvergenceReport HSweep(const std::vector<mesh::HybridMesh> &meshes,
                         const std::vector<int> &orders, const MmsCase &mms,
                         const linalg::SolverConfig &cfg = {});

// Least-squares slope of log(error) against log(h), skipping errors within
// 10x of the round-off floor (1e-14 of the field magnitude). Throws
// StatisticsError when fewer than three points remain.
double FitRate(const std::vector<double> &h, const std::vector<double> &error, double magnitude);

// Writes the report rows as CSV (order, elements, dofs, h, error).
std::string ReportCsv(const ConvergenceReport &report);

}  // namespace hydrosem::verify

#endif  // HYDROSEM_VERIFY_MMS_HPP
