// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_SYMMETRY_SYMMETRY_HPP
#define HYDROSEM_SYMMETRY_SYMMETRY_HPP

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hydrosem/mesh/hybrid_mesh.hpp"
#include "hydrosem/waves/impulse.hpp"
#include "hydrosem/waves/incident.hpp"

namespace hydrosem::symmetry
{

using Complex = std::complex<double>;

// Plane X is y = 0 (tag symx), plane Y is x = 0 (tag symy).
enum class Plane
{
  X,
  Y
};

struct SymmetryConfig
{
  bool x = false;
  bool y = false;

  int Count() const { return (x ? 1 : 0) + (y ? 1 : 0); }
  // Full-body integrals of matching-parity quantities are this multiple of
  // the computational-domain integral.
  double Multiplier() const { return x && y ? 4.0 : (x || y ? 2.0 : 1.0); }
};

// Throws TaggingError when a declared plane has no facets in the mesh or a
// symmetry tag is present without being declared.
void Validate(const SymmetryConfig &cfg, const mesh::HybridMesh &mesh);

// Parity of a field under reflection through each plane. Even fields get a
// Neumann (theta = 1) condition on the plane, odd ones Dirichlet (theta = 0).
enum class Parity
{
  Even,
  Odd
};

struct ModeParity
{
  std::optional<Parity> x;  // under y -> -y
  std::optional<Parity> y;  // under x -> -x
};

// Rigid-body modes 1..6 (surge, sway, heave, roll, pitch, yaw).
ModeParity RigidParity(int k);

// theta for mode k on a plane. Modes above 6 need a declared parity on that
// plane, otherwise ParityError.
bool RadiationFlag(int k, Plane plane, const ModeParity *declared = nullptr);

enum class BlockLabel
{
  Full,
  S,
  A,
  SS,
  SA,
  AS,
  AA
};

std::string LabelName(BlockLabel b);

struct SymmetryBlock
{
  BlockLabel label = BlockLabel::Full;
  bool theta_x = true;  // only meaningful when plane X is present
  bool theta_y = true;
};

// Parity of the incident-wave component carried by a block.
ModeParity BlockParity(const SymmetryConfig &cfg, BlockLabel label);

// 1 block without planes, S and A with one, SS, SA, AS, AA with two.
std::vector<SymmetryBlock> DiffractionBlocks(const SymmetryConfig &cfg);

// Block component of exp(-i k (x cos b + y sin b)). The components of all
// blocks for a configuration add up to the plane wave.
waves::PhaseFunction DecomposedPhase(const SymmetryConfig &cfg, BlockLabel label, double k,
                                     double beta);

// Block whose solution carries forces with the given parity. Throws
// ParityError when the parity is not declared for a present plane.
BlockLabel ForceBlock(const SymmetryConfig &cfg, const ModeParity &parity);

// Time series of the scattered-potential Neumann data q = -n . grad(phi0)
// at body points for one block, on t_n = t_start + n dt, n = 0..num_samples-1,
// with t_start rounded to a multiple of dt. The
// incident elevation at the origin follows the impulse. The spectrum is
// synthesized on an FFT grid whose period is at least min_period and at
// least twice the sampled span, so energy before t = 0 wraps beyond the end.
struct ForcingRequest
{
  waves::Environment env;
  const waves::PseudoImpulse *impulse = nullptr;
  SymmetryConfig cfg;
  BlockLabel label = BlockLabel::Full;
  double beta = 0.0;
  double dt = 0.0;
  int num_samples = 0;
  double min_period = 0.0;
  double t_start = 0.0;
};

// Calls sink(first_point, block) with a (chunk x num_samples) series block
// for consecutive chunks of points.
void BodyForcing(const ForcingRequest &req, const Eigen::MatrixXd &points,
                 const Eigen::MatrixXd &normals,
                 const std::function<void(Eigen::Index, const Eigen::MatrixXd &)> &sink);

// Convenience wrapper returning the whole (points x num_samples) matrix.
Eigen::MatrixXd BodyForcingSeries(const ForcingRequest &req, const Eigen::MatrixXd &points,
                                  const Eigen::MatrixXd &normals);

// Inverse of the dt-scaled transform for a full FFT-ordered spectrum (bins
// m = 0..M-1). Throws SpectralInputError unless X[M-m] = conj(X[m]) to 1e-10
// of the largest magnitude.
Eigen::VectorXd RealSeriesFromSpectrum(const Eigen::VectorXcd &spectrum, double dt);

// Per requested force index j: the block results for the block matching the
// force parity, times the symmetry multiplier. Throws SchedulingError when
// that block is missing from `solved`.
using ForceSeries = std::vector<Complex>;
std::map<int, ForceSeries> RecombineForces(
    const SymmetryConfig &cfg, const std::map<BlockLabel, std::map<int, ForceSeries>> &solved,
    const std::map<int, ModeParity> &requested);

}  // namespace hydrosem::symmetry

#endif  // HYDROSEM_SYMMETRY_SYMMETRY_HPP
