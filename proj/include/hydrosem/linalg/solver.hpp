// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_LINALG_SOLVER_HPP
#define HYDROSEM_LINALG_SOLVER_HPP

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace hydrosem::linalg
{

// Compressed sparse row storage with sorted column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Preconditioner
{
  None,
  Diagonal,
  IncompleteCholesky
};

Preconditioner PreconditionerFromName(const std::string &name);
std::string PreconditionerName(Preconditioner p);

struct SolverConfig
{
  double rel_tolerance = 1e-10;
  int max_iterations = 0;  // 0 selects 10*sqrt(N) + 200
  Preconditioner preconditioner = Preconditioner::IncompleteCholesky;
  // Project out constants (singular pure-Neumann systems).
  bool deflate_constants = false;
};

struct SolveReport
{
  int iterations = 0;
  double residual = 0.0;  // final ||Ax - b|| / ||b||
  std::vector<double> history;
};

// Throws ParameterError when rel_tolerance is outside (0, 1e-2].
void Validate(const SolverConfig &cfg);
int DefaultMaxIterations(Eigen::Index n);

// Preconditioned conjugate gradients for a symmetric positive definite
// matrix. The preconditioner is built once; Solve is const and reentrant.
class PcgSolver
{
public:
  PcgSolver(const SparseMatrix &a, SolverConfig cfg = {});
  ~PcgSolver();
  PcgSolver(PcgSolver &&) noexcept;
  PcgSolver &operator=(PcgSolver &&) noexcept;

  // x holds the warm start on entry (resized and zeroed when its size does
  // not match). Throws ConvergenceError with the best iterate on failure.
  SolveReport Solve(const Eigen::VectorXd &b, Eigen::VectorXd &x) const;

  const SparseMatrix &matrix() const { return *a_; }
  const SolverConfig &config() const { return cfg_; }

private:
  struct Impl;
  const SparseMatrix *a_;
  SolverConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// Dense LDL^T reference solve, for tests on small systems (N <= 2000).
Eigen::VectorXd DenseSolve(const SparseMatrix &a, const Eigen::VectorXd &b);

// Writes the matrix in matrix-market coordinate format.
void WriteMatrixMarket(const SparseMatrix &a, const std::string &path);

}  // namespace hydrosem::linalg

#endif  // HYDROSEM_LINALG_SOLVER_HPP
