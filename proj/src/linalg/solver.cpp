// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/linalg/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <fmt/format.h>
#include <unsupported/Eigen/SparseExtra>

#include "hydrosem/error.hpp"

namespace hydrosem::linalg
{

namespace
{

std::vector<double> ToStd(const Eigen::VectorXd &v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Preconditioner PreconditionerFromName(const std::string &name)
{
  if (name == "none")
  {
    return Preconditioner::None;
  }
  if (name == "diagonal")
  {
    return Preconditioner::Diagonal;
  }
  if (name == "incomplete-factorization" || name == "ic")
  {
    return Preconditioner::IncompleteCholesky;
  }
  throw ParameterError(fmt::format("unknown preconditioner '{}'", name));
}

std::string PreconditionerName(Preconditioner p)
{
  switch (p)
  {
  case Preconditioner::None:
    return "none";
  case Preconditioner::Diagonal:
    return "diagonal";
  case Preconditioner::IncompleteCholesky:
    return "incomplete-factorization";
  }
  return "?";
}

void Validate(const SolverConfig &cfg)
{
  if (!(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance <= 1e-2))
  {
    throw ParameterError(
        fmt::format("solver rel_tolerance {} outside (0, 1e-2]", cfg.rel_tolerance));
  }
  if (cfg.max_iterations < 0)
  {
    throw ParameterError("solver max_iterations must be non-negative");
  }
}

int DefaultMaxIterations(Eigen::Index n)
{
  return static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 200;
}

struct PcgSolver::Impl
{
  Eigen::VectorXd inv_diag;
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic;
  Eigen::SparseMatrix<double> col_major;
};

PcgSolver::PcgSolver(const SparseMatrix &a, SolverConfig cfg)
    : a_(&a), cfg_(cfg), impl_(std::make_unique<Impl>())
{
  Validate(cfg_);
  if (a.rows() != a.cols())
  {
    throw ParameterError("PCG needs a square matrix");
  }
  if (cfg_.max_iterations == 0)
  {
    cfg_.max_iterations = DefaultMaxIterations(a.rows());
  }
  switch (cfg_.preconditioner)
  {
  case Preconditioner::None:
    break;
  case Preconditioner::Diagonal:
  {
    impl_->inv_diag = a.diagonal();
    for (Eigen::Index i = 0; i < impl_->inv_diag.size(); ++i)
    {
      const double d = impl_->inv_diag(i);
      impl_->inv_diag(i) = d > 0.0 ? 1.0 / d : 1.0;
    }
    break;
  }
  case Preconditioner::IncompleteCholesky:
  {
    // Eigen's IC(0) retries with a growing diagonal shift on breakdown.
    impl_->col_major = a;
    impl_->ic.compute(impl_->col_major);
    if (impl_->ic.info() != Eigen::Success)
    {
      throw ConvergenceError("incomplete Cholesky factorization failed", std::vector<double>{}, {});
    }
    break;
  }
  }
}

PcgSolver::~PcgSolver() = default;
PcgSolver::PcgSolver(PcgSolver &&) noexcept = default;
PcgSolver &PcgSolver::operator=(PcgSolver &&) noexcept = default;

SolveReport PcgSolver::Solve(const Eigen::VectorXd &b_in, Eigen::VectorXd &x) const
{
  const SparseMatrix &a = *a_;
  const Eigen::Index n = a.rows();
  if (b_in.size() != n)
  {
    throw ParameterError(fmt::format("rhs size {} does not match matrix size {}", b_in.size(), n));
  }
  if (x.size() != n)
  {
    x = Eigen::VectorXd::Zero(n);
  }
  auto deflate = [&](Eigen::VectorXd &v) {
    if (cfg_.deflate_constants)
    {
      v.array() -= v.mean();
    }
  };
  Eigen::VectorXd b = b_in;
  deflate(b);
  auto precondition = [&](const Eigen::VectorXd &r) -> Eigen::VectorXd {
    Eigen::VectorXd z;
    switch (cfg_.preconditioner)
    {
    case Preconditioner::None:
      z = r;
      break;
    case Preconditioner::Diagonal:
      z = impl_->inv_diag.cwiseProduct(r);
      break;
    case Preconditioner::IncompleteCholesky:
      z = impl_->ic.solve(r);
      break;
    }
    deflate(z);
    return z;
  };

  SolveReport report;
  const double bnorm = b.norm();
  if (bnorm == 0.0)
  {
    x.setZero();
    report.history.push_back(0.0);
    return report;
  }
  const double target = cfg_.rel_tolerance * bnorm;
  Eigen::VectorXd r = b - a * x;
  deflate(r);
  double rnorm = r.norm();
  report.history.push_back(rnorm / bnorm);
  Eigen::VectorXd best = x;
  double best_norm = rnorm;
  if (rnorm <= target)
  {
    report.residual = rnorm / bnorm;
    return report;
  }
  Eigen::VectorXd z = precondition(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  Eigen::VectorXd ap(n);
  for (int it = 1; it <= cfg_.max_iterations; ++it)
  {
    ap.noalias() = a * p;
    const double pap = p.dot(ap);
    if (!(pap > 0.0) || !std::isfinite(pap))
    {
      throw ConvergenceError(fmt::format("PCG breakdown at iteration {} (p'Ap = {:.3e})", it, pap),
                             ToStd(best), report.history);
    }
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    rnorm = r.norm();
    report.history.push_back(rnorm / bnorm);
    report.iterations = it;
    if (rnorm < best_norm)
    {
      best_norm = rnorm;
      best = x;
    }
    if (rnorm <= target)
    {
      deflate(x);
      report.residual = rnorm / bnorm;
      return report;
    }
    z = precondition(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw ConvergenceError(fmt::format("PCG did not reach {:.1e} in {} iterations (residual {:.3e})",
                                     cfg_.rel_tolerance, cfg_.max_iterations, best_norm / bnorm),
                         ToStd(best), report.history);
}

Eigen::VectorXd DenseSolve(const SparseMatrix &a, const Eigen::VectorXd &b)
{
  if (a.rows() > 2000)
  {
    throw ParameterError("dense reference solve limited to N <= 2000");
  }
  const Eigen::MatrixXd dense(a);
  return dense.ldlt().solve(b);
}

void WriteMatrixMarket(const SparseMatrix &a, const std::string &path)
{
  const Eigen::SparseMatrix<double> col_major(a);
  if (!Eigen::saveMarket(col_major, path))
  {
    throw Error(fmt::format("cannot write matrix-market file '{}'", path));
  }
}

}  // namespace hydrosem::linalg
