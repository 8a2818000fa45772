// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/refelem/jacobi.hpp"

#include <cmath>

#include "hydrosem/error.hpp"

namespace hydrosem::refelem
{

Eigen::VectorXd JacobiP(const Eigen::VectorXd &x, double alpha, double beta, int n)
{
  const Eigen::Index m = x.size();
  Eigen::MatrixXd pl(n + 1, m);
  const double g0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                    std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                    std::tgamma(alpha + beta + 1.0);
  pl.row(0).setConstant(1.0 / std::sqrt(g0));
  if (n == 0)
  {
    return pl.row(0).transpose();
  }
  const double g1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * g0;
  pl.row(1) = (((alpha + beta + 2.0) * x.array() / 2.0 + (alpha - beta) / 2.0) / std::sqrt(g1))
                  .transpose();
  if (n == 1)
  {
    return pl.row(1).transpose();
  }
  double aold = 2.0 / (2.0 + alpha + beta) *
                std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
  for (int i = 1; i < n; ++i)
  {
    const double h1 = 2.0 * i + alpha + beta;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                                  (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    pl.row(i + 1) = (1.0 / anew) *
                    (-aold * pl.row(i - 1).array() +
                     (x.transpose().array() - bnew) * pl.row(i).array())
                        .matrix();
    aold = anew;
  }
  return pl.row(n).transpose();
}

Eigen::VectorXd GradJacobiP(const Eigen::VectorXd &x, double alpha, double beta, int n)
{
  if (n == 0)
  {
    return Eigen::VectorXd::Zero(x.size());
  }
  return std::sqrt(n * (n + alpha + beta + 1.0)) * JacobiP(x, alpha + 1.0, beta + 1.0, n - 1);
}

Rule1D JacobiGQ(double alpha, double beta, int n)
{
  if (n < 1)
  {
    throw ParameterError("Gauss-Jacobi rule needs at least one point");
  }
  Rule1D rule;
  if (n == 1)
  {
    rule.x = Eigen::VectorXd::Constant(1, -(alpha - beta) / (alpha + beta + 2.0));
    rule.w = Eigen::VectorXd::Constant(
        1, std::pow(2.0, alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
               std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0));
    return rule;
  }
  // Golub-Welsch.
  const int N = n - 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i <= N; ++i)
  {
    const double h1 = 2.0 * i + alpha + beta;
    J(i, i) = h1 > 1e-14 ? -(alpha * alpha - beta * beta) / (h1 + 2.0) / h1 : 0.0;
    if (h1 <= 1e-14)
    {
      J(i, i) = -(alpha - beta) / (alpha + beta + 2.0);
    }
    if (i < N)
    {
      const double k = i + 1.0;
      const double off = 2.0 / (h1 + 2.0) *
                         std::sqrt(k * (k + alpha + beta) * (k + alpha) * (k + beta) /
                                   (h1 + 1.0) / (h1 + 3.0));
      J(i, i + 1) = off;
      J(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  rule.x = es.eigenvalues();
  const double mu0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                     std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(alpha + beta + 1.0);
  rule.w = es.eigenvectors().row(0).array().square().transpose() * mu0;
  return rule;
}

Eigen::VectorXd JacobiGL(double alpha, double beta, int order)
{
  Eigen::VectorXd x = Eigen::VectorXd::Zero(order + 1);
  x(0) = -1.0;
  x(order) = 1.0;
  if (order >= 2)
  {
    const Rule1D inner = JacobiGQ(alpha + 1.0, beta + 1.0, order - 1);
    x.segment(1, order - 1) = inner.x;
  }
  return x;
}

}  // namespace hydrosem::refelem
