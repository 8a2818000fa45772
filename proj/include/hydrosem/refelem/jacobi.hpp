// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_REFELEM_JACOBI_HPP
#define HYDROSEM_REFELEM_JACOBI_HPP

#include <Eigen/Dense>

namespace hydrosem::refelem
{

// Orthonormal Jacobi polynomial P_n^(alpha,beta) on [-1,1] with weight
// (1-x)^alpha (1+x)^beta.
Eigen::VectorXd JacobiP(const Eigen::VectorXd &x, double alpha, double beta, int n);
Eigen::VectorXd GradJacobiP(const Eigen::VectorXd &x, double alpha, double beta, int n);

struct Rule1D
{
  Eigen::VectorXd x;
  Eigen::VectorXd w;
};

// n-point Gauss-Jacobi rule, exact to degree 2n-1 against the Jacobi weight.
Rule1D JacobiGQ(double alpha, double beta, int n);
// Gauss-Lobatto points for order N (N+1 points including the end points).
Eigen::VectorXd JacobiGL(double alpha, double beta, int order);

}  // namespace hydrosem::refelem

#endif  // HYDROSEM_REFELEM_JACOBI_HPP
