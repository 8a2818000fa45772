// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_POST_NONDIM_HPP
#define HYDROSEM_POST_NONDIM_HPP

#include "hydrosem/post/coefficients.hpp"

namespace hydrosem::post
{

struct NondimSpec
{
  double length = 1.0;
  double rho = 1000.0;
  double g = 9.81;
};

// n(j, k): 3 when both are translations, 5 when both are rotations, else 4.
// Generalized modes (> 6) count as translations.
int CoefficientExponent(int j, int k);
// m(j): 2 for forces, 3 for moments.
int ForceExponent(int j);

// a / (rho L^n), b / (rho L^n w), X / (rho g L^m); omega becomes w sqrt(L/g).
HydroResult Nondimensionalize(const HydroResult &r, const NondimSpec &spec);

}  // namespace hydrosem::post

#endif  // HYDROSEM_POST_NONDIM_HPP
