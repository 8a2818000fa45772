// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_POST_IO_HPP
#define HYDROSEM_POST_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "hydrosem/post/coefficients.hpp"

namespace hydrosem::post
{

// Columns t, F_j...; 17 significant digits.
std::string TimeSeriesCsv(double t_start, double dt, const std::map<int, std::vector<double>> &forces);

// Columns omega, omega_bar, a_jk..., b_jk..., ReX_j..., ImX_j... (X = X_D
// where both parts exist, else whichever is present). omega_bar uses L.
std::string HydroCsv(const HydroResult &r, double length, double g);

// Columns omega, omega_bar, then Re/Im pairs of X_0, X_s and X_D per force.
std::string ExcitationCsv(const HydroResult &r, double length, double g);
// Rows j, k, a_inf.
std::string InfiniteFrequencyCsv(const HydroResult &r);
// One JSON object per frequency.
std::string HydroJsonLines(const HydroResult &r);

void WriteText(const std::string &path, const std::string &text);

}  // namespace hydrosem::post

#endif  // HYDROSEM_POST_IO_HPP
