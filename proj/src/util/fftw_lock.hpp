// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_UTIL_FFTW_LOCK_HPP
#define HYDROSEM_UTIL_FFTW_LOCK_HPP

#include <mutex>

namespace hydrosem::util
{

// FFTW planning and plan destruction are not thread safe; execution is.
std::mutex &FftwPlannerMutex();

}  // namespace hydrosem::util

#endif  // HYDROSEM_UTIL_FFTW_LOCK_HPP
