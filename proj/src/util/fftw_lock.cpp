// SPDX-License-Identifier: Apache-2.0

#include "util/fftw_lock.hpp"

namespace hydrosem::util
{

std::mutex &FftwPlannerMutex()
{
  static std::mutex m;
  return m;
}

}  // namespace hydrosem::util
