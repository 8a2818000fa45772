// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/post/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "util/fftw_lock.hpp"

namespace hydrosem::post
{

std::vector<double> Fd4Derivative(const std::vector<double> &f, double dt)
{
  const std::size_t n = f.size();
  if (n < 5)
  {
    throw ParameterError(fmt::format("fourth-order differences need 5 samples, got {}", n));
  }
  if (!(dt > 0.0))
  {
    throw ParameterError("fourth-order differences need dt > 0");
  }
  const double s = 1.0 / (12.0 * dt);
  std::vector<double> d(n);
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) * s;
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) * s;
  for (std::size_t i = 2; i + 2 < n; ++i)
  {
    d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) * s;
  }
  d[n - 2] = -(-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]) * s;
  d[n - 1] = -(-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]) * s;
  return d;
}

Spectrum ComputeSpectrum(const std::vector<double> &f, double dt, double t_start,
                         const std::vector<double> &omega, const SpectrumOptions &opt)
{
  const std::size_t n = f.size();
  if (n < 1 || !(dt > 0.0))
  {
    throw ParameterError("spectrum needs samples and dt > 0");
  }
  if (!(opt.taper >= 0.0 && opt.taper <= 1.0))
  {
    throw ParameterError(fmt::format("taper fraction {} outside [0, 1]", opt.taper));
  }
  std::size_t m_fft = 2;
  while (m_fft < 8 * n)
  {
    m_fft *= 2;
  }
  const int m = static_cast<int>(m_fft);
  double *in = fftw_alloc_real(m_fft);
  fftw_complex *out = fftw_alloc_complex(m_fft / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(util::FftwPlannerMutex());
    plan = fftw_plan_dft_r2c_1d(m, in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + m_fft, 0.0);
  // Tukey taper over the leading and trailing taper/2 fractions.
  const double edge = 0.5 * opt.taper * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
  {
    double w = 1.0;
    const double from_end = std::min<double>(static_cast<double>(i), static_cast<double>(n - 1 - i));
    if (edge > 0.0 && from_end < edge)
    {
      w = 0.5 * (1.0 - std::cos(std::numbers::pi * from_end / edge));
    }
    in[i] = w * f[i];
  }
  fftw_execute(plan);
  std::vector<Complex> x(m_fft);
  for (int k = 0; k <= m / 2; ++k)
  {
    x[k] = Complex(out[k][0], out[k][1]);
  }
  for (int k = m / 2 + 1; k < m; ++k)
  {
    x[k] = std::conj(x[m - k]);
  }
  {
    std::lock_guard<std::mutex> lock(util::FftwPlannerMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  Spectrum s;
  double peak = 0.0;
  for (double v : f)
  {
    peak = std::max(peak, std::abs(v));
  }
  s.terminal_ratio = peak > 0.0 ? std::max(std::abs(f.front()), std::abs(f.back())) / peak : 0.0;
  s.decayed = s.terminal_ratio < opt.decay_tolerance;

  // Interpolation of the zero-padded DFT: with h = pi m / M - w dt / 2,
  //   S(w) = dt/M sum_m X_m exp(i (M-1) h) sin(M h) / sin(h).
  // Away from a bin, exp(i(M-1)h) sin(Mh) = -exp(-i pi m/M) exp(-i(M-1) w dt/2) sin(M w dt/2).
  std::vector<Complex> twiddle(m_fft);
  for (int k = 0; k < m; ++k)
  {
    twiddle[k] = std::polar(1.0, -std::numbers::pi * k / m);
  }
  s.values.resize(static_cast<Eigen::Index>(omega.size()));
  for (std::size_t i = 0; i < omega.size(); ++i)
  {
    const double half = 0.5 * omega[i] * dt;
    const Complex common = -std::polar(1.0, -(m - 1) * half) * std::sin(m * half);
    Complex acc = 0.0;
    for (int k = 0; k < m; ++k)
    {
      const double h = std::numbers::pi * k / m - half;
      const double sh = std::sin(h);
      if (std::abs(sh) < 1e-3)
      {
        const double ratio = std::abs(h) < 1e-300 ? m : std::sin(m * h) / sh;
        acc += x[k] * std::polar(ratio, (m - 1) * h);
      }
      else
      {
        acc += x[k] * twiddle[k] * (common / sh);
      }
    }
    s.values(static_cast<Eigen::Index>(i)) =
        acc * (dt / m) * std::polar(1.0, -omega[i] * t_start);
  }
  return s;
}

Spectrum ComputeSpectrum(const std::vector<double> &t, const std::vector<double> &f,
                         const std::vector<double> &omega, const SpectrumOptions &opt)
{
  if (t.size() != f.size() || t.size() < 2)
  {
    throw ParameterError("spectrum needs matching time and value arrays of length >= 2");
  }
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i)
  {
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-9 * dt)
    {
      throw ParameterError(fmt::format("non-uniform sampling at index {}", i));
    }
  }
  return ComputeSpectrum(f, dt, t.front(), omega, opt);
}

std::vector<double> OmegaGrid(const waves::FrequencyBand &band, int n)
{
  if (n < 2 || !(band.hi > band.lo) || band.lo < 0.0)
  {
    throw ParameterError("frequency grid needs n >= 2 and 0 <= lo < hi");
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    w[i] = band.lo > 0.0 ? band.lo + (band.hi - band.lo) * i / (n - 1) : band.hi * (i + 1) / n;
  }
  return w;
}

}  // namespace hydrosem::post
