// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_ERROR_HPP
#define HYDROSEM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace hydrosem
{

// Root of every error raised by the library. The CLI maps ConfigError to exit
// code 2 and everything else to exit code 3.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error
{
public:
  ParseError(const std::string &msg, std::size_t line)
    : Error("line " + std::to_string(line) + ": " + msg), line_(line)
  {
  }
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class TaggingError : public Error
{
public:
  using Error::Error;
};

class TopologyError : public Error
{
public:
  using Error::Error;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

class ParameterError : public Error
{
public:
  using Error::Error;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class ParityError : public Error
{
public:
  using Error::Error;
};

class SpectralInputError : public Error
{
public:
  using Error::Error;
};

class SchedulingError : public Error
{
public:
  using Error::Error;
};

class StatisticsError : public Error
{
public:
  using Error::Error;
};

// Raised by the Fourier post-processing when the impulse spectrum is too small
// to divide by.
class DivisionGuardError : public Error
{
public:
  using Error::Error;
};

// Iterative solver failure. Carries the best iterate seen and the residual
// history so callers can inspect or retry.
class ConvergenceError : public Error
{
public:
  ConvergenceError(const std::string &msg, std::vector<double> best_iterate,
                   std::vector<double> residual_history)
    : Error(msg), best_iterate_(std::move(best_iterate)),
      residual_history_(std::move(residual_history))
  {
  }
  const std::vector<double> &best_iterate() const { return best_iterate_; }
  const std::vector<double> &residual_history() const { return residual_history_; }

private:
  std::vector<double> best_iterate_;
  std::vector<double> residual_history_;
};

// Aggregated configuration violations.
class ConfigError : public Error
{
public:
  explicit ConfigError(std::vector<std::string> violations)
    : Error(Join(violations)), violations_(std::move(violations))
  {
  }
  const std::vector<std::string> &violations() const { return violations_; }

private:
  static std::string Join(const std::vector<std::string> &v)
  {
    std::string out = "configuration invalid:";
    for (const auto &s : v)
    {
      out += "\n  - " + s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace hydrosem

#endif  // HYDROSEM_ERROR_HPP
