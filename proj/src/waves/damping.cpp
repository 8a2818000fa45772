// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/waves/damping.hpp"

#include <algorithm>
#include <cmath>

#include <boost/algorithm/string/case_conv.hpp>
#include <fmt/format.h>

#include "hydrosem/error.hpp"

namespace hydrosem::waves
{

double DampingZone::Coordinate(double x, double y) const
{
  switch (axis)
  {
    case Axis::X:
      return x;
    case Axis::Y:
      return y;
    case Axis::Radial:
      return std::hypot(x, y);
    case Axis::Box:
      return std::max(std::abs(x), std::abs(y));
  }
  return 0.0;
}

double DampingZone::Profile(double x, double y) const
{
  const double xi = (Coordinate(x, y) - start) / (end - start);
  if (!(xi > 0.0 && xi < 1.0))
  {
    return 0.0;
  }
  const double u = 2.0 * xi - 1.0;
  return peak * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

DampingZone::Axis AxisFromName(const std::string &name)
{
  const std::string n = boost::algorithm::to_lower_copy(name);
  if (n == "x") return DampingZone::Axis::X;
  if (n == "y") return DampingZone::Axis::Y;
  if (n == "radial") return DampingZone::Axis::Radial;
  if (n == "box") return DampingZone::Axis::Box;
  throw ParameterError(fmt::format("unknown damping zone axis '{}'", name));
}

std::string AxisName(DampingZone::Axis a)
{
  switch (a)
  {
    case DampingZone::Axis::X:
      return "x";
    case DampingZone::Axis::Y:
      return "y";
    case DampingZone::Axis::Radial:
      return "radial";
    case DampingZone::Axis::Box:
      return "box";
  }
  return "?";
}

void Validate(const DampingZone &zone, double xmin, double xmax, double ymin, double ymax)
{
  if (!(zone.end > zone.start))
  {
    throw ParameterError(
        fmt::format("damping zone end ({}) must exceed start ({})", zone.end, zone.start));
  }
  if (!(zone.peak > 0.0))
  {
    throw ParameterError("damping zone peak must be positive");
  }
  // Range of the zone coordinate over the bounding box.
  double lo = 0.0, hi = 0.0;
  const double ax = std::max(std::abs(xmin), std::abs(xmax));
  const double ay = std::max(std::abs(ymin), std::abs(ymax));
  const double nx = (xmin <= 0.0 && xmax >= 0.0) ? 0.0 : std::min(std::abs(xmin), std::abs(xmax));
  const double ny = (ymin <= 0.0 && ymax >= 0.0) ? 0.0 : std::min(std::abs(ymin), std::abs(ymax));
  switch (zone.axis)
  {
    case DampingZone::Axis::X:
      lo = xmin, hi = xmax;
      break;
    case DampingZone::Axis::Y:
      lo = ymin, hi = ymax;
      break;
    case DampingZone::Axis::Radial:
      lo = std::hypot(nx, ny), hi = std::hypot(ax, ay);
      break;
    case DampingZone::Axis::Box:
      lo = std::max(nx, ny), hi = std::max(ax, ay);
      break;
  }
  if (zone.start >= hi || zone.end <= lo)
  {
    throw ParameterError(fmt::format("damping zone [{}, {}] ({}) lies outside the free surface",
                                     zone.start, zone.end, AxisName(zone.axis)));
  }
}

Eigen::VectorXd DampingProfile(const std::vector<DampingZone> &zones, const Eigen::MatrixXd &xy)
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(xy.rows());
  for (const auto &z : zones)
  {
    for (Eigen::Index i = 0; i < xy.rows(); ++i)
    {
      c(i) += z.Profile(xy(i, 0), xy(i, 1));
    }
  }
  return c;
}

}  // namespace hydrosem::waves
