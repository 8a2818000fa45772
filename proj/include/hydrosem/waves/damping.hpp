// SPDX-License-Identifier: Apache-2.0

#ifndef HYDROSEM_WAVES_DAMPING_HPP
#define HYDROSEM_WAVES_DAMPING_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hydrosem::waves
{

// Absorbing zone on the free surface. The coordinate d is x, y, the radius
// sqrt(x^2 + y^2), or max(|x|, |y|) ("box"). The profile is a smooth bump
// over [start, end], zero outside, peaking at the midpoint.
struct DampingZone
{
  enum class Axis
  {
    X,
    Y,
    Radial,
    Box
  };
  Axis axis = Axis::Radial;
  double start = 0.0;
  double end = 0.0;
  double peak = 2.0 * 3.14159265358979323846;

  double Coordinate(double x, double y) const;
  double Profile(double x, double y) const;
};

DampingZone::Axis AxisFromName(const std::string &name);
std::string AxisName(DampingZone::Axis a);

// Throws ParameterError for an empty or inverted zone, or one that does not
// intersect the free-surface bounding box [xmin, xmax] x [ymin, ymax].
void Validate(const DampingZone &zone, double xmin, double xmax, double ymin, double ymax);

// Sum of the zone profiles at each row of xy (N x 2). Used for both c_p and c_v.
Eigen::VectorXd DampingProfile(const std::vector<DampingZone> &zones, const Eigen::MatrixXd &xy);

}  // namespace hydrosem::waves

#endif  // HYDROSEM_WAVES_DAMPING_HPP
