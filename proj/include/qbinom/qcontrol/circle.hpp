#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbinom/error.hpp"
#include "qbinom/qmodel/density.hpp"

namespace qbinom::qcontrol {

using qlin::AtomOperator;
using qlin::cplx;
using qmodel::DensityMatrix;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kCircleTolerance = 1e-9;

// Real pure state with z = cos(theta), x = sin(theta).
inline DensityMatrix circle_to_density(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return DensityMatrix::from({0.5 * (1.0 + c), 0.5 * s, 0.5 * s, 0.5 * (1.0 - c)});
}

// Maps any angle into [0, 2 pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

// Distance of rho from the circle: max of |z^2 + x^2 - 1| and |Im rho_01|.
inline double circle_defect(const DensityMatrix& rho) {
  const double z = rho.z();
  const double x = rho.x();
  return std::max(std::abs(z * z + x * x - 1.0), std::abs(rho(0, 1).imag()));
}

// theta = atan2(x, z) in [0, 2 pi) without checking that rho lies on the circle.
inline double circle_angle(const DensityMatrix& rho) { return wrap_angle(std::atan2(rho.x(), rho.z())); }

inline double density_to_circle(const DensityMatrix& rho, double tol = kCircleTolerance) {
  const double defect = circle_defect(rho);
  if (defect > tol) throw NotOnCircleError("density_to_circle: state is " + std::to_string(defect) + " off the circle");
  return circle_angle(rho);
}

// Nearest point of the circle in the angle sense.
inline DensityMatrix reproject(const DensityMatrix& rho) { return circle_to_density(circle_angle(rho)); }

}  // namespace qbinom::qcontrol
