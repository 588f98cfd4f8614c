#pragma once

#include <cmath>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qcontrol/circle.hpp"
#include "qbinom/qcontrol/controlled_model.hpp"
#include "qbinom/qfilter/filter.hpp"
#include "qbinom/qfilter/trajectory.hpp"

namespace qbinom::qcontrol {

// Root function -a sqrt((2 - d) d) + b (1 - d) with a = sin(2 lambda w)/(lambda w),
// b = 2 sin^2(lambda w) / w^2 and w = w(1).
inline double lyapunov_root_function(double delta, double lambda) {
  const double w = control_w(1.0, lambda);
  const double a = std::sin(2.0 * lambda * w) / (lambda * w);
  const double s = std::sin(lambda * w);
  const double b = 2.0 * s * s / (w * w);
  return -a * std::sqrt((2.0 - delta) * delta) + b * (1.0 - delta);
}

struct LyapunovThreshold {
  double delta = 0.0;
  double residual = 0.0;
};

// Bisection on (0, 1) down to adjacent doubles.
inline LyapunovThreshold lyapunov_delta(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lyapunov_delta: lambda must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  double f_lo = lyapunov_root_function(lo, lambda);
  double f_hi = lyapunov_root_function(hi, lambda);
  if (!(f_lo > 0.0 && f_hi < 0.0)) throw NumericalError("lyapunov_delta: root is not bracketed");
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = lyapunov_root_function(mid, lambda);
    if (f_mid == 0.0) return {mid, 0.0};
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? LyapunovThreshold{lo, f_lo} : LyapunovThreshold{hi, f_hi};
}

inline LyapunovThreshold lyapunov_delta(const TimeGrid& grid) { return lyapunov_delta(grid.lambda()); }

// 0 inside z >= 1 - delta, otherwise -1 for x < 0 and +1 for x >= 0.
inline double lyapunov_feedback(const DensityMatrix& rho, double delta) {
  if (rho.z() >= 1.0 - delta) return 0.0;
  return rho.x() < 0.0 ? -1.0 : 1.0;
}

inline qfilter::SeparatedStrategy lyapunov_strategy(double delta) {
  return [delta](std::size_t, const DensityMatrix& rho) { return lyapunov_feedback(rho, delta); };
}

// Closed-form E[V(rho') - V(rho)] for V = 1 - z on the circle under the Lyapunov feedback.
inline double lyapunov_drift(double theta, double delta, const TimeGrid& grid) {
  const double f = lyapunov_feedback(circle_to_density(theta), delta);
  if (f == 0.0) return 0.0;
  const double lam = grid.lambda();
  const double w = control_w(f, lam);
  const double s = std::sin(lam * w);
  const double a = std::sin(2.0 * lam * w) / (lam * w);
  return (-a * f * std::sin(theta) + 2.0 * f * f * s * s / (w * w) * std::cos(theta)) * lam * lam;
}

// Two-outcome expectation of V(Gamma(rho, u, dy)) - V(rho) for V(rho) = value(rho).
template <class Value>
double one_step_drift(const Plant& plant, const DensityMatrix& rho, double u, Value value) {
  const ModelCoefficients c = plant.coefficients(u);
  const double p = qfilter::observation_probability(rho, c, qmodel::Detection::homodyne);
  const double lam = c.lambda;
  const double v0 = value(rho);
  double drift = 0.0;
  if (p > 0.0) drift += p * (value(qfilter::nonlinear_step_homodyne(rho, lam, c)) - v0);
  if (p < 1.0) drift += (1.0 - p) * (value(qfilter::nonlinear_step_homodyne(rho, -lam, c)) - v0);
  return drift;
}

inline double lyapunov_drift_brute(const Plant& plant, double theta, double delta) {
  const DensityMatrix rho = circle_to_density(theta);
  return one_step_drift(plant, rho, lyapunov_feedback(rho, delta), [](const DensityMatrix& r) { return 1.0 - r.z(); });
}

struct LyapunovDriftReport {
  double max_drift = -std::numeric_limits<double>::infinity();  // max closed-form drift
  double max_mismatch = 0.0;                                    // max |closed form - brute force|
};

inline LyapunovDriftReport lyapunov_drift_grid(const Plant& plant, double delta, std::size_t theta_points) {
  LyapunovDriftReport r;
  for (std::size_t i = 0; i < theta_points; ++i) {
    const double theta = kTwoPi * static_cast<double>(i) / static_cast<double>(theta_points);
    const double closed = lyapunov_drift(theta, delta, plant.grid());
    r.max_drift = std::max(r.max_drift, closed);
    r.max_mismatch = std::max(r.max_mismatch, std::abs(closed - lyapunov_drift_brute(plant, theta, delta)));
  }
  return r;
}

// Closed-form drift of V = 1 - z^2 for the uncontrolled dispersive filter.
inline double uncontrolled_drift(double z, const TimeGrid& grid) {
  if (!(z >= -1.0 && z <= 1.0)) throw DomainError("uncontrolled_drift: z must lie in [-1, 1]");
  const double lam = grid.lambda();
  const double s2 = std::pow(std::sin(2.0 * lam), 2);
  const double c2 = std::pow(std::cos(2.0 * lam), 2);
  const double v = 1.0 - z * z;
  return -(s2 / (lam * lam)) * v * v / (c2 + s2 * v) * lam * lam;
}

inline double uncontrolled_drift_brute(const Plant& plant, double z) {
  const DensityMatrix rho = DensityMatrix::from({0.5 * (1.0 + z), 0.0, 0.0, 0.5 * (1.0 - z)});
  return one_step_drift(plant, rho, 0.0, [](const DensityMatrix& r) { return 1.0 - r.z() * r.z(); });
}

}  // namespace qbinom::qcontrol
