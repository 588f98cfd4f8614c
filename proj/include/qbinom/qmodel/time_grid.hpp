#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "qbinom/error.hpp"

namespace qbinom::qmodel {

// Uniform partition of [0, T] into k slices of length lambda^2.
class TimeGrid {
 public:
  // k steps at lambda^-2 = lambda_sq_inv; the horizon is k / lambda_sq_inv.
  static TimeGrid from_steps(std::size_t k, double lambda_sq_inv) {
    if (!(lambda_sq_inv > 0.0) || !std::isfinite(lambda_sq_inv)) {
      throw DomainError("TimeGrid: lambda^-2 must be positive and finite");
    }
    return TimeGrid(k, 1.0 / std::sqrt(lambda_sq_inv));
  }

  // Horizon T split into k equal slices, lambda = sqrt(T / k).
  static TimeGrid from_horizon(double horizon, std::size_t k) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeGrid: horizon must be positive");
    if (k == 0) throw DomainError("TimeGrid: k must be at least 1");
    return TimeGrid(k, std::sqrt(horizon / static_cast<double>(k)));
  }

  // Horizon T at lambda^-2 = lambda_sq_inv; k = round(T * lambda_sq_inv).
  static TimeGrid from_rate(double horizon, double lambda_sq_inv) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeGrid: horizon must be positive");
    const double steps = std::round(horizon * lambda_sq_inv);
    if (steps < 1.0) throw DomainError("TimeGrid: horizon shorter than one time slice");
    return from_steps(static_cast<std::size_t>(steps), lambda_sq_inv);
  }

  std::size_t k() const { return k_; }
  double lambda() const { return lambda_; }
  double dt() const { return lambda_ * lambda_; }
  double horizon() const { return dt() * static_cast<double>(k_); }
  double time(std::size_t l) const { return dt() * static_cast<double>(l); }

  TimeGrid with_steps(std::size_t k) const { return TimeGrid(k, lambda_); }

 private:
  TimeGrid(std::size_t k, double lambda) : k_(k), lambda_(lambda) {
    if (k_ == 0) throw DomainError("TimeGrid: k must be at least 1");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw DomainError("TimeGrid: lambda must be positive");
  }

  std::size_t k_;
  double lambda_;
};

}  // namespace qbinom::qmodel
