#pragma once

#include <array>
#include <cmath>
#include <memory>

#include "qbinom/error.hpp"
#include "qbinom/qcontrol/bellman.hpp"
#include "qbinom/qcontrol/circle.hpp"
#include "qbinom/qcontrol/cost.hpp"
#include "qbinom/qfilter/parallel.hpp"
#include "qbinom/qfilter/trajectory.hpp"

namespace qbinom::qcontrol {

using qfilter::SeparatedStrategy;

inline SeparatedStrategy zero_strategy() {
  return [](std::size_t, const DensityMatrix&) { return 0.0; };
}

inline SeparatedStrategy constant_strategy(double u) {
  return [u](std::size_t, const DensityMatrix&) { return u; };
}

// u_l = g*_{l-1}(theta(rho_{l-1})) read at the nearest grid angle.
inline SeparatedStrategy dp_strategy(std::shared_ptr<const ValueFunctionTable> table) {
  if (!table) throw DomainError("dp_strategy: missing value table");
  return [table](std::size_t l, const DensityMatrix& rho) {
    if (l == 0 || l > table->k()) throw DomainError("dp_strategy: step outside the tabulated horizon");
    return table->control_at(l - 1, circle_angle(rho));
  };
}

struct CostEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t paths = 0;
};

// Per-path cost sum_l lambda^2 Tr[rho_{l-1} Q(u_l)] + Tr[rho_k K], averaged over homodyne paths.
inline CostEstimate evaluate_strategy(const Plant& plant, const SeparatedStrategy& strategy, const CostSpec& cost,
                                      const DensityMatrix& rho0, std::size_t paths, std::uint64_t seed,
                                      unsigned workers = 1) {
  if (paths == 0) throw DomainError("evaluate_strategy: at least one path is required");
  cost.validate();
  const double l2 = plant.grid().dt();
  using Moments = std::array<double, 2>;
  const Moments sums = qfilter::reduce_paths(
      paths, workers, Moments{0.0, 0.0},
      [&](std::size_t p, Moments& acc) {
        DensityMatrix prev = rho0;
        double total = 0.0;
        qfilter::simulate_path(plant, strategy, qmodel::Detection::homodyne, rho0, seed, p,
                               [&](const qfilter::TrajectoryStep& s) {
                                 total += l2 * cost.running(prev, s.u);
                                 prev = s.rho;
                               });
        total += cost.terminal(prev);
        acc[0] += total;
        acc[1] += total * total;
      },
      [](Moments a, const Moments& b) { return Moments{a[0] + b[0], a[1] + b[1]}; });
  const double n = static_cast<double>(paths);
  const double mean = sums[0] / n;
  const double var = paths > 1 ? std::max(0.0, (sums[1] - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), paths};
}

// Largest circle defect of any filter state along closed-loop homodyne paths started on the
// circle. The filter is never reprojected, so this bounds every single-step correction.
inline double circle_invariance_check(const Plant& plant, const SeparatedStrategy& strategy, double theta0,
                                      std::size_t paths, std::uint64_t seed, unsigned workers = 1) {
  const DensityMatrix rho0 = circle_to_density(theta0);
  return qfilter::reduce_paths(
      paths, workers, 0.0,
      [&](std::size_t p, double& acc) {
        qfilter::simulate_path(plant, strategy, qmodel::Detection::homodyne, rho0, seed, p,
                               [&](const qfilter::TrajectoryStep& s) { acc = std::max(acc, circle_defect(s.rho)); });
      },
      [](double a, double b) { return std::max(a, b); });
}

}  // namespace qbinom::qcontrol
