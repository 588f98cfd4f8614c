#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qfilter/filter.hpp"
#include "qbinom/qfilter/parallel.hpp"
#include "qbinom/qfilter/rng.hpp"
#include "qbinom/qmodel/model.hpp"

namespace qbinom::qfilter {

using qmodel::Plant;

// Separated feedback u_l = g(l, rho_{l-1}). An empty function means u = 0.
using SeparatedStrategy = std::function<double(std::size_t l, const DensityMatrix& rho_prev)>;

struct TrajectoryStep {
  std::size_t l = 0;
  double t = 0.0;
  std::uint8_t outcome = 0;
  double dy = 0.0;
  double u = 0.0;
  double innovation = 0.0;
  double p_plus = 0.0;
  DensityMatrix rho;
};

struct Trajectory {
  std::string model;
  Detection detection = Detection::homodyne;
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  DensityMatrix rho0;
  std::vector<TrajectoryStep> steps;
};

namespace detail {

// Reuses the last evaluated coefficients while the control value repeats.
class CoefficientCache {
 public:
  explicit CoefficientCache(const Plant& plant) : plant_(plant) {}
  const ModelCoefficients& at(double u) {
    if (!cached_ || (plant_.is_controlled() && u != last_u_)) {
      cached_ = plant_.coefficients(u);
      last_u_ = u;
    }
    return *cached_;
  }

 private:
  const Plant& plant_;
  std::optional<ModelCoefficients> cached_;
  double last_u_ = 0.0;
};

}  // namespace detail

// Runs one sampled path and hands every step to `observe(const TrajectoryStep&)`.
template <class Observer>
void simulate_path(const Plant& plant, const SeparatedStrategy& strategy, Detection d, const DensityMatrix& rho0,
                   std::uint64_t seed, std::uint64_t path, Observer&& observe) {
  const qmodel::TimeGrid& grid = plant.grid();
  PathRng rng(seed, path);
  detail::CoefficientCache cache(plant);
  DensityMatrix rho = rho0;
  TrajectoryStep step;
  for (std::size_t l = 1; l <= grid.k(); ++l) {
    const double u = strategy ? strategy(l, rho) : 0.0;
    const ModelCoefficients& c = cache.at(u);
    const double p = observation_probability(rho, c, d);
    const double xi = rng.uniform();
    const std::uint8_t outcome = xi < p ? 1 : 0;
    const double dy = qmodel::outcome_value(outcome, d, c.lambda);
    step.l = l;
    step.t = grid.time(l);
    step.outcome = outcome;
    step.dy = dy;
    step.u = u;
    step.p_plus = p;
    step.innovation = innovation(rho, dy, c, d);
    rho = d == Detection::homodyne ? nonlinear_step_homodyne(rho, dy, c) : nonlinear_step_counting(rho, dy, c);
    step.rho = rho;
    observe(static_cast<const TrajectoryStep&>(step));
  }
}

inline Trajectory sample_trajectory(const Plant& plant, const SeparatedStrategy& strategy, Detection d,
                                    const DensityMatrix& rho0, std::uint64_t seed, std::uint64_t path = 0) {
  Trajectory tr{plant.name(), d, seed, path, rho0, {}};
  tr.steps.reserve(plant.grid().k());
  simulate_path(plant, strategy, d, rho0, seed, path, [&tr](const TrajectoryStep& s) { tr.steps.push_back(s); });
  return tr;
}

inline std::vector<Trajectory> sample_trajectories(const Plant& plant, const SeparatedStrategy& strategy, Detection d,
                                                   const DensityMatrix& rho0, std::uint64_t seed, std::size_t paths,
                                                   unsigned workers = 1) {
  std::vector<Trajectory> out(paths);
  parallel_for(paths, workers,
               [&](std::size_t p) { out[p] = sample_trajectory(plant, strategy, d, rho0, seed, p); });
  return out;
}

// Refilters a stored (outcome, u) stream from rho0.
inline std::vector<DensityMatrix> replay(const Plant& plant, const Trajectory& tr) {
  std::vector<DensityMatrix> out;
  out.reserve(tr.steps.size());
  DensityMatrix rho = tr.rho0;
  for (const TrajectoryStep& s : tr.steps) {
    rho = nonlinear_step(rho, s.outcome, plant.coefficients(s.u), tr.detection);
    out.push_back(rho);
  }
  return out;
}

// z_l = Tr[tau_l sigma_z] for l = 0..k under the master equation.
inline std::vector<double> master_curve_z(const ModelCoefficients& c, const DensityMatrix& rho0, std::size_t k) {
  std::vector<double> z(k + 1);
  DensityMatrix tau = rho0;
  z[0] = tau.z();
  for (std::size_t l = 1; l <= k; ++l) {
    tau = qmodel::master_step(tau, c);
    z[l] = tau.z();
  }
  return z;
}

// Path-averaged f(step) for l = 1..k (index l - 1), reduced deterministically.
template <class F>
std::vector<double> path_means(const Plant& plant, const SeparatedStrategy& strategy, Detection d,
                               const DensityMatrix& rho0, std::size_t paths, std::uint64_t seed, unsigned workers,
                               F f) {
  const std::size_t k = plant.grid().k();
  std::vector<double> sums = reduce_paths(
      paths, workers, std::vector<double>(k, 0.0),
      [&](std::size_t p, std::vector<double>& acc) {
        simulate_path(plant, strategy, d, rho0, seed, p, [&](const TrajectoryStep& s) { acc[s.l - 1] += f(s); });
      },
      [](std::vector<double> a, const std::vector<double>& b) { return add_vectors(std::move(a), b); });
  for (double& v : sums) v /= static_cast<double>(paths);
  return sums;
}

// max_l |mean over paths of Tr[rho_l sigma_z] - Tr[tau_l sigma_z]| for an uncontrolled plant.
inline double empirical_mean_check(const Plant& plant, Detection d, const DensityMatrix& rho0, std::size_t paths,
                                   std::uint64_t seed, unsigned workers = 1) {
  if (paths == 0) throw DomainError("empirical_mean_check: at least one path is required");
  const std::vector<double> mean =
      path_means(plant, {}, d, rho0, paths, seed, workers, [](const TrajectoryStep& s) { return s.rho.z(); });
  const std::vector<double> master = master_curve_z(plant.coefficients(0.0), rho0, plant.grid().k());
  double worst = 0.0;
  for (std::size_t l = 1; l <= plant.grid().k(); ++l) worst = std::max(worst, std::abs(mean[l - 1] - master[l]));
  return worst;
}

}  // namespace qbinom::qfilter
