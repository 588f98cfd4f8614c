#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qcontrol/circle.hpp"
#include "qbinom/qcontrol/controlled_model.hpp"
#include "qbinom/qcontrol/cost.hpp"
#include "qbinom/qfilter/filter.hpp"
#include "qbinom/qfilter/parallel.hpp"

namespace qbinom::qcontrol {

// One homodyne step from grid angle theta_i under control u_j. Successor angles are
// stored as periodic linear-interpolation stencils (index, weight of index + 1).
struct Transition {
  double p_plus = 0.0;
  std::uint32_t i_plus = 0;
  std::uint32_t i_minus = 0;
  float w_plus = 0.0F;
  float w_minus = 0.0F;
};

struct InterpolationStencil {
  std::uint32_t index = 0;
  double weight = 0.0;
};

inline InterpolationStencil periodic_stencil(double theta, std::size_t n) {
  const double s = wrap_angle(theta) / kTwoPi * static_cast<double>(n);
  double base = std::floor(s);
  double w = s - base;
  if (base >= static_cast<double>(n)) {
    base = 0.0;
    w = 0.0;
  }
  return {static_cast<std::uint32_t>(base), w};
}

class TransitionTable {
 public:
  TransitionTable(const Plant& plant, std::vector<double> controls, std::size_t theta_points, unsigned workers = 1)
      : controls_(std::move(controls)), n_(theta_points), lambda_(plant.grid().lambda()), k_(plant.grid().k()) {
    if (n_ < 4) throw DomainError("TransitionTable: at least 4 theta points are required");
    if (n_ > std::numeric_limits<std::uint32_t>::max() - 1) throw DomainError("TransitionTable: theta grid too large");
    if (controls_.empty()) throw DomainError("TransitionTable: empty control grid");
    const std::size_t m = controls_.size();
    std::vector<ModelCoefficients> coeffs;
    coeffs.reserve(m);
    for (double u : controls_) coeffs.push_back(plant.coefficients(u));
    entries_.resize(n_ * m);
    std::vector<double> defects(n_, 0.0);
    qfilter::parallel_for(n_, workers, [&](std::size_t i) {
      const DensityMatrix rho = circle_to_density(theta(i));
      double defect = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const ModelCoefficients& c = coeffs[j];
        Transition& t = entries_[i * m + j];
        t.p_plus = qfilter::observation_probability(rho, c, qmodel::Detection::homodyne);
        const DensityMatrix up = qfilter::nonlinear_step_homodyne(rho, lambda_, c);
        const DensityMatrix down = qfilter::nonlinear_step_homodyne(rho, -lambda_, c);
        defect = std::max({defect, qcontrol::circle_defect(up), qcontrol::circle_defect(down)});
        const InterpolationStencil sp = periodic_stencil(circle_angle(up), n_);
        const InterpolationStencil sm = periodic_stencil(circle_angle(down), n_);
        t.i_plus = sp.index;
        t.w_plus = static_cast<float>(sp.weight);
        t.i_minus = sm.index;
        t.w_minus = static_cast<float>(sm.weight);
      }
      defects[i] = defect;
    });
    circle_defect_ = *std::max_element(defects.begin(), defects.end());
  }

  std::size_t theta_points() const { return n_; }
  std::size_t k() const { return k_; }
  double lambda() const { return lambda_; }
  const std::vector<double>& controls() const { return controls_; }
  double theta(std::size_t i) const { return kTwoPi * static_cast<double>(i) / static_cast<double>(n_); }
  const Transition& at(std::size_t i, std::size_t j) const { return entries_[i * controls_.size() + j]; }
  // Largest distance from the circle of any successor state before reprojection.
  double circle_defect() const { return circle_defect_; }

 private:
  std::vector<double> controls_;
  std::size_t n_;
  double lambda_;
  std::size_t k_;
  std::vector<Transition> entries_;
  double circle_defect_ = 0.0;
};

// V_l(theta_i) for l = 0..k and the minimizing control index g*_l(theta_i) for l = 0..k-1.
class ValueFunctionTable {
 public:
  ValueFunctionTable(std::size_t theta_points, std::size_t k, std::vector<double> controls)
      : n_(theta_points), k_(k), controls_(std::move(controls)), v_((k + 1) * theta_points), g_(k * theta_points) {}

  std::size_t theta_points() const { return n_; }
  std::size_t k() const { return k_; }
  const std::vector<double>& controls() const { return controls_; }
  double theta(std::size_t i) const { return kTwoPi * static_cast<double>(i) / static_cast<double>(n_); }

  double value(std::size_t l, std::size_t i) const { return v_[l * n_ + i]; }
  std::uint16_t control_index(std::size_t l, std::size_t i) const { return g_[l * n_ + i]; }
  double control(std::size_t l, std::size_t i) const { return controls_[control_index(l, i)]; }

  double value_at(std::size_t l, double theta) const {
    const InterpolationStencil s = periodic_stencil(theta, n_);
    const std::size_t next = s.index + 1 == n_ ? 0 : s.index + 1;
    return value(l, s.index) + s.weight * (value(l, next) - value(l, s.index));
  }

  std::size_t nearest(double theta) const {
    const std::size_t i = static_cast<std::size_t>(std::llround(wrap_angle(theta) / kTwoPi * static_cast<double>(n_)));
    return i == n_ ? 0 : i;
  }

  // Control on the nearest grid angle.
  double control_at(std::size_t l, double theta) const { return control(l, nearest(theta)); }

  double* slice(std::size_t l) { return v_.data() + l * n_; }
  std::uint16_t* control_slice(std::size_t l) { return g_.data() + l * n_; }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<double> controls_;
  std::vector<double> v_;
  std::vector<std::uint16_t> g_;
};

// Backward recursion over the horizon of the transition table. Ties go to the first
// control in grid order.
inline ValueFunctionTable bellman_sweep(const TransitionTable& table, const CostSpec& cost, unsigned workers = 1) {
  cost.validate();
  const std::size_t n = table.theta_points();
  const std::size_t k = table.k();
  const std::size_t m = table.controls().size();
  if (m > std::numeric_limits<std::uint16_t>::max()) throw DomainError("bellman_sweep: too many control points");
  const double l2 = table.lambda() * table.lambda();

  std::vector<double> penalty(n);
  ValueFunctionTable out(n, k, table.controls());
  double* terminal = out.slice(k);
  for (std::size_t i = 0; i < n; ++i) {
    const DensityMatrix rho = circle_to_density(table.theta(i));
    penalty[i] = l2 * cost.D * rho.expect(cost.P);
    terminal[i] = cost.terminal(rho);
  }
  std::vector<double> control_cost(m);
  for (std::size_t j = 0; j < m; ++j) control_cost[j] = l2 * cost.C * table.controls()[j] * table.controls()[j];

  constexpr std::size_t kChunk = 512;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> next(n + 1);
  for (std::size_t l = k; l-- > 0;) {
    std::copy(out.slice(l + 1), out.slice(l + 1) + n, next.begin());
    next[n] = next[0];
    double* v = out.slice(l);
    std::uint16_t* g = out.control_slice(l);
    qfilter::parallel_for(chunks, workers, [&](std::size_t chunk) {
      const std::size_t end = std::min(n, (chunk + 1) * kChunk);
      for (std::size_t i = chunk * kChunk; i < end; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::uint16_t arg = 0;
        for (std::size_t j = 0; j < m; ++j) {
          const Transition& t = table.at(i, j);
          const double vp = next[t.i_plus] + static_cast<double>(t.w_plus) * (next[t.i_plus + 1] - next[t.i_plus]);
          const double vm = next[t.i_minus] + static_cast<double>(t.w_minus) * (next[t.i_minus + 1] - next[t.i_minus]);
          const double value = control_cost[j] + penalty[i] + t.p_plus * vp + (1.0 - t.p_plus) * vm;
          if (value < best) {
            best = value;
            arg = static_cast<std::uint16_t>(j);
          }
        }
        v[i] = best;
        g[i] = arg;
      }
    });
  }
  return out;
}

inline ValueFunctionTable bellman_sweep(const Plant& plant, const CostSpec& cost, const ControlGrid& grid,
                                        unsigned workers = 1) {
  return bellman_sweep(TransitionTable(plant, grid.controls(), grid.theta_points(), workers), cost, workers);
}

// The same recursion without minimization, holding u fixed at every step.
inline ValueFunctionTable constant_control_sweep(const Plant& plant, const CostSpec& cost, std::size_t theta_points,
                                                 double u, unsigned workers = 1) {
  return bellman_sweep(TransitionTable(plant, {u}, theta_points, workers), cost, workers);
}

}  // namespace qbinom::qcontrol
