#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qcontrol/cost.hpp"
#include "qbinom/qfilter/filter.hpp"
#include "qbinom/qmodel/model.hpp"

namespace qbinom::qcontrol {

inline constexpr std::size_t kMaxExhaustiveSteps = 10;

struct ExhaustiveResult {
  double J_normalized = 0.0;
  double J_unnormalized = 0.0;
  std::vector<std::size_t> first_normalized;    // control indices attaining the first-step minimum
  std::vector<std::size_t> first_unnormalized;

  bool share_minimizer() const {
    for (std::size_t j : first_normalized)
      if (std::find(first_unnormalized.begin(), first_unnormalized.end(), j) != first_unnormalized.end()) return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::size_t> minimizers(const std::vector<double>& values, double tol) {
  const double best = *std::min_element(values.begin(), values.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j] <= best + tol * std::max(1.0, std::abs(best))) out.push_back(j);
  return out;
}

}  // namespace detail

// Exact optimal cost over all record-feedback strategies taking values in `controls`, computed
// twice over the full homodyne record tree: with the normalized filter under the record law,
// and with the unnormalized filter under fair coin flips.
inline ExhaustiveResult exhaustive_dp_consistency(const qmodel::Plant& plant, const CostSpec& cost,
                                                  const std::vector<double>& controls, std::size_t k,
                                                  const DensityMatrix& rho0, double tie_tol = 1e-12) {
  if (k == 0 || k > kMaxExhaustiveSteps) {
    throw DimensionError("exhaustive_dp_consistency: k must lie in 1.." + std::to_string(kMaxExhaustiveSteps));
  }
  if (k > plant.grid().k()) throw DomainError("exhaustive_dp_consistency: k exceeds the horizon");
  if (controls.empty()) throw DomainError("exhaustive_dp_consistency: empty control grid");
  cost.validate();
  const double lam = plant.grid().lambda();
  const double l2 = lam * lam;
  std::vector<qmodel::ModelCoefficients> coeffs;
  for (double u : controls) coeffs.push_back(plant.coefficients(u));
  const std::size_t m = controls.size();

  std::function<double(std::size_t, const DensityMatrix&, std::vector<double>*)> normalized =
      [&](std::size_t l, const DensityMatrix& rho, std::vector<double>* per_control) -> double {
    if (l == k) return cost.terminal(rho);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const double p = qfilter::observation_probability(rho, coeffs[j], qmodel::Detection::homodyne);
      double value = l2 * cost.running(rho, controls[j]);
      if (p > 0.0) value += p * normalized(l + 1, qfilter::nonlinear_step_homodyne(rho, lam, coeffs[j]), nullptr);
      if (p < 1.0) value += (1.0 - p) * normalized(l + 1, qfilter::nonlinear_step_homodyne(rho, -lam, coeffs[j]), nullptr);
      if (per_control) per_control->push_back(value);
      best = std::min(best, value);
    }
    return best;
  };

  std::function<double(std::size_t, const AtomOperator&, std::vector<double>*)> unnormalized =
      [&](std::size_t l, const AtomOperator& varrho, std::vector<double>* per_control) -> double {
    if (l == k) return (varrho * cost.K).trace().real();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double value = l2 * (varrho * cost.Q(controls[j])).trace().real();
      for (double dy : {lam, -lam}) {
        value += 0.5 * unnormalized(l + 1, qfilter::linear_step(varrho, dy, coeffs[j], qmodel::Detection::homodyne),
                                    nullptr);
      }
      if (per_control) per_control->push_back(value);
      best = std::min(best, value);
    }
    return best;
  };

  ExhaustiveResult r;
  std::vector<double> first_n;
  std::vector<double> first_u;
  r.J_normalized = normalized(0, rho0, &first_n);
  r.J_unnormalized = unnormalized(0, rho0.op(), &first_u);
  r.first_normalized = detail::minimizers(first_n, tie_tol);
  r.first_unnormalized = detail::minimizers(first_u, tie_tol);
  return r;
}

}  // namespace qbinom::qcontrol
