#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "qbinom/error.hpp"
#include "qbinom/qfilter/filter.hpp"
#include "qbinom/qfilter/trajectory.hpp"
#include "qbinom/qoracle/oracle.hpp"

namespace qbinom::qoracle {

struct GateReport {
  double state_error = 0.0;        // max over records of |filter state - oracle state|
  double probability_error = 0.0;  // max over records of |product of filter step laws - oracle probability|
  double total_error = 0.0;        // max over lengths of |sum of oracle probabilities - 1|
  std::size_t records = 0;         // positive-probability records compared
};

// Record-prefix form of a separated strategy: u_l = g(l, rho_{l-1}) with rho_{l-1}
// obtained by filtering the prefix. Null prefixes get u = 0; they carry no probability.
inline RecordStrategy as_record_strategy(const Plant& plant, const qfilter::SeparatedStrategy& g, Detection d,
                                         const DensityMatrix& rho0) {
  if (!g) return {};
  return [&plant, g, d, rho0](std::span<const std::uint8_t> prefix) {
    DensityMatrix rho = rho0;
    try {
      for (std::size_t i = 0; i < prefix.size(); ++i) {
        rho = qfilter::nonlinear_step(rho, prefix[i], plant.coefficients(g(i + 1, rho)), d);
      }
    } catch (const ImpossibleEventError&) {
      return 0.0;
    }
    return g(prefix.size() + 1, rho);
  };
}

// Drives the nonlinear filter along every record of length 1..k and compares it with the
// full-space oracle.
inline GateReport filter_gate(const Plant& plant, const qfilter::SeparatedStrategy& g, Detection d, std::size_t k,
                              const DensityMatrix& rho0) {
  const auto history = full_space_oracle_history(plant, as_record_strategy(plant, g, d, rho0), k, d, rho0);
  GateReport report;
  for (const RecordTable& table : history) {
    report.total_error = std::max(report.total_error, std::abs(table.total_probability() - 1.0));
    for (const RecordEntry& e : table.entries) {
      if (!e.state) continue;
      DensityMatrix rho = rho0;
      double probability = 1.0;
      for (std::size_t i = 0; i < e.record.size(); ++i) {
        const double u = g ? g(i + 1, rho) : 0.0;
        const qmodel::ModelCoefficients c = plant.coefficients(u);
        const double p_plus = qfilter::observation_probability(rho, c, d);
        probability *= e.record[i] ? p_plus : 1.0 - p_plus;
        rho = qfilter::nonlinear_step(rho, e.record[i], c, d);
      }
      report.state_error = std::max(report.state_error, qlin::max_abs_diff(rho.op(), e.state->op()));
      report.probability_error = std::max(report.probability_error, std::abs(probability - e.probability));
      ++report.records;
    }
  }
  return report;
}

}  // namespace qbinom::qoracle
