#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "qbinom/error.hpp"
#include "qbinom/qmodel/density.hpp"
#include "qbinom/qmodel/detection.hpp"
#include "qbinom/qmodel/model.hpp"

namespace qbinom::qfilter {

using qlin::AtomOperator;
using qmodel::DensityMatrix;
using qmodel::Detection;
using qmodel::ModelCoefficients;

inline constexpr double kNullIntensity = 1e-14;
inline constexpr double kSingularDenominator = 1e-12;
inline constexpr double kProbabilitySlack = 1e-12;

// Schroedinger form: M+ rho + rho M+* + lambda^2 (M+ rho Mo* + Mo rho M+*).
inline AtomOperator superop_j(const AtomOperator& rho, const ModelCoefficients& c) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator mp_dag = c.Mp.adjoint();
  const AtomOperator mo_dag = c.Mo.adjoint();
  return c.Mp * rho + rho * mp_dag + (c.Mp * rho * mo_dag + c.Mo * rho * mp_dag) * l2;
}

// Heisenberg form, the trace dual of superop_j.
inline AtomOperator superop_j_heisenberg(const AtomOperator& x, const ModelCoefficients& c) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator mp_dag = c.Mp.adjoint();
  const AtomOperator mo_dag = c.Mo.adjoint();
  return x * c.Mp + mp_dag * x + (mo_dag * x * c.Mp + mp_dag * x * c.Mo) * l2;
}

inline AtomOperator emission(const AtomOperator& rho, const ModelCoefficients& c) {
  return c.Mp * rho * c.Mp.adjoint();
}

// Heisenberg form of the counting innovation gain,
// T(X) = (lambda^2/sin^2 lambda M+* X M+ - X - lambda^2 L(X)) / cos^2 lambda.
inline AtomOperator superop_t_heisenberg(const AtomOperator& x, const ModelCoefficients& c) {
  const double lam = c.lambda;
  const double s2 = std::sin(lam) * std::sin(lam);
  const double c2 = std::cos(lam) * std::cos(lam);
  return (c.Mp.adjoint() * x * c.Mp * (lam * lam / s2) - x - qmodel::lindblad(x, c) * (lam * lam)) * (1.0 / c2);
}

inline AtomOperator superop_t(const AtomOperator& rho, const ModelCoefficients& c) {
  const double lam = c.lambda;
  const double s2 = std::sin(lam) * std::sin(lam);
  const double c2 = std::cos(lam) * std::cos(lam);
  return (emission(rho, c) * (lam * lam / s2) - rho - qmodel::lindblad_adjoint(rho, c) * (lam * lam)) * (1.0 / c2);
}

// Probability of the plus (homodyne) or click (counting) outcome.
inline double observation_probability(const DensityMatrix& rho, const ModelCoefficients& c, Detection d) {
  double p = 0.0;
  if (d == Detection::homodyne) {
    p = 0.5 + 0.5 * c.lambda * superop_j(rho.op(), c).trace().real();
  } else {
    p = c.lambda * c.lambda * emission(rho.op(), c).trace().real();
  }
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    throw NumericalError("observation_probability: " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

inline DensityMatrix nonlinear_step_homodyne(const DensityMatrix& rho, double dy, const ModelCoefficients& c) {
  if (std::abs(std::abs(dy) - c.lambda) > 1e-12 * c.lambda) {
    throw DomainError("nonlinear_step_homodyne: observation must be +lambda or -lambda");
  }
  const double l2 = c.lambda * c.lambda;
  const AtomOperator j = superop_j(rho.op(), c);
  const double tj = j.trace().real();
  const double denom = 1.0 - l2 * tj * tj;
  if (std::abs(denom) <= kSingularDenominator) {
    throw SingularityError("nonlinear_step_homodyne: 1 - lambda^2 Tr[J]^2 vanishes");
  }
  const AtomOperator drifted = rho.op() + qmodel::lindblad_adjoint(rho.op(), c) * l2;
  const AtomOperator gain = (j - drifted * tj) * (1.0 / denom);
  return DensityMatrix::normalize(drifted + gain * (dy - l2 * tj));
}

// Click: M+ rho M+* renormalized. No click: (rho + lambda^2 L(rho) - lambda^2 M+ rho M+*) renormalized.
inline DensityMatrix nonlinear_step_counting(const DensityMatrix& rho, double dy, const ModelCoefficients& c) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator emitted = emission(rho.op(), c);
  const double intensity = emitted.trace().real();
  if (dy == 1.0) {
    if (intensity <= kNullIntensity) throw ImpossibleEventError("nonlinear_step_counting: click at zero intensity");
    return DensityMatrix::normalize(emitted * (1.0 / intensity));
  }
  if (dy != 0.0) throw DomainError("nonlinear_step_counting: observation must be 0 or 1");
  const double stay = 1.0 - l2 * intensity;
  if (stay <= kNullIntensity) throw ImpossibleEventError("nonlinear_step_counting: no-click event has zero probability");
  const AtomOperator kept = rho.op() + (qmodel::lindblad_adjoint(rho.op(), c) - emitted) * l2;
  return DensityMatrix::normalize(kept * (1.0 / stay));
}

inline DensityMatrix nonlinear_step(const DensityMatrix& rho, std::uint8_t outcome, const ModelCoefficients& c,
                                    Detection d) {
  const double dy = qmodel::outcome_value(outcome, d, c.lambda);
  return d == Detection::homodyne ? nonlinear_step_homodyne(rho, dy, c) : nonlinear_step_counting(rho, dy, c);
}

// Innovation increment dy minus its predicted mean given rho.
inline double innovation(const DensityMatrix& rho, double dy, const ModelCoefficients& c, Detection d) {
  const double l2 = c.lambda * c.lambda;
  if (d == Detection::homodyne) return dy - superop_j(rho.op(), c).trace().real() * l2;
  return dy - emission(rho.op(), c).trace().real() * l2;
}

inline void validate_unnormalized(const AtomOperator& varrho, double tol = 1e-12) {
  const double tr = varrho.trace().real();
  if (!(tr > 0.0)) throw NumericalError("unnormalized state: non-positive trace");
  if (qlin::hermiticity_defect(varrho) > tol * std::max(1.0, tr)) throw NumericalError("unnormalized state: not Hermitian");
  if (qlin::min_eigenvalue_hermitian(varrho) < -tol * tr) throw NumericalError("unnormalized state: negative eigenvalue");
}

// Linear (Zakai) recursion; the unnormalized state is never rescaled.
inline AtomOperator linear_step(const AtomOperator& varrho, double dy, const ModelCoefficients& c, Detection d) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator drifted = varrho + qmodel::lindblad_adjoint(varrho, c) * l2;
  if (d == Detection::homodyne) return drifted + superop_j(varrho, c) * dy;
  const double s2 = std::sin(c.lambda) * std::sin(c.lambda);
  return drifted + superop_t(varrho, c) * (dy - s2);
}

inline DensityMatrix normalize_unnormalized(const AtomOperator& varrho) {
  return DensityMatrix::normalize(varrho);
}

}  // namespace qbinom::qfilter
