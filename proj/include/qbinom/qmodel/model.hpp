#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "qbinom/error.hpp"
#include "qbinom/qlin/complex_matrix.hpp"
#include "qbinom/qlin/spectral.hpp"
#include "qbinom/qmodel/density.hpp"
#include "qbinom/qmodel/time_grid.hpp"

namespace qbinom::qmodel {

using qlin::ComplexMatrix;

// Generators of one repeated interaction:
// M = exp(-i {L1 (x) dLambda + L2 (x) dA* + L2* (x) dA + L3 (x) dt}).
struct InteractionSpec {
  AtomOperator L1;
  AtomOperator L2;
  AtomOperator L3;
  TimeGrid grid;

  void validate(double tol = 1e-12) const {
    if (qlin::hermiticity_defect(L1) > tol) throw NotHermitianError("InteractionSpec: L1 is not self-adjoint");
    if (qlin::hermiticity_defect(L3) > tol) throw NotHermitianError("InteractionSpec: L3 is not self-adjoint");
  }
};

// Coefficients of M - I = Mpm (x) dLambda + Mp (x) dA* + Mm (x) dA + Mo (x) dt.
struct ModelCoefficients {
  AtomOperator Mpm;
  AtomOperator Mp;
  AtomOperator Mm;
  AtomOperator Mo;
  double lambda = 0.0;
};

namespace detail {

// -i times the Hermitian generator of one step.
inline ComplexMatrix step_generator(const InteractionSpec& spec) {
  using namespace qlin::pauli;
  spec.validate();
  const double lam = spec.grid.lambda();
  const ComplexMatrix g = qlin::kron(spec.L1, excited_projector()) + qlin::kron(spec.L2 * lam, sigma_plus()) +
                          qlin::kron(spec.L2.adjoint() * lam, sigma_minus()) +
                          qlin::kron(spec.L3 * (lam * lam), AtomOperator::identity());
  return g * cplx(0.0, -1.0);
}

}  // namespace detail

inline ComplexMatrix single_step_unitary(const InteractionSpec& spec) {
  return qlin::matrix_exp_skew(detail::step_generator(spec));
}

// The 2x2 atom operator B_{st} with entries (m)[(a,s),(b,t)] for slice indices s, t.
inline AtomOperator slice_block(const ComplexMatrix& m, int s, int t) {
  AtomOperator out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out(a, b) = m(static_cast<std::size_t>(2 * a + s), static_cast<std::size_t>(2 * b + t));
  return out;
}

inline ComplexMatrix reconstruct_unitary(const ModelCoefficients& c) {
  using namespace qlin::pauli;
  const double lam = c.lambda;
  return ComplexMatrix::identity(4) + qlin::kron(c.Mpm, excited_projector()) + qlin::kron(c.Mp * lam, sigma_plus()) +
         qlin::kron(c.Mm * lam, sigma_minus()) + qlin::kron(c.Mo * (lam * lam), AtomOperator::identity());
}

inline double unitarity_defect(const ComplexMatrix& m) {
  return qlin::max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows()));
}

// Reads the coefficients off the slice blocks of d = M - I.
inline ModelCoefficients decompose_increment(const ComplexMatrix& d, double lambda) {
  if (d.rows() != 4 || d.cols() != 4) throw DimensionError("decompose_coefficients: expected a 4x4 matrix");
  if (!(lambda > 0.0)) throw DomainError("decompose_coefficients: lambda must be positive");
  const AtomOperator b11 = slice_block(d, 0, 0);
  const AtomOperator b12 = slice_block(d, 0, 1);
  const AtomOperator b21 = slice_block(d, 1, 0);
  const AtomOperator b22 = slice_block(d, 1, 1);
  ModelCoefficients c;
  c.lambda = lambda;
  c.Mo = b22 * (1.0 / (lambda * lambda));
  c.Mpm = b11 - b22;
  c.Mp = b12 * (1.0 / lambda);
  c.Mm = b21 * (1.0 / lambda);
  return c;
}

inline ModelCoefficients decompose_coefficients(const ComplexMatrix& m, double lambda, double tol = 1e-10) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("decompose_coefficients: expected a 4x4 matrix");
  const double defect = unitarity_defect(m);
  if (defect > tol) throw DomainError("decompose_coefficients: input is not unitary (defect " + std::to_string(defect) + ")");
  return decompose_increment(m - ComplexMatrix::identity(4), lambda);
}

// Heisenberg-picture discrete Lindblad generator.
inline AtomOperator lindblad(const AtomOperator& x, const ModelCoefficients& c) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator mo_dag = c.Mo.adjoint();
  return c.Mp.adjoint() * x * c.Mp + (mo_dag * x * c.Mo) * l2 + mo_dag * x + x * c.Mo;
}

// Schroedinger-picture generator, the trace dual of lindblad.
inline AtomOperator lindblad_adjoint(const AtomOperator& rho, const ModelCoefficients& c) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator mo_dag = c.Mo.adjoint();
  return c.Mp * rho * c.Mp.adjoint() + (c.Mo * rho * mo_dag) * l2 + c.Mo * rho + rho * mo_dag;
}

inline DensityMatrix master_step(const DensityMatrix& tau, const ModelCoefficients& c) {
  const double l2 = c.lambda * c.lambda;
  const AtomOperator next = tau.op() + lindblad_adjoint(tau.op(), c) * l2;
  return DensityMatrix::from((next + next.adjoint()) * 0.5);
}

enum class ModelName { spontaneous, dispersive, trivial };

inline ModelName parse_model_name(std::string_view name) {
  if (name == "spontaneous") return ModelName::spontaneous;
  if (name == "dispersive") return ModelName::dispersive;
  if (name == "trivial") return ModelName::trivial;
  throw DomainError("unknown model name '" + std::string(name) + "'");
}

inline InteractionSpec named_interaction(ModelName name, const TimeGrid& grid) {
  using namespace qlin::pauli;
  const cplx i(0.0, 1.0);
  switch (name) {
    case ModelName::spontaneous:
      return {AtomOperator::zero(), sigma_minus() * i, AtomOperator::zero(), grid};
    case ModelName::dispersive:
      return {AtomOperator::zero(), sigma_z() * i, AtomOperator::zero(), grid};
    case ModelName::trivial:
      return {AtomOperator::zero(), AtomOperator::zero(), AtomOperator::zero(), grid};
  }
  throw DomainError("unknown model");
}

// Exponentiate-and-decompose. M - I is formed spectrally, so the dt block keeps
// full relative precision after division by lambda^2.
inline ModelCoefficients coefficients_of(const InteractionSpec& spec) {
  const ComplexMatrix d = qlin::matrix_expm1_skew(detail::step_generator(spec));
  const double defect = unitarity_defect(d + ComplexMatrix::identity(4));
  if (defect > 1e-10) throw NumericalError("coefficients_of: step operator is not unitary");
  return decompose_increment(d, spec.grid.lambda());
}

inline ModelCoefficients named_model(ModelName name, const TimeGrid& grid) {
  return coefficients_of(named_interaction(name, grid));
}

inline ModelCoefficients named_model(std::string_view name, const TimeGrid& grid) {
  return named_model(parse_model_name(name), grid);
}

// A repeated-interaction model whose generators may depend on a scalar control u.
// Uncontrolled plants ignore u.
class Plant {
 public:
  using InteractionMap = std::function<InteractionSpec(double)>;
  using CoefficientMap = std::function<ModelCoefficients(double)>;

  static Plant uncontrolled(const InteractionSpec& spec, std::string name = "custom") {
    Plant p(spec.grid, std::move(name));
    p.fixed_spec_ = spec;
    p.fixed_coeffs_ = coefficients_of(spec);
    return p;
  }

  static Plant named(ModelName model, const TimeGrid& grid) {
    static constexpr const char* kNames[] = {"spontaneous", "dispersive", "trivial"};
    return uncontrolled(named_interaction(model, grid), kNames[static_cast<int>(model)]);
  }

  // `coefficients` may supply a closed form; otherwise coefficients are extracted from the unitary.
  static Plant controlled(InteractionMap interaction, const TimeGrid& grid, std::string name,
                          CoefficientMap coefficients = {}) {
    Plant p(grid, std::move(name));
    p.interaction_ = std::move(interaction);
    p.coefficients_ = std::move(coefficients);
    return p;
  }

  bool is_controlled() const { return !fixed_spec_.has_value(); }
  const TimeGrid& grid() const { return grid_; }
  const std::string& name() const { return name_; }

  InteractionSpec interaction(double u) const { return fixed_spec_ ? *fixed_spec_ : interaction_(u); }

  ModelCoefficients coefficients(double u) const {
    if (fixed_coeffs_) return *fixed_coeffs_;
    if (coefficients_) return coefficients_(u);
    return coefficients_of(interaction_(u));
  }

  ComplexMatrix unitary(double u) const { return single_step_unitary(interaction(u)); }

 private:
  Plant(const TimeGrid& grid, std::string name) : grid_(grid), name_(std::move(name)) {}

  TimeGrid grid_;
  std::string name_;
  std::optional<InteractionSpec> fixed_spec_;
  std::optional<ModelCoefficients> fixed_coeffs_;
  InteractionMap interaction_;
  CoefficientMap coefficients_;
};

}  // namespace qbinom::qmodel
