#pragma once

#include <cmath>
#include <string>

#include "qbinom/error.hpp"
#include "qbinom/qlin/atom_operator.hpp"

namespace qbinom::qmodel {

using qlin::AtomOperator;
using qlin::cplx;

inline constexpr double kDensityTolerance = 1e-12;

// A validated 2x2 density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  DensityMatrix() : rho_(qlin::pauli::excited_projector()) {}

  // Validates a against the density-matrix invariants within tol.
  static DensityMatrix from(const AtomOperator& a, double tol = kDensityTolerance) {
    const double herm = qlin::hermiticity_defect(a);
    if (herm > tol) throw NotDensityError("DensityMatrix: not Hermitian (defect " + std::to_string(herm) + ")");
    const double tr_err = std::abs(a.trace() - cplx(1.0));
    if (tr_err > tol) throw NotDensityError("DensityMatrix: trace differs from 1 by " + std::to_string(tr_err));
    const double min_eig = qlin::min_eigenvalue_hermitian(a);
    if (min_eig < -tol) throw NotDensityError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    return DensityMatrix(a);
  }

  // Hermitizes and renormalizes a, then checks that its smallest eigenvalue is above -floor.
  static DensityMatrix normalize(const AtomOperator& a, double floor = 1e-9) {
    AtomOperator h = (a + a.adjoint()) * 0.5;
    const double tr = h.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) throw NumericalError("DensityMatrix: non-positive trace " + std::to_string(tr));
    h *= cplx(1.0 / tr);
    const double min_eig = qlin::min_eigenvalue_hermitian(h);
    if (min_eig < -floor) throw NumericalError("DensityMatrix: eigenvalue " + std::to_string(min_eig) + " below floor");
    return DensityMatrix(h);
  }

  static DensityMatrix excited() { return DensityMatrix(qlin::pauli::excited_projector()); }
  static DensityMatrix ground() { return DensityMatrix(qlin::pauli::ground_projector()); }
  static DensityMatrix mixed() { return DensityMatrix(AtomOperator::identity() * 0.5); }

  const AtomOperator& op() const { return rho_; }
  cplx operator()(int r, int c) const { return rho_(r, c); }

  double expect(const AtomOperator& x) const { return (rho_ * x).trace().real(); }
  double z() const { return rho_(0, 0).real() - rho_(1, 1).real(); }
  double x() const { return 2.0 * rho_(0, 1).real(); }

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

 private:
  explicit DensityMatrix(const AtomOperator& a) : rho_(a) {}
  AtomOperator rho_;
};

}  // namespace qbinom::qmodel
