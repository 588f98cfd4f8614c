#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "qbinom/error.hpp"
#include "qbinom/qlin/atom_operator.hpp"
#include "qbinom/qmodel/density.hpp"

namespace qbinom::qcontrol {

// Q(u) = C u^2 I + D P and terminal cost K, with P and K nonnegative self-adjoint.
struct CostSpec {
  std::string name;
  double C = 0.0;
  double D = 0.0;
  AtomOperator P;
  AtomOperator K;

  AtomOperator Q(double u) const { return AtomOperator::identity() * (C * u * u) + P * D; }

  // Tr[rho Q(u)] split into control and state parts.
  double running(const qmodel::DensityMatrix& rho, double u) const { return C * u * u + D * rho.expect(P); }
  double terminal(const qmodel::DensityMatrix& rho) const { return rho.expect(K); }

  void validate(double tol = 1e-12) const {
    if (!(C >= 0.0) || !(D >= 0.0) || !std::isfinite(C) || !std::isfinite(D)) {
      throw DomainError("CostSpec: C and D must be nonnegative");
    }
    for (const AtomOperator* a : {&P, &K}) {
      if (qlin::hermiticity_defect(*a) > tol) throw NotHermitianError("CostSpec: cost operator is not self-adjoint");
      if (qlin::min_eigenvalue_hermitian(*a) < -tol) throw DomainError("CostSpec: cost operator is not nonnegative");
    }
  }
};

// Drive towards the excited state: P = K = I - sigma_z.
inline CostSpec energy_cost(double C = 0.25, double D = 5.0) {
  const AtomOperator p = AtomOperator::identity() - qlin::pauli::sigma_z();
  CostSpec c{"energy", C, D, p, p};
  c.validate();
  return c;
}

// Drive towards theta = pi/4: P = K = I - (sigma_x + sigma_z) / sqrt(2).
inline CostSpec target45_cost(double C = 0.25, double D = 5.0) {
  const AtomOperator x = (qlin::pauli::sigma_x() + qlin::pauli::sigma_z()) * (1.0 / std::sqrt(2.0));
  const AtomOperator p = AtomOperator::identity() - x;
  CostSpec c{"target45", C, D, p, p};
  c.validate();
  return c;
}

inline CostSpec named_cost(std::string_view name, double C = 0.25, double D = 5.0) {
  if (name == "energy") return energy_cost(C, D);
  if (name == "target45") return target45_cost(C, D);
  throw DomainError("unknown cost preset '" + std::string(name) + "'");
}

}  // namespace qbinom::qcontrol
