#pragma once

#include <complex>
#include <random>

#include "qbinom/qlin.hpp"
#include "qbinom/qmodel.hpp"

namespace qbinom::testing {

using qlin::AtomOperator;
using qlin::ComplexMatrix;
using qlin::cplx;

inline cplx random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  ComplexMatrix m(rows, cols);
  for (auto& v : m.data()) v = random_complex(rng);
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  ComplexMatrix h = a + a.adjoint();
  h *= cplx(0.5);
  return h;
}

inline AtomOperator random_atom_operator(std::mt19937_64& rng) {
  return {random_complex(rng), random_complex(rng), random_complex(rng), random_complex(rng)};
}

// Random full-rank density matrix a a* / Tr[a a*].
inline qmodel::DensityMatrix random_density(std::mt19937_64& rng) {
  const AtomOperator a = random_atom_operator(rng);
  AtomOperator p = a * a.adjoint();
  p = (p + p.adjoint()) * 0.5;
  return qmodel::DensityMatrix::normalize(p);
}

// Random pure state on the real circle, z = cos(theta), x = sin(theta).
inline qmodel::DensityMatrix circle_state(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return qmodel::DensityMatrix::from({0.5 * (1.0 + c), 0.5 * s, 0.5 * s, 0.5 * (1.0 - c)});
}

// Dispersive coupling plus a control drive iu(sigma_+ - sigma_-), built independently of qcontrol.
inline qmodel::Plant driven_dispersive_plant(const qmodel::TimeGrid& grid) {
  return qmodel::Plant::controlled(
      [grid](double u) {
        const cplx i(0.0, 1.0);
        return qmodel::InteractionSpec{AtomOperator::zero(), qlin::pauli::sigma_z() * i,
                                       (qlin::pauli::sigma_plus() - qlin::pauli::sigma_minus()) * (i * u), grid};
      },
      grid, "driven-dispersive");
}

}  // namespace qbinom::testing
