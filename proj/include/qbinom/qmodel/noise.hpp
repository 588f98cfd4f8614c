#pragma once

#include <array>
#include <cstddef>

#include "qbinom/qlin/atom_operator.hpp"

namespace qbinom::qmodel {

// The four discrete noise increments acting on one field slice.
enum class Noise : std::size_t { A = 0, Lambda = 1, AStar = 2, T = 3 };

inline constexpr std::array<Noise, 4> kAllNoises{Noise::A, Noise::Lambda, Noise::AStar, Noise::T};

// Real linear combination of the four increments, indexed by Noise.
struct NoiseCombination {
  std::array<double, 4> coeff{};

  static NoiseCombination single(Noise n, double c = 1.0) {
    NoiseCombination out;
    out.coeff[static_cast<std::size_t>(n)] = c;
    return out;
  }
  double operator[](Noise n) const { return coeff[static_cast<std::size_t>(n)]; }
  friend bool operator==(const NoiseCombination&, const NoiseCombination&) = default;
};

// Matrix of an increment on the slice space: dA = lambda sigma_-, dA* = lambda sigma_+,
// dLambda = sigma_+ sigma_-, dt = lambda^2 I.
inline qlin::AtomOperator noise_matrix(Noise n, double lambda) {
  using namespace qlin::pauli;
  switch (n) {
    case Noise::A:
      return sigma_minus() * lambda;
    case Noise::AStar:
      return sigma_plus() * lambda;
    case Noise::Lambda:
      return excited_projector();
    case Noise::T:
      return qlin::AtomOperator::identity() * (lambda * lambda);
  }
  return {};
}

inline qlin::AtomOperator noise_matrix(const NoiseCombination& c, double lambda) {
  qlin::AtomOperator out;
  for (Noise n : kAllNoises) out += noise_matrix(n, lambda) * c[n];
  return out;
}

// Discrete Ito table: the product dX dY expressed in the increment basis.
inline NoiseCombination ito_product(Noise x, Noise y, double lambda) {
  const double l2 = lambda * lambda;
  NoiseCombination out;
  auto set = [&out](Noise n, double c) { out.coeff[static_cast<std::size_t>(n)] += c; };
  switch (x) {
    case Noise::A:
      if (y == Noise::Lambda) set(Noise::A, 1.0);
      if (y == Noise::AStar) {
        set(Noise::T, 1.0);
        set(Noise::Lambda, -l2);
      }
      if (y == Noise::T) set(Noise::A, l2);
      break;
    case Noise::Lambda:
      if (y == Noise::Lambda) set(Noise::Lambda, 1.0);
      if (y == Noise::AStar) set(Noise::AStar, 1.0);
      if (y == Noise::T) set(Noise::Lambda, l2);
      break;
    case Noise::AStar:
      if (y == Noise::A) set(Noise::Lambda, l2);
      if (y == Noise::T) set(Noise::AStar, l2);
      break;
    case Noise::T:
      set(y, l2);
      break;
  }
  return out;
}

}  // namespace qbinom::qmodel
