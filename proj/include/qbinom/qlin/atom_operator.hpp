#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace qbinom::qlin {

using cplx = std::complex<double>;

// Fixed-size 2x2 complex operator on the two-level atom, row-major.
// Basis index 0 is the excited state, index 1 the ground state.
struct AtomOperator {
  std::array<cplx, 4> e{};

  constexpr AtomOperator() = default;
  constexpr AtomOperator(cplx a00, cplx a01, cplx a10, cplx a11) : e{a00, a01, a10, a11} {}

  static constexpr AtomOperator zero() { return {}; }
  static constexpr AtomOperator identity() { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr cplx& operator()(int r, int c) { return e[2 * r + c]; }
  constexpr const cplx& operator()(int r, int c) const { return e[2 * r + c]; }

  AtomOperator& operator+=(const AtomOperator& o) {
    for (int i = 0; i < 4; ++i) e[i] += o.e[i];
    return *this;
  }
  AtomOperator& operator-=(const AtomOperator& o) {
    for (int i = 0; i < 4; ++i) e[i] -= o.e[i];
    return *this;
  }
  AtomOperator& operator*=(cplx s) {
    for (auto& v : e) v *= s;
    return *this;
  }

  friend AtomOperator operator+(AtomOperator a, const AtomOperator& b) { return a += b; }
  friend AtomOperator operator-(AtomOperator a, const AtomOperator& b) { return a -= b; }
  friend AtomOperator operator-(AtomOperator a) {
    for (auto& v : a.e) v = -v;
    return a;
  }
  friend AtomOperator operator*(AtomOperator a, cplx s) { return a *= s; }
  friend AtomOperator operator*(cplx s, AtomOperator a) { return a *= s; }
  friend AtomOperator operator*(AtomOperator a, double s) { return a *= cplx(s); }
  friend AtomOperator operator*(double s, AtomOperator a) { return a *= cplx(s); }

  friend AtomOperator operator*(const AtomOperator& a, const AtomOperator& b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
  }

  friend bool operator==(const AtomOperator&, const AtomOperator&) = default;

  AtomOperator adjoint() const {
    return {std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])};
  }
  cplx trace() const { return e[0] + e[3]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : e) m = std::max(m, std::abs(v));
    return m;
  }
};

inline double max_abs_diff(const AtomOperator& a, const AtomOperator& b) { return (a - b).max_abs(); }

inline AtomOperator commutator(const AtomOperator& a, const AtomOperator& b) { return a * b - b * a; }

// Largest entrywise deviation from self-adjointness.
inline double hermiticity_defect(const AtomOperator& a) { return max_abs_diff(a, a.adjoint()); }

// Smallest eigenvalue of the Hermitian part of a.
inline double min_eigenvalue_hermitian(const AtomOperator& a) {
  const double p = a.e[0].real();
  const double q = a.e[3].real();
  const cplx off = 0.5 * (a.e[1] + std::conj(a.e[2]));
  return 0.5 * (p + q) - std::hypot(0.5 * (p - q), std::abs(off));
}

namespace pauli {

inline constexpr AtomOperator sigma_minus() { return {0.0, 0.0, 1.0, 0.0}; }
inline constexpr AtomOperator sigma_plus() { return {0.0, 1.0, 0.0, 0.0}; }
inline constexpr AtomOperator sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline constexpr AtomOperator sigma_y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline constexpr AtomOperator sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }
// sigma_plus * sigma_minus, the projector onto the excited state.
inline constexpr AtomOperator excited_projector() { return {1.0, 0.0, 0.0, 0.0}; }
inline constexpr AtomOperator ground_projector() { return {0.0, 0.0, 0.0, 1.0}; }

}  // namespace pauli

}  // namespace qbinom::qlin
