#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qlin/complex_matrix.hpp"

namespace qbinom::qlin {

inline constexpr double kHermitianTolerance = 1e-12;

struct HermitianEigen {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column j pairs with values[j]
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c);
  return m;
}

}  // namespace detail

// Spectral decomposition of a Hermitian matrix, eigenvalues in descending order.
inline HermitianEigen hermitian_eig(const ComplexMatrix& a, double tol = kHermitianTolerance) {
  if (!a.is_square()) throw DimensionError("hermitian_eig: matrix " + a.shape() + " is not square");
  const double defect = hermiticity_defect(a);
  if (defect > tol) {
    throw NotHermitianError("hermitian_eig: max |a - a*| = " + std::to_string(defect) + " exceeds tolerance");
  }
  const std::size_t n = a.rows();
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(a));
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: eigensolver did not converge");
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  for (std::size_t j = 0; j < n; ++j) {
    const auto src = static_cast<Eigen::Index>(n - 1 - j);
    out.values[j] = vals(src);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = vecs(static_cast<Eigen::Index>(r), src);
  }
  return out;
}

namespace detail {

// V diag(f(w_j)) V* for the spectral decomposition i*b = V diag(w) V*.
template <class F>
ComplexMatrix skew_spectral_map(const ComplexMatrix& b, double tol, const char* who, F f) {
  if (!b.is_square()) throw DimensionError(std::string(who) + ": matrix " + b.shape() + " is not square");
  const ComplexMatrix h = b * cplx(0.0, 1.0);
  const double defect = hermiticity_defect(h);
  if (defect > tol) {
    throw NotHermitianError(std::string(who) + ": max |b + b*| = " + std::to_string(defect) + " exceeds tolerance");
  }
  const HermitianEigen eig = hermitian_eig(h, tol);
  const std::size_t n = b.rows();
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx v = f(eig.values[j]);
    for (std::size_t r = 0; r < n; ++r) scaled(r, j) *= v;
  }
  return scaled * eig.vectors.adjoint();
}

}  // namespace detail

// exp(b) for skew-Hermitian b, via the eigendecomposition of the Hermitian matrix i*b.
inline ComplexMatrix matrix_exp_skew(const ComplexMatrix& b, double tol = kHermitianTolerance) {
  return detail::skew_spectral_map(b, tol, "matrix_exp_skew", [](double w) { return std::exp(cplx(0.0, -w)); });
}

// exp(b) - I without the cancellation of forming exp(b) first.
inline ComplexMatrix matrix_expm1_skew(const ComplexMatrix& b, double tol = kHermitianTolerance) {
  return detail::skew_spectral_map(b, tol, "matrix_expm1_skew", [](double w) {
    const double s = std::sin(0.5 * w);
    return cplx(-2.0 * s * s, -std::sin(w));
  });
}

}  // namespace qbinom::qlin
