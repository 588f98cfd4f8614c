#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qbinom/qlin.hpp"
#include "test_support.hpp"

namespace {

using namespace qbinom;
using namespace qbinom::qlin;
using qbinom::testing::random_hermitian;
using qbinom::testing::random_matrix;

TEST(Kron, DiagonalExample) {
  const ComplexMatrix k = kron(pauli::sigma_z(), AtomOperator::identity());
  ComplexMatrix expected(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  expected(2, 2) = -1.0;
  expected(3, 3) = -1.0;
  EXPECT_EQ(k, expected);
  EXPECT_EQ(kron(AtomOperator::identity(), AtomOperator::identity()), ComplexMatrix::identity(4));
}

TEST(Kron, LoweringTimesRaisingHasSingleEntry) {
  const double lam = 0.3;
  const ComplexMatrix k = kron(pauli::sigma_minus(), pauli::sigma_plus() * lam);
  // Row e2 (x) e1 is index 2, column e1 (x) e2 is index 1.
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(k(r, c), (r == 2 && c == 1) ? cplx(lam) : cplx(0.0)) << r << c;
}

TEST(Kron, Associative) {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix b = random_matrix(3, 2, rng);
  const ComplexMatrix c = random_matrix(2, 2, rng);
  EXPECT_LE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-14);
}

TEST(EmbedSlice, IdentityAndProjector) {
  EXPECT_EQ(embed_slice(AtomOperator::identity(), 1, 3), ComplexMatrix::identity(8));
  const ComplexMatrix p = embed_slice(pauli::excited_projector(), 1, 2);
  ComplexMatrix expected(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  EXPECT_EQ(p, expected);
}

TEST(EmbedSlice, MatchesExplicitKronChain) {
  std::mt19937_64 rng(5);
  const AtomOperator x = qbinom::testing::random_atom_operator(rng);
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix expected = kron(kron(id, ComplexMatrix::from(x)), id);
  EXPECT_EQ(embed_slice(x, 2, 3), expected);
}

TEST(EmbedSlice, DistinctSlicesCommuteExactly) {
  std::mt19937_64 rng(9);
  const std::size_t k = 4;
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = 1; j <= k; ++j) {
      if (i == j) continue;
      const ComplexMatrix a = embed_slice(qbinom::testing::random_atom_operator(rng), i, k);
      const ComplexMatrix b = embed_slice(qbinom::testing::random_atom_operator(rng), j, k);
      EXPECT_EQ(commutator(a, b).max_abs(), 0.0);
    }
  EXPECT_EQ(commutator(embed_slice(pauli::sigma_minus(), 1, 2), embed_slice(pauli::sigma_plus(), 2, 2)).max_abs(), 0.0);
}

TEST(EmbedSlice, RejectsOutOfRange) {
  EXPECT_THROW(embed_slice(pauli::sigma_z(), 0, 3), DimensionError);
  EXPECT_THROW(embed_slice(pauli::sigma_z(), 4, 3), DimensionError);
}

TEST(EmbedAtomSlice, MatchesPermutedKron) {
  std::mt19937_64 rng(21);
  const AtomOperator a = qbinom::testing::random_atom_operator(rng);
  const AtomOperator s = qbinom::testing::random_atom_operator(rng);
  const ComplexMatrix id = ComplexMatrix::identity(2);
  // a on the atom and s on slice 2 of a three-slice field.
  const ComplexMatrix expected = kron(kron(kron(ComplexMatrix::from(a), id), ComplexMatrix::from(s)), id);
  EXPECT_LE(max_abs_diff(embed_atom_slice(kron(a, s), 2, 3), expected), 1e-15);
}

TEST(HermitianEig, PauliZ) {
  const HermitianEigen e = hermitian_eig(ComplexMatrix::from(pauli::sigma_z()));
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], -1.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(1, 1)), 1.0, 1e-15);
}

TEST(HermitianEig, PauliXHasPlusMinusOne) {
  const HermitianEigen e = hermitian_eig(ComplexMatrix::from(pauli::sigma_x()));
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], -1.0, 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), r, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 0) - e.vectors(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1) + e.vectors(1, 1)), 0.0, 1e-15);
}

TEST(HermitianEig, DegenerateKeepsOrthonormalBasis) {
  ComplexMatrix a(2, 2);
  a(0, 0) = 5.0;
  a(1, 1) = 5.0;
  const HermitianEigen e = hermitian_eig(a);
  EXPECT_DOUBLE_EQ(e.values[0], 5.0);
  EXPECT_DOUBLE_EQ(e.values[1], 5.0);
  EXPECT_LE(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(2)), 1e-15);
}

TEST(HermitianEig, ResidualAndUnitarityOnRandomInputs) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 16; ++n) {
    const ComplexMatrix a = random_hermitian(n, rng);
    const HermitianEigen e = hermitian_eig(a);
    for (std::size_t j = 1; j < n; ++j) EXPECT_GE(e.values[j - 1], e.values[j]);
    ComplexMatrix vd = e.vectors;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 0; r < n; ++r) vd(r, j) *= e.values[j];
    EXPECT_LE(max_abs_diff(a * e.vectors, vd), 1e-10 * a.max_abs());
    EXPECT_LE(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n)), 1e-12);
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  EXPECT_THROW(hermitian_eig(ComplexMatrix::from(pauli::sigma_plus())), NotHermitianError);
  EXPECT_THROW(hermitian_eig(ComplexMatrix(2, 3)), DimensionError);
}

TEST(MatrixExpSkew, RotationClosedForm) {
  const double lam = 0.37;
  const AtomOperator gen = (pauli::sigma_minus() - pauli::sigma_plus()) * lam;
  const ComplexMatrix u = matrix_exp_skew(ComplexMatrix::from(gen));
  const AtomOperator expected =
      AtomOperator::identity() * std::cos(lam) + (pauli::sigma_minus() - pauli::sigma_plus()) * std::sin(lam);
  EXPECT_LE(max_abs_diff(u.to_atom(), expected), 1e-15);
}

TEST(MatrixExpSkew, ZeroGivesIdentity) {
  EXPECT_LE(max_abs_diff(matrix_exp_skew(ComplexMatrix(3, 3)), ComplexMatrix::identity(3)), 0.0);
}

TEST(MatrixExpSkew, UnitaryOnRandomSkewInputs) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 16; ++n) {
    const ComplexMatrix b = random_hermitian(n, rng) * cplx(0.0, -1.0);
    const ComplexMatrix u = matrix_exp_skew(b);
    EXPECT_LE(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(n)), 1e-12) << "n=" << n;
  }
}

TEST(MatrixExpSkew, AgreesWithTaylorSeries) {
  std::mt19937_64 rng(23);
  const ComplexMatrix b = random_hermitian(4, rng) * cplx(0.0, -0.2);
  ComplexMatrix term = ComplexMatrix::identity(4);
  ComplexMatrix sum = term;
  for (int j = 1; j < 40; ++j) {
    term = term * b * cplx(1.0 / j);
    sum += term;
  }
  EXPECT_LE(max_abs_diff(matrix_exp_skew(b), sum), 1e-14);
}

TEST(MatrixExpm1Skew, KeepsSmallIncrementsAccurate) {
  const double lam = 1e-3;
  const AtomOperator gen = (pauli::sigma_minus() - pauli::sigma_plus()) * lam;
  const AtomOperator d = matrix_expm1_skew(ComplexMatrix::from(gen)).to_atom();
  const double s = std::sin(0.5 * lam);
  EXPECT_NEAR(d(0, 0).real(), -2.0 * s * s, 1e-14 * 2.0 * s * s);
  EXPECT_NEAR(d(1, 0).real(), std::sin(lam), 1e-18);
  std::mt19937_64 rng(29);
  const ComplexMatrix b = random_hermitian(5, rng) * cplx(0.0, -1.0);
  EXPECT_LE(max_abs_diff(matrix_expm1_skew(b) + ComplexMatrix::identity(5), matrix_exp_skew(b)), 1e-14);
}

TEST(MatrixExpSkew, RejectsNonSkew) {
  EXPECT_THROW(matrix_exp_skew(ComplexMatrix::identity(2)), NotHermitianError);
}

TEST(AtomOperator, MinEigenvalueMatchesSolver) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix h = random_hermitian(2, rng);
    const HermitianEigen e = hermitian_eig(h);
    EXPECT_NEAR(min_eigenvalue_hermitian(h.to_atom()), e.values[1], 1e-13);
  }
}

}  // namespace
