#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qbinom/qmodel.hpp"
#include "test_support.hpp"

namespace {

using namespace qbinom;
using namespace qbinom::qmodel;
using qlin::AtomOperator;
using qlin::ComplexMatrix;
using qlin::cplx;
namespace pauli = qlin::pauli;

const TimeGrid kGrid = TimeGrid::from_rate(3.0, 300.0);

// Closed-form coefficients, derived independently of the extraction code.
ModelCoefficients spontaneous_closed_form(double lam) {
  ModelCoefficients c;
  c.lambda = lam;
  c.Mpm = pauli::sigma_z() * (1.0 - std::cos(lam));
  c.Mp = pauli::sigma_minus() * (std::sin(lam) / lam);
  c.Mm = pauli::sigma_plus() * (-std::sin(lam) / lam);
  c.Mo = pauli::excited_projector() * ((std::cos(lam) - 1.0) / (lam * lam));
  return c;
}

ModelCoefficients dispersive_closed_form(double lam) {
  ModelCoefficients c;
  c.lambda = lam;
  c.Mp = pauli::sigma_z() * (std::sin(lam) / lam);
  c.Mm = pauli::sigma_z() * (-std::sin(lam) / lam);
  c.Mo = AtomOperator::identity() * ((std::cos(lam) - 1.0) / (lam * lam));
  return c;
}

double coefficient_distance(const ModelCoefficients& a, const ModelCoefficients& b) {
  return std::max({qlin::max_abs_diff(a.Mpm, b.Mpm), qlin::max_abs_diff(a.Mp, b.Mp), qlin::max_abs_diff(a.Mm, b.Mm),
                   qlin::max_abs_diff(a.Mo, b.Mo)});
}

TEST(TimeGrid, DefaultGrid) {
  EXPECT_EQ(kGrid.k(), 900u);
  EXPECT_DOUBLE_EQ(kGrid.lambda(), 1.0 / std::sqrt(300.0));
  EXPECT_EQ(kGrid.dt(), kGrid.lambda() * kGrid.lambda());
  EXPECT_EQ(kGrid.horizon(), kGrid.dt() * 900.0);
  EXPECT_NEAR(kGrid.horizon(), 3.0, 1e-13);
}

TEST(TimeGrid, FromHorizon) {
  const TimeGrid g = TimeGrid::from_horizon(2.0, 8);
  EXPECT_DOUBLE_EQ(g.lambda(), 0.5);
  EXPECT_DOUBLE_EQ(g.time(3), 0.75);
  EXPECT_THROW(TimeGrid::from_horizon(0.0, 3), DomainError);
  EXPECT_THROW(TimeGrid::from_horizon(1.0, 0), DomainError);
  EXPECT_THROW(TimeGrid::from_rate(0.001, 300.0), DomainError);
}

TEST(ItoTable, PaperEntries) {
  const double lam = 0.2;
  const double l2 = lam * lam;
  NoiseCombination a_astar;
  a_astar.coeff = {0.0, -l2, 0.0, 1.0};
  EXPECT_EQ(ito_product(Noise::A, Noise::AStar, lam), a_astar);
  EXPECT_EQ(ito_product(Noise::AStar, Noise::A, lam), NoiseCombination::single(Noise::Lambda, l2));
  EXPECT_EQ(ito_product(Noise::A, Noise::A, lam), NoiseCombination{});
  EXPECT_EQ(ito_product(Noise::T, Noise::T, lam), NoiseCombination::single(Noise::T, l2));
}

TEST(ItoTable, MatchesSliceMatrixProductsExactly) {
  for (double lam : {0.2, 1.0 / std::sqrt(300.0), 0.9}) {
    for (Noise x : kAllNoises)
      for (Noise y : kAllNoises) {
        const AtomOperator product = noise_matrix(x, lam) * noise_matrix(y, lam);
        EXPECT_EQ(product, noise_matrix(ito_product(x, y, lam), lam))
            << "labels " << static_cast<int>(x) << "," << static_cast<int>(y);
      }
  }
}

TEST(SingleStepUnitary, TrivialModelIsIdentity) {
  const ComplexMatrix m = single_step_unitary(named_interaction(ModelName::trivial, kGrid));
  EXPECT_LE(qlin::max_abs_diff(m, ComplexMatrix::identity(4)), 0.0);
}

TEST(SingleStepUnitary, SpontaneousRotationBlock) {
  const double lam = kGrid.lambda();
  const ComplexMatrix m = single_step_unitary(named_interaction(ModelName::spontaneous, kGrid));
  // Atom-first ordering: the rotation mixes |e,g> (index 1) and |g,e> (index 2).
  ComplexMatrix expected = ComplexMatrix::identity(4);
  expected(1, 1) = std::cos(lam);
  expected(2, 2) = std::cos(lam);
  expected(1, 2) = -std::sin(lam);
  expected(2, 1) = std::sin(lam);
  EXPECT_LE(qlin::max_abs_diff(m, expected), 1e-15);
}

TEST(SingleStepUnitary, DispersiveClosedForm) {
  const double lam = kGrid.lambda();
  const ComplexMatrix m = single_step_unitary(named_interaction(ModelName::dispersive, kGrid));
  const ComplexMatrix expected = ComplexMatrix::identity(4) * cplx(std::cos(lam)) +
                                 qlin::kron(pauli::sigma_z(), pauli::sigma_plus() - pauli::sigma_minus()) *
                                     cplx(std::sin(lam));
  EXPECT_LE(qlin::max_abs_diff(m, expected), 1e-15);
}

TEST(Decompose, SpontaneousMatchesClosedForm) {
  for (double inv : {300.0, 10.0, 3.0}) {
    const TimeGrid g = TimeGrid::from_steps(5, inv);
    EXPECT_LE(coefficient_distance(named_model(ModelName::spontaneous, g), spontaneous_closed_form(g.lambda())), 1e-12);
  }
}

TEST(Decompose, DispersiveMatchesClosedForm) {
  for (double inv : {300.0, 10.0, 3.0}) {
    const TimeGrid g = TimeGrid::from_steps(5, inv);
    const ModelCoefficients c = named_model(ModelName::dispersive, g);
    EXPECT_LE(coefficient_distance(c, dispersive_closed_form(g.lambda())), 1e-12);
    EXPECT_LE(c.Mpm.max_abs(), 1e-12);
  }
}

TEST(Decompose, IdentityGivesZeroCoefficients) {
  const ModelCoefficients c = decompose_coefficients(ComplexMatrix::identity(4), 0.1);
  EXPECT_EQ(c.Mpm.max_abs() + c.Mp.max_abs() + c.Mm.max_abs() + c.Mo.max_abs(), 0.0);
}

TEST(Decompose, RejectsNonUnitary) {
  EXPECT_THROW(decompose_coefficients(ComplexMatrix::identity(4) * cplx(1.1), 0.1), DomainError);
  EXPECT_THROW(decompose_coefficients(ComplexMatrix::identity(2), 0.1), DimensionError);
}

TEST(Decompose, RoundTripOnRandomInteractions) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    const AtomOperator l1 = qbinom::testing::random_hermitian(2, rng).to_atom();
    const AtomOperator l2 = qbinom::testing::random_atom_operator(rng);
    const AtomOperator l3 = qbinom::testing::random_hermitian(2, rng).to_atom();
    const InteractionSpec spec{l1, l2, l3, TimeGrid::from_steps(4, 50.0)};
    const ComplexMatrix m = single_step_unitary(spec);
    const ModelCoefficients c = decompose_coefficients(m, spec.grid.lambda());
    const ComplexMatrix back = reconstruct_unitary(c);
    EXPECT_LE(qlin::max_abs_diff(back, m), 1e-12);
    EXPECT_LE(unitarity_defect(back), 1e-10);
    EXPECT_LE(lindblad(AtomOperator::identity(), c).max_abs(), 1e-12);
  }
}

TEST(Lindblad, AnnihilatesIdentityForNamedModels) {
  for (ModelName n : {ModelName::spontaneous, ModelName::dispersive, ModelName::trivial}) {
    EXPECT_LE(lindblad(AtomOperator::identity(), named_model(n, kGrid)).max_abs(), 1e-12);
  }
}

TEST(Lindblad, SpontaneousEnergyGenerator) {
  const double lam = kGrid.lambda();
  const AtomOperator got = lindblad(pauli::sigma_z(), named_model(ModelName::spontaneous, kGrid));
  const AtomOperator expected =
      (pauli::sigma_z() + AtomOperator::identity()) * (-std::sin(lam) * std::sin(lam) / (lam * lam));
  EXPECT_LE(qlin::max_abs_diff(got, expected), 1e-12);
}

TEST(Lindblad, DispersiveConservesEnergy) {
  EXPECT_LE(lindblad(pauli::sigma_z(), named_model(ModelName::dispersive, kGrid)).max_abs(), 1e-12);
}

TEST(LindbladAdjoint, DualityOnRandomPairs) {
  std::mt19937_64 rng(43);
  for (ModelName n : {ModelName::spontaneous, ModelName::dispersive}) {
    const ModelCoefficients c = named_model(n, kGrid);
    for (int t = 0; t < 100; ++t) {
      const DensityMatrix rho = qbinom::testing::random_density(rng);
      const AtomOperator x = qbinom::testing::random_atom_operator(rng);
      const cplx lhs = (lindblad_adjoint(rho.op(), c) * x).trace();
      const cplx rhs = (rho.op() * lindblad(x, c)).trace();
      EXPECT_LE(std::abs(lhs - rhs), 1e-13);
    }
  }
}

TEST(LindbladAdjoint, ClosedFormEvaluations) {
  const double lam = kGrid.lambda();
  const AtomOperator excited = pauli::excited_projector();
  EXPECT_LE(lindblad_adjoint(excited, named_model(ModelName::dispersive, kGrid)).max_abs(), 1e-13);
  const double energy_rate =
      (lindblad_adjoint(excited, named_model(ModelName::spontaneous, kGrid)) * pauli::sigma_z()).trace().real();
  EXPECT_NEAR(energy_rate, -2.0 * std::sin(lam) * std::sin(lam) / (lam * lam), 1e-12);
}

TEST(MasterStep, GeometricDecayFromExcited) {
  const double lam = kGrid.lambda();
  const ModelCoefficients c = named_model(ModelName::spontaneous, kGrid);
  DensityMatrix tau = DensityMatrix::excited();
  const double c2 = std::cos(lam) * std::cos(lam);
  for (std::size_t l = 1; l <= kGrid.k(); ++l) {
    tau = master_step(tau, c);
    // Relative to z + 1, the geometrically decaying quantity; z itself passes through zero.
    const double decayed = 2.0 * std::pow(c2, static_cast<double>(l));
    EXPECT_LE(std::abs((tau.z() + 1.0) - decayed), 1e-12 * decayed) << "l=" << l;
  }
}

TEST(MasterStep, GeometricDecayFromRandomStates) {
  std::mt19937_64 rng(47);
  const double lam = kGrid.lambda();
  const double c2 = std::cos(lam) * std::cos(lam);
  const ModelCoefficients c = named_model(ModelName::spontaneous, kGrid);
  for (int t = 0; t < 5; ++t) {
    DensityMatrix tau = qbinom::testing::random_density(rng);
    const double shifted0 = tau.z() + 1.0;
    for (std::size_t l = 1; l <= kGrid.k(); ++l) {
      tau = master_step(tau, c);
      const double expected = shifted0 * std::pow(c2, static_cast<double>(l));
      EXPECT_LE(std::abs(tau.z() + 1.0 - expected), 1e-12 * expected);
    }
  }
}

TEST(MasterStep, DispersiveEnergyConstant) {
  std::mt19937_64 rng(53);
  const ModelCoefficients c = named_model(ModelName::dispersive, kGrid);
  DensityMatrix tau = qbinom::testing::random_density(rng);
  const double z0 = tau.z();
  for (std::size_t l = 1; l <= kGrid.k(); ++l) {
    tau = master_step(tau, c);
    EXPECT_LE(std::abs(tau.z() - z0), 1e-13);
  }
}

TEST(MasterStep, PreservesTraceWithoutRenormalizing) {
  for (ModelName n : {ModelName::spontaneous, ModelName::dispersive}) {
    const ModelCoefficients c = named_model(n, kGrid);
    AtomOperator tau = AtomOperator::identity() * 0.5;
    for (std::size_t l = 0; l < kGrid.k(); ++l) tau = tau + lindblad_adjoint(tau, c) * c.lambda * c.lambda;
    EXPECT_LE(std::abs(tau.trace() - cplx(1.0)), 1e-13);
  }
}

TEST(NamedModel, UnknownNameRejected) {
  EXPECT_THROW(named_model("laser", kGrid), DomainError);
  EXPECT_NO_THROW(named_model("spontaneous", kGrid));
}

TEST(NamedModel, ReconstructionIsUnitary) {
  for (ModelName n : {ModelName::spontaneous, ModelName::dispersive}) {
    EXPECT_LE(unitarity_defect(reconstruct_unitary(named_model(n, kGrid))), 1e-10);
  }
}

TEST(DensityMatrix, ValidationRejectsBadInputs) {
  EXPECT_THROW(DensityMatrix::from(AtomOperator::identity()), NotDensityError);
  EXPECT_THROW(DensityMatrix::from({1.5, 0.0, 0.0, -0.5}), NotDensityError);
  EXPECT_THROW(DensityMatrix::from({0.5, 0.1, 0.2, 0.5}), NotDensityError);
  EXPECT_NO_THROW(DensityMatrix::from({0.5, 0.5, 0.5, 0.5}));
}

}  // namespace
