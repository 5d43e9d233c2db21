#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "qdlab/qcore.hpp"
#include "random_states.hpp"

using namespace qdlab;
using qdlab::testing::Rng;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Pauli, StandardMatrices) {
  ComplexMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  EXPECT_LT(max_abs(pauli(3) - z), 1e-15);
  EXPECT_LT(max_abs(pauli(1) * pauli(1) - identity(2)), 1e-15);
  EXPECT_LT(std::abs(pauli(2).trace()), 1e-15);
  EXPECT_THROW(pauli(0), std::out_of_range);
  EXPECT_THROW(pauli(4), std::out_of_range);
}

TEST(Pauli, CommutationRelation) {
  const Complex i(0.0, 1.0);
  EXPECT_LT(max_abs(pauli(1) * pauli(2) - pauli(2) * pauli(1) - 2.0 * i * pauli(3)), 1e-15);
}

TEST(Tensor, IdentityAndSpectrum) {
  EXPECT_LT(max_abs(tensor(identity(2), identity(2)) - identity(4)), 1e-15);
  const Spectrum s = eigendecompose(tensor(pauli(3), identity(2)));
  const std::vector<double> expected{1, 1, -1, -1};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(s.values[k], expected[k], 1e-12);
}

TEST(Tensor, XXSwapsBasisPairs) {
  const ComplexMatrix xx = tensor(pauli(1), pauli(1));
  // |00>↔|11>, |01>↔|10>
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 3) = expected(3, 0) = expected(1, 2) = expected(2, 1) = 1.0;
  EXPECT_LT(max_abs(xx - expected), 1e-15);
}

TEST(Tensor, Bilinear) {
  Rng rng(11);
  const ComplexMatrix a = qdlab::testing::random_hermitian(rng, 2);
  const ComplexMatrix b = qdlab::testing::random_hermitian(rng, 3);
  const ComplexMatrix c = qdlab::testing::random_hermitian(rng, 2);
  EXPECT_LT(max_abs(tensor(a + 2.0 * c, b) - tensor(a, b) - 2.0 * tensor(c, b)), 1e-12);
  EXPECT_EQ(tensor(a, b).rows(), 6);
}

TEST(DensityMatrixTest, RejectsNonPhysical) {
  ComplexMatrix bad_trace = identity(4) / 2.0;
  EXPECT_THROW(DensityMatrix{bad_trace}, PhysicsError);
  ComplexMatrix negative = ComplexMatrix::Zero(4, 4);
  negative.diagonal() << 1.2, -0.2, 0.0, 0.0;
  EXPECT_THROW(DensityMatrix{negative}, PhysicsError);
  ComplexMatrix nonherm = identity(4) / 4.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{nonherm}, PhysicsError);
  EXPECT_THROW(DensityMatrix(identity(4) / 4.0, {2, 3}), std::invalid_argument);
}

TEST(DensityMatrixTest, AcceptsTinyRoundoff) {
  ComplexMatrix m = identity(4) / 4.0;
  m(0, 0) += 5e-11;
  m(1, 1) -= 5e-11;
  m(0, 1) = Complex(0.0, 1e-12);
  m(1, 0) = Complex(0.0, -1e-12);
  EXPECT_NO_THROW(DensityMatrix{m});
}

TEST(PartialTrace, ProductAndBell) {
  Rng rng(3);
  const DensityMatrix ra(qdlab::testing::random_density_matrix(rng, 2, 2), {2});
  const DensityMatrix rb(qdlab::testing::random_density_matrix(rng, 2, 2), {2});
  const DensityMatrix ab = tensor(ra, rb);
  EXPECT_LT(max_abs(partial_trace(ab, 0).matrix() - ra.matrix()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(ab, 1).matrix() - rb.matrix()), 1e-12);

  const auto phi = DensityMatrix::pure(qdlab::testing::bell_phi_plus(), {2, 2});
  EXPECT_LT(max_abs(partial_trace(phi, 0).matrix() - identity(2) / 2.0), 1e-15);
  EXPECT_THROW(partial_trace(phi, 2), std::out_of_range);
}

TEST(PartialTrace, BellDiagonalMarginalsAreMaximallyMixed) {
  const ComplexMatrix bd =
      (identity(4) + 0.06 * tensor(pauli(1), pauli(1)) + 0.3 * tensor(pauli(2), pauli(2)) +
       0.33 * tensor(pauli(3), pauli(3))) /
      4.0;
  const DensityMatrix rho(bd);
  for (int side : {0, 1}) {
    EXPECT_LT(max_abs(partial_trace(rho, side).matrix() - identity(2) / 2.0), 1e-15);
  }
}

TEST(PartialTrace, UnequalDims) {
  Rng rng(5);
  const ComplexMatrix a = qdlab::testing::random_density_matrix(rng, 3, 3);
  const ComplexMatrix b = qdlab::testing::random_density_matrix(rng, 2, 2);
  const std::array<int, 2> dims{3, 2};
  EXPECT_LT(max_abs(partial_trace(tensor(a, b), dims, 0) - a), 1e-12);
  EXPECT_LT(max_abs(partial_trace(tensor(a, b), dims, 1) - b), 1e-12);
}

TEST(Entropy, KnownValues) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(2) = 1.0;
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(psi, {2, 2})), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed({2, 2})), 2.0, 1e-12);
  ComplexMatrix half = ComplexMatrix::Zero(4, 4);
  half(0, 0) = half(1, 1) = 0.5;
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(half)), 1.0, 1e-12);
}

TEST(Entropy, ShannonAndBinary) {
  const std::vector<double> p{0.5, 0.25, 0.25, 0.0};
  EXPECT_NEAR(shannon_entropy(p), 1.5, 1e-15);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
}

TEST(Entropy, ClipsRoundoffRejectsNegative) {
  const std::vector<double> tiny{1.0 + 1e-10, -1e-10};
  EXPECT_NEAR(entropy_of_spectrum(tiny), 0.0, 1e-8);
  const std::vector<double> bad{1.1, -0.1};
  EXPECT_THROW(entropy_of_spectrum(bad), PhysicsError);
}

TEST(Entropy, UnitaryInvariance) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix rho = qdlab::testing::random_density_matrix(rng);
    const ComplexMatrix u = qdlab::testing::random_unitary(rng, 4);
    const double s0 = von_neumann_entropy(DensityMatrix(rho));
    const double s1 = von_neumann_entropy(DensityMatrix(u * rho * u.adjoint()));
    EXPECT_NEAR(s0, s1, tol::num);
  }
}

TEST(Eigendecompose, SortedAndReconstructs) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  const Spectrum s = eigendecompose(d);
  EXPECT_NEAR(s.values[0], 3.0, 1e-15);
  EXPECT_NEAR(s.values[1], 1.0, 1e-15);
  const Spectrum sx = eigendecompose(pauli(1));
  EXPECT_NEAR(sx.values[0], 1.0, 1e-15);
  EXPECT_NEAR(sx.values[1], -1.0, 1e-15);

  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix h = qdlab::testing::random_hermitian(rng, 4);
    const Spectrum sp = eigendecompose(h);
    for (std::size_t k = 1; k < sp.values.size(); ++k) {
      ASSERT_GE(sp.values[k - 1], sp.values[k]);
    }
    Eigen::VectorXd lam(4);
    for (int k = 0; k < 4; ++k) lam(k) = sp.values[k];
    const ComplexMatrix rec = sp.vectors * lam.cast<Complex>().asDiagonal() * sp.vectors.adjoint();
    ASSERT_LT(max_abs(rec - h), tol::num);
  }
}

TEST(Eigendecompose, BellDiagonalSpectrumIsPhysical) {
  const ComplexMatrix bd =
      (identity(4) + 0.06 * tensor(pauli(1), pauli(1)) + 0.3 * tensor(pauli(2), pauli(2)) +
       0.33 * tensor(pauli(3), pauli(3))) /
      4.0;
  const Spectrum s = eigendecompose(bd);
  double sum = 0.0;
  for (double v : s.values) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Eigendecompose, RejectsNonHermitian) {
  ComplexMatrix m = identity(2);
  m(0, 1) = 1.0;
  EXPECT_THROW(eigendecompose(m), std::invalid_argument);
}

TEST(DeviationMatrixTest, Validation) {
  const ComplexMatrix zz = tensor(pauli(3), pauli(3)) / 4.0;
  EXPECT_NO_THROW(DeviationMatrix(zz, 1e-5));
  EXPECT_THROW(DeviationMatrix(identity(4), 1e-5), PhysicsError);  // not traceless
  EXPECT_THROW(DeviationMatrix(zz, 0.0), std::invalid_argument);
  EXPECT_THROW(DeviationMatrix(zz * 10.0, 0.5), PhysicsError);  // I/4 + εΔ not positive
}

TEST(DeviationMatrixTest, StateRoundTrip) {
  Rng rng(29);
  const DeviationMatrix d = qdlab::testing::random_deviation(rng, 1e-3);
  const DensityMatrix rho = d.state();
  const DeviationMatrix back = DeviationMatrix::from_state(rho, 1e-3);
  EXPECT_LT(max_abs(back.matrix() - d.matrix()), 1e-10);
}

TEST(PauliComponentsTest, RoundTripAndConvention) {
  Rng rng(31);
  const ComplexMatrix m = qdlab::testing::random_hermitian(rng, 4);
  const PauliComponents pc = pauli_components(m);
  EXPECT_LT(max_abs(from_pauli_components(pc) - m), 1e-12);
  const PauliComponents zz = pauli_components(tensor(pauli(3), pauli(3)));
  EXPECT_NEAR(zz.t(2, 2), 4.0, 1e-15);
  EXPECT_NEAR(zz.t(0, 0), 0.0, 1e-15);
  const PauliComponents xa = pauli_components(tensor(pauli(1), identity(2)) / 4.0);
  EXPECT_NEAR(xa.a(0), 1.0, 1e-15);
}

TEST(SpinOperatorsTest, HalfAndThreeHalves) {
  const SpinOperators s12 = spin_operators(0.5);
  EXPECT_LT(max_abs(s12.iz - pauli(3) / 2.0), 1e-15);
  const SpinOperators s32 = spin_operators(1.5);
  const std::array<double, 4> m{1.5, 0.5, -0.5, -1.5};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(s32.iz(k, k).real(), m[k], 1e-15);
  const Complex i(0.0, 1.0);
  for (const auto* s : {&s12, &s32}) {
    EXPECT_LT(max_abs(s->ix * s->iy - s->iy * s->ix - i * s->iz), tol::num);
    const double ss = s->spin * (s->spin + 1.0);
    EXPECT_LT(max_abs(s->isq - ss * identity(static_cast<int>(s->isq.rows()))), tol::num);
  }
  EXPECT_THROW(spin_operators(1.0), std::invalid_argument);
}
