#include <gtest/gtest.h>

#include <cmath>

#include "entrolab/density.hpp"
#include "entrolab/errors.hpp"
#include "entrolab/linalg.hpp"
#include "entrolab/states.hpp"
#include "test_util.hpp"

using namespace entrolab;
using namespace entrolab::testing;

TEST(Eig, IdentityHasUnitEigenvalues) {
  auto s = eig_hermitian(HermitianOperator::identity(2));
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 1.0, 1e-15);
}

TEST(Eig, PauliZSortedDescending) {
  auto s = eig_hermitian(HermitianOperator::diagonal({-1.0, 1.0}));
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), 1.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), -1.0);
}

TEST(Eig, RandomReconstructionAndReferenceSpectrum) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    HermitianOperator m = random_hermitian(rng, 6);
    auto s = eig_hermitian(m);
    EXPECT_LT(max_abs(s.reconstruct() - m.matrix()), 1e-10);
    EXPECT_LT(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(6, 6)), 1e-12);
    Eigen::VectorXd ref = reference_eigenvalues(m.matrix());
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.eigenvalues(i), ref(5 - i), 1e-10);
  }
}

TEST(Eig, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(HermitianOperator{m}, InputError);
}

TEST(PsdSqrt, SimpleCases) {
  EXPECT_LT(max_abs(psd_sqrt(HermitianOperator::identity(3)).matrix() - ComplexMatrix::Identity(3, 3)), 1e-14);
  auto r = psd_sqrt(HermitianOperator::diagonal({4.0, 1.0}));
  EXPECT_NEAR(r.matrix()(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(r.matrix()(1, 1).real(), 1.0, 1e-14);
  auto h = psd_sqrt(HermitianOperator::identity(2) * 0.5);
  EXPECT_NEAR(h.matrix()(0, 0).real(), M_SQRT1_2, 1e-14);
}

TEST(PsdSqrt, ClipsTinyNegativeRejectsLarge) {
  EXPECT_NO_THROW(psd_sqrt(HermitianOperator::diagonal({1.0, -5e-10})));
  EXPECT_THROW(psd_sqrt(HermitianOperator::diagonal({1.0, -1e-6})), InputError);
}

TEST(PsdSqrt, SquaresBackUpToDim64) {
  Rng rng(3);
  for (int d : {2, 7, 16, 64}) {
    DensityOperator rho = random_state(rng, {{"A", d}});
    HermitianOperator r = psd_sqrt(rho.op());
    const double scale = rho.matrix().norm();
    EXPECT_LT((r.matrix() * r.matrix() - rho.matrix()).norm(), 1e-9 * scale) << "d=" << d;
  }
}

TEST(Norms, Examples) {
  auto a = norms(HermitianOperator::diagonal({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(a.trace_norm, 1.0);
  EXPECT_DOUBLE_EQ(a.operator_norm, 0.5);
  auto b = norms(HermitianOperator::diagonal({1.0, -1.0}));
  EXPECT_DOUBLE_EQ(b.trace_norm, 2.0);
  EXPECT_DOUBLE_EQ(b.operator_norm, 1.0);
  auto c = norms(partial_trace(make_bell(), "A").op());
  EXPECT_NEAR(c.trace_norm, 1.0, 1e-14);
  EXPECT_NEAR(c.operator_norm, 0.5, 1e-14);
}

TEST(Norms, TraceNormIsAbsoluteEigenvalueSum) {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    HermitianOperator m = random_hermitian(rng, 5);
    auto s = eig_hermitian(m);
    auto n = norms(m);
    EXPECT_NEAR(n.trace_norm, s.eigenvalues.cwiseAbs().sum(), 1e-12);
    EXPECT_GE(n.trace_norm, n.operator_norm);
    EXPECT_NEAR(n.trace_norm, nuclear_norm(m.matrix()), 1e-10);
  }
}

TEST(Tensor, Examples) {
  auto i4 = tensor(HermitianOperator::identity(2), HermitianOperator::identity(2));
  EXPECT_LT(max_abs(i4.matrix() - ComplexMatrix::Identity(4, 4)), 1e-15);
  auto d = tensor(HermitianOperator::diagonal({1, 0}), HermitianOperator::diagonal({0, 1}));
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(1, 1) = 1.0;
  EXPECT_LT(max_abs(d.matrix() - expect), 1e-15);
}

TEST(Tensor, TraceIsMultiplicative) {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    auto a = random_hermitian(rng, 3), b = random_hermitian(rng, 4);
    EXPECT_NEAR(tensor(a, b).trace(), a.trace() * b.trace(), 1e-12);
  }
}

TEST(Tensor, SlowIndexIsFirstFactor) {
  Rng rng(9);
  auto a = random_hermitian(rng, 2), b = random_hermitian(rng, 3);
  auto t = tensor(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          EXPECT_NEAR(std::abs(t.matrix()(i * 3 + k, j * 3 + l) - a.matrix()(i, j) * b.matrix()(k, l)), 0.0, 1e-15);
}

TEST(Tensor, DimensionCap) {
  EXPECT_THROW(check_dimension(5000, "test"), DimensionError);
  EXPECT_NO_THROW(check_dimension(4096, "test"));
}

TEST(PartialTrace, BellReducesToMaximallyMixed) {
  auto a = partial_trace(make_bell(), "A");
  EXPECT_LT(max_abs(a.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(PartialTrace, ProductState) {
  Rng rng(12);
  auto ra = random_state(rng, {{"A", 2}});
  auto sb = random_state(rng, {{"B", 3}}).scaled(0.6);
  auto r = partial_trace(product(ra, sb), "A");
  EXPECT_LT(max_abs(r.matrix() - ra.matrix() * 0.6), 1e-14);
}

TEST(PartialTrace, ChainedTracesGiveTotalTrace) {
  Rng rng(13);
  auto rho = random_state(rng, {{"A", 3}, {"B", 2}}).scaled(0.7);
  auto a = partial_trace(rho, "A");
  ComplexMatrix one = partial_trace(a.matrix(), {3}, {});
  ASSERT_EQ(one.rows(), 1);
  EXPECT_NEAR(one(0, 0).real(), 0.7, 1e-14);
}

TEST(PartialTrace, UnknownLabel) { EXPECT_THROW(partial_trace(make_bell(), "Q"), InputError); }

TEST(Fidelity, Examples) {
  Rng rng(14);
  auto rho = random_state(rng, {{"A", 3}});
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-9);
  const double overlap = std::abs(ket0().dot(ket_plus()));
  EXPECT_NEAR(fidelity(qubit(ket0()), qubit(ket_plus())), overlap, 1e-9);
  EXPECT_NEAR(fidelity(qubit(ket0()), qubit(ket1())), 0.0, 1e-9);
}

TEST(Fidelity, SymmetricAndTraceOnDiagonal) {
  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    auto a = random_state(rng, {{"A", 3}}), b = random_state(rng, {{"A", 3}}).scaled(0.4);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-9);
    EXPECT_NEAR(fidelity(b, b), 0.4, 1e-9);
  }
}

TEST(Fidelity, MonotoneUnderPartialTrace) {
  Rng rng(16);
  for (int i = 0; i < 20; ++i) {
    auto a = random_state(rng, {{"A", 2}, {"B", 3}}), b = random_state(rng, {{"A", 2}, {"B", 3}});
    EXPECT_LE(fidelity(a, b), fidelity(partial_trace(a, "A"), partial_trace(b, "A")) + 1e-9);
  }
}

TEST(Fidelity, DimensionMismatch) {
  EXPECT_THROW(fidelity(make_bell(), qubit(ket0())), DimensionError);
}

TEST(Purify, PureStateGetsRankOnePurifier) {
  auto rho = qubit(ket_plus());
  auto p = purify(rho);
  EXPECT_EQ(p.purifier_dim, 1);
  EXPECT_LT(max_abs(partial_trace(p.state(), "A").matrix() - rho.matrix()), 1e-12);
}

TEST(Purify, MaximallyMixedGivesEqualSchmidtCoefficients) {
  DensityOperator half(HermitianOperator::identity(2) * 0.5, {{"A", 2}});
  auto p = purify(half);
  ASSERT_EQ(p.purifier_dim, 2);
  auto s = schmidt(p.vector, 2, 2);
  EXPECT_NEAR(s(0), M_SQRT1_2, 1e-12);
  EXPECT_NEAR(s(1), M_SQRT1_2, 1e-12);
}

TEST(Purify, RankThreeRoundTrip) {
  Rng rng(17);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 3; ++k) {
    ComplexVector v = random_pure_vector(rng, 4);
    m += (k + 1) / 6.0 * v * v.adjoint();
  }
  DensityOperator rho(HermitianOperator(0.5 * (m + m.adjoint())), {{"A", 4}});
  auto p = purify(rho);
  EXPECT_EQ(p.purifier_dim, 3);
  EXPECT_LT(max_abs(partial_trace(p.state(), "A").matrix() - rho.matrix()), 1e-10);
}

TEST(Purify, RoundTripUpToDim32AndSubnormalized) {
  Rng rng(18);
  for (int d : {2, 5, 12, 32}) {
    auto rho = random_state(rng, {{"A", d}}).scaled(0.8);
    auto p = purify(rho);
    EXPECT_LT(max_abs(partial_trace(p.state(), "A").matrix() - rho.matrix()), 1e-9) << "d=" << d;
    EXPECT_NEAR(p.vector.squaredNorm(), 0.8, 1e-12);
  }
}
