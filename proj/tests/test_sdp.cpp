#include <gtest/gtest.h>

#include <cmath>

#include "entrolab/errors.hpp"
#include "entrolab/sdp.hpp"
#include "entrolab/states.hpp"
#include "test_util.hpp"

using namespace entrolab;
using namespace entrolab::testing;

namespace {

struct Dominance {
  sdp::Problem problem;
  int sigma = -1;
};

// min tr sigma s.t. I_da (x) sigma >= rho
Dominance dominance(const ComplexMatrix& rho, int da, int db) {
  Dominance d;
  d.sigma = d.problem.add_hermitian("sigma", db, false);
  sdp::MatrixExpression e(da * db);
  e.add_hermitian(d.sigma, 1.0, 0, da);
  e.add_constant(-rho);
  d.problem.add_psd("dominance", e);
  sdp::LinearForm obj;
  obj.add_trace(d.sigma, ComplexMatrix::Identity(db, db));
  d.problem.set_objective(sdp::Sense::Minimize, obj);
  return d;
}

}  // namespace

TEST(Sdp, DiagonalDominanceForcesSigma) {
  auto d = dominance(HermitianOperator::diagonal({1.0, 2.0}).matrix(), 1, 2);
  auto sol = sdp::solve(d.problem);
  ASSERT_EQ(sol.status, sdp::Status::Optimal);
  EXPECT_NEAR(sol.primal_objective, 3.0, 1e-7);
  EXPECT_LT(max_abs(sol.value(d.sigma) - HermitianOperator::diagonal({1.0, 2.0}).matrix()), 1e-6);
}

TEST(Sdp, ScalarBlockAgainstBell) {
  // min lambda s.t. lambda I/2 >= Bell: lambda = 2 lambda_max(Bell)
  sdp::Problem p;
  const int lam = p.add_scalar("lambda");
  sdp::MatrixExpression e(4);
  e.add_scalar(lam, ComplexMatrix::Identity(4, 4) / 2.0);
  e.add_constant(-make_bell().matrix());
  p.add_psd("dominance", e);
  sdp::LinearForm obj;
  obj.add_scalar(lam, 1.0);
  p.set_objective(sdp::Sense::Minimize, obj);
  auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::Optimal);
  const double oracle = 2.0 * reference_eigenvalues(make_bell().matrix()).maxCoeff();
  EXPECT_NEAR(sol.scalar(lam), oracle, 1e-7);
}

TEST(Sdp, BellDominanceOptimalSigmaIsIdentity) {
  auto d = dominance(make_bell().matrix(), 2, 2);
  auto sol = sdp::solve(d.problem);
  ASSERT_EQ(sol.status, sdp::Status::Optimal);
  EXPECT_NEAR(sol.primal_objective, 2.0, 1e-7);
  // closed form certificate tr(sqrt(rho_A)) sqrt(rho_B) = sqrt2 * I/sqrt2
  EXPECT_LT(max_abs(sol.value(d.sigma) - ComplexMatrix::Identity(2, 2)), 1e-6);
}

TEST(Sdp, RealEmbeddingAgrees) {
  Rng rng(21);
  for (int i = 0; i < 5; ++i) {
    auto rho = random_state(rng, {{"A", 2}, {"B", 3}});
    auto d = dominance(rho.matrix(), 2, 3);
    sdp::Options o;
    o.real_embedding = true;
    auto a = sdp::solve(d.problem), b = sdp::solve(d.problem, o);
    ASSERT_EQ(a.status, sdp::Status::Optimal);
    ASSERT_EQ(b.status, sdp::Status::Optimal);
    EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-7);
  }
}

TEST(Sdp, FeasibilityReportExamples) {
  // sigma = 0 against sigma >= I
  sdp::Problem p;
  const int s = p.add_hermitian("sigma", 2, false);
  sdp::MatrixExpression e(2);
  e.add_hermitian(s);
  e.add_constant(-ComplexMatrix::Identity(2, 2));
  p.add_psd("sigma >= I", e);
  sdp::LinearForm obj;
  obj.add_trace(s, ComplexMatrix::Identity(2, 2));
  p.set_objective(sdp::Sense::Minimize, obj);
  auto rep = sdp::check_feasibility(p, {ComplexMatrix::Zero(2, 2)});
  EXPECT_NEAR(rep.max_violation, 1.0, 1e-12);

  auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::Optimal);
  EXPECT_TRUE(sdp::check_feasibility(p, sol.values).feasible(1e-8));
}

TEST(Sdp, PureStateCertificateIsFeasible) {
  Rng rng(22);
  for (int i = 0; i < 10; ++i) {
    auto rho = random_pure_state(rng, {{"A", 2}, {"B", 3}});
    auto ra = partial_trace(rho, "A"), rb = partial_trace(rho, "B");
    const double t = psd_sqrt(ra.op()).trace();
    ComplexMatrix cert = t * psd_sqrt(rb.op()).matrix();
    auto d = dominance(rho.matrix(), 2, 3);
    EXPECT_TRUE(sdp::check_feasibility(d.problem, {cert}).feasible(1e-8));
  }
}

TEST(Sdp, InfeasibleDetected) {
  // X >= 0 with tr X = -1
  sdp::Problem p;
  const int x = p.add_hermitian("X", 2, true);
  sdp::LinearForm eq;
  eq.add_trace(x, ComplexMatrix::Identity(2, 2)).add_constant(1.0);
  p.add_equality("tr X = -1", eq);
  sdp::LinearForm obj;
  obj.add_trace(x, ComplexMatrix::Identity(2, 2));
  p.set_objective(sdp::Sense::Minimize, obj);
  EXPECT_EQ(sdp::solve(p).status, sdp::Status::Infeasible);
}

TEST(Sdp, UnboundedDetected) {
  // min tr sigma with only sigma free and no constraint besides sigma >= -I
  sdp::Problem p;
  const int s = p.add_hermitian("sigma", 2, false);
  sdp::MatrixExpression e(2);
  e.add_hermitian(s, -1.0);
  e.add_constant(ComplexMatrix::Identity(2, 2));
  p.add_psd("sigma <= I", e);
  sdp::LinearForm obj;
  obj.add_trace(s, ComplexMatrix::Identity(2, 2));
  p.set_objective(sdp::Sense::Minimize, obj);
  EXPECT_EQ(sdp::solve(p).status, sdp::Status::Unbounded);
}

TEST(Sdp, IllPosedProblems) {
  sdp::Problem p;
  p.add_hermitian("X", 2, true);
  EXPECT_THROW(sdp::solve(p), InputError);
  EXPECT_THROW(p.add_hermitian("Y", 0, true), InputError);
}

TEST(Sdp, DimensionCap) {
  Rng rng(23);
  auto rho = random_state(rng, {{"A", 2}, {"B", 2}});
  auto d = dominance(rho.matrix(), 2, 2);
  sdp::Options o;
  o.max_total_dimension = 3;
  EXPECT_THROW(sdp::solve(d.problem, o), DimensionError);
}

TEST(Sdp, WeakDualityAndGap) {
  Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    auto rho = random_state(rng, {{"A", 2}, {"B", 2}});
    auto sol = sdp::solve(dominance(rho.matrix(), 2, 2).problem);
    ASSERT_EQ(sol.status, sdp::Status::Optimal);
    EXPECT_LE(sol.dual_objective, sol.primal_objective + 1e-9);
    EXPECT_LE(sol.relative_gap, 1e-8);
  }
}

TEST(Sdp, BasisRotationInvariance) {
  Rng rng(25);
  for (int i = 0; i < 10; ++i) {
    auto rho = random_state(rng, {{"A", 2}, {"B", 3}});
    ComplexMatrix u = kron(random_unitary(rng, 2), random_unitary(rng, 3));
    auto a = sdp::solve(dominance(rho.matrix(), 2, 3).problem);
    auto b = sdp::solve(dominance(u * rho.matrix() * u.adjoint(), 2, 3).problem);
    EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-6);
  }
}

TEST(Sdp, ScalingOfDominanceRhs) {
  Rng rng(26);
  auto rho = random_state(rng, {{"A", 2}, {"B", 2}});
  const double base = sdp::solve(dominance(rho.matrix(), 2, 2).problem).primal_objective;
  for (double c : {0.1, 0.5, 3.0}) {
    const double scaled = sdp::solve(dominance(c * rho.matrix(), 2, 2).problem).primal_objective;
    EXPECT_NEAR(scaled, c * base, 1e-7 * std::max(1.0, c));
  }
}

TEST(Sdp, MaximizeSenseAndEqualities) {
  // max tr(C X) s.t. X >= 0, tr X = 1 gives lambda_max(C)
  Rng rng(27);
  HermitianOperator c = random_hermitian(rng, 4);
  sdp::Problem p;
  const int x = p.add_hermitian("X", 4, true);
  sdp::LinearForm eq;
  eq.add_trace(x, ComplexMatrix::Identity(4, 4)).add_constant(-1.0);
  p.add_equality("tr X = 1", eq);
  sdp::LinearForm obj;
  obj.add_trace(x, c.matrix());
  p.set_objective(sdp::Sense::Maximize, obj);
  auto sol = sdp::solve(p);
  ASSERT_EQ(sol.status, sdp::Status::Optimal);
  EXPECT_NEAR(sol.primal_objective, reference_eigenvalues(c.matrix()).maxCoeff(), 1e-7);
  EXPECT_GE(sol.dual_objective, sol.primal_objective - 1e-9);
}

TEST(Sdp, DumpJsonMentionsBlocks) {
  auto d = dominance(make_bell().matrix(), 2, 2);
  const std::string s = sdp::dump_json(d.problem.compile());
  EXPECT_NE(s.find("blocks"), std::string::npos);
}
