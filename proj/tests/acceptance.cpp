// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "entrolab/aep.hpp"
#include "entrolab/entropies.hpp"
#include "entrolab/operational.hpp"
#include "entrolab/sdp.hpp"
#include "entrolab/smoothing.hpp"
#include "entrolab/states.hpp"

using namespace entrolab;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void near(double a, double b, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %.10g vs %.10g (tol %g)", what.c_str(), a, b, tol);
    expect(std::abs(a - b) <= tol, buf);
  }
  void le(double a, double b, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %.10g > %.10g (tol %g)", what.c_str(), a, b, tol);
    expect(a <= b + tol, buf);
  }
};

double hmin(const DensityOperator& r) { return h_min_cond(r).value.value(); }
double hmax(const DensityOperator& r) { return h_max_cond(r).value.value(); }

// eigenvalues through Eigen, independent of the library's Jacobi routine
Eigen::VectorXd spectrum(const ComplexMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

DensityOperator reduced(const DensityOperator& r, const std::string& keep) { return partial_trace(r, keep); }

DensityOperator ab_given_c(const DensityOperator& abc) { return regroup(abc, {"A"}, {"B", "C"}); }
DensityOperator ab_only(const DensityOperator& abc) { return partial_trace(abc, std::vector<std::string>{"A", "B"}); }

Check criterion1() {
  Check c;
  const auto bell = make_bell();
  const Eigen::VectorXd lb = spectrum(reduced(bell, "B").matrix());
  const double closed_min = -2.0 * std::log2(lb.cwiseMax(0.0).cwiseSqrt().sum());
  const double closed_max = std::log2(lb.maxCoeff());
  c.near(closed_min, -1.0, 1e-12, "closed-form h_min");
  c.near(closed_max, -1.0, 1e-12, "closed-form h_max");
  c.near(hmin(bell), -1.0, 1e-6, "sdp h_min");
  c.near(hmax(bell), -1.0, 1e-6, "sdp h_max");
  c.near(h_max_cond_direct(bell).value.value(), -1.0, 1e-6, "direct sdp h_max");
  c.near(h_min_pure(bell).value.value(), -1.0, 1e-6, "eigen h_min");
  c.near(h_max_pure(bell).value.value(), -1.0, 1e-6, "eigen h_max");
  return c;
}

Check criterion2() {
  Check c;
  double last = -1.0;
  for (int n : {2, 4, 16, 256}) {
    const auto rho = make_discontinuity(n);
    const double formula = 2.0 * std::log2(std::sqrt(1.0 - 1.0 / n) + 1.0);
    const double h = h_uncond(rho).h_max;
    c.near(h, formula, 1e-9, "h_max n=" + std::to_string(n));
    c.expect(h > last && h < 2.0, "h_max not increasing towards 2");
    last = h;
    ComplexMatrix diff = rho.matrix();
    diff(0, 0) -= 1.0;
    c.near(spectrum(diff).cwiseAbs().sum(), 2.0 / n, 1e-12, "trace distance n=" + std::to_string(n));
  }
  c.near(last, 2.0, 0.01, "h_max at n=256 near the limit");
  return c;
}

Check criterion3() {
  Check c;
  std::vector<int> levels;
  for (int k = 2; k <= 12; ++k) levels.push_back(k);
  const auto tms = make_two_mode_squeezed(1.0, 12);
  LadderOptions o;
  o.verify_scaling = false;
  const auto rep = ladder_convergence(tms, TruncationLadder(levels), LadderQuantity::HMin, o);
  double last = 0.0;
  for (const auto& lv : rep.levels) {
    c.expect(lv.lambda_projected.has_value(), "missing Lambda");
    if (!lv.lambda_projected) continue;
    c.le(last, *lv.lambda_projected, 1e-7, "Lambda nondecreasing at K=" + std::to_string(lv.level));
    last = *lv.lambda_projected;
  }
  const double limit = -2.0 / std::log(2.0);
  c.near(rep.levels.back().h_projected.value(), limit, 0.02, "h_min at K=12 vs -2/ln2");
  return c;
}

Check criterion4() {
  Check c;
  Rng rng(4001);
  const double tol = 1e-5;
  for (int i = 0; i < 220; ++i) {
    const int db = i < 200 ? 2 : 3;
    const auto rho = random_state(rng, {{"A", 2}, {"B", db}});
    const double lo = hmin(rho), hi = hmax(rho), vn = cond_von_neumann(rho);
    c.le(lo, vn, tol, "h_min <= H");
    c.le(vn, hi, tol, "H <= h_max");
  }
  for (int i = 0; i < 50; ++i) {
    const auto a = random_state(rng, {{"A", 2}, {"B", 2}});
    const auto b = random_state(rng, {{"A", 2}, {"B", 2}});
    const auto ab = tensor_bipartite(a, b);
    c.near(hmin(ab), hmin(a) + hmin(b), tol, "h_min additivity");
    c.near(hmax(ab), hmax(a) + hmax(b), tol, "h_max additivity");
  }
  for (int i = 0; i < 50; ++i) {
    const auto abc = random_state(rng, {{"A", 2}, {"B", 2}, {"C", 2}});
    c.le(hmin(ab_given_c(abc)), hmin(ab_only(abc)), tol, "h_min data processing");
    c.le(hmax(ab_given_c(abc)), hmax(ab_only(abc)), tol, "h_max data processing");
  }
  return c;
}

Check criterion5() {
  Check c;
  Rng rng(5001);
  for (int i = 0; i < 50; ++i) {
    const auto rho = random_state(rng, {{"A", 2}, {"B", 2 + i % 2}});
    c.near(std::log2(decoupling_accuracy(rho).value), hmax(rho), 1e-5, "log d vs h_max");
    c.near(std::log2(quantum_correlation(rho).value), -hmin(rho), 1e-5, "log q vs -h_min");
  }
  for (int i = 0; i < 20; ++i) {
    const auto cq = random_cq_state(rng, 2, 2);
    const double g = guessing_probability(cq).value;
    c.near(g, std::exp2(-hmin(cq)), 1e-5, "g vs 2^-h_min");
    // binary discrimination oracle: (1 + ||p0 rho0 - p1 rho1||_1) / 2
    const auto ens = split_cq(cq);
    const auto& m = ens.members();
    ComplexMatrix diff = m[0].probability * m[0].state.matrix() - m[1].probability * m[1].state.matrix();
    const double oracle = 0.5 * (1.0 + spectrum(diff).cwiseAbs().sum());
    c.near(g, oracle, 1e-6, "g vs Helstrom oracle");
    c.near(helstrom_binary(ens), oracle, 1e-9, "library Helstrom vs oracle");
  }
  return c;
}

Check criterion6() {
  Check c;
  Rng rng(6001);
  const std::vector<double> eps{0.01, 0.05, 0.1, 0.2};
  for (int i = 0; i < 10; ++i) {
    const auto rho = random_state(rng, {{"A", 2}, {"B", 2}});
    c.near(h_min_smooth(rho, 0.0).value.value(), hmin(rho), 1e-6, "eps=0 h_min");
    c.near(h_max_smooth(rho, 0.0).value.value(), hmax(rho), 1e-6, "eps=0 h_max");
    double lo = hmin(rho), hi = hmax(rho);
    for (double e : eps) {
      const double a = h_min_smooth(rho, e).value.value(), b = h_max_smooth(rho, e).value.value();
      c.le(lo, a, 1e-6, "smooth h_min nondecreasing in eps");
      c.le(b, hi, 1e-6, "smooth h_max nonincreasing in eps");
      lo = a;
      hi = b;
    }
    const auto psi = purify(rho, "C");
    const auto rac = partial_trace(psi.state(), std::vector<std::string>{"A", "C"});
    c.near(h_min_smooth(rho, 0.05).value.value(), -h_max_smooth(rac, 0.05).value.value(), 1e-5, "smooth duality");
  }
  for (int i = 0; i < 20; ++i) {
    const auto abc = random_state(rng, {{"A", 2}, {"B", 2}, {"C", 2}});
    c.le(h_min_smooth(ab_given_c(abc), 0.05).value.value(), h_min_smooth(ab_only(abc), 0.05).value.value(), 1e-5,
         "smooth h_min data processing");
    c.le(h_max_smooth(ab_given_c(abc), 0.05).value.value(), h_max_smooth(ab_only(abc), 0.05).value.value(), 1e-5,
         "smooth h_max data processing");
  }
  return c;
}

Check criterion7() {
  Check c;
  const double eps = 0.05, slack = 1e-5;
  const auto sweep = aep_sweep(make_bell(), {1, 2, 3}, eps);
  double width = 1e300;
  for (const auto& r : sweep) {
    const std::string n = " n=" + std::to_string(r.n);
    c.expect(r.measured_min_rate.has_value(), "no measured rate" + n);
    if (!r.measured_min_rate) continue;
    // ceiling recomputed here: vn + 16 eps log d_A + (4/n) H_bin(4 eps)
    const double x = 4.0 * eps;
    const double hb = -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
    const double ceiling = -1.0 + 16.0 * eps * 1.0 + 4.0 / r.n * hb;
    c.le(r.lower_bound, *r.measured_min_rate, slack, "rate above lower bound" + n);
    c.le(*r.measured_min_rate, ceiling, slack, "rate below ceiling" + n);
    c.le(*r.measured_min_rate, r.upper_bound, slack, "rate below upper bound" + n);
    const double w = r.upper_bound - r.lower_bound;
    c.expect(w < width, "bracket width not shrinking" + n);
    width = w;
  }
  return c;
}

Check criterion8() {
  Check c;
  Rng rng(8001);
  const int shapes[][2] = {{2, 2}, {2, 3}, {3, 2}, {1, 4}, {3, 3}};
  for (int i = 0; i < 100; ++i) {
    const int da = shapes[i % 5][0], db = shapes[i % 5][1];
    const auto rho = random_state(rng, {{"A", da}, {"B", db}});
    auto build = [&](const ComplexMatrix& m) {
      sdp::Problem p;
      const int s = p.add_hermitian("sigma", db, false);
      sdp::MatrixExpression e(da * db);
      e.add_hermitian(s, 1.0, 0, da);
      e.add_constant(-m);
      p.add_psd("dominance", e);
      sdp::LinearForm obj;
      obj.add_trace(s, ComplexMatrix::Identity(db, db));
      p.set_objective(sdp::Sense::Minimize, obj);
      return p;
    };
    const auto a = sdp::solve(build(rho.matrix()));
    const ComplexMatrix u = kron(random_unitary(rng, da), random_unitary(rng, db));
    const auto b = sdp::solve(build(u * rho.matrix() * u.adjoint()));
    c.expect(a.status == sdp::Status::Optimal && b.status == sdp::Status::Optimal,
             "non-optimal status on instance " + std::to_string(i));
    c.le(a.dual_objective, a.primal_objective, 1e-12, "weak duality");
    c.le(b.dual_objective, b.primal_objective, 1e-12, "weak duality (rotated)");
    c.le(a.relative_gap, 1e-8, 0.0, "relative gap");
    c.le(b.relative_gap, 1e-8, 0.0, "relative gap (rotated)");
    c.near(a.primal_objective, b.primal_objective, 1e-6, "rotation invariance");
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Check()> run;
  };
  const std::vector<Criterion> all{
      {1, "pure-state closed forms", 1.0, criterion1},
      {2, "discontinuity example", 1.0, criterion2},
      {3, "truncation ladder", 30.0, criterion3},
      {4, "property suites", 300.0, criterion4},
      {5, "operational equalities", 600.0, criterion5},
      {6, "smoothing", 900.0, criterion6},
      {7, "AEP desk scale", 1200.0, criterion7},
      {8, "solver health", 120.0, criterion8},
  };
  int failed = 0;
  for (const auto& cr : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.ok && secs > cr.limit_s) {
      c.ok = false;
      c.detail = "runtime over the limit of " + std::to_string(static_cast<int>(cr.limit_s)) + " s";
    }
    std::printf("%s criterion %d (%s) %.2fs%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                c.ok ? "" : ": ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
