#include "entrolab/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entrolab/errors.hpp"
#include "entrolab/operational.hpp"
#include "entrolab/parallel.hpp"

namespace entrolab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

int dim_a(const DensityOperator& r) { return r.subsystems()[0].dim; }
int dim_b(const DensityOperator& r) { return r.subsystems()[1].dim; }

std::string free_label(const DensityOperator& rho) {
  for (const char* l : {"C", "R", "E", "P"})
    if (!rho.has(l)) return l;
  throw InputError("no free label for a purifying system");
}

// Lambda(rho|B) and the optimal sigma~.
EntropyReport dominance_sdp(const DensityOperator& rho_ab, const sdp::Options& options) {
  const DensityOperator r = as_bipartite(rho_ab);
  const int da = dim_a(r), db = dim_b(r);
  sdp::Problem p;
  const int s = p.add_hermitian("sigma", db, false);
  sdp::MatrixExpression dom(da * db);
  dom.add_hermitian(s, 1.0, 0, da);
  dom.add_constant(-r.matrix());
  p.add_psd("I (x) sigma - rho", dom);
  sdp::LinearForm obj;
  obj.add_trace(s, ComplexMatrix::Identity(db, db));
  p.set_objective(sdp::Sense::Minimize, obj);

  sdp::Solution sol = solve_checked(p, options, "conditional min-entropy");
  EntropyReport rep;
  const double lam = sol.primal_objective;
  if (!(lam > 0.0)) throw SolverError("conditional min-entropy: non-positive optimal value");
  rep.lambda = lam;
  rep.value = ExtendedReal::finite(-std::log2(lam));
  const ComplexMatrix& sv = sol.value(s);
  rep.certificate = HermitianOperator::from_trusted(0.5 * (sv + sv.adjoint()));
  rep.method = Method::Sdp;
  rep.diagnostics = make_diagnostics(sol, options);
  return rep;
}

double log2_trace_sqrt(const SpectralDecomposition& s) {
  double t = 0.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) t += std::sqrt(std::max(0.0, s.eigenvalues(i)));
  return std::log2(t);
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Eigen: return "eigen";
    case Method::Sdp: return "sdp";
    case Method::ClosedForm: return "closed_form";
    case Method::Dual: return "dual";
  }
  return "unknown";
}

EntropyReport h_min_given_sigma(const DensityOperator& rho_ab, const HermitianOperator& sigma_b) {
  const DensityOperator r = as_bipartite(rho_ab);
  const int da = dim_a(r), db = dim_b(r);
  if (sigma_b.dim() != db) throw DimensionError("sigma_B does not match the dimension of B");
  SpectralDecomposition s = eig_hermitian(sigma_b);
  if (s.eigenvalues(db - 1) < -kPsdTolerance) throw InputError("sigma_B is not positive semidefinite");

  std::vector<int> support;
  for (int k = 0; k < db; ++k)
    if (s.eigenvalues(k) > kSupportTolerance) support.push_back(k);

  EntropyReport rep;
  rep.method = Method::Eigen;
  // rho expressed in the eigenbasis of I (x) sigma
  const ComplexMatrix u = kron(ComplexMatrix::Identity(da, da), s.eigenvectors);
  const ComplexMatrix m = u.adjoint() * r.matrix() * u;
  double kernel_mass = 0.0;
  for (int a = 0; a < da; ++a)
    for (int k = 0; k < db; ++k)
      if (s.eigenvalues(k) <= kSupportTolerance) kernel_mass += m(a * db + k, a * db + k).real();
  if (kernel_mass > kSupportTolerance || support.empty()) {
    rep.value = ExtendedReal::negative_infinity();
    rep.notes.push_back("support of rho_AB is not contained in the support of I (x) sigma_B");
    return rep;
  }
  const int rs = static_cast<int>(support.size());
  ComplexMatrix t(da * rs, da * rs);
  for (int a = 0; a < da; ++a)
    for (int i = 0; i < rs; ++i)
      for (int b = 0; b < da; ++b)
        for (int j = 0; j < rs; ++j) {
          const double scale = 1.0 / std::sqrt(s.eigenvalues(support[i]) * s.eigenvalues(support[j]));
          t(a * rs + i, b * rs + j) = scale * m(a * db + support[i], b * db + support[j]);
        }
  SpectralDecomposition st = eig_hermitian(HermitianOperator::from_trusted(0.5 * (t + t.adjoint())));
  const double lam = st.eigenvalues(0);
  if (!(lam > 0.0)) throw SolverError("h_min_given_sigma: non-positive dominance factor");
  rep.lambda = lam;
  rep.value = ExtendedReal::finite(-std::log2(lam));
  rep.certificate = sigma_b * lam;
  return rep;
}

EntropyReport h_min_given_sigma(const DensityOperator& rho_ab, const DensityOperator& sigma_b) {
  return h_min_given_sigma(rho_ab, sigma_b.op());
}

EntropyReport h_min_cond(const DensityOperator& rho_ab, const sdp::Options& options) {
  return dominance_sdp(rho_ab, options);
}

EntropyReport h_max_cond(const DensityOperator& rho_ab, const sdp::Options& options) {
  const DensityOperator r = as_bipartite(rho_ab);
  const std::string c = free_label(r);
  Purification psi = purify(r, c);
  DensityOperator rho_ac = partial_trace(psi.state(), {r.subsystems()[0].label, c});
  EntropyReport rep = dominance_sdp(rho_ac, options);
  rep.value = -rep.value;
  rep.method = Method::Dual;
  rep.notes.push_back("computed as -H_min(A|C) with purifier dimension " + std::to_string(psi.purifier_dim));
  return rep;
}

EntropyReport h_max_cond_direct(const DensityOperator& rho_ab, const sdp::Options& options) {
  DecouplingResult d = decoupling_accuracy(rho_ab, options);
  EntropyReport rep;
  rep.value = ExtendedReal::finite(std::log2(d.value));
  rep.certificate = d.sigma_b;
  rep.method = Method::Sdp;
  rep.diagnostics = d.diagnostics;
  rep.notes.push_back("log of the decoupling accuracy");
  return rep;
}

UnconditionalEntropies h_uncond(const DensityOperator& rho) {
  SpectralDecomposition s = eig_hermitian(rho.op());
  UnconditionalEntropies out;
  out.h_min = -std::log2(s.eigenvalues(0));
  out.h_max = 2.0 * log2_trace_sqrt(s);
  return out;
}

namespace {

SpectralDecomposition pure_marginal(const DensityOperator& rho_ab, double purity_tolerance) {
  const DensityOperator r = as_bipartite(rho_ab);
  const double tr = r.trace();
  const double purity = (r.matrix() * r.matrix()).trace().real() / (tr * tr);
  if (purity < 1.0 - purity_tolerance)
    throw InputError("state is not pure (purity " + std::to_string(purity) + ")");
  return eig_hermitian(partial_trace(r, r.subsystems()[0].label).op());
}

}  // namespace

EntropyReport h_min_pure(const DensityOperator& rho_ab, double purity_tolerance) {
  SpectralDecomposition s = pure_marginal(rho_ab, purity_tolerance);
  const double l = log2_trace_sqrt(s);
  EntropyReport rep;
  rep.method = Method::ClosedForm;
  rep.value = ExtendedReal::finite(-2.0 * l);
  rep.lambda = std::exp2(2.0 * l);
  const DensityOperator r = as_bipartite(rho_ab);
  DensityOperator rho_b = partial_trace(r, r.subsystems()[1].label);
  rep.certificate = psd_sqrt(rho_b.op()) * std::exp2(l);
  return rep;
}

EntropyReport h_max_pure(const DensityOperator& rho_ab, double purity_tolerance) {
  SpectralDecomposition s = pure_marginal(rho_ab, purity_tolerance);
  EntropyReport rep;
  rep.method = Method::ClosedForm;
  rep.value = ExtendedReal::finite(std::log2(s.eigenvalues(0)));
  return rep;
}

ExtendedReal relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative entropy: dimension mismatch");
  SpectralDecomposition a = eig_hermitian(rho);
  SpectralDecomposition b = eig_hermitian(sigma);
  const int n = rho.dim();
  if (a.eigenvalues(n - 1) < -kPsdTolerance || b.eigenvalues(n - 1) < -kPsdTolerance)
    throw InputError("relative entropy needs positive semidefinite arguments");
  Eigen::MatrixXd overlap = (a.eigenvectors.adjoint() * b.eigenvectors).cwiseAbs2();
  double kernel_mass = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (b.eigenvalues(k) <= kSupportTolerance) kernel_mass += std::max(0.0, a.eigenvalues(j)) * overlap(j, k);
  if (kernel_mass > kSupportTolerance) return ExtendedReal::positive_infinity();
  double nats = 0.0;
  for (int j = 0; j < n; ++j) {
    const double aj = std::max(0.0, a.eigenvalues(j));
    for (int k = 0; k < n; ++k) {
      const double bk = std::max(0.0, b.eigenvalues(k));
      const double w = overlap(j, k);
      if (w == 0.0) continue;
      double term = bk - aj;
      if (aj > 0.0 && bk > kSupportTolerance) term += aj * (std::log(aj) - std::log(bk));
      nats += w * term;
    }
  }
  return ExtendedReal::finite(nats / kLn2);
}

ExtendedReal relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("relative entropy: subsystem dimensions differ");
  return relative_entropy(rho.op(), sigma.op());
}

double von_neumann(const HermitianOperator& rho) {
  SpectralDecomposition s = eig_hermitian(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double l = s.eigenvalues(i);
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

double cond_von_neumann(const DensityOperator& rho_ab) {
  const DensityOperator r = as_bipartite(rho_ab);
  const DensityOperator rb = partial_trace(r, r.subsystems()[1].label);
  return von_neumann(r.op()) - von_neumann(rb.op());
}

EntropyBounds entropy_bounds(const DensityOperator& rho_ab) {
  const DensityOperator r = as_bipartite(rho_ab);
  SpectralDecomposition s = eig_hermitian(partial_trace(r, r.subsystems()[0].label).op());
  const double l = log2_trace_sqrt(s);
  const double norm = std::log2(s.eigenvalues(0));
  return EntropyBounds{-2.0 * l, -norm, norm, 2.0 * l};
}

std::string to_string(LadderQuantity q) {
  switch (q) {
    case LadderQuantity::HMinSigma: return "hmin_sigma";
    case LadderQuantity::HMin: return "hmin";
    case LadderQuantity::HMax: return "hmax";
    case LadderQuantity::CondVonNeumann: return "cond_vn";
  }
  return "unknown";
}

LadderQuantity parse_ladder_quantity(const std::string& name) {
  if (name == "hmin_sigma") return LadderQuantity::HMinSigma;
  if (name == "hmin") return LadderQuantity::HMin;
  if (name == "hmax") return LadderQuantity::HMax;
  if (name == "cond_vn" || name == "vn") return LadderQuantity::CondVonNeumann;
  throw InputError("unknown ladder quantity '" + name + "'");
}

namespace {

double lambda_of(const EntropyReport& r) {
  return r.value.is_finite() ? *r.lambda : std::numeric_limits<double>::infinity();
}

}  // namespace

LadderReport ladder_convergence(const DensityOperator& rho_in, const TruncationLadder& ladder,
                                LadderQuantity quantity, const LadderOptions& options) {
  const DensityOperator rho = as_bipartite(rho_in);
  const std::string la = rho.subsystems()[0].label, lb = rho.subsystems()[1].label;
  const int da = dim_a(rho), db = dim_b(rho);

  HermitianOperator sigma_ref = HermitianOperator::identity(1);
  if (quantity == LadderQuantity::HMinSigma) {
    sigma_ref = options.sigma_b ? *options.sigma_b : partial_trace(rho, lb).op();
    if (sigma_ref.dim() != db) throw DimensionError("reference sigma_B has the wrong dimension");
  }
  std::optional<Purification> psi;
  std::string lc;
  if (quantity == LadderQuantity::HMax) {
    lc = free_label(rho);
    psi = purify(rho, lc);
  }

  auto level_fn = [&](std::size_t idx) -> LadderLevel {
    const int k = ladder.levels()[idx];
    LadderLevel lv;
    lv.level = k;
    std::optional<ProjectedState> ps;
    try {
      ps = project_state(rho, ladder, k);
    } catch (const ZeroTraceError& e) {
      lv.skipped = true;
      lv.note = e.what();
      return lv;
    }
    lv.trace = ps->trace;
    const double log_t = std::log2(ps->trace);
    switch (quantity) {
      case LadderQuantity::HMinSigma: {
        const ComplexMatrix ub = ladder.isometry(lb, db, k);
        HermitianOperator sk = HermitianOperator::from_trusted(ub.adjoint() * sigma_ref.matrix() * ub);
        EntropyReport pr = h_min_given_sigma(ps->projected, sk);
        EntropyReport nr = h_min_given_sigma(ps->normalized, sk);
        lv.lambda_projected = lambda_of(pr);
        lv.h_projected = pr.value;
        lv.h_normalized = nr.value;
        if (pr.value.is_finite() && nr.value.is_finite())
          lv.scaling_residual = std::abs(nr.value.value() - (pr.value.value() + log_t));
        break;
      }
      case LadderQuantity::HMin: {
        EntropyReport pr = h_min_cond(ps->projected, options.solver);
        lv.lambda_projected = *pr.lambda;
        lv.h_projected = pr.value;
        if (options.verify_scaling) {
          EntropyReport nr = h_min_cond(ps->normalized, options.solver);
          lv.h_normalized = nr.value;
          lv.scaling_residual = std::abs(nr.value.value() - (pr.value.value() + log_t));
        } else {
          lv.h_normalized = ExtendedReal::finite(pr.value.value() + log_t);
        }
        break;
      }
      case LadderQuantity::HMax: {
        const ComplexMatrix ua = ladder.isometry(la, da, k);
        const ComplexMatrix ub = ladder.isometry(lb, db, k);
        const int dc = psi->purifier_dim;
        ComplexVector v = kron(ComplexMatrix(kron(ua, ub)), ComplexMatrix::Identity(dc, dc)).adjoint() * psi->vector;
        const int ka = static_cast<int>(ua.cols()), kb = static_cast<int>(ub.cols());
        ComplexMatrix m = partial_trace(ComplexMatrix(v * v.adjoint()), {ka, kb, dc}, {0, 2});
        DensityOperator rho_ac(HermitianOperator::from_trusted(0.5 * (m + m.adjoint())), {{la, ka}, {lc, dc}});
        EntropyReport pr = dominance_sdp(rho_ac, options.solver);
        lv.lambda_projected = *pr.lambda;
        lv.h_projected = -pr.value;
        if (options.verify_scaling) {
          EntropyReport nr = h_max_cond(ps->normalized, options.solver);
          lv.h_normalized = nr.value;
          lv.scaling_residual = std::abs(nr.value.value() - (lv.h_projected.value() - log_t));
        } else {
          lv.h_normalized = ExtendedReal::finite(lv.h_projected.value() - log_t);
        }
        break;
      }
      case LadderQuantity::CondVonNeumann:
        lv.h_projected = ExtendedReal::finite(cond_von_neumann(ps->projected));
        lv.h_normalized = ExtendedReal::finite(cond_von_neumann(ps->normalized));
        break;
    }
    return lv;
  };

  LadderReport rep;
  rep.quantity = quantity;
  rep.levels = parallel_map<LadderLevel>(ladder.levels().size(), level_fn,
                                         static_cast<unsigned>(std::max(0, options.max_workers)));

  // untruncated reference; reuse the top level when it keeps every dimension
  if (quantity != LadderQuantity::CondVonNeumann) {
    const LadderLevel& top = rep.levels.back();
    const bool top_is_full = !top.skipped && top.level + 1 >= std::max(da, db);
    if (top_is_full) {
      rep.lambda_full = top.lambda_projected;
    } else if (quantity == LadderQuantity::HMinSigma) {
      rep.lambda_full = lambda_of(h_min_given_sigma(rho, sigma_ref));
    } else if (quantity == LadderQuantity::HMin) {
      rep.lambda_full = *h_min_cond(rho, options.solver).lambda;
    } else {
      rep.lambda_full = *dominance_sdp(partial_trace(psi->state(), {la, lc}), options.solver).lambda;
    }
  }

  const LadderLevel* prev = nullptr;
  std::vector<double> values;
  for (const auto& lv : rep.levels) {
    if (lv.skipped) continue;
    if (lv.lambda_projected) {
      const double cur = *lv.lambda_projected;
      if (prev && prev->lambda_projected) {
        const double p = *prev->lambda_projected;
        if (std::isinf(p) ? !std::isinf(cur) : cur < p - options.monotonicity_slack * std::max(1.0, p))
          rep.lambda_nondecreasing = false;
      }
      if (rep.lambda_full && !std::isinf(*rep.lambda_full) &&
          cur > *rep.lambda_full + options.monotonicity_slack * std::max(1.0, *rep.lambda_full))
        rep.lambda_bounded_by_full = false;
    }
    if (lv.scaling_residual && *lv.scaling_residual > options.scaling_tolerance)
      rep.scaling_identity_holds = false;
    if (lv.h_projected.is_finite()) values.push_back(lv.h_projected.value());
    rep.limit_estimate = lv.h_projected;
    prev = &lv;
  }
  if (values.size() >= 3) {
    const std::size_t n = values.size();
    const double d1 = std::abs(values[n - 1] - values[n - 2]);
    const double d0 = std::abs(values[n - 2] - values[n - 3]);
    rep.differences_shrinking = d1 <= d0 + options.monotonicity_slack;
  }
  return rep;
}

}  // namespace entrolab
