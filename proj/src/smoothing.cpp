#include "entrolab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entrolab/errors.hpp"
#include "entrolab/parallel.hpp"
#include "support.hpp"

namespace entrolab {

namespace {

void check_subnormalized(const HermitianOperator& m, const char* what) {
  const double t = m.trace();
  if (t > 1.0 + kTraceTolerance) throw InputError(std::string(what) + ": trace exceeds one");
  if (t < -kTraceTolerance) throw InputError(std::string(what) + ": negative trace");
}

HermitianOperator clipped(const HermitianOperator& m) {
  SpectralDecomposition s = eig_hermitian(m);
  if (s.eigenvalues.minCoeff() < -1e-7) throw InputError("operator is not positive semidefinite");
  return apply_spectral(s, [](double x) { return std::max(0.0, x); });
}

struct InnerResult {
  bool ok = false;
  double lambda = std::numeric_limits<double>::infinity();
  sdp::Solution solution;
  int rho_var = -1, sigma_var = -1;
};

// min tr sigma~ over rho~ >= 0 with I (x) sigma~ >= rho~ and the fidelity
// certificate Re tr(Y V) >= threshold. With fixed_trace < 0 the trace of rho~
// is only bounded by one.
InnerResult inner_sdp(const DensityOperator& rho, const detail::SupportFactor& f, double threshold,
                      double fixed_trace, const sdp::Options& options) {
  const int da = rho.subsystems()[0].dim, db = rho.subsystems()[1].dim, d = da * db;
  const int r = f.rank();
  sdp::Problem p;
  const int rt = p.add_hermitian("rho~", d, true);
  const int s = p.add_hermitian("sigma~", db, false);
  const int y = p.add_matrix("Y", r, d);

  sdp::MatrixExpression dom(d);
  dom.add_hermitian(s, 1.0, 0, da);
  dom.add_hermitian(rt, -1.0, 0, 1);
  p.add_psd("I (x) sigma~ - rho~", dom);

  sdp::MatrixExpression block(r + d);
  block.add_constant(f.diag(), 0);
  block.add_off_diagonal(y, 0, r);
  block.add_hermitian(rt, 1.0, r, 1);
  p.add_psd("fidelity block", block);

  sdp::LinearForm tr;
  tr.add_trace(rt, -ComplexMatrix::Identity(d, d));
  if (fixed_trace < 0.0) {
    tr.add_constant(1.0);
    p.add_inequality("tr rho~ <= 1", tr);
  } else {
    tr.add_constant(fixed_trace);
    p.add_equality("tr rho~ = t", tr);
  }
  sdp::LinearForm fid;
  fid.add_trace(y, f.v).add_constant(-threshold);
  p.add_inequality("fidelity", fid);

  sdp::LinearForm obj;
  obj.add_trace(s, ComplexMatrix::Identity(db, db));
  p.set_objective(sdp::Sense::Minimize, obj);

  InnerResult out;
  out.solution = sdp::solve(p, options);
  out.rho_var = rt;
  out.sigma_var = s;
  // the rank-deficient fidelity block can stall the solver just short of the
  // requested tolerances; accept a best iterate within a hundredfold of them
  const sdp::Solution& so = out.solution;
  out.ok = so.status == sdp::Status::Optimal ||
           (so.status == sdp::Status::MaxIterations && so.relative_gap <= 100.0 * options.gap_tolerance &&
            so.primal_infeasibility <= 100.0 * options.feasibility_tolerance &&
            so.dual_infeasibility <= 100.0 * options.feasibility_tolerance);
  if (out.ok) out.lambda = out.solution.primal_objective;
  return out;
}

EntropyReport report_from(const InnerResult& in, const sdp::Options& options) {
  EntropyReport rep;
  rep.method = Method::Sdp;
  rep.lambda = in.lambda;
  rep.value = in.lambda > 0.0 ? ExtendedReal::finite(-std::log2(in.lambda)) : ExtendedReal::positive_infinity();
  const ComplexMatrix& rv = in.solution.value(in.rho_var);
  const ComplexMatrix& sv = in.solution.value(in.sigma_var);
  rep.optimizer = HermitianOperator::from_trusted(0.5 * (rv + rv.adjoint()));
  rep.certificate = HermitianOperator::from_trusted(0.5 * (sv + sv.adjoint()));
  rep.diagnostics = make_diagnostics(in.solution, options);
  return rep;
}

}  // namespace

double generalized_fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_subnormalized(rho, "generalized fidelity");
  check_subnormalized(sigma, "generalized fidelity");
  const HermitianOperator a = clipped(rho), b = clipped(sigma);
  const double cross = std::sqrt(std::max(0.0, 1.0 - a.trace()) * std::max(0.0, 1.0 - b.trace()));
  return fidelity(a, b) + cross;
}

double generalized_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("generalized fidelity: subsystem dimensions differ");
  return generalized_fidelity(rho.op(), sigma.op());
}

double purified_distance(const HermitianOperator& rho, const HermitianOperator& sigma) {
  const double f = std::min(1.0, generalized_fidelity(rho, sigma));
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

double purified_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("purified distance: subsystem dimensions differ");
  return purified_distance(rho.op(), sigma.op());
}

EntropyReport h_min_smooth(const DensityOperator& rho_in, double eps, const SmoothingOptions& options) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("smoothing parameter must lie in [0, 1)");
  const DensityOperator rho = as_bipartite(rho_in);
  if (rho.dim() > options.max_dimension)
    throw DimensionError("smoothing needs dimension <= " + std::to_string(options.max_dimension) + ", got " +
                         std::to_string(rho.dim()));
  if (eps == 0.0) {
    EntropyReport rep = h_min_cond(rho, options.solver);
    rep.optimizer = rho.op();
    rep.notes.push_back("epsilon = 0: the smoothing ball contains only the state itself");
    return rep;
  }
  const double tr = rho.trace();
  const double target = std::sqrt(1.0 - eps * eps);
  const detail::SupportFactor f = detail::support_factor(rho.op());

  if (std::abs(tr - 1.0) <= kTraceTolerance) {
    InnerResult in = inner_sdp(rho, f, target, -1.0, options.solver);
    if (!in.ok)
      throw SolverError("smooth min-entropy: solver finished with status " +
                        std::string(sdp::to_string(in.solution.status)));
    return report_from(in, options.solver);
  }

  // Subnormalized center: the cross term is concave in t = tr rho~, so search
  // over t with the fidelity threshold shifted by sqrt((1 - tr rho)(1 - t)).
  if (tr <= eps * eps) {
    EntropyReport rep;
    rep.method = Method::Sdp;
    rep.value = ExtendedReal::positive_infinity();
    rep.lambda = 0.0;
    rep.notes.push_back("the zero operator lies in the smoothing ball");
    return rep;
  }
  auto solve_at = [&](double t) {
    const double thr = target - std::sqrt((1.0 - tr) * (1.0 - t));
    return inner_sdp(rho, f, thr, t, options.solver);
  };
  const int n = std::max(2, options.grid_points);
  std::vector<double> ts(n);
  for (int k = 0; k < n; ++k) ts[k] = static_cast<double>(k + 1) / n;
  std::vector<InnerResult> grid = parallel_map<InnerResult>(
      ts.size(), [&](std::size_t k) { return solve_at(ts[k]); }, static_cast<unsigned>(options.max_workers));
  int best = -1;
  for (int k = 0; k < n; ++k)
    if (grid[k].ok && (best < 0 || grid[k].lambda < grid[best].lambda)) best = k;
  if (best < 0) throw SolverError("smooth min-entropy: no feasible trace level found");
  InnerResult best_res = grid[best];
  // golden-section refinement around the best grid point
  double lo = best > 0 ? ts[best - 1] : ts[0] / 2.0, hi = best + 1 < n ? ts[best + 1] : 1.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  InnerResult r1 = solve_at(x1), r2 = solve_at(x2);
  for (int it = 0; it < options.refine_steps; ++it) {
    if (r1.lambda < r2.lambda) {
      hi = x2;
      x2 = x1;
      r2 = std::move(r1);
      x1 = hi - g * (hi - lo);
      r1 = solve_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      r1 = std::move(r2);
      x2 = lo + g * (hi - lo);
      r2 = solve_at(x2);
    }
    for (InnerResult* c : {&r1, &r2})
      if (c->ok && c->lambda < best_res.lambda) best_res = *c;
  }
  EntropyReport rep = report_from(best_res, options.solver);
  rep.notes.push_back("subnormalized center: outer search over tr(rho~)");
  return rep;
}

EntropyReport h_max_smooth(const DensityOperator& rho_in, double eps, const SmoothingOptions& options) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("smoothing parameter must lie in [0, 1)");
  const DensityOperator rho = as_bipartite(rho_in);
  if (eps == 0.0) {
    EntropyReport rep = h_max_cond(rho, options.solver);
    rep.notes.push_back("epsilon = 0: the smoothing ball contains only the state itself");
    return rep;
  }
  std::string c = "C";
  for (const char* l : {"C", "R", "E", "P"})
    if (!rho.has(l)) {
      c = l;
      break;
    }
  Purification psi = purify(rho, c);
  DensityOperator rho_ac = partial_trace(psi.state(), {rho.subsystems()[0].label, c});
  EntropyReport rep = h_min_smooth(rho_ac, eps, options);
  rep.value = -rep.value;
  rep.method = Method::Dual;
  rep.notes.push_back("computed as -H_min^eps(A|C); optimizer and certificate live on A C");
  return rep;
}

std::vector<EntropyReport> smooth_sweep(const DensityOperator& rho, const std::vector<double>& eps,
                                        SmoothKind kind, const SmoothingOptions& options) {
  return parallel_map<EntropyReport>(
      eps.size(),
      [&](std::size_t i) {
        return kind == SmoothKind::Min ? h_min_smooth(rho, eps[i], options) : h_max_smooth(rho, eps[i], options);
      },
      static_cast<unsigned>(options.max_workers));
}

}  // namespace entrolab
