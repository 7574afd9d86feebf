#include "entrolab/operational.hpp"

#include <algorithm>
#include <cmath>

#include "entrolab/errors.hpp"
#include "support.hpp"

namespace entrolab {

namespace {

HermitianOperator clip_psd(const ComplexMatrix& m) {
  SpectralDecomposition s = eig_hermitian(HermitianOperator::from_trusted(0.5 * (m + m.adjoint())));
  return apply_spectral(s, [](double x) { return std::max(0.0, x); });
}

ComplexMatrix inverse_sqrt(const ComplexMatrix& m) {
  SpectralDecomposition s = eig_hermitian(HermitianOperator::from_trusted(0.5 * (m + m.adjoint())));
  if (s.eigenvalues.minCoeff() <= 0.0) throw SolverError("normalization operator is singular");
  return apply_spectral(s, [](double x) { return 1.0 / std::sqrt(x); }).matrix();
}

ComplexMatrix trace_out(const ComplexMatrix& j, int din, int dout) {
  return partial_trace(j, {din, dout}, {0});
}

}  // namespace

Povm::Povm(std::vector<HermitianOperator> effects, double tolerance) : effects_(std::move(effects)) {
  if (effects_.empty()) throw InputError("POVM needs at least one effect");
  const int d = effects_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : effects_) {
    if (e.dim() != d) throw DimensionError("POVM effects differ in dimension");
    if (!is_psd(e.matrix(), tolerance)) throw InputError("POVM effect is not positive semidefinite");
    sum += e.matrix();
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tolerance)
    throw InputError("POVM effects do not sum to the identity");
}

ChoiOperator::ChoiOperator(const HermitianOperator& j, int dim_in, int dim_out, double tolerance)
    : j_(j), dim_in_(dim_in), dim_out_(dim_out) {
  if (dim_in <= 0 || dim_out <= 0 || j.dim() != dim_in * dim_out)
    throw DimensionError("Choi operator dimension does not match input and output");
  if (!is_psd(j.matrix(), tolerance)) throw InputError("Choi operator is not positive semidefinite");
  ComplexMatrix t = trace_out(j.matrix(), dim_in, dim_out);
  if ((t - ComplexMatrix::Identity(dim_in, dim_in)).cwiseAbs().maxCoeff() > tolerance)
    throw InputError("Choi operator is not trace preserving");
}

ComplexMatrix ChoiOperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) throw DimensionError("channel input has the wrong dimension");
  // E(x) = tr_in[(x^T (x) I) J]
  ComplexMatrix out = ComplexMatrix::Zero(dim_out_, dim_out_);
  for (int i = 0; i < dim_in_; ++i)
    for (int j = 0; j < dim_in_; ++j)
      out += x(i, j) * j_.matrix().block(i * dim_out_, j * dim_out_, dim_out_, dim_out_);
  return out;
}

DecouplingResult decoupling_accuracy(const DensityOperator& rho_in, const sdp::Options& options) {
  const DensityOperator rho = as_bipartite(rho_in);
  const int da = rho.subsystems()[0].dim, db = rho.subsystems()[1].dim, d = da * db;
  detail::SupportFactor f = detail::support_factor(rho.op());
  const int r = f.rank();

  sdp::Problem p;
  const int sigma = p.add_hermitian("sigma", db, false);
  const int y = p.add_matrix("Y", r, d);
  sdp::MatrixExpression block(r + d);
  block.add_constant(f.diag(), 0);
  block.add_off_diagonal(y, 0, r);
  block.add_hermitian(sigma, 1.0 / da, r, da);
  p.add_psd("fidelity block", block);
  sdp::LinearForm norm;
  norm.add_trace(sigma, ComplexMatrix::Identity(db, db)).add_constant(-1.0);
  p.add_equality("tr sigma = 1", norm);
  sdp::LinearForm obj;
  obj.add_trace(y, f.v);
  p.set_objective(sdp::Sense::Maximize, obj);

  sdp::Solution sol = solve_checked(p, options, "decoupling accuracy");
  const ComplexMatrix& sv = sol.value(sigma);
  DecouplingResult out{};
  out.fidelity = sol.primal_objective;
  out.value = da * out.fidelity * out.fidelity;
  out.sigma_b = HermitianOperator::from_trusted(0.5 * (sv + sv.adjoint()));
  out.diagnostics = make_diagnostics(sol, options);
  return out;
}

CorrelationResult quantum_correlation(const DensityOperator& rho_in, const sdp::Options& options) {
  const DensityOperator rho = as_bipartite(rho_in);
  const int da = rho.subsystems()[0].dim, db = rho.subsystems()[1].dim;
  if (da > db) throw DimensionError("quantum correlation needs dim A <= dim B");
  const ComplexMatrix& m = rho.matrix();
  const int n = db * db;

  // objective tr(C J) with C[(j,l),(i,k)] = rho[(k,i),(l,j)] for k, l < d_A
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < da; ++l) c(j * db + l, i * db + k) = m(k * db + i, l * db + j);

  sdp::Problem p;
  const int jv = p.add_hermitian("J", n, true);
  for (int i = 0; i < db; ++i)
    for (int j = i; j < db; ++j) {
      // sum_k J[(i,k),(j,k)] = delta_ij, real and imaginary parts
      ComplexMatrix sel = ComplexMatrix::Zero(n, n);
      for (int k = 0; k < db; ++k) sel(j * db + k, i * db + k) = 1.0;
      sdp::LinearForm re;
      re.add_trace(jv, sel).add_constant(i == j ? -1.0 : 0.0);
      p.add_equality("trace preservation", re);
      if (i != j) {
        sdp::LinearForm im;
        im.add_trace(jv, cplx(0.0, -1.0) * sel);
        p.add_equality("trace preservation", im);
      }
    }
  sdp::LinearForm obj;
  obj.add_trace(jv, c);
  p.set_objective(sdp::Sense::Maximize, obj);

  sdp::Solution sol = solve_checked(p, options, "quantum correlation");
  // clean up to an exactly trace-preserving PSD operator
  HermitianOperator j = clip_psd(sol.value(jv));
  ComplexMatrix t = inverse_sqrt(trace_out(j.matrix(), db, db));
  ComplexMatrix fix = kron(t, ComplexMatrix(ComplexMatrix::Identity(db, db)));
  ComplexMatrix jm = fix * j.matrix() * fix;
  CorrelationResult out{sol.primal_objective,
                        ChoiOperator(HermitianOperator::from_trusted(0.5 * (jm + jm.adjoint())), db, db),
                        make_diagnostics(sol, options)};
  return out;
}

GuessingResult guessing_probability(const DensityOperator& rho_xb, const sdp::Options& options,
                                    double cq_tolerance) {
  Ensemble ens = split_cq(rho_xb, cq_tolerance);
  const int nx = ens.size(), db = ens.state_dim();
  sdp::Problem p;
  std::vector<int> vars;
  sdp::MatrixExpression total(db);
  sdp::LinearForm obj;
  for (int x = 0; x < nx; ++x) {
    const int v = p.add_hermitian("M" + std::to_string(x), db, true);
    vars.push_back(v);
    total.add_hermitian(v);
    const auto& mem = ens.members()[x];
    obj.add_trace(v, mem.probability * mem.state.matrix());
  }
  total.add_constant(-ComplexMatrix::Identity(db, db));
  p.add_matrix_equality("sum of effects = I", total);
  p.set_objective(sdp::Sense::Maximize, obj);

  sdp::Solution sol = solve_checked(p, options, "guessing probability");
  std::vector<ComplexMatrix> effects;
  ComplexMatrix sum = ComplexMatrix::Zero(db, db);
  for (int v : vars) {
    effects.push_back(clip_psd(sol.value(v)).matrix());
    sum += effects.back();
  }
  const ComplexMatrix t = inverse_sqrt(sum);
  std::vector<HermitianOperator> cleaned;
  double value = 0.0;
  for (int x = 0; x < nx; ++x) {
    ComplexMatrix e = t * effects[x] * t;
    cleaned.push_back(HermitianOperator::from_trusted(0.5 * (e + e.adjoint())));
    const auto& mem = ens.members()[x];
    value += mem.probability * (mem.state.matrix() * cleaned.back().matrix()).trace().real();
  }
  GuessingResult out{value, Povm(std::move(cleaned)), make_diagnostics(sol, options)};
  return out;
}

double helstrom_binary(const Ensemble& ensemble) {
  if (ensemble.size() != 2) throw InputError("Helstrom formula needs exactly two symbols");
  const auto& a = ensemble.members()[0];
  const auto& b = ensemble.members()[1];
  HermitianOperator diff = a.state.op() * a.probability - b.state.op() * b.probability;
  return 0.5 * (1.0 + norms(diff).trace_norm);
}

}  // namespace entrolab
