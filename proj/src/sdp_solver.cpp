// Primal-dual interior point method for LMI-form SDPs with complex Hermitian
// blocks: Nesterov-Todd scaling, Mehrotra predictor-corrector, infeasible
// start, separate primal and dual step lengths.

#include <algorithm>
#include <cmath>
#include <limits>

#include "entrolab/errors.hpp"
#include "entrolab/sdp.hpp"

namespace entrolab::sdp {

namespace {

using Eigen::MatrixXd;

struct Scaling {
  ComplexMatrix g;      // G with G^{-1} S G^{-*} = G^* Z G = diag(lam)
  ComplexMatrix g_inv;
  ComplexMatrix w_inv;  // W^{-1} = G^{-*} G^{-1}
  RealVector lam;
};

StandardForm embed_real(const StandardForm& f) {
  StandardForm out = f;
  for (auto& b : out.blocks) {
    const int n = b.dim;
    ComplexMatrix c = ComplexMatrix::Zero(2 * n, 2 * n);
    const Eigen::MatrixXd re = b.constant.real(), im = b.constant.imag();
    c.topLeftCorner(n, n) = re.cast<cplx>();
    c.bottomRightCorner(n, n) = re.cast<cplx>();
    c.topRightCorner(n, n) = (-im).cast<cplx>();
    c.bottomLeftCorner(n, n) = im.cast<cplx>();
    b.constant = c;
    for (auto& list : b.coefficients) {
      std::vector<SparseEntry> e;
      for (const auto& x : list) {
        const double r = x.value.real(), i = x.value.imag();
        if (r != 0.0) {
          e.push_back({x.row, x.col, r});
          e.push_back({x.row + n, x.col + n, r});
        }
        if (i != 0.0) {
          e.push_back({x.row, x.col + n, -i});
          e.push_back({x.row + n, x.col, i});
        }
      }
      list = std::move(e);
    }
    b.dim = 2 * n;
  }
  return out;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Largest alpha with X + alpha dX >= 0 (infinity when dX >= 0).
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  ComplexMatrix t = llt.matrixL().solve(dx);
  t = llt.matrixL().solve(t.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(t), Eigen::EigenvaluesOnly);
  const double mn = es.eigenvalues().minCoeff();
  return mn >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / mn;
}

class InteriorPoint {
 public:
  InteriorPoint(const StandardForm& f, const Options& opt) : f_(f), opt_(opt) {
    m_ = f.num_params;
    p_ = static_cast<int>(f.eq_matrix.rows());
    nb_ = static_cast<int>(f.blocks.size());
    for (const auto& b : f.blocks) total_dim_ += b.dim;
  }

  Solution run();
  const RealVector& y() const { return y_; }

 private:
  ComplexMatrix apply_block(int b, const RealVector& y) const {
    const LmiBlock& blk = f_.blocks[b];
    ComplexMatrix s = ComplexMatrix::Zero(blk.dim, blk.dim);
    for (std::size_t k = 0; k < blk.params.size(); ++k) {
      const double yk = y(blk.params[k]);
      if (yk == 0.0) continue;
      for (const auto& e : blk.coefficients[k]) s(e.row, e.col) += yk * e.value;
    }
    return s;
  }

  void add_adjoint(int b, const ComplexMatrix& x, RealVector& out) const {
    const LmiBlock& blk = f_.blocks[b];
    for (std::size_t k = 0; k < blk.params.size(); ++k) {
      double acc = 0.0;
      for (const auto& e : blk.coefficients[k]) acc += (e.value * x(e.col, e.row)).real();
      out(blk.params[k]) += acc;
    }
  }

  RealVector adjoint(const std::vector<ComplexMatrix>& x) const {
    RealVector out = RealVector::Zero(m_);
    for (int b = 0; b < nb_; ++b) add_adjoint(b, x[b], out);
    return out;
  }

  Scaling nt_scaling(const ComplexMatrix& s, const ComplexMatrix& z) const {
    const int n = static_cast<int>(s.rows());
    Scaling sc;
    if (n == 1) {
      const double sv = s(0, 0).real(), zv = z(0, 0).real();
      const double lam = std::sqrt(sv * zv);
      sc.lam = RealVector::Constant(1, lam);
      // G = sqrt(s / lam) in one dimension
      sc.g = ComplexMatrix::Constant(1, 1, std::sqrt(sv / lam));
      sc.g_inv = ComplexMatrix::Constant(1, 1, std::sqrt(lam / sv));
      sc.w_inv = ComplexMatrix::Constant(1, 1, zv / lam);
      return sc;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    RealVector sv = es.eigenvalues().cwiseMax(1e-300);
    const ComplexMatrix& u = es.eigenvectors();
    ComplexMatrix s_half = u * sv.cwiseSqrt().cast<cplx>().asDiagonal() * u.adjoint();
    ComplexMatrix s_mhalf = u * sv.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * u.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> et(hermitian_part(s_half * z * s_half));
    sc.lam = et.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
    const ComplexMatrix& q = et.eigenvectors();
    RealVector lq = sc.lam.cwiseSqrt();
    sc.g = s_half * q * lq.cwiseInverse().cast<cplx>().asDiagonal();
    sc.g_inv = lq.cast<cplx>().asDiagonal() * q.adjoint() * s_mhalf;
    sc.w_inv = sc.g_inv.adjoint() * sc.g_inv;
    return sc;
  }

  void assemble_schur(const std::vector<Scaling>& sc, MatrixXd& m) const {
    m.setZero(m_, m_);
    for (int b = 0; b < nb_; ++b) {
      const LmiBlock& blk = f_.blocks[b];
      const ComplexMatrix& w = sc[b].w_inv;
      const int np = static_cast<int>(blk.params.size());
      for (int j = 0; j < np; ++j) {
        const auto& tj = blk.coefficients[j];
        const int pj = blk.params[j];
        for (int i = j; i < np; ++i) {
          const auto& ti = blk.coefficients[i];
          double acc = 0.0;
          for (const auto& t : ti)
            for (const auto& s : tj) acc += (t.value * s.value * w(t.col, s.row) * w(s.col, t.row)).real();
          const int pi = blk.params[i];
          m(pi, pj) += acc;
          if (pi != pj) m(pj, pi) += acc;
        }
      }
    }
  }

  struct Direction {
    RealVector dy, dw;
    std::vector<ComplexMatrix> ds, dz;
  };

  Direction newton(const std::vector<ComplexMatrix>& k, const std::vector<Scaling>& sc) const {
    std::vector<ComplexMatrix> h(nb_);
    for (int b = 0; b < nb_; ++b) h[b] = k[b] - sc[b].w_inv * rp_[b] * sc[b].w_inv;
    const RealVector rhs = adjoint(h) - rd_;
    Direction d;
    d.dy = RealVector::Zero(m_);
    d.dw = RealVector::Zero(p_);
    // M dy - E^T dw = rhs, E dy = req; the factorization is regularized, so
    // refine against the exact matrix
    RealVector r1 = rhs, r2 = req_;
    double last = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 4; ++pass) {
      RealVector ey = m_llt_.solve(r1);
      RealVector ew = RealVector::Zero(p_);
      if (p_ > 0) {
        ew = eq_llt_.solve(r2 - f_.eq_matrix * ey);
        ey += m_inv_et_ * ew;
      }
      d.dy += ey;
      d.dw += ew;
      r1 = rhs - schur_ * d.dy;
      if (p_ > 0) {
        r1 += f_.eq_matrix.transpose() * d.dw;
        r2 = req_ - f_.eq_matrix * d.dy;
      }
      const double res = r1.norm() + r2.norm();
      if (res >= 0.5 * last || res <= 1e-15 * (1.0 + rhs.norm())) break;
      last = res;
    }
    d.ds.resize(nb_);
    d.dz.resize(nb_);
    for (int b = 0; b < nb_; ++b) {
      d.ds[b] = hermitian_part(apply_block(b, d.dy) + rp_[b]);
      d.dz[b] = hermitian_part(k[b] - sc[b].w_inv * d.ds[b] * sc[b].w_inv);
    }
    return d;
  }

  void step_lengths(const Direction& d, double& ap, double& ad) const {
    ap = ad = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb_; ++b) {
      ap = std::min(ap, max_step(s_[b], d.ds[b]));
      ad = std::min(ad, max_step(z_[b], d.dz[b]));
    }
  }

  struct Snapshot {
    double merit = std::numeric_limits<double>::infinity();
    RealVector y, w;
    std::vector<ComplexMatrix> s, z;
    Solution sol;
  };

  void restore(const Snapshot& b, Solution& sol) {
    if (!std::isfinite(b.merit)) return;
    y_ = b.y;
    w_ = b.w;
    s_ = b.s;
    z_ = b.z;
    sol = b.sol;
  }

  void factorize(const MatrixXd& m) {
    schur_ = m;
    double scale = std::max(1e-300, m.diagonal().cwiseAbs().maxCoeff());
    double delta = 1e-15 * scale;
    for (int attempt = 0; attempt < 8; ++attempt) {
      MatrixXd reg = m;
      reg.diagonal().array() += delta;
      m_llt_.compute(reg);
      if (m_llt_.info() == Eigen::Success) break;
      delta *= 100.0;
    }
    if (m_llt_.info() != Eigen::Success) throw SolverError("Schur complement is not positive definite");
    if (p_ > 0) {
      m_inv_et_ = m_llt_.solve(f_.eq_matrix.transpose());
      MatrixXd e = f_.eq_matrix * m_inv_et_;
      double es = std::max(1e-300, e.diagonal().cwiseAbs().maxCoeff());
      double ed = 1e-14 * es;
      for (int attempt = 0; attempt < 8; ++attempt) {
        MatrixXd reg = e;
        reg.diagonal().array() += ed;
        eq_llt_.compute(reg);
        if (eq_llt_.info() == Eigen::Success) break;
        ed *= 100.0;
      }
      if (eq_llt_.info() != Eigen::Success) throw SolverError("equality system is singular");
    }
  }

  const StandardForm& f_;
  const Options& opt_;
  int m_ = 0, p_ = 0, nb_ = 0, total_dim_ = 0;
  RealVector y_, w_;
  std::vector<ComplexMatrix> s_, z_;
  std::vector<ComplexMatrix> rp_;
  RealVector rd_, req_;
  Eigen::LLT<MatrixXd> m_llt_, eq_llt_;
  MatrixXd m_inv_et_;
  MatrixXd schur_;
};

Solution InteriorPoint::run() {
  Solution sol;
  y_ = RealVector::Zero(m_);
  w_ = RealVector::Zero(p_);
  s_.resize(nb_);
  z_.resize(nb_);
  rp_.resize(nb_);

  double norm_f0 = 0.0;
  for (const auto& b : f_.blocks) norm_f0 += b.constant.squaredNorm();
  norm_f0 = std::sqrt(norm_f0);
  const double norm_c = f_.cost.norm();
  const double norm_b = f_.eq_rhs.norm();

  for (int b = 0; b < nb_; ++b) {
    const LmiBlock& blk = f_.blocks[b];
    const double rn = std::sqrt(static_cast<double>(blk.dim));
    double xi = std::max(10.0, rn), eta = std::max({10.0, rn, blk.constant.norm()});
    for (std::size_t k = 0; k < blk.params.size(); ++k) {
      double fn = 0.0;
      for (const auto& e : blk.coefficients[k]) fn += std::norm(e.value);
      fn = std::sqrt(fn);
      xi = std::max(xi, rn * (1.0 + std::abs(f_.cost(blk.params[k]))) / (1.0 + fn));
      eta = std::max(eta, fn);
    }
    s_[b] = eta * ComplexMatrix::Identity(blk.dim, blk.dim);
    z_[b] = xi * ComplexMatrix::Identity(blk.dim, blk.dim);
  }

  MatrixXd schur(m_, m_);
  int stalled = 0, since_best = 0;
  Snapshot best;
  for (int it = 0;; ++it) {
    // residuals
    double rp_norm = 0.0, sz = 0.0, f0z = 0.0;
    for (int b = 0; b < nb_; ++b) {
      rp_[b] = hermitian_part(f_.blocks[b].constant + apply_block(b, y_) - s_[b]);
      rp_norm += rp_[b].squaredNorm();
      sz += (s_[b].adjoint() * z_[b]).trace().real();
      f0z += (f_.blocks[b].constant.adjoint() * z_[b]).trace().real();
    }
    req_ = f_.eq_rhs - f_.eq_matrix * y_;
    RealVector az = adjoint(z_);
    if (p_ > 0) az += f_.eq_matrix.transpose() * w_;
    rd_ = f_.cost - az;

    const double pobj = f_.cost.dot(y_);
    const double dobj = -f0z + (p_ > 0 ? f_.eq_rhs.dot(w_) : 0.0);
    const double mu = sz / total_dim_;
    const double pinf = std::sqrt(rp_norm + req_.squaredNorm()) / (1.0 + norm_f0 + norm_b);
    const double dinf = rd_.norm() / (1.0 + norm_c);
    const double rel_gap = std::abs(pobj - dobj) / std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));

    if (!std::isfinite(pobj + dobj + pinf + dinf + mu)) {
      restore(best, sol);
      sol.status = Status::MaxIterations;
      break;
    }
    sol.iterations = it;
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.relative_gap = rel_gap;
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    const double merit = std::max({rel_gap / opt_.gap_tolerance, pinf / opt_.feasibility_tolerance,
                                   dinf / opt_.feasibility_tolerance});
    if (merit < 0.9 * best.merit) {
      best = Snapshot{merit, y_, w_, s_, z_, sol};
      since_best = 0;
    } else {
      ++since_best;
    }

    if (rel_gap <= opt_.gap_tolerance && pinf <= opt_.feasibility_tolerance &&
        dinf <= opt_.feasibility_tolerance) {
      sol.status = Status::Optimal;
      break;
    }
    // certificates: an improving dual ray means the LMI is infeasible, an
    // improving primal ray means the objective is unbounded below
    if (dobj > 1e6 && dobj > 1e8 * az.norm()) {
      sol.status = Status::Infeasible;
      break;
    }
    if (-pobj > 1e8 * (1.0 + norm_f0 + norm_b)) {
      sol.status = Status::Unbounded;
      break;
    }
    if (it >= opt_.max_iterations || stalled >= 8 || (best.merit < 1e3 && since_best >= 12)) {
      restore(best, sol);
      sol.status = Status::MaxIterations;
      break;
    }

    std::vector<Scaling> sc(nb_);
    for (int b = 0; b < nb_; ++b) sc[b] = nt_scaling(s_[b], z_[b]);
    assemble_schur(sc, schur);
    factorize(schur);

    // predictor
    std::vector<ComplexMatrix> k(nb_);
    for (int b = 0; b < nb_; ++b) k[b] = -z_[b];
    Direction aff = newton(k, sc);
    double ap, ad;
    step_lengths(aff, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double sz_aff = 0.0;
    for (int b = 0; b < nb_; ++b)
      sz_aff += ((s_[b] + ap * aff.ds[b]).adjoint() * (z_[b] + ad * aff.dz[b])).trace().real();
    const double mu_aff = sz_aff / total_dim_;
    const double sigma = std::clamp(std::pow(std::max(0.0, mu_aff) / mu, 3.0), 0.0, 1.0);

    // corrector
    for (int b = 0; b < nb_; ++b) {
      const Scaling& s = sc[b];
      const int n = static_cast<int>(s.lam.size());
      ComplexMatrix dst = s.g_inv * aff.ds[b] * s.g_inv.adjoint();
      ComplexMatrix dzt = s.g.adjoint() * aff.dz[b] * s.g;
      ComplexMatrix r = -hermitian_part(dst * dzt);
      for (int i = 0; i < n; ++i) r(i, i) += sigma * mu - s.lam(i) * s.lam(i);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) *= 2.0 / (s.lam(i) + s.lam(j));
      k[b] = s.g_inv.adjoint() * r * s.g_inv;
    }
    Direction d = newton(k, sc);
    step_lengths(d, ap, ad);
    const double gamma = 0.95;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;

    y_ += ap * d.dy;
    if (p_ > 0) w_ += ad * d.dw;
    for (int b = 0; b < nb_; ++b) {
      s_[b] = hermitian_part(s_[b] + ap * d.ds[b]);
      z_[b] = hermitian_part(z_[b] + ad * d.dz[b]);
    }
  }

  sol.constraint_duals = z_;
  for (const auto& b : f_.blocks) sol.constraint_labels.push_back(b.label);
  return sol;
}

}  // namespace

Solution solve_internal(const StandardForm& form, const Options& options, RealVector* y_out) {
  int total = 0;
  for (const auto& b : form.blocks) total += b.dim;
  if (total > options.max_total_dimension)
    throw DimensionError("SDP total block dimension " + std::to_string(total) + " exceeds the cap of " +
                         std::to_string(options.max_total_dimension));
  if (form.blocks.empty()) throw InputError("SDP has no semidefinite constraints");
  for (const auto& b : form.blocks)
    if (b.dim <= 0) throw DimensionError("SDP block of zero dimension");

  StandardForm embedded;
  const StandardForm* f = &form;
  if (options.real_embedding) {
    embedded = embed_real(form);
    f = &embedded;
  }
  InteriorPoint ipm(*f, options);
  Solution sol = ipm.run();
  if (options.real_embedding) {
    for (std::size_t b = 0; b < sol.constraint_duals.size(); ++b) {
      const ComplexMatrix& z = sol.constraint_duals[b];
      const int n = form.blocks[b].dim;
      ComplexMatrix zc = z.topLeftCorner(n, n) + z.bottomRightCorner(n, n);
      zc += cplx(0.0, 1.0) * (z.bottomLeftCorner(n, n) - z.topRightCorner(n, n));
      sol.constraint_duals[b] = zc.real().cast<cplx>() + cplx(0.0, 1.0) * zc.imag().cast<cplx>();
    }
  }
  // report in the caller's sense
  double p = sol.primal_objective + form.cost_offset, d = sol.dual_objective + form.cost_offset;
  if (form.maximize) {
    p = -p;
    d = -d;
  }
  sol.primal_objective = p;
  sol.dual_objective = d;
  sol.duality_gap = std::abs(p - d);
  if (y_out) *y_out = ipm.y();
  return sol;
}

Solution solve(const StandardForm& form, const Options& options) {
  return solve_internal(form, options, nullptr);
}

Solution solve(const Problem& problem, const Options& options) {
  RealVector y;
  Solution sol = solve_internal(problem.compile(), options, &y);
  sol.values = problem.unpack(y);
  return sol;
}

}  // namespace entrolab::sdp
