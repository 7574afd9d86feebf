#include "entrolab/states.hpp"

#include <algorithm>
#include <cmath>

#include "entrolab/errors.hpp"

namespace entrolab {

DensityOperator make_pure(const ComplexVector& psi, std::vector<Subsystem> subsystems) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw ZeroTraceError("pure state vector is zero");
  if (n2 > 1.0 + kTraceTolerance) throw InputError("pure state vector has norm above one");
  ComplexMatrix m = psi * psi.adjoint();
  return DensityOperator(HermitianOperator::from_trusted(0.5 * (m + m.adjoint())),
                         std::move(subsystems));
}

DensityOperator make_max_entangled(int d, int d_b) {
  if (d_b < 0) d_b = d;
  if (d <= 0 || d_b < d) throw DimensionError("maximally entangled state needs 0 < d <= d_B");
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d_b);
  for (int k = 0; k < d; ++k) psi(static_cast<Eigen::Index>(k) * d_b + k) = 1.0 / std::sqrt(d);
  return make_pure(psi, {{"A", d}, {"B", d_b}});
}

ComplexVector two_mode_squeezed_coefficients(double r, int cutoff) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("squeezing parameter must be >= 0");
  if (cutoff < 0) throw InputError("cutoff must be non-negative");
  const double t = std::tanh(r);
  ComplexVector c(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) c(k) = std::pow(t, k) / std::cosh(r);
  return c / c.norm();
}

DensityOperator make_two_mode_squeezed(double r, int cutoff) {
  ComplexVector c = two_mode_squeezed_coefficients(r, cutoff);
  const int d = cutoff + 1;
  check_dimension(static_cast<std::size_t>(d) * d, "two-mode squeezed state");
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < d; ++k) psi(static_cast<Eigen::Index>(k) * d + k) = c(k);
  return make_pure(psi, {{"A", d}, {"B", d}});
}

DensityOperator make_discontinuity(int n) {
  if (n < 1) throw InputError("discontinuity state needs n >= 1");
  check_dimension(static_cast<std::size_t>(n) + 1, "discontinuity state");
  std::vector<double> diag(n + 1, 1.0 / (static_cast<double>(n) * n));
  diag[0] = 1.0 - 1.0 / n;
  return DensityOperator(HermitianOperator::diagonal(diag), {{"A", n + 1}});
}

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw InputError("ensemble is empty");
  double total = 0.0;
  const auto dims = members_.front().state.dims();
  for (const auto& m : members_) {
    if (!(m.probability >= 0.0) || !std::isfinite(m.probability))
      throw InputError("ensemble probabilities must be non-negative");
    if (m.state.dims() != dims) throw DimensionError("ensemble states differ in dimension");
    if (!m.state.is_normalized()) throw InputError("ensemble states must be normalized");
    total += m.probability;
  }
  if (std::abs(total - 1.0) > kTraceTolerance)
    throw InputError("ensemble probabilities sum to " + std::to_string(total));
}

DensityOperator make_cq(const Ensemble& ensemble) {
  const int nx = ensemble.size();
  const int db = ensemble.state_dim();
  check_dimension(static_cast<std::size_t>(nx) * db, "cq state");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(nx) * db,
                                        static_cast<Eigen::Index>(nx) * db);
  for (int x = 0; x < nx; ++x) {
    const auto& mem = ensemble.members()[x];
    m.block(x * db, x * db, db, db) = mem.probability * mem.state.matrix();
  }
  return DensityOperator(HermitianOperator::from_trusted(std::move(m)), {{"X", nx}, {"B", db}});
}

Ensemble split_cq(const DensityOperator& rho_xb, double tolerance) {
  DensityOperator r = as_bipartite(rho_xb);
  const int nx = r.subsystems()[0].dim, db = r.subsystems()[1].dim;
  const ComplexMatrix& m = r.matrix();
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y)
      if (x != y && m.block(x * db, y * db, db, db).cwiseAbs().maxCoeff() > tolerance)
        throw InputError("state is not classical on the first subsystem");
  const double tr = r.trace();
  std::vector<EnsembleMember> members;
  for (int x = 0; x < nx; ++x) {
    ComplexMatrix block = m.block(x * db, x * db, db, db);
    double p = block.trace().real();
    if (p > 1e-15) {
      members.push_back({p / tr, DensityOperator(HermitianOperator(block / p), {{"B", db}})});
    } else {
      members.push_back(
          {0.0, DensityOperator(HermitianOperator::identity(db) * (1.0 / db), {{"B", db}})});
    }
  }
  return Ensemble(std::move(members));
}

DensityOperator tensor_bipartite(const DensityOperator& rho, const DensityOperator& sigma) {
  DensityOperator a = as_bipartite(rho), b = as_bipartite(sigma);
  const int da = a.subsystems()[0].dim, db = a.subsystems()[1].dim;
  const int ea = b.subsystems()[0].dim, eb = b.subsystems()[1].dim;
  check_dimension(static_cast<std::size_t>(a.dim()) * b.dim(), "tensor product");
  ComplexMatrix m = permute_subsystems(kron(a.matrix(), b.matrix()), {da, db, ea, eb}, {0, 2, 1, 3});
  std::vector<Subsystem> subs{{a.subsystems()[0].label, da * ea}, {a.subsystems()[1].label, db * eb}};
  if (rho.subsystems().size() == 1) {
    return DensityOperator(HermitianOperator::from_trusted(std::move(m)),
                           {{rho.subsystems()[0].label, da * ea}});
  }
  return DensityOperator(HermitianOperator::from_trusted(std::move(m)), std::move(subs));
}

DensityOperator tensor_power(const DensityOperator& rho, int n) {
  if (n < 1) throw InputError("tensor power needs n >= 1");
  double total = 1.0;
  for (int k = 0; k < n; ++k) total *= rho.dim();
  if (total > static_cast<double>(max_dimension()))
    throw DimensionError("tensor power dimension exceeds the cap");
  DensityOperator out = rho;
  for (int k = 1; k < n; ++k) out = tensor_bipartite(out, rho);
  return out;
}

TruncationLadder::TruncationLadder(std::vector<int> levels) : TruncationLadder(std::move(levels), {}) {}

TruncationLadder::TruncationLadder(std::vector<int> levels, std::map<std::string, ComplexMatrix> bases)
    : levels_(std::move(levels)), bases_(std::move(bases)) {
  if (levels_.empty()) throw InputError("ladder needs at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] < 0) throw InputError("ladder levels must be non-negative");
    if (i > 0 && levels_[i] <= levels_[i - 1]) throw InputError("ladder levels must increase");
  }
  for (const auto& [label, u] : bases_) {
    if (u.rows() != u.cols()) throw DimensionError("ladder basis for " + label + " is not square");
    const double dev = (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-9) throw InputError("ladder basis for " + label + " is not orthonormal");
  }
}

ComplexMatrix TruncationLadder::isometry(const std::string& label, int dim, int level) const {
  const int keep = std::min(level + 1, dim);
  auto it = bases_.find(label);
  if (it == bases_.end()) return ComplexMatrix::Identity(dim, keep);
  if (it->second.rows() != dim)
    throw DimensionError("ladder basis for " + label + " has the wrong dimension");
  return it->second.leftCols(keep);
}

ProjectedState project_state(const DensityOperator& rho, const TruncationLadder& ladder, int level) {
  ComplexMatrix u = ComplexMatrix::Ones(1, 1);
  std::vector<Subsystem> subs;
  for (const auto& s : rho.subsystems()) {
    ComplexMatrix v = ladder.isometry(s.label, s.dim, level);
    u = kron(u, v);
    subs.push_back({s.label, static_cast<int>(v.cols())});
  }
  ComplexMatrix m = u.adjoint() * rho.matrix() * u;
  m = 0.5 * (m + m.adjoint());
  const double tr = m.trace().real();
  if (!(tr > 1e-300)) throw ZeroTraceError("projected state has zero trace at level " + std::to_string(level));
  DensityOperator projected(HermitianOperator::from_trusted(m), subs);
  return ProjectedState{level, tr, projected, projected.normalized()};
}

ComplexVector random_pure_vector(Rng& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

ComplexMatrix random_unitary(Rng& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

HermitianOperator random_hermitian(Rng& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = cplx(g(rng), g(rng));
  return HermitianOperator::from_trusted(0.5 * (z + z.adjoint()));
}

DensityOperator random_state(Rng& rng, std::vector<Subsystem> subsystems) {
  int d = 1;
  for (const auto& s : subsystems) d *= s.dim;
  ComplexVector psi = random_pure_vector(rng, d * d);
  ComplexMatrix m = partial_trace(psi * psi.adjoint(), {d, d}, {0});
  m = 0.5 * (m + m.adjoint());
  m /= m.trace().real();
  return DensityOperator(HermitianOperator::from_trusted(std::move(m)), std::move(subsystems));
}

DensityOperator random_pure_state(Rng& rng, std::vector<Subsystem> subsystems) {
  int d = 1;
  for (const auto& s : subsystems) d *= s.dim;
  return make_pure(random_pure_vector(rng, d), std::move(subsystems));
}

DensityOperator random_cq_state(Rng& rng, int symbols, int dim_b) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(symbols);
  double total = 0.0;
  for (auto& x : p) total += (x = e(rng));
  std::vector<EnsembleMember> members;
  for (int x = 0; x < symbols; ++x)
    members.push_back({p[x] / total, random_state(rng, {{"B", dim_b}})});
  double s = 0.0;
  for (const auto& m : members) s += m.probability;
  members.back().probability += 1.0 - s;
  return make_cq(Ensemble(std::move(members)));
}

}  // namespace entrolab
