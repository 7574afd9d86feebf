#include "entrolab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "entrolab/errors.hpp"

namespace entrolab {

std::size_t max_dimension() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("ENTROLAB_MAX_DIM")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{4096};
  }();
  return cap;
}

void check_dimension(std::size_t dim, std::string_view what) {
  if (dim == 0) throw DimensionError(std::string(what) + ": zero dimension");
  if (dim > max_dimension())
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(dim) +
                         " exceeds the cap of " + std::to_string(max_dimension()));
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) throw DimensionError("Hermitian operator must be square");
  check_dimension(static_cast<std::size_t>(m.rows()), "Hermitian operator");
  if (!m.allFinite()) throw InputError("matrix has non-finite entries");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tolerance * scale)
    throw InputError("matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(int dim) {
  return from_trusted(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& entries) {
  ComplexMatrix m = ComplexMatrix::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return from_trusted(std::move(m));
}

HermitianOperator HermitianOperator::from_trusted(ComplexMatrix m) {
  HermitianOperator h;
  h.m_ = std::move(m);
  return h;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("operator sum: dimension mismatch");
  return from_trusted(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("operator difference: dimension mismatch");
  return from_trusted(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double c) const { return from_trusted(c * m_); }

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

int SpectralDecomposition::rank(double tolerance) const {
  return static_cast<int>((eigenvalues.array() > tolerance).count());
}

SpectralDecomposition eig_hermitian(const HermitianOperator& op, int max_sweeps) {
  const int n = op.dim();
  ComplexMatrix a = op.matrix();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double frob = a.norm();
  bool converged = (n <= 1) || frob == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * frob) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        // late sweeps: drop entries negligible against both diagonals
        if (sweep > 3 && std::abs(app) + 100.0 * g == std::abs(app) &&
            std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // phase D = diag(1, e^{-i phi}) makes a_pq real, then a real rotation
        const cplx ph = std::conj(a(p, q) / g);
        const double theta = (aqq - app) / (2.0 * g);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * ph * akq;
          a(k, q) = s * akp + c * ph * akq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * ph * vkq;
          v(k, q) = s * vkp + c * ph * vkq;
        }
        const cplx cph = std::conj(ph);
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * cph * aqk;
          a(q, k) = s * apk + c * cph * aqk;
        }
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) > 1e-12 * frob)
      throw SolverError("Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) +
                        " sweeps");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

HermitianOperator psd_sqrt(const HermitianOperator& m) {
  SpectralDecomposition s = eig_hermitian(m);
  if (s.eigenvalues.size() > 0 && s.eigenvalues.minCoeff() < -kPsdTolerance)
    throw InputError("operator is not positive semidefinite (eigenvalue " +
                     std::to_string(s.eigenvalues.minCoeff()) + ")");
  return apply_spectral(s, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

bool is_psd(const ComplexMatrix& m, double tolerance) {
  ComplexMatrix shifted = m;
  shifted.diagonal().array() += tolerance;
  Eigen::LLT<ComplexMatrix> llt(shifted);
  return llt.info() == Eigen::Success;
}

OperatorNorms norms(const HermitianOperator& m) {
  SpectralDecomposition s = eig_hermitian(m);
  OperatorNorms out;
  out.trace_norm = s.eigenvalues.cwiseAbs().sum();
  out.operator_norm = s.eigenvalues.size() ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

double nuclear_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  check_dimension(static_cast<std::size_t>(a.dim()) * b.dim(), "tensor product");
  return HermitianOperator::from_trusted(kron(a.matrix(), b.matrix()));
}

namespace {

int product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
    p *= d;
  }
  return static_cast<int>(p);
}

// Maps each index of the permuted space to its index in the original space.
std::vector<int> permutation_map(const std::vector<int>& dims, const std::vector<int>& order) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw DimensionError("permutation size mismatch");
  std::vector<int> seen(n, 0);
  for (int o : order) {
    if (o < 0 || o >= n || seen[o]++) throw InputError("invalid subsystem permutation");
  }
  std::vector<int> old_stride(n);
  int s = 1;
  for (int k = n - 1; k >= 0; --k) {
    old_stride[k] = s;
    s *= dims[k];
  }
  const int total = s;
  std::vector<int> map(total);
  std::vector<int> digit(n, 0);  // digits in the new ordering
  for (int idx = 0; idx < total; ++idx) {
    int old = 0;
    for (int k = 0; k < n; ++k) old += digit[k] * old_stride[order[k]];
    map[idx] = old;
    for (int k = n - 1; k >= 0; --k) {
      if (++digit[k] < dims[order[k]]) break;
      digit[k] = 0;
    }
  }
  return map;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  const int total = product(dims);
  if (m.rows() != total || m.cols() != total)
    throw DimensionError("partial trace: matrix size does not match subsystem dimensions");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
    throw InputError("partial trace: repeated subsystem");
  std::vector<int> order = keep_sorted;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), k)) order.push_back(k);
  int dk = 1;
  for (int k : keep_sorted) {
    if (k < 0 || k >= static_cast<int>(dims.size())) throw InputError("partial trace: bad index");
    dk *= dims[k];
  }
  const int dt = total / dk;
  std::vector<int> map = permutation_map(dims, order);
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (int t = 0; t < dt; ++t) acc += m(map[i * dt + t], map[j * dt + t]);
      out(i, j) = acc;
    }
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const std::vector<int>& order) {
  const int total = product(dims);
  if (m.rows() != total || m.cols() != total) throw DimensionError("permute: size mismatch");
  std::vector<int> map = permutation_map(dims, order);
  ComplexMatrix out(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

ComplexVector permute_subsystems(const ComplexVector& v, const std::vector<int>& dims,
                                 const std::vector<int>& order) {
  const int total = product(dims);
  if (v.size() != total) throw DimensionError("permute: size mismatch");
  std::vector<int> map = permutation_map(dims, order);
  ComplexVector out(total);
  for (int i = 0; i < total; ++i) out(i) = v(map[i]);
  return out;
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  return nuclear_norm(psd_sqrt(rho).matrix() * psd_sqrt(sigma).matrix());
}

}  // namespace entrolab
