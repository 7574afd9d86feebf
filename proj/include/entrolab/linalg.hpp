#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace entrolab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermiticityTolerance = 1e-9;
inline constexpr double kPsdTolerance = 1e-9;
// Eigenvalues below this are dropped when building purifications.
inline constexpr double kRankTolerance = 1e-12;
// Support / kernel decisions (min-entropy against a fixed sigma, relative entropy).
inline constexpr double kSupportTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-9;

// Largest Hilbert-space dimension accepted by the dense kernels. Defaults to
// 4096, overridable through the ENTROLAB_MAX_DIM environment variable.
std::size_t max_dimension();
void check_dimension(std::size_t dim, std::string_view what);

// Square Hermitian matrix. Construction checks hermiticity to a tolerance and
// stores the symmetrized part.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m, double tolerance = kHermiticityTolerance);

  static HermitianOperator identity(int dim);
  static HermitianOperator diagonal(const std::vector<double>& entries);
  // Skips validation; caller guarantees an exactly Hermitian matrix.
  static HermitianOperator from_trusted(ComplexMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double c) const;

 private:
  ComplexMatrix m_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // column k belongs to eigenvalues(k)

  ComplexMatrix reconstruct() const;
  int rank(double tolerance = kRankTolerance) const;
};

// Cyclic complex Jacobi rotations. Throws SolverError after max_sweeps.
SpectralDecomposition eig_hermitian(const HermitianOperator& m, int max_sweeps = 100);

template <class F>
HermitianOperator apply_spectral(const SpectralDecomposition& s, F f) {
  RealVector v = s.eigenvalues.unaryExpr(f);
  return HermitianOperator::from_trusted(s.eigenvectors * v.asDiagonal() * s.eigenvectors.adjoint());
}

// Square root with eigenvalues in [-kPsdTolerance, 0) clipped to zero.
// Throws InputError for more negative eigenvalues.
HermitianOperator psd_sqrt(const HermitianOperator& m);

// Cholesky-based check that m >= -tolerance * I.
bool is_psd(const ComplexMatrix& m, double tolerance = kPsdTolerance);

struct OperatorNorms {
  double trace_norm = 0.0;
  double operator_norm = 0.0;
};
OperatorNorms norms(const HermitianOperator& m);

// Sum of singular values of an arbitrary square matrix.
double nuclear_norm(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

// Partial trace over a tensor product with the first factor as the slowest
// index. `keep` lists factor positions to retain (in ascending order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Reorders tensor factors: factor s of the result is factor order[s] of the input.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const std::vector<int>& order);
ComplexVector permute_subsystems(const ComplexVector& v, const std::vector<int>& dims,
                                 const std::vector<int>& order);

// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1 of two PSD operators. Traces
// are not required to be one.
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

}  // namespace entrolab
