#include "support.hpp"

#include "entrolab/errors.hpp"

namespace entrolab::detail {

SupportFactor support_factor(const HermitianOperator& rho, double tolerance) {
  SpectralDecomposition s = eig_hermitian(rho);
  const int r = s.rank(tolerance);
  if (r == 0) throw ZeroTraceError("operator has empty support");
  SupportFactor f;
  f.v = s.eigenvectors.leftCols(r);
  f.d = s.eigenvalues.head(r);
  return f;
}

}  // namespace entrolab::detail
