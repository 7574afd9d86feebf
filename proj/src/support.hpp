#pragma once

#include "entrolab/linalg.hpp"

namespace entrolab::detail {

// rho = V diag(d) V^* restricted to eigenvalues above the rank tolerance.
struct SupportFactor {
  ComplexMatrix v;  // dim x rank
  RealVector d;
  int rank() const { return static_cast<int>(d.size()); }
  ComplexMatrix diag() const { return d.cast<cplx>().asDiagonal(); }
};

SupportFactor support_factor(const HermitianOperator& rho, double tolerance = kRankTolerance);

}  // namespace entrolab::detail
