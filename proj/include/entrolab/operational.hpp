#pragma once

#include <vector>

#include "entrolab/density.hpp"
#include "entrolab/diagnostics.hpp"
#include "entrolab/states.hpp"

namespace entrolab {

// PSD effects on H_B summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> effects, double tolerance = 1e-9);
  const std::vector<HermitianOperator>& effects() const { return effects_; }
  int size() const { return static_cast<int>(effects_.size()); }

 private:
  std::vector<HermitianOperator> effects_;
};

// Choi operator J = sum_ij |i><j| (x) E(|i><j|) on B_in (x) B_out, input index slow.
class ChoiOperator {
 public:
  ChoiOperator(const HermitianOperator& j, int dim_in, int dim_out, double tolerance = 1e-9);
  const HermitianOperator& matrix() const { return j_; }
  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  // E(x) for an operator x on B_in.
  ComplexMatrix apply(const ComplexMatrix& x) const;

 private:
  HermitianOperator j_;
  int dim_in_;
  int dim_out_;
};

struct DecouplingResult {
  double value = 0.0;     // d_A max_sigma F(rho_AB, I/d_A (x) sigma_B)^2
  double fidelity = 0.0;  // the optimal F
  HermitianOperator sigma_b;
  Diagnostics diagnostics;
};
DecouplingResult decoupling_accuracy(const DensityOperator& rho_ab, const sdp::Options& options = {});

struct CorrelationResult {
  double value = 0.0;  // d_A max_E <Psi|(id (x) E)(rho)|Psi>
  ChoiOperator channel;
  Diagnostics diagnostics;
};
// Requires d_A <= d_B. The reference |Psi> uses the first d_A basis vectors of B.
CorrelationResult quantum_correlation(const DensityOperator& rho_ab, const sdp::Options& options = {});

struct GuessingResult {
  double value = 0.0;
  Povm povm;
  Diagnostics diagnostics;
};
// rho_XB must be block diagonal in X within cq_tolerance.
GuessingResult guessing_probability(const DensityOperator& rho_xb, const sdp::Options& options = {},
                                    double cq_tolerance = 1e-9);

// (1 + ||p0 rho0 - p1 rho1||_1) / 2 for two-symbol ensembles.
double helstrom_binary(const Ensemble& ensemble);

}  // namespace entrolab
