#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "entrolab/density.hpp"

namespace entrolab {

DensityOperator make_pure(const ComplexVector& psi, std::vector<Subsystem> subsystems);

// Maximally entangled state sum_{k<d} |k>|k> / sqrt(d) on A (dim d) and B
// (dim d_b >= d).
DensityOperator make_max_entangled(int d, int d_b = -1);
inline DensityOperator make_bell() { return make_max_entangled(2); }

// Schmidt coefficients tanh(r)^k / cosh(r), k = 0..cutoff, renormalized.
ComplexVector two_mode_squeezed_coefficients(double r, int cutoff);
// Pure state sum_k c_k |k>|k> with local dimension cutoff + 1.
DensityOperator make_two_mode_squeezed(double r, int cutoff);

// Single-system state diag(1 - 1/n, 1/n^2, ..., 1/n^2) of dimension n + 1.
DensityOperator make_discontinuity(int n);

struct EnsembleMember {
  double probability;
  DensityOperator state;
};

// Finite list of normalized states with probabilities summing to one.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);
  const std::vector<EnsembleMember>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  int state_dim() const { return members_.front().state.dim(); }

 private:
  std::vector<EnsembleMember> members_;
};

// Classical-quantum state sum_x p_x |x><x| (x) rho_x on subsystems X, B.
DensityOperator make_cq(const Ensemble& ensemble);

// Inverse of make_cq. Throws InputError when off-diagonal blocks in X exceed
// the tolerance.
Ensemble split_cq(const DensityOperator& rho_xb, double tolerance = 1e-9);

// rho (x) sigma for bipartite states, regrouped as (A A')|(B B').
DensityOperator tensor_bipartite(const DensityOperator& rho, const DensityOperator& sigma);
// n-fold iid copy, regrouped as (A_1..A_n)|(B_1..B_n) for bipartite inputs.
DensityOperator tensor_power(const DensityOperator& rho, int n);

// Nested projector family P_k keeping the first k + 1 vectors of a per-
// subsystem orthonormal basis (coordinate basis unless one is supplied).
class TruncationLadder {
 public:
  explicit TruncationLadder(std::vector<int> levels);
  TruncationLadder(std::vector<int> levels, std::map<std::string, ComplexMatrix> bases);

  const std::vector<int>& levels() const { return levels_; }
  // Columns spanning the level-k subspace of a subsystem of the given dimension.
  ComplexMatrix isometry(const std::string& label, int dim, int level) const;

 private:
  std::vector<int> levels_;
  std::map<std::string, ComplexMatrix> bases_;
};

struct ProjectedState {
  int level = 0;
  double trace = 0.0;
  DensityOperator projected;   // in the coordinates of the kept basis vectors
  DensityOperator normalized;
};

// Compresses every subsystem onto its level-k subspace. Throws
// ZeroTraceError when the projection vanishes.
ProjectedState project_state(const DensityOperator& rho, const TruncationLadder& ladder, int level);

// Random sampling for tests and examples, driven by a caller-owned engine.
using Rng = std::mt19937_64;
ComplexVector random_pure_vector(Rng& rng, int dim);
ComplexMatrix random_unitary(Rng& rng, int dim);
HermitianOperator random_hermitian(Rng& rng, int dim);
// Full-rank mixed state: marginal of a Ginibre-random pure state on a doubled space.
DensityOperator random_state(Rng& rng, std::vector<Subsystem> subsystems);
DensityOperator random_pure_state(Rng& rng, std::vector<Subsystem> subsystems);
// cq state with the given number of symbols, random probabilities and random
// mixed conditional states on B.
DensityOperator random_cq_state(Rng& rng, int symbols, int dim_b);

}  // namespace entrolab
