#pragma once

#include <vector>

#include "entrolab/entropies.hpp"

namespace entrolab {

// ||sqrt(rho) sqrt(sigma)||_1 + sqrt((1 - tr rho)(1 - tr sigma)) for
// subnormalized operators.
double generalized_fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);
double generalized_fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// sqrt(1 - F^2) with the generalized fidelity.
double purified_distance(const HermitianOperator& rho, const HermitianOperator& sigma);
double purified_distance(const DensityOperator& rho, const DensityOperator& sigma);

struct SmoothingOptions {
  sdp::Options solver;
  int max_dimension = 36;  // cap on the dimension of the smoothed state
  int grid_points = 64;    // outer search over tr(rho~) for subnormalized centers
  int refine_steps = 24;
  int max_workers = 0;     // for sweeps; 0: hardware concurrency
};

// Smooth min-entropy over the purified-distance ball of radius eps. The
// report carries the optimal rho~ in `optimizer` and the optimal sigma~ in
// `certificate`.
EntropyReport h_min_smooth(const DensityOperator& rho_ab, double eps, const SmoothingOptions& options = {});
// -h_min_smooth(rho_AC, eps) over a purification; the optimizer lives on A C.
EntropyReport h_max_smooth(const DensityOperator& rho_ab, double eps, const SmoothingOptions& options = {});

enum class SmoothKind { Min, Max };
std::vector<EntropyReport> smooth_sweep(const DensityOperator& rho_ab, const std::vector<double>& eps,
                                        SmoothKind kind, const SmoothingOptions& options = {});

}  // namespace entrolab
