#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrolab/density.hpp"
#include "entrolab/diagnostics.hpp"
#include "entrolab/extended_real.hpp"
#include "entrolab/sdp.hpp"
#include "entrolab/states.hpp"

namespace entrolab {

enum class Method { Eigen, Sdp, ClosedForm, Dual };
std::string to_string(Method m);

// All values in bits.
struct EntropyReport {
  ExtendedReal value;
  // Optimal tr(sigma~) for min-type quantities (2^-value), or the optimal
  // dominance factor for fixed-sigma routes.
  std::optional<double> lambda;
  // Optimal sigma~ on the conditioning system (on the purifying system for
  // dual routes).
  std::optional<HermitianOperator> certificate;
  // Smoothing optimizer (smooth entropies only).
  std::optional<HermitianOperator> optimizer;
  Method method = Method::Sdp;
  Diagnostics diagnostics;
  std::vector<std::string> notes;
};

// -log of the least lambda with lambda I (x) sigma_B >= rho_AB; -inf when the
// support condition fails. sigma_B may be unnormalized.
EntropyReport h_min_given_sigma(const DensityOperator& rho_ab, const HermitianOperator& sigma_b);
EntropyReport h_min_given_sigma(const DensityOperator& rho_ab, const DensityOperator& sigma_b);

// min tr sigma~ subject to I (x) sigma~ >= rho_AB, solved as an SDP.
EntropyReport h_min_cond(const DensityOperator& rho_ab, const sdp::Options& options = {});
// -h_min_cond(rho_AC) for a purification rho_ABC.
EntropyReport h_max_cond(const DensityOperator& rho_ab, const sdp::Options& options = {});
// log2 of the decoupling accuracy.
EntropyReport h_max_cond_direct(const DensityOperator& rho_ab, const sdp::Options& options = {});

struct UnconditionalEntropies {
  double h_min = 0.0;  // -log ||rho||
  double h_max = 0.0;  // 2 log tr sqrt(rho)
};
UnconditionalEntropies h_uncond(const DensityOperator& rho);

// Closed forms for pure bipartite states: -2 log tr sqrt(rho_A), log ||rho_A||.
EntropyReport h_min_pure(const DensityOperator& rho_ab, double purity_tolerance = 1e-9);
EntropyReport h_max_pure(const DensityOperator& rho_ab, double purity_tolerance = 1e-9);

// Double sum over eigenpairs, +inf when supp(rho) is not inside supp(sigma).
ExtendedReal relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma);
ExtendedReal relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

// von Neumann entropy -tr rho log rho.
double von_neumann(const HermitianOperator& rho);
// H(rho_A) - D(rho_AB || rho_A (x) rho_B).
double cond_von_neumann(const DensityOperator& rho_ab);

// Bracketing values from the conditional marginal rho_A:
// min_lower <= h_min <= min_upper and max_lower <= h_max <= max_upper.
struct EntropyBounds {
  double min_lower = 0.0;  // -2 log tr sqrt(rho_A)
  double min_upper = 0.0;  // -log ||rho_A||
  double max_lower = 0.0;  // log ||rho_A||
  double max_upper = 0.0;  // 2 log tr sqrt(rho_A)
};
EntropyBounds entropy_bounds(const DensityOperator& rho_ab);

enum class LadderQuantity { HMinSigma, HMin, HMax, CondVonNeumann };
std::string to_string(LadderQuantity q);
LadderQuantity parse_ladder_quantity(const std::string& name);

struct LadderLevel {
  int level = 0;
  double trace = 0.0;
  std::optional<double> lambda_projected;  // Lambda of the projected state (none for cond_vN)
  ExtendedReal h_projected;
  ExtendedReal h_normalized;
  // |h_normalized - (h_projected -+ log trace)| for min / max quantities
  std::optional<double> scaling_residual;
  std::string note;
  bool skipped = false;
};

struct LadderReport {
  LadderQuantity quantity = LadderQuantity::HMin;
  std::vector<LadderLevel> levels;
  std::optional<double> lambda_full;  // Lambda of the untruncated state
  ExtendedReal limit_estimate;        // value at the last computed level
  bool lambda_nondecreasing = true;
  bool lambda_bounded_by_full = true;
  bool differences_shrinking = true;
  bool scaling_identity_holds = true;
};

struct LadderOptions {
  sdp::Options solver;
  // reference sigma_B for HMinSigma; defaults to rho_B
  std::optional<HermitianOperator> sigma_b;
  // solve the normalized state independently and compare with the scaling identity
  bool verify_scaling = true;
  double monotonicity_slack = 1e-7;
  double scaling_tolerance = 1e-6;
  int max_workers = 0;  // 0: hardware concurrency
};

LadderReport ladder_convergence(const DensityOperator& rho_ab, const TruncationLadder& ladder,
                                LadderQuantity quantity, const LadderOptions& options = {});

}  // namespace entrolab
