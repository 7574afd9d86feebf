#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrolab/entropies.hpp"
#include "entrolab/smoothing.hpp"

namespace entrolab {

// Binary entropy in bits with 0 log 0 = 0.
double h_bin(double t);

// How the lower bound on the smooth min-entropy rate was confirmed for a given n.
enum class Certification { Measured, Additivity, None };
std::string to_string(Certification c);

struct AepBoundReport {
  int n = 0;
  double eps = 0.0;
  double eta = 0.0;  // 2^(-h_min/2) + 2^(h_max/2) + 1
  double vn = 0.0;   // conditional von Neumann entropy
  double h_min = 0.0;
  double h_max = 0.0;
  double correction = 0.0;  // 4 log(eta) sqrt(log(2/eps^2)) / sqrt(n)
  double lower_bound = 0.0;  // vn - correction, for the min rate
  double upper_bound = 0.0;  // vn + correction, for the max rate
  bool n_condition_met = false;  // n >= (8/5) log(2/eps^2)

  // vn + 16 eps log d_A + (4/n) H_bin(4 eps) and its mirror for the max
  // rate; only defined for 4 eps <= 1.
  std::optional<double> min_rate_ceiling;
  std::optional<double> max_rate_floor;

  std::optional<double> measured_min_rate;  // (1/n) h_min_smooth(rho^n, eps)
  std::optional<double> measured_max_rate;  // (1/n) h_max_smooth(rho^n, eps)

  Certification certification = Certification::None;
  bool lower_bound_holds = false;  // measured (or additive) min rate >= lower_bound - slack
  bool upper_bound_holds = false;  // measured (or additive) max rate <= upper_bound + slack
  bool ceiling_holds = true;       // measured min rate <= min_rate_ceiling + slack
  bool floor_holds = true;         // measured max rate >= max_rate_floor - slack
  std::vector<std::string> notes;
};

struct AepOptions {
  SmoothingOptions smoothing = [] {
    SmoothingOptions s;
    s.max_dimension = 64;
    return s;
  }();
  bool measure = true;  // compute smooth rates where the dimension allows
  double slack = 1e-5;
  int max_workers = 0;
};

AepBoundReport aep_bounds(const DensityOperator& rho_ab, int n, double eps, const AepOptions& options = {});
// Reports ordered as n_list; single-copy quantities are computed once.
std::vector<AepBoundReport> aep_sweep(const DensityOperator& rho_ab, const std::vector<int>& n_list, double eps,
                                      const AepOptions& options = {});

}  // namespace entrolab
