#include "entrolab/aep.hpp"

#include <cmath>

#include "entrolab/errors.hpp"
#include "entrolab/parallel.hpp"

namespace entrolab {

namespace {

struct SingleCopy {
  double h_min = 0.0;
  double h_max = 0.0;
  double vn = 0.0;
  int da = 0;
  int rank = 0;
};

SingleCopy single_copy(const DensityOperator& rho, const sdp::Options& solver) {
  if (!rho.is_normalized()) throw InputError("AEP bounds need a normalized state");
  SingleCopy s;
  const ExtendedReal hmin = h_min_cond(rho, solver).value;
  const ExtendedReal hmax = h_max_cond(rho, solver).value;
  if (!hmin.is_finite() || !hmax.is_finite()) throw InputError("AEP bounds need finite single-copy entropies");
  s.h_min = hmin.value();
  s.h_max = hmax.value();
  s.vn = cond_von_neumann(rho);
  s.da = rho.subsystems()[0].dim;
  s.rank = eig_hermitian(rho.op()).rank(kRankTolerance);
  return s;
}

long long int_power(long long base, int n, long long limit) {
  long long r = 1;
  for (int i = 0; i < n; ++i) {
    r *= base;
    if (r > limit) return limit + 1;
  }
  return r;
}

AepBoundReport assemble(const DensityOperator& rho, const SingleCopy& s, int n, double eps,
                        const AepOptions& options) {
  if (n < 1) throw InputError("number of copies must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("AEP smoothing parameter must lie in (0, 1)");
  AepBoundReport r;
  r.n = n;
  r.eps = eps;
  r.h_min = s.h_min;
  r.h_max = s.h_max;
  r.vn = s.vn;
  r.eta = std::exp2(-0.5 * s.h_min) + std::exp2(0.5 * s.h_max) + 1.0;
  const double lg = std::log2(2.0 / (eps * eps));
  r.correction = 4.0 * std::log2(r.eta) * std::sqrt(lg) / std::sqrt(static_cast<double>(n));
  r.lower_bound = s.vn - r.correction;
  r.upper_bound = s.vn + r.correction;
  r.n_condition_met = n >= 1.6 * lg;
  if (!r.n_condition_met) r.notes.push_back("n below (8/5) log(2/eps^2): bounds reported but not applicable");
  if (4.0 * eps <= 1.0) {
    const double extra = 16.0 * eps * std::log2(static_cast<double>(s.da)) + 4.0 / n * h_bin(4.0 * eps);
    r.min_rate_ceiling = s.vn + extra;
    r.max_rate_floor = s.vn - extra;
  }

  const long long cap = options.smoothing.max_dimension;
  const long long dim_min = int_power(rho.dim(), n, cap);
  const long long dim_max = int_power(static_cast<long long>(s.da) * s.rank, n, cap);
  if (options.measure && (dim_min <= cap || dim_max <= cap)) {
    const DensityOperator rn = tensor_power(rho, n);
    if (dim_min <= cap) r.measured_min_rate = h_min_smooth(rn, eps, options.smoothing).value.as_double() / n;
    if (dim_max <= cap) r.measured_max_rate = h_max_smooth(rn, eps, options.smoothing).value.as_double() / n;
  }
  if (!r.measured_min_rate) r.notes.push_back("min rate not measured: dimension above the smoothing cap");

  // The smooth min-entropy dominates the unsmoothed one, which is additive, so
  // h_min >= lower_bound certifies the bound for this n without any large SDP.
  const bool additive_min = s.h_min >= r.lower_bound - options.slack;
  const bool additive_max = s.h_max <= r.upper_bound + options.slack;
  if (r.measured_min_rate) {
    r.certification = Certification::Measured;
    r.lower_bound_holds = *r.measured_min_rate >= r.lower_bound - options.slack;
    if (r.min_rate_ceiling) r.ceiling_holds = *r.measured_min_rate <= *r.min_rate_ceiling + options.slack;
  } else if (additive_min) {
    r.certification = Certification::Additivity;
    r.lower_bound_holds = true;
  }
  if (r.measured_max_rate) {
    r.upper_bound_holds = *r.measured_max_rate <= r.upper_bound + options.slack;
    if (r.max_rate_floor) r.floor_holds = *r.measured_max_rate >= *r.max_rate_floor - options.slack;
  } else {
    r.upper_bound_holds = additive_max;
  }
  return r;
}

}  // namespace

double h_bin(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("binary entropy argument must lie in [0, 1]");
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(t) + term(1.0 - t);
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::Measured:
      return "measured";
    case Certification::Additivity:
      return "additivity";
    case Certification::None:
      return "none";
  }
  return "none";
}

AepBoundReport aep_bounds(const DensityOperator& rho_in, int n, double eps, const AepOptions& options) {
  const DensityOperator rho = as_bipartite(rho_in);
  return assemble(rho, single_copy(rho, options.smoothing.solver), n, eps, options);
}

std::vector<AepBoundReport> aep_sweep(const DensityOperator& rho_in, const std::vector<int>& n_list, double eps,
                                      const AepOptions& options) {
  const DensityOperator rho = as_bipartite(rho_in);
  const SingleCopy s = single_copy(rho, options.smoothing.solver);
  return parallel_map<AepBoundReport>(
      n_list.size(), [&](std::size_t i) { return assemble(rho, s, n_list[i], eps, options); },
      static_cast<unsigned>(options.max_workers));
}

}  // namespace entrolab
