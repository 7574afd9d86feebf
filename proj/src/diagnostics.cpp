#include "entrolab/diagnostics.hpp"

#include "entrolab/errors.hpp"

namespace entrolab {

Diagnostics make_diagnostics(const sdp::Solution& sol, const sdp::Options& options) {
  Diagnostics d;
  d.status = std::string(sdp::to_string(sol.status));
  d.iterations = sol.iterations;
  d.duality_gap = sol.duality_gap;
  d.relative_gap = sol.relative_gap;
  d.primal_infeasibility = sol.primal_infeasibility;
  d.dual_infeasibility = sol.dual_infeasibility;
  d.gap_tolerance = options.gap_tolerance;
  d.feasibility_tolerance = options.feasibility_tolerance;
  return d;
}

sdp::Solution solve_checked(const sdp::Problem& problem, const sdp::Options& options,
                            const std::string& what) {
  sdp::Solution sol = sdp::solve(problem, options);
  if (sol.status != sdp::Status::Optimal)
    throw SolverError(what + ": solver finished with status " + std::string(sdp::to_string(sol.status)) +
                      " after " + std::to_string(sol.iterations) + " iterations (relative gap " +
                      std::to_string(sol.relative_gap) + ")");
  return sol;
}

}  // namespace entrolab
