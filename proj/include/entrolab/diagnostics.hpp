#pragma once

#include <string>

#include "entrolab/sdp.hpp"

namespace entrolab {

struct Diagnostics {
  std::string status;  // solver status for SDP routes, empty otherwise
  int iterations = 0;
  double duality_gap = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double gap_tolerance = 0.0;
  double feasibility_tolerance = 0.0;
};

Diagnostics make_diagnostics(const sdp::Solution& sol, const sdp::Options& options);

// Solves and throws SolverError unless the status is optimal.
sdp::Solution solve_checked(const sdp::Problem& problem, const sdp::Options& options,
                            const std::string& what);

}  // namespace entrolab
