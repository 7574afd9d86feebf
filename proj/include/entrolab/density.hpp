#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "entrolab/linalg.hpp"

namespace entrolab {

struct Subsystem {
  std::string label;
  int dim = 1;
  bool operator==(const Subsystem&) const = default;
};

// Positive semidefinite operator with 0 < trace <= 1 on a labeled tensor
// product. The first subsystem is the slowest index.
class DensityOperator {
 public:
  DensityOperator(const HermitianOperator& op, std::vector<Subsystem> subsystems);
  DensityOperator(const ComplexMatrix& m, std::vector<Subsystem> subsystems);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::vector<int> dims() const;
  int dim() const { return op_.dim(); }
  double trace() const { return op_.trace(); }
  bool is_normalized(double tolerance = kTraceTolerance) const;

  int index_of(std::string_view label) const;  // throws InputError when absent
  bool has(std::string_view label) const;
  int dim_of(std::string_view label) const { return subsystems_[index_of(label)].dim; }

  DensityOperator normalized() const;
  // c * rho; the result must still have trace in (0, 1].
  DensityOperator scaled(double c) const;

 private:
  HermitianOperator op_;
  std::vector<Subsystem> subsystems_;
};

// Keeps the listed subsystems (order taken from the state, not the list).
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep);
DensityOperator partial_trace(const DensityOperator& rho, std::string_view keep);

// Merges subsystems into a bipartite state first|second, e.g. A|BC. Labels of
// merged groups are concatenated. Every subsystem must appear exactly once.
DensityOperator regroup(const DensityOperator& rho, const std::vector<std::string>& first,
                        const std::vector<std::string>& second);

// Views a state as bipartite A|B. A one-subsystem state gets a trivial B of
// dimension one.
DensityOperator as_bipartite(const DensityOperator& rho);

struct Purification {
  ComplexVector vector;              // norm^2 equals the trace of the state
  std::vector<Subsystem> subsystems;  // original subsystems followed by the purifier
  int purifier_dim = 0;

  DensityOperator state() const;
};

// |psi> = sum_k sqrt(lambda_k) |v_k> |k> over eigenvalues above kRankTolerance.
Purification purify(const DensityOperator& rho, const std::string& purifier_label = "C");

double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace entrolab
