#include "entrolab/density.hpp"

#include <algorithm>
#include <cmath>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

void validate(const HermitianOperator& op, const std::vector<Subsystem>& subsystems) {
  if (subsystems.empty()) throw DimensionError("state needs at least one subsystem");
  long long total = 1;
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    if (subsystems[i].dim <= 0) throw DimensionError("subsystem dimension must be positive");
    if (subsystems[i].label.empty()) throw InputError("subsystem label must be non-empty");
    for (std::size_t j = 0; j < i; ++j)
      if (subsystems[j].label == subsystems[i].label)
        throw InputError("duplicate subsystem label '" + subsystems[i].label + "'");
    total *= subsystems[i].dim;
  }
  if (total != op.dim())
    throw DimensionError("subsystem dimensions multiply to " + std::to_string(total) +
                         " but the matrix has dimension " + std::to_string(op.dim()));
  const double tr = op.trace();
  if (!(tr > 0.0)) throw ZeroTraceError("state has non-positive trace");
  if (tr > 1.0 + kTraceTolerance)
    throw InputError("state trace " + std::to_string(tr) + " exceeds one");
  if (!is_psd(op.matrix(), kPsdTolerance)) throw InputError("state is not positive semidefinite");
}

}  // namespace

DensityOperator::DensityOperator(const HermitianOperator& op, std::vector<Subsystem> subsystems)
    : op_(op), subsystems_(std::move(subsystems)) {
  validate(op_, subsystems_);
}

DensityOperator::DensityOperator(const ComplexMatrix& m, std::vector<Subsystem> subsystems)
    : DensityOperator(HermitianOperator(m), std::move(subsystems)) {}

std::vector<int> DensityOperator::dims() const {
  std::vector<int> d;
  for (const auto& s : subsystems_) d.push_back(s.dim);
  return d;
}

bool DensityOperator::is_normalized(double tolerance) const {
  return std::abs(trace() - 1.0) <= tolerance;
}

int DensityOperator::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (subsystems_[i].label == label) return static_cast<int>(i);
  throw InputError("state has no subsystem labeled '" + std::string(label) + "'");
}

bool DensityOperator::has(std::string_view label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

DensityOperator DensityOperator::normalized() const {
  return DensityOperator(HermitianOperator::from_trusted(matrix() / trace()), subsystems_);
}

DensityOperator DensityOperator::scaled(double c) const {
  return DensityOperator(HermitianOperator::from_trusted(c * matrix()), subsystems_);
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
  std::vector<int> idx;
  for (const auto& l : keep) idx.push_back(rho.index_of(l));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw InputError("partial trace: subsystem listed twice");
  std::vector<Subsystem> subs;
  for (int i : idx) subs.push_back(rho.subsystems()[i]);
  ComplexMatrix m = partial_trace(rho.matrix(), rho.dims(), idx);
  m = 0.5 * (m + m.adjoint());
  return DensityOperator(HermitianOperator::from_trusted(std::move(m)), std::move(subs));
}

DensityOperator partial_trace(const DensityOperator& rho, std::string_view keep) {
  return partial_trace(rho, std::vector<std::string>{std::string(keep)});
}

DensityOperator regroup(const DensityOperator& rho, const std::vector<std::string>& first,
                        const std::vector<std::string>& second) {
  const int n = static_cast<int>(rho.subsystems().size());
  if (static_cast<int>(first.size() + second.size()) != n || first.empty())
    throw InputError("regroup must list every subsystem exactly once");
  std::vector<int> order;
  Subsystem a{"", 1}, b{"", 1};
  for (const auto& l : first) {
    order.push_back(rho.index_of(l));
    a.label += l;
    a.dim *= rho.dim_of(l);
  }
  for (const auto& l : second) {
    order.push_back(rho.index_of(l));
    b.label += l;
    b.dim *= rho.dim_of(l);
  }
  std::vector<int> check = order;
  std::sort(check.begin(), check.end());
  if (std::adjacent_find(check.begin(), check.end()) != check.end())
    throw InputError("regroup lists a subsystem twice");
  ComplexMatrix m = permute_subsystems(rho.matrix(), rho.dims(), order);
  std::vector<Subsystem> subs{a};
  if (!second.empty()) subs.push_back(b);
  return DensityOperator(HermitianOperator::from_trusted(std::move(m)), std::move(subs));
}

DensityOperator as_bipartite(const DensityOperator& rho) {
  const auto& s = rho.subsystems();
  if (s.size() == 2) return rho;
  if (s.size() == 1) {
    std::string trivial = s[0].label == "B" ? "R" : "B";
    return DensityOperator(rho.op(), {s[0], {trivial, 1}});
  }
  throw InputError("expected a bipartite state; regroup the subsystems first");
}

DensityOperator Purification::state() const {
  ComplexMatrix m = vector * vector.adjoint();
  return DensityOperator(HermitianOperator::from_trusted(0.5 * (m + m.adjoint())), subsystems);
}

Purification purify(const DensityOperator& rho, const std::string& purifier_label) {
  if (rho.has(purifier_label))
    throw InputError("purifier label '" + purifier_label + "' already used by the state");
  SpectralDecomposition s = eig_hermitian(rho.op());
  const int r = std::max(1, s.rank(kRankTolerance));
  check_dimension(static_cast<std::size_t>(rho.dim()) * r, "purification");
  Purification p;
  p.purifier_dim = r;
  p.vector = ComplexVector::Zero(static_cast<Eigen::Index>(rho.dim()) * r);
  for (int k = 0; k < r; ++k) {
    const double lam = std::max(0.0, s.eigenvalues(k));
    for (int i = 0; i < rho.dim(); ++i)
      p.vector(static_cast<Eigen::Index>(i) * r + k) = std::sqrt(lam) * s.eigenvectors(i, k);
  }
  p.subsystems = rho.subsystems();
  p.subsystems.push_back({purifier_label, r});
  return p;
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("fidelity: subsystem dimensions differ");
  return fidelity(rho.op(), sigma.op());
}

}  // namespace entrolab
