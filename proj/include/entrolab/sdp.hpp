#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "entrolab/linalg.hpp"

namespace entrolab::sdp {

enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded, MaxIterations };
std::string_view to_string(Status s);

enum class VariableKind { Hermitian, Matrix, Scalar };

struct Variable {
  std::string label;
  VariableKind kind;
  int rows = 1;
  int cols = 1;
  bool constrained = false;  // PSD for Hermitian, non-negative for scalars
  int first_param = 0;
  int num_params = 0;
};

// Real linear functional: sum Re tr(C_v X_v) + sum a_s s + constant.
class LinearForm {
 public:
  // For a Hermitian or matrix variable X (rows x cols), C is cols x rows.
  LinearForm& add_trace(int var, const ComplexMatrix& coefficient);
  LinearForm& add_scalar(int var, double coefficient);
  LinearForm& add_constant(double c);

 private:
  friend class Problem;
  struct TraceTerm {
    int var;
    ComplexMatrix coefficient;
  };
  struct ScalarTerm {
    int var;
    double coefficient;
  };
  std::vector<TraceTerm> traces_;
  std::vector<ScalarTerm> scalars_;
  double constant_ = 0.0;
};

// Hermitian-matrix-valued affine expression of the problem variables.
class MatrixExpression {
 public:
  explicit MatrixExpression(int dim);
  int dim() const { return dim_; }

  // Hermitian constant placed as a diagonal block at the offset.
  MatrixExpression& add_constant(const ComplexMatrix& c, int offset = 0);
  // coefficient * (I_copies (x) X) as a diagonal block at the offset.
  MatrixExpression& add_hermitian(int var, double coefficient = 1.0, int offset = 0, int copies = 1);
  // coefficient * Y at (row, col) together with its adjoint at (col, row).
  // The two placements must not overlap.
  MatrixExpression& add_off_diagonal(int var, int row, int col, cplx coefficient = 1.0);
  // s * C for a scalar variable; C is Hermitian of full size.
  MatrixExpression& add_scalar(int var, const ComplexMatrix& c);

 private:
  friend class Problem;
  struct Term {
    enum Kind { Hermitian, OffDiagonal, Scalar } kind;
    int var;
    cplx coefficient;
    int row;
    int col;
    int copies;
    ComplexMatrix matrix;
  };
  int dim_;
  ComplexMatrix constant_;
  std::vector<Term> terms_;
};

struct SparseEntry {
  int row;
  int col;
  cplx value;
};

// One LMI block F0 + sum_i y_i F_i >= 0 with sparse F_i.
struct LmiBlock {
  std::string label;
  int dim = 0;
  ComplexMatrix constant;
  std::vector<int> params;
  std::vector<std::vector<SparseEntry>> coefficients;
};

// minimize cost^T y + cost_offset subject to every block PSD and eq y = eq_rhs.
struct StandardForm {
  int num_params = 0;
  RealVector cost;
  double cost_offset = 0.0;
  bool maximize = false;  // the user objective is -(cost^T y + offset)
  std::vector<LmiBlock> blocks;
  Eigen::MatrixXd eq_matrix;
  RealVector eq_rhs;
};

struct Options {
  double gap_tolerance = 1e-8;          // relative duality gap
  double feasibility_tolerance = 1e-8;  // relative residuals
  int max_iterations = 200;
  int max_total_dimension = 256;        // sum of block dimensions, scalar rows included
  bool real_embedding = false;          // solve the [[Re, -Im], [Im, Re]] real form
};

struct Solution {
  Status status = Status::MaxIterations;
  double primal_objective = 0.0;  // in the user's sense
  double dual_objective = 0.0;
  double duality_gap = 0.0;       // |primal - dual|
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<ComplexMatrix> values;           // one per variable
  std::vector<ComplexMatrix> constraint_duals;  // one per LMI block of the compiled form
  std::vector<std::string> constraint_labels;

  const ComplexMatrix& value(int var) const { return values.at(var); }
  double scalar(int var) const { return values.at(var)(0, 0).real(); }
};

struct ConstraintViolation {
  std::string label;
  double violation = 0.0;  // most negative eigenvalue or absolute equality residual
};

struct FeasibilityReport {
  std::vector<ConstraintViolation> constraints;
  double max_violation = 0.0;
  bool feasible(double tolerance) const { return max_violation <= tolerance; }
};

class Problem {
 public:
  int add_hermitian(std::string label, int dim, bool psd = true);
  int add_matrix(std::string label, int rows, int cols);
  int add_scalar(std::string label, bool nonnegative = false);

  void set_objective(Sense sense, LinearForm form);
  void add_psd(std::string label, MatrixExpression expr);     // expr >= 0
  void add_inequality(std::string label, LinearForm form);     // form >= 0
  void add_equality(std::string label, LinearForm form);       // form == 0
  void add_matrix_equality(std::string label, MatrixExpression expr);  // expr == 0

  const std::vector<Variable>& variables() const { return variables_; }
  int num_params() const { return num_params_; }

  StandardForm compile() const;
  std::vector<ComplexMatrix> unpack(const RealVector& y) const;
  RealVector pack(const std::vector<ComplexMatrix>& values) const;
  double objective_value(const std::vector<ComplexMatrix>& values) const;

 private:
  struct Named {
    std::string label;
    MatrixExpression expr;
  };
  struct NamedForm {
    std::string label;
    LinearForm form;
  };
  friend FeasibilityReport check_feasibility(const Problem&, const std::vector<ComplexMatrix>&);

  const Variable& var(int id) const;
  RealVector form_coefficients(const LinearForm& f) const;
  LmiBlock compile_expression(const std::string& label, const MatrixExpression& e) const;

  std::vector<Variable> variables_;
  int num_params_ = 0;
  Sense sense_ = Sense::Minimize;
  bool has_objective_ = false;
  LinearForm objective_;
  std::vector<Named> psd_;
  std::vector<NamedForm> inequalities_;
  std::vector<NamedForm> equalities_;
  std::vector<Named> matrix_equalities_;
};

Solution solve(const Problem& problem, const Options& options = {});
// Solves a compiled form; values are left empty.
Solution solve(const StandardForm& form, const Options& options = {});

// Per-constraint violations of candidate variable values (same layout as
// Solution::values).
FeasibilityReport check_feasibility(const Problem& problem, const std::vector<ComplexMatrix>& values);

// JSON dump of a compiled problem for debugging.
std::string dump_json(const StandardForm& form);

}  // namespace entrolab::sdp
