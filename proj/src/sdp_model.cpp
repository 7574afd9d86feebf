#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

#include "entrolab/errors.hpp"
#include "entrolab/sdp.hpp"

namespace entrolab::sdp {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

const cplx I1(0.0, 1.0);

// Calls f(param, row, col, value) for every nonzero entry of the unit matrix of
// each real parameter of the variable (local parameter index, local position).
template <class F>
void for_each_unit(const Variable& v, F&& f) {
  switch (v.kind) {
    case VariableKind::Hermitian: {
      const int n = v.rows;
      for (int a = 0; a < n; ++a) f(a, a, a, cplx(1.0));
      int k = n;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          f(k, a, b, cplx(1.0));
          f(k, b, a, cplx(1.0));
          f(k + 1, a, b, I1);
          f(k + 1, b, a, -I1);
          k += 2;
        }
      break;
    }
    case VariableKind::Matrix:
      for (int a = 0; a < v.rows; ++a)
        for (int b = 0; b < v.cols; ++b) {
          const int k = 2 * (a * v.cols + b);
          f(k, a, b, cplx(1.0));
          f(k + 1, a, b, I1);
        }
      break;
    case VariableKind::Scalar:
      f(0, 0, 0, cplx(1.0));
      break;
  }
}

void check_hermitian_constant(const ComplexMatrix& c) {
  if (c.rows() != c.cols()) throw DimensionError("constant block must be square");
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTolerance * std::max(1.0, c.cwiseAbs().maxCoeff()))
    throw InputError("constant block must be Hermitian");
}

}  // namespace

LinearForm& LinearForm::add_trace(int var, const ComplexMatrix& coefficient) {
  traces_.push_back({var, coefficient});
  return *this;
}

LinearForm& LinearForm::add_scalar(int var, double coefficient) {
  scalars_.push_back({var, coefficient});
  return *this;
}

LinearForm& LinearForm::add_constant(double c) {
  constant_ += c;
  return *this;
}

MatrixExpression::MatrixExpression(int dim) : dim_(dim), constant_(ComplexMatrix::Zero(dim, dim)) {
  if (dim <= 0) throw DimensionError("matrix expression needs a positive dimension");
}

MatrixExpression& MatrixExpression::add_constant(const ComplexMatrix& c, int offset) {
  check_hermitian_constant(c);
  if (offset < 0 || offset + c.rows() > dim_) throw DimensionError("constant block out of range");
  constant_.block(offset, offset, c.rows(), c.cols()) += 0.5 * (c + c.adjoint());
  return *this;
}

MatrixExpression& MatrixExpression::add_hermitian(int var, double coefficient, int offset, int copies) {
  if (copies < 1) throw InputError("copies must be positive");
  terms_.push_back({Term::Hermitian, var, coefficient, offset, offset, copies, {}});
  return *this;
}

MatrixExpression& MatrixExpression::add_off_diagonal(int var, int row, int col, cplx coefficient) {
  terms_.push_back({Term::OffDiagonal, var, coefficient, row, col, 1, {}});
  return *this;
}

MatrixExpression& MatrixExpression::add_scalar(int var, const ComplexMatrix& c) {
  check_hermitian_constant(c);
  if (c.rows() != dim_) throw DimensionError("scalar coefficient must have full size");
  terms_.push_back({Term::Scalar, var, 1.0, 0, 0, 1, 0.5 * (c + c.adjoint())});
  return *this;
}

int Problem::add_hermitian(std::string label, int dim, bool psd) {
  if (dim <= 0) throw DimensionError("variable dimension must be positive");
  Variable v{std::move(label), VariableKind::Hermitian, dim, dim, psd, num_params_, dim * dim};
  num_params_ += v.num_params;
  variables_.push_back(std::move(v));
  return static_cast<int>(variables_.size()) - 1;
}

int Problem::add_matrix(std::string label, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw DimensionError("variable dimension must be positive");
  Variable v{std::move(label), VariableKind::Matrix, rows, cols, false, num_params_, 2 * rows * cols};
  num_params_ += v.num_params;
  variables_.push_back(std::move(v));
  return static_cast<int>(variables_.size()) - 1;
}

int Problem::add_scalar(std::string label, bool nonnegative) {
  Variable v{std::move(label), VariableKind::Scalar, 1, 1, nonnegative, num_params_, 1};
  num_params_ += 1;
  variables_.push_back(std::move(v));
  return static_cast<int>(variables_.size()) - 1;
}

const Variable& Problem::var(int id) const {
  if (id < 0 || id >= static_cast<int>(variables_.size())) throw InputError("unknown variable id");
  return variables_[id];
}

void Problem::set_objective(Sense sense, LinearForm form) {
  sense_ = sense;
  objective_ = std::move(form);
  has_objective_ = true;
}

void Problem::add_psd(std::string label, MatrixExpression expr) {
  psd_.push_back({std::move(label), std::move(expr)});
}

void Problem::add_inequality(std::string label, LinearForm form) {
  inequalities_.push_back({std::move(label), std::move(form)});
}

void Problem::add_equality(std::string label, LinearForm form) {
  equalities_.push_back({std::move(label), std::move(form)});
}

void Problem::add_matrix_equality(std::string label, MatrixExpression expr) {
  matrix_equalities_.push_back({std::move(label), std::move(expr)});
}

RealVector Problem::form_coefficients(const LinearForm& f) const {
  RealVector c = RealVector::Zero(num_params_);
  for (const auto& t : f.traces_) {
    const Variable& v = var(t.var);
    if (v.kind == VariableKind::Scalar) throw InputError("use add_scalar for scalar variables");
    if (t.coefficient.rows() != v.cols || t.coefficient.cols() != v.rows)
      throw DimensionError("trace coefficient has the wrong shape for '" + v.label + "'");
    for_each_unit(v, [&](int k, int r, int col, cplx val) {
      c(v.first_param + k) += (t.coefficient(col, r) * val).real();
    });
  }
  for (const auto& s : f.scalars_) {
    const Variable& v = var(s.var);
    if (v.kind != VariableKind::Scalar) throw InputError("add_scalar needs a scalar variable");
    c(v.first_param) += s.coefficient;
  }
  return c;
}

LmiBlock Problem::compile_expression(const std::string& label, const MatrixExpression& e) const {
  std::map<int, std::vector<SparseEntry>> entries;
  const int n = e.dim_;
  for (const auto& t : e.terms_) {
    const Variable& v = var(t.var);
    switch (t.kind) {
      case MatrixExpression::Term::Hermitian: {
        if (v.kind != VariableKind::Hermitian) throw InputError("'" + v.label + "' is not Hermitian");
        if (t.row < 0 || t.row + t.copies * v.rows > n) throw DimensionError("Hermitian term out of range");
        for_each_unit(v, [&](int k, int r, int c, cplx val) {
          for (int cp = 0; cp < t.copies; ++cp) {
            const int o = t.row + cp * v.rows;
            entries[v.first_param + k].push_back({o + r, o + c, t.coefficient * val});
          }
        });
        break;
      }
      case MatrixExpression::Term::OffDiagonal: {
        if (v.kind != VariableKind::Matrix) throw InputError("'" + v.label + "' is not a matrix variable");
        if (t.row < 0 || t.col < 0 || t.row + v.rows > n || t.col + v.cols > n)
          throw DimensionError("off-diagonal term out of range");
        if (t.row < t.col + v.cols && t.col < t.row + v.rows)
          throw InputError("off-diagonal term overlaps its adjoint");
        for_each_unit(v, [&](int k, int r, int c, cplx val) {
          const cplx x = t.coefficient * val;
          entries[v.first_param + k].push_back({t.row + r, t.col + c, x});
          entries[v.first_param + k].push_back({t.col + c, t.row + r, std::conj(x)});
        });
        break;
      }
      case MatrixExpression::Term::Scalar: {
        if (v.kind != VariableKind::Scalar) throw InputError("'" + v.label + "' is not a scalar");
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c)
            if (t.matrix(r, c) != 0.0) entries[v.first_param].push_back({r, c, t.matrix(r, c)});
        break;
      }
    }
  }
  LmiBlock b;
  b.label = label;
  b.dim = n;
  b.constant = e.constant_;
  for (auto& [param, list] : entries) {
    std::sort(list.begin(), list.end(), [](const SparseEntry& x, const SparseEntry& y) {
      return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    std::vector<SparseEntry> merged;
    for (const auto& en : list) {
      if (!merged.empty() && merged.back().row == en.row && merged.back().col == en.col)
        merged.back().value += en.value;
      else
        merged.push_back(en);
    }
    std::erase_if(merged, [](const SparseEntry& x) { return x.value == 0.0; });
    if (merged.empty()) continue;
    b.params.push_back(param);
    b.coefficients.push_back(std::move(merged));
  }
  return b;
}

StandardForm Problem::compile() const {
  if (!has_objective_) throw InputError("SDP has no objective");
  if (num_params_ == 0) throw InputError("SDP has no variables");
  StandardForm f;
  f.num_params = num_params_;
  f.cost = form_coefficients(objective_);
  f.cost_offset = objective_.constant_;
  if (f.cost.cwiseAbs().maxCoeff() == 0.0) throw InputError("SDP objective is empty");
  if (sense_ == Sense::Maximize) {
    f.cost = -f.cost;
    f.cost_offset = -f.cost_offset;
    f.maximize = true;
  }
  for (int id = 0; id < static_cast<int>(variables_.size()); ++id) {
    const Variable& v = variables_[id];
    if (!v.constrained) continue;
    if (v.kind == VariableKind::Hermitian) {
      MatrixExpression e(v.rows);
      e.add_hermitian(id);
      f.blocks.push_back(compile_expression(v.label + " >= 0", e));
    } else if (v.kind == VariableKind::Scalar) {
      MatrixExpression e(1);
      e.add_scalar(id, ComplexMatrix::Ones(1, 1));
      f.blocks.push_back(compile_expression(v.label + " >= 0", e));
    }
  }
  for (const auto& c : psd_) f.blocks.push_back(compile_expression(c.label, c.expr));
  for (const auto& c : inequalities_) {
    RealVector coef = form_coefficients(c.form);
    LmiBlock b;
    b.label = c.label;
    b.dim = 1;
    b.constant = ComplexMatrix::Constant(1, 1, c.form.constant_);
    for (int i = 0; i < num_params_; ++i)
      if (coef(i) != 0.0) {
        b.params.push_back(i);
        b.coefficients.push_back({{0, 0, coef(i)}});
      }
    f.blocks.push_back(std::move(b));
  }

  std::vector<RealVector> rows;
  std::vector<double> rhs;
  auto push_row = [&](RealVector r, double value, const std::string& label) {
    if (r.cwiseAbs().maxCoeff() == 0.0) {
      if (std::abs(value) > 1e-12) throw InputError("equality '" + label + "' is inconsistent");
      return;
    }
    rows.push_back(std::move(r));
    rhs.push_back(value);
  };
  for (const auto& c : equalities_) push_row(form_coefficients(c.form), -c.form.constant_, c.label);
  for (const auto& c : matrix_equalities_) {
    LmiBlock b = compile_expression(c.label, c.expr);
    const int n = b.dim;
    // row index for (a <= b, part)
    std::vector<RealVector> re(n * n, RealVector()), im(n * n, RealVector());
    for (std::size_t k = 0; k < b.params.size(); ++k)
      for (const auto& en : b.coefficients[k]) {
        if (en.row > en.col) continue;
        const int idx = en.row * n + en.col;
        if (re[idx].size() == 0) re[idx] = RealVector::Zero(num_params_);
        if (im[idx].size() == 0) im[idx] = RealVector::Zero(num_params_);
        re[idx](b.params[k]) += en.value.real();
        im[idx](b.params[k]) += en.value.imag();
      }
    for (int a = 0; a < n; ++a)
      for (int bb = a; bb < n; ++bb) {
        const int idx = a * n + bb;
        const cplx c0 = b.constant(a, bb);
        push_row(re[idx].size() ? re[idx] : RealVector::Zero(num_params_), -c0.real(), c.label);
        if (bb > a) push_row(im[idx].size() ? im[idx] : RealVector::Zero(num_params_), -c0.imag(), c.label);
      }
  }
  f.eq_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), num_params_);
  f.eq_rhs = RealVector::Zero(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    f.eq_matrix.row(r) = rows[r].transpose();
    f.eq_rhs(r) = rhs[r];
  }
  return f;
}

std::vector<ComplexMatrix> Problem::unpack(const RealVector& y) const {
  std::vector<ComplexMatrix> out;
  for (const auto& v : variables_) {
    ComplexMatrix m = ComplexMatrix::Zero(v.rows, v.cols);
    for_each_unit(v, [&](int k, int r, int c, cplx val) { m(r, c) += y(v.first_param + k) * val; });
    out.push_back(std::move(m));
  }
  return out;
}

RealVector Problem::pack(const std::vector<ComplexMatrix>& values) const {
  if (values.size() != variables_.size()) throw InputError("value count does not match variables");
  RealVector y = RealVector::Zero(num_params_);
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const Variable& v = variables_[i];
    const ComplexMatrix& m = values[i];
    if (m.rows() != v.rows || m.cols() != v.cols)
      throw DimensionError("value for '" + v.label + "' has the wrong shape");
    std::vector<bool> done(v.num_params, false);
    for_each_unit(v, [&](int k, int r, int c, cplx val) {
      if (done[k]) return;
      done[k] = true;
      // val is 1 or i at the first visited position
      y(v.first_param + k) = (val == cplx(1.0)) ? m(r, c).real() : m(r, c).imag();
    });
  }
  return y;
}

double Problem::objective_value(const std::vector<ComplexMatrix>& values) const {
  return form_coefficients(objective_).dot(pack(values)) + objective_.constant_;
}

FeasibilityReport check_feasibility(const Problem& problem, const std::vector<ComplexMatrix>& values) {
  StandardForm f = problem.compile();
  RealVector y = problem.pack(values);
  FeasibilityReport rep;
  for (const auto& b : f.blocks) {
    ComplexMatrix s = b.constant;
    for (std::size_t k = 0; k < b.params.size(); ++k)
      for (const auto& en : b.coefficients[k]) s(en.row, en.col) += y(b.params[k]) * en.value;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
    const double v = std::max(0.0, -es.eigenvalues().minCoeff());
    rep.constraints.push_back({b.label, v});
    rep.max_violation = std::max(rep.max_violation, v);
  }
  if (f.eq_matrix.rows() > 0) {
    RealVector r = f.eq_matrix * y - f.eq_rhs;
    const double v = r.cwiseAbs().maxCoeff();
    rep.constraints.push_back({"equalities", v});
    rep.max_violation = std::max(rep.max_violation, v);
  }
  return rep;
}

std::string dump_json(const StandardForm& form) {
  using nlohmann::json;
  json j;
  j["num_params"] = form.num_params;
  j["maximize"] = form.maximize;
  j["cost"] = std::vector<double>(form.cost.data(), form.cost.data() + form.cost.size());
  j["cost_offset"] = form.cost_offset;
  json blocks = json::array();
  for (const auto& b : form.blocks) {
    json jb;
    jb["label"] = b.label;
    jb["dim"] = b.dim;
    json c = json::array();
    for (int r = 0; r < b.dim; ++r)
      for (int col = 0; col < b.dim; ++col)
        if (b.constant(r, col) != 0.0)
          c.push_back({r, col, b.constant(r, col).real(), b.constant(r, col).imag()});
    jb["constant"] = c;
    json coeffs = json::array();
    for (std::size_t k = 0; k < b.params.size(); ++k) {
      json e = json::array();
      for (const auto& en : b.coefficients[k]) e.push_back({en.row, en.col, en.value.real(), en.value.imag()});
      coeffs.push_back({{"param", b.params[k]}, {"entries", e}});
    }
    jb["coefficients"] = coeffs;
    blocks.push_back(jb);
  }
  j["blocks"] = blocks;
  json eq = json::array();
  for (Eigen::Index r = 0; r < form.eq_matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < form.eq_matrix.cols(); ++c)
      if (form.eq_matrix(r, c) != 0.0) row.push_back({c, form.eq_matrix(r, c)});
    eq.push_back({{"coefficients", row}, {"rhs", form.eq_rhs(r)}});
  }
  j["equalities"] = eq;
  return j.dump(2);
}

}  // namespace entrolab::sdp
