#include "ergopt/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "ergopt/error.hpp"

namespace ergopt::lp {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class Outcome { Optimal, Unbounded };

// Maximizes cost . x over the tableau using Bland's rule, entering only
// columns with allowed[c] set.
Outcome run_simplex(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed,
                    double tol, int& iterations) {
  const std::size_t m = t.rows();
  const std::size_t n = t.cols();
  std::vector<bool> is_basic(n, false);
  for (;;) {
    std::fill(is_basic.begin(), is_basic.end(), false);
    for (std::size_t b : t.basis()) is_basic[b] = true;
    std::size_t entering = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (!allowed[c] || is_basic[c]) continue;
      double reduced = cost[c];
      for (std::size_t r = 0; r < m; ++r) reduced -= cost[t.basis()[r]] * t.at(r, c);
      if (reduced > tol) {
        entering = c;
        break;
      }
    }
    if (entering == n) return Outcome::Optimal;

    std::size_t leaving = m;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, entering);
      if (a <= tol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (leaving == m || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && t.basis()[r] < t.basis()[leaving])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving == m) return Outcome::Unbounded;
    t.pivot(leaving, entering);
    for (std::size_t r = 0; r < m; ++r) {
      if (t.rhs(r) < 0.0 && t.rhs(r) > -tol) t.rhs(r) = 0.0;
    }
    if (++iterations > 100000) {
      throw Error(ErrorCode::MaxIters, "simplex exceeded its iteration limit");
    }
  }
}

}  // namespace

Result solve(const LinearProgram& program, double tol) {
  const std::size_t m = program.rows.size();
  const std::size_t nv = program.num_vars;
  if (program.objective.size() != nv || program.senses.size() != m || program.rhs.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "linear program has inconsistent sizes");
  }
  std::vector<double> sign(m, 1.0);
  std::vector<RowSense> senses = program.senses;
  std::vector<std::size_t> slack_col(m, 0);
  std::size_t num_slacks = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (program.rows[i].size() != nv) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has the wrong length");
    }
    if (program.rhs[i] < 0.0) {
      sign[i] = -1.0;
      if (senses[i] == RowSense::LessEqual) {
        senses[i] = RowSense::GreaterEqual;
      } else if (senses[i] == RowSense::GreaterEqual) {
        senses[i] = RowSense::LessEqual;
      }
    }
    if (senses[i] != RowSense::Equal) slack_col[i] = nv + num_slacks++;
  }
  const std::size_t art0 = nv + num_slacks;
  const std::size_t n = art0 + m;

  Tableau t(m, n);
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nv; ++j) t.at(i, j) = sign[i] * program.rows[i][j];
    if (senses[i] == RowSense::LessEqual) t.at(i, slack_col[i]) = 1.0;
    if (senses[i] == RowSense::GreaterEqual) t.at(i, slack_col[i]) = -1.0;
    t.at(i, art0 + i) = 1.0;
    t.rhs(i) = sign[i] * program.rhs[i];
    t.basis()[i] = art0 + i;
    rhs_scale = std::max(rhs_scale, std::abs(program.rhs[i]));
  }

  Result result;
  std::vector<bool> allowed(n, true);
  std::vector<double> cost(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) cost[art0 + i] = -1.0;
  run_simplex(t, cost, allowed, tol, result.iterations);
  double infeasibility = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] >= art0) infeasibility += std::max(t.rhs(r), 0.0);
  }
  if (infeasibility > tol * rhs_scale) {
    result.status = Status::Infeasible;
    return result;
  }

  // Pivot remaining artificials out; rows where that is impossible are
  // redundant and keep their artificial basic at zero.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < art0) continue;
    std::size_t best = n;
    double best_abs = tol;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(t.at(r, c)) > best_abs) {
        best_abs = std::abs(t.at(r, c));
        best = c;
      }
    }
    if (best < n) {
      t.rhs(r) = 0.0;
      t.pivot(r, best);
    }
  }

  std::fill(cost.begin(), cost.end(), 0.0);
  const double dir = program.maximize ? 1.0 : -1.0;
  for (std::size_t j = 0; j < nv; ++j) cost[j] = dir * program.objective[j];
  for (std::size_t i = 0; i < m; ++i) allowed[art0 + i] = false;
  if (run_simplex(t, cost, allowed, tol, result.iterations) == Outcome::Unbounded) {
    result.status = Status::Unbounded;
    return result;
  }

  result.status = Status::Optimal;
  result.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < nv) result.x[t.basis()[r]] = std::max(t.rhs(r), 0.0);
  }
  result.value = 0.0;
  for (std::size_t j = 0; j < nv; ++j) result.value += program.objective[j] * result.x[j];
  result.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double y = 0.0;
    for (std::size_t r = 0; r < m; ++r) y += cost[t.basis()[r]] * t.at(r, art0 + i);
    result.duals[i] = dir * sign[i] * y;
  }
  return result;
}

}  // namespace ergopt::lp
