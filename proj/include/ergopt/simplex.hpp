#pragma once

#include <vector>

namespace ergopt::lp {

enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

// max (or min) objective . x  subject to  rows[i] . x (sense) rhs[i],  x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  bool maximize = true;

  void add_row(std::vector<double> coefficients, RowSense sense, double value) {
    rows.push_back(std::move(coefficients));
    senses.push_back(sense);
    rhs.push_back(value);
  }
};

struct Result {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  // One multiplier per row: the rate of change of the optimal value with
  // respect to rhs[i].
  std::vector<double> duals;
  int iterations = 0;
};

// Dense two-phase tableau simplex with Bland's rule.
Result solve(const LinearProgram& program, double tol = 1e-9);

}  // namespace ergopt::lp
