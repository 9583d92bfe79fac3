#pragma once

#include <vector>

namespace bic {

// Small dense LP in standard computational form:
//   minimize c'x  subject to  A x {<=,=,>=} b,  x >= 0.
// Two-phase tableau simplex with Bland's rule. Sized for the desk-scale
// recommendation games (a few thousand constraints at most).
struct LpProblem {
  enum class Rel { Le, Eq, Ge };
  std::vector<double> c;
  std::vector<std::vector<double>> rows;
  std::vector<Rel> rels;
  std::vector<double> b;

  void add_row(std::vector<double> a, Rel rel, double rhs) {
    rows.push_back(std::move(a));
    rels.push_back(rel);
    b.push_back(rhs);
  }
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double objective = 0;
  std::vector<double> x;
};

LpResult lp_solve(const LpProblem& p, double tol = 1e-11);

}  // namespace bic
