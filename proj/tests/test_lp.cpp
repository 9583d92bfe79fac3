#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicbandit/lp.hpp"

using namespace bic;

TEST_CASE("basic maximization as min of negative") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6 -> x=4, y=0, value 12
  LpProblem p;
  p.c = {-3, -2};
  p.add_row({1, 1}, LpProblem::Rel::Le, 4);
  p.add_row({1, 3}, LpProblem::Rel::Le, 6);
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(-12));
  CHECK(r.x[0] == doctest::Approx(4));
  CHECK(r.x[1] == doctest::Approx(0));
}

TEST_CASE("equality and ge rows force phase one") {
  // min x + y s.t. x + 2y = 3, x >= 1 -> x=1, y=1
  LpProblem p;
  p.c = {1, 1};
  p.add_row({1, 2}, LpProblem::Rel::Eq, 3);
  p.add_row({1, 0}, LpProblem::Rel::Ge, 1);
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(2));
  CHECK(r.x[0] == doctest::Approx(1));
  CHECK(r.x[1] == doctest::Approx(1));
}

TEST_CASE("infeasible detected") {
  LpProblem p;
  p.c = {1};
  p.add_row({1}, LpProblem::Rel::Le, 1);
  p.add_row({1}, LpProblem::Rel::Ge, 2);
  CHECK(lp_solve(p).status == LpResult::Status::Infeasible);
}

TEST_CASE("unbounded detected") {
  LpProblem p;
  p.c = {-1};
  p.add_row({-1}, LpProblem::Rel::Le, 0);
  CHECK(lp_solve(p).status == LpResult::Status::Unbounded);
}

TEST_CASE("negative rhs rows are normalized") {
  // min x s.t. -x <= -2   (x >= 2)
  LpProblem p;
  p.c = {1};
  p.add_row({-1}, LpProblem::Rel::Le, -2);
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.x[0] == doctest::Approx(2));
}

TEST_CASE("matrix game value via the LP (rock-paper-scissors-ish)") {
  // min_q max_i (A q)_i for A = [[0,1],[1,0]]: value 1/2 at q = (1/2, 1/2).
  // formulated as: min t s.t. t >= q2, t >= q1, q1 + q2 = 1.
  LpProblem p;
  p.c = {0, 0, 1};
  p.add_row({0, -1, 1}, LpProblem::Rel::Ge, 0);
  p.add_row({-1, 0, 1}, LpProblem::Rel::Ge, 0);
  p.add_row({1, 1, 0}, LpProblem::Rel::Eq, 1);
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(0.5));
  CHECK(r.x[0] == doctest::Approx(0.5));
  CHECK(r.x[1] == doctest::Approx(0.5));
}
