#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace commitpay;
using testing_support::q;

namespace {

// Random LP with a bounding row so every feasible instance has an optimum.
LinearProgram random_bounded_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> vars(1, 6), rows(1, 9), coef(-4, 4), rhs(-3, 12), rel(0, 5);
  LinearProgram lp;
  const int n = vars(rng);
  std::vector<LinearTerm<Rational>> total;
  for (int j = 0; j < n; ++j) {
    lp.add_variable("x" + std::to_string(j));
    lp.set_objective(j, coef(rng));
    total.push_back({j, 1});
  }
  lp.add_constraint(total, Relation::LessEqual, 20, "box");
  const int m = rows(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<LinearTerm<Rational>> terms;
    for (int j = 0; j < n; ++j)
      if (int c = coef(rng); c != 0) terms.push_back({j, c});
    const int r = rel(rng);
    // mostly inequalities, an occasional equality
    const Relation relation = r < 3 ? Relation::LessEqual : (r < 5 ? Relation::GreaterEqual : Relation::Equal);
    lp.add_constraint(std::move(terms), relation, rhs(rng), "r" + std::to_string(i));
  }
  return lp;
}

}  // namespace

TEST_CASE("single bounded variable") {
  LinearProgram lp;
  const int x = lp.add_variable("x");
  lp.set_objective(x, 1);
  lp.add_constraint({{x, 1}}, Relation::LessEqual, q(3, 2));
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.assignment[x] == q(3, 2));
  CHECK(sol.objective_value == q(3, 2));
  CHECK(check_optimality_certificate(lp, sol));
}

TEST_CASE("contradictory bounds are infeasible") {
  LinearProgram lp;
  const int x = lp.add_variable("x");
  lp.set_objective(x, 1);
  lp.add_constraint({{x, 1}}, Relation::GreaterEqual, 1);
  lp.add_constraint({{x, 1}}, Relation::LessEqual, 0);
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded objective carries an improving ray") {
  LinearProgram lp;
  const int x = lp.add_variable("x");
  const int y = lp.add_variable("y");
  lp.set_objective(x, 1);
  lp.add_constraint({{x, 1}, {y, -1}}, Relation::LessEqual, 2);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Unbounded);
  REQUIRE(sol.ray.size() == 2);
  CHECK(sol.ray[x] > 0);
  CHECK(sol.ray[x] - sol.ray[y] <= 0);
  CHECK(sol.ray[y] >= 0);
}

TEST_CASE("free and upper-bounded variables") {
  LinearProgram lp;
  const int x = lp.add_variable("x", std::nullopt);
  const int y = lp.add_variable("y", std::nullopt, Rational(5));
  const int z = lp.add_variable("z", Rational(-2), Rational(1));
  lp.set_objective(x, -1);
  lp.set_objective(y, 1);
  lp.set_objective(z, 1);
  lp.add_constraint({{x, 1}, {y, -1}}, Relation::GreaterEqual, -3);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.assignment[y] == 5);
  CHECK(sol.assignment[x] == 2);
  CHECK(sol.assignment[z] == 1);
  CHECK(sol.objective_value == 4);
  CHECK(check_optimality_certificate(lp, sol));
}

TEST_CASE("equality rows and degenerate vertices") {
  LinearProgram lp;
  const int a = lp.add_variable("a");
  const int b = lp.add_variable("b");
  const int c = lp.add_variable("c");
  lp.set_objective(a, 2);
  lp.set_objective(b, 3);
  lp.set_objective(c, 1);
  lp.add_constraint({{a, 1}, {b, 1}, {c, 1}}, Relation::Equal, 1);
  lp.add_constraint({{b, 1}}, Relation::LessEqual, q(1, 2));
  lp.add_constraint({{a, 1}, {b, 1}}, Relation::LessEqual, 1);
  lp.add_constraint({{a, 1}, {b, 2}}, Relation::LessEqual, q(3, 2));
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == q(5, 2));
  CHECK(check_optimality_certificate(lp, sol));
}

TEST_CASE("tampered solutions fail the certificate") {
  LinearProgram lp;
  const int x = lp.add_variable("x");
  const int y = lp.add_variable("y");
  lp.set_objective(x, 1);
  lp.set_objective(y, 1);
  lp.add_constraint({{x, 1}, {y, 2}}, Relation::LessEqual, 4);
  lp.add_constraint({{x, 3}, {y, 1}}, Relation::LessEqual, 6);
  auto sol = solve_lp(lp);
  REQUIRE(check_optimality_certificate(lp, sol));
  auto worse = sol;
  worse.assignment[x] = 0;
  worse.assignment[y] = 0;
  worse.objective_value = 0;
  CHECK_FALSE(check_optimality_certificate(lp, worse));
  auto bad_duals = sol;
  bad_duals.duals[0] = -1;
  CHECK_FALSE(check_optimality_certificate(lp, bad_duals));
}

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto lp = random_bounded_lp(rng);
    const auto sol = solve_lp(lp);
    const auto best = oracle::lp_vertex_optimum(lp);
    CHECK(sol.status != LpStatus::Unbounded);
    if (best) {
      REQUIRE(sol.status == LpStatus::Optimal);
      CHECK(sol.objective_value == *best);
      CHECK(check_optimality_certificate(lp, sol));
      ++optimal;
    } else {
      CHECK(sol.status == LpStatus::Infeasible);
      ++infeasible;
    }
  }
  CHECK(optimal > 30);
  CHECK(infeasible > 0);
}

TEST_CASE("solving is deterministic") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto lp = random_bounded_lp(rng);
    const auto first = solve_lp(lp);
    const auto second = solve_lp(lp);
    CHECK(first.status == second.status);
    CHECK(first.assignment == second.assignment);
  }
}

TEST_CASE("LP text dump names rows and variables") {
  LinearProgram lp;
  const int x = lp.add_variable("pay", Rational(0), Rational(3));
  lp.set_objective(x, -1);
  lp.add_constraint({{x, 1}}, Relation::GreaterEqual, q(1, 2), "ic[L>M]");
  std::ostringstream out;
  write_lp(out, lp, "demo");
  const std::string text = out.str();
  CHECK(text.find("demo") != std::string::npos);
  CHECK(text.find("ic[L>M]") != std::string::npos);
  CHECK(text.find("pay") != std::string::npos);
  CHECK(text.find("1/2") != std::string::npos);
}
