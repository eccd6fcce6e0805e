#include <doctest.h>

#include <random>

#include "commitpay/commit_solvers.hpp"
#include "commitpay/random.hpp"
#include "commitpay/reductions.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace commitpay;
using testing_support::fixture_game;
using testing_support::q;
using testing_support::vec;

namespace {

const VectorXq& mixture_of(const SolveReport& report) {
  return std::get<Mixture<Rational>>(report.commitment->strategy).probabilities;
}

// Classical commitment value without payments: for each follower action, the
// best vertex of the region where that action is a best response.
Rational stackelberg_by_vertices(const NormalFormGame& game) {
  const MatrixXq u1 = game.payoff_matrix(0), u2 = game.payoff_matrix(1);
  std::optional<Rational> best;
  for (Index b = 0; b < u1.cols(); ++b) {
    LinearProgram lp;
    std::vector<LinearTerm<Rational>> simplex;
    for (Index a = 0; a < u1.rows(); ++a) {
      lp.add_variable("p");
      lp.set_objective(static_cast<int>(a), u1(a, b));
      simplex.push_back({static_cast<int>(a), 1});
    }
    lp.add_constraint(simplex, Relation::Equal, 1);
    for (Index other = 0; other < u1.cols(); ++other) {
      std::vector<LinearTerm<Rational>> terms;
      for (Index a = 0; a < u1.rows(); ++a) terms.push_back({static_cast<int>(a), u2(a, b) - u2(a, other)});
      lp.add_constraint(terms, Relation::GreaterEqual, 0);
    }
    if (auto v = oracle::lp_vertex_optimum(lp); v && (!best || *v > *best)) best = v;
  }
  return *best;
}

}  // namespace

TEST_CASE("pure commitment on the motivating example") {
  const auto report = solve_two_player_pure(fixture_game("motivating.json"));
  CHECK(report.value == 0);
  CHECK(report.setting == "2p-pure");
  // (Bottom, Left) with payment 2 is the lexicographically first maximizer
  CHECK(std::get<PureAction>(report.commitment->strategy).action == 1);
  CHECK(report.commitment->payments.follower_action_values() == vec({2, 0, 0}));
  CHECK(report.follower_play[0][0] == vec({1, 0, 0}));
  CHECK(all_slacks_nonnegative(report.certificate));
}

TEST_CASE("pure commitment values from the worked examples") {
  CHECK(solve_two_player_pure(fixture_game("dominated.json")).value == 2);
  CHECK(solve_two_player_pure(fixture_game("matching_pennies.json")).value == -1);
}

TEST_CASE("mixed commitment on the motivating example") {
  const auto game = fixture_game("motivating.json");
  const auto report = solve_two_player_mixed(game);
  CHECK(report.value == q(1, 3));
  CHECK(mixture_of(report) == vec({q(1, 3), q(2, 3)}));
  const auto& pay = report.commitment->payments.follower_action_values();
  CHECK(oracle::two_player_commitment_value(game, mixture_of(report), pay) == q(1, 3));
  std::vector<VectorXq> play{report.follower_play[0][0]};
  CHECK(evaluate_leader(game, *report.commitment, play) == q(1, 3));
  CHECK(all_slacks_nonnegative(report.certificate));
}

TEST_CASE("mixed commitment without payments on the motivating example") {
  SolverOptions options;
  options.allow_payments = false;
  const auto report = solve_two_player_mixed(fixture_game("motivating.json"), options);
  CHECK(report.value == 0);
  CHECK(report.commitment->payments.follower_action_values().isZero());
}

TEST_CASE("matching pennies mixed value is zero") {
  CHECK(solve_two_player_mixed(fixture_game("matching_pennies.json")).value == 0);
}

TEST_CASE("no payment when the follower already plays the leader's favorite") {
  // follower strictly prefers column 0 everywhere; leader likes column 0 most
  const NormalFormGame game({{"x", "y"}, {"l", "r"}},
                            (MatrixXq(4, 2) << 3, 2, 1, 0, 5, 1, 2, 0).finished());
  const auto report = solve_two_player_mixed(game);
  CHECK(report.value == 5);
  CHECK(report.commitment->payments.follower_action_values().isZero());
}

TEST_CASE("random games: pure and mixed against independent oracles") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> size(1, 4);
    const auto game = random_game({size(rng), size(rng)}, 4, rng);
    const auto pure = solve_two_player_pure(game);
    const auto mixed = solve_two_player_mixed(game);
    CHECK(pure.value == oracle::best_pure_commitment(game));
    CHECK(mixed.value >= pure.value);
    CHECK(oracle::two_player_commitment_value(game, mixture_of(mixed),
                                              mixed.commitment->payments.follower_action_values()) ==
          mixed.value);
    CHECK(all_slacks_nonnegative(mixed.certificate));
    CHECK(all_slacks_nonnegative(pure.certificate));

    SolverOptions none;
    none.allow_payments = false;
    CHECK(solve_two_player_mixed(game, none).value == stackelberg_by_vertices(game));
  }
}

TEST_CASE("sequential pure on trivial games") {
  const NormalFormGame zeros({{"a", "b"}, {"c", "d"}, {"e", "f"}}, MatrixXq::Zero(8, 3));
  const auto report = solve_three_player_sequential_pure(zeros);
  CHECK(report.value == 0);
  CHECK(report.sequential->pay_1_to_2 == 0);
  CHECK(report.sequential->pay_1_to_3 == 0);
  CHECK(report.sequential->pay_2_to_3 == 0);

  // (a, c, e) is everyone's favorite outcome
  MatrixXq u = MatrixXq::Zero(8, 3);
  u.row(0) << 5, 4, 3;
  const NormalFormGame aligned({{"a", "b"}, {"c", "d"}, {"e", "f"}}, u);
  const auto best = solve_three_player_sequential_pure(aligned);
  CHECK(best.value == 5);
  CHECK(best.sequential->target == Profile{0, 0, 0});
  CHECK(best.sequential->pay_1_to_2 + best.sequential->pay_1_to_3 + best.sequential->pay_2_to_3 == 0);
}

TEST_CASE("sequential pure plans replay through the game tree") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto game = random_game({2, 2, 2}, 5, rng);
    const auto report = solve_three_player_sequential_pure(game);
    const auto& plan = *report.sequential;
    CHECK(all_slacks_nonnegative(report.certificate));
    Rational bound = 0;
    for (int p = 1; p < 3; ++p) bound += game.utilities().col(p).maxCoeff() - game.utilities().col(p).minCoeff();
    CHECK(plan.big_m >= bound);
    const auto play = oracle::simulate_sequential(game, plan.target[0], report.commitment->payments.outcome_values());
    CHECK(play.leader_value == report.value);
    CHECK(play.outcome == plan.target);
    // player 3 must not receive more from player 2 than its shortfall
    Rational top = game.utility(game.profiles().index(std::vector<int>{plan.target[0], plan.target[1], 0}), 2);
    for (int a3 = 0; a3 < 2; ++a3) {
      const Index idx = game.profiles().index(std::vector<int>{plan.target[0], plan.target[1], a3});
      top = std::max(top, game.utility(idx, 2) + report.commitment->payments.outcome_values()(idx, 1));
    }
    const Index target = game.profiles().index(plan.target);
    CHECK(plan.pay_2_to_3 ==
          std::max(Rational(0), top - game.utility(target, 2) - plan.pay_1_to_3));
  }
}

TEST_CASE("sequential pure without payments never beats the paid version") {
  std::mt19937_64 rng(12);
  SolverOptions none;
  none.allow_payments = false;
  for (int trial = 0; trial < 30; ++trial) {
    const auto game = random_game({2, 2, 2}, 5, rng);
    const auto free = solve_three_player_sequential_pure(game, none);
    CHECK(free.value <= solve_three_player_sequential_pure(game).value);
    CHECK(free.commitment->payments.outcome_values().isZero());
  }
}

TEST_CASE("leader-types mixed degenerates and mirrors") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const auto game = random_game({3, 3}, 4, rng);
    const auto single = solve_two_player_mixed(game);
    CHECK(solve_two_player_leader_types_mixed(as_bayesian(game)).value == single.value);
    // two leader types with identical utilities
    const BayesianGame twins(game.action_labels(), {{"s", "t"}, {"only"}}, {vec({q(1, 3), q(2, 3)}), vec({1})},
                             {(MatrixXq(9, 2) << game.utilities().col(0), game.utilities().col(0)).finished(),
                              game.utilities().col(1)});
    CHECK(solve_two_player_leader_types_mixed(twins).value == single.value);
  }
}

TEST_CASE("leader-types mixed on the triangle cover game") {
  const auto triangle = Graph::make({"x", "y", "z"}, {{0, 1}, {1, 2}, {0, 2}});
  const auto report = solve_two_player_leader_types_mixed(reduce_vertex_cover_bayesian(triangle, 2));
  CHECK(report.value == 1);
  CHECK(all_slacks_nonnegative(report.certificate));
}

TEST_CASE("solvers reject the wrong player count") {
  std::mt19937_64 rng(1);
  const auto three = random_game({2, 2, 2}, 3, rng);
  CHECK_THROWS_AS(solve_two_player_mixed(three), SchemaError);
  CHECK_THROWS_AS(solve_three_player_sequential_pure(random_game({2, 2}, 3, rng)), SchemaError);
}
