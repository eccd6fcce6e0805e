#include <doctest.h>

#include <random>

#include "commitpay/commit_solvers.hpp"
#include "commitpay/equilibrium.hpp"
#include "commitpay/hard_cases.hpp"
#include "commitpay/reductions.hpp"
#include "commitpay/signaling.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace commitpay;
using testing_support::q;
using testing_support::vec;

namespace {

Graph four_cycle() { return Graph::make({"v1", "v2", "v3", "v4"}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

BipartiteGraph complete22() {
  return BipartiteGraph::make({"v1", "v2"}, {"w1", "w2"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

}  // namespace

TEST_CASE("graph construction validates and normalizes edges") {
  const auto g = Graph::make({"a", "b", "c"}, {{1, 0}, {0, 1}, {2, 1}});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK_THROWS_AS(Graph::make({"a", "b"}, {{0, 0}}), SchemaError);
  CHECK_THROWS_AS(Graph::make({"a", "a"}, {}), SchemaError);
  CHECK_THROWS_AS(Graph::make({"a"}, {{0, 3}}), SchemaError);
  CHECK_THROWS_AS(BipartiteGraph::make({"l"}, {"r"}, {{0, 1}}), SchemaError);
}

TEST_CASE("biclique game structure") {
  const auto game = reduce_bcbs(complete22(), 2);
  CHECK(game.players() == 3);
  CHECK(game.actions(1) == std::vector<std::string>{"C:v1", "C:v2", "E:w1", "E:w2"});
  CHECK(game.actions(2) == std::vector<std::string>{"C:w1", "C:w2", "E:v1", "E:v2"});
  const auto& space = game.profiles();
  // cooperating on an edge pays everyone one
  const Index coop = space.index(std::vector<int>{0, 0, 1});
  CHECK(game.utilities().row(coop) == vec({1, 1, 1}).transpose());
  // exploiting the other's vertex gains k and costs the victim k + 1
  const Index exploit = space.index(std::vector<int>{0, 2, 0});
  CHECK(game.utility(exploit, 1) == 2);
  CHECK(game.utility(exploit, 2) == -3);
  const Index reverse = space.index(std::vector<int>{0, 1, 3});
  CHECK(game.utility(reverse, 1) == -3);
  CHECK(game.utility(reverse, 2) == 2);
  // the leader only ever earns from cooperation
  for (Index idx = 0; idx < space.size(); ++idx) CHECK(game.utility(idx, 0) >= 0);
  CHECK_THROWS_AS(reduce_bcbs(complete22(), 0), SchemaError);
}

TEST_CASE("biclique game: uniform cooperative play is an equilibrium exactly for a biclique") {
  const auto game = reduce_bcbs(complete22(), 2);
  const VectorXq row = vec({q(1, 2), q(1, 2), 0, 0});
  const VectorXq column = vec({q(1, 2), q(1, 2), 0, 0});
  const Commitment nothing{PureAction{0}, PaymentFunction::zero(game.profiles())};
  const auto induced = induce_game(game, nothing);
  CHECK(is_nash_equilibrium(induced.followers.payoff_matrix(0), induced.followers.payoff_matrix(1), row, column));
  CHECK(evaluate_leader(game, nothing, {row, column}) == 1);
}

TEST_CASE("balanced cover game structure") {
  const auto game = reduce_balanced_vertex_cover(four_cycle());
  CHECK(game.action_count(0) == 4);
  CHECK(game.action_count(1) == 4);
  CHECK(game.action_count(2) == 4 + 4 + 1);
  CHECK(game.actions(2).back() == "c0");
  const auto& space = game.profiles();
  const Rational eps = q(1, 1024);
  for (Index idx = 0; idx < space.size(); ++idx) {
    const Profile a = space.profile(idx);
    if (a[2] == 8) {
      CHECK(game.utilities().row(idx) == vec({eps, eps, 1}).transpose());
    } else {
      CHECK(game.utility(idx, 0) == 0);
      CHECK(game.utility(idx, 1) == 0);
      CHECK((game.utility(idx, 2) == 0 || game.utility(idx, 2) == 2));
    }
  }
  // vertex v3 avoided by both covers pays player 3 |V| / (|V| - 2)
  CHECK(game.utility(space.index(std::vector<int>{0, 1, 2}), 2) == 2);
  CHECK(game.utility(space.index(std::vector<int>{0, 2, 2}), 2) == 0);
  // edge v1/v2 (index 4) is safe for player 3 only when player 1 misses it
  CHECK(game.utility(space.index(std::vector<int>{2, 0, 4}), 2) == 2);
  CHECK(game.utility(space.index(std::vector<int>{1, 3, 4}), 2) == 0);
}

TEST_CASE("balanced cover epsilon range") {
  CHECK_NOTHROW(reduce_balanced_vertex_cover(four_cycle(), q(1, 1024)));
  CHECK_NOTHROW(reduce_balanced_vertex_cover(four_cycle(), q(1, 5000)));
  CHECK_THROWS_AS(reduce_balanced_vertex_cover(four_cycle(), q(1, 1000)), SchemaError);
  CHECK_THROWS_AS(reduce_balanced_vertex_cover(four_cycle(), Rational(0)), SchemaError);
  CHECK_THROWS_AS(reduce_balanced_vertex_cover(Graph::make({"a", "b", "c"}, {{0, 1}})), SchemaError);
  CHECK_THROWS_AS(reduce_balanced_vertex_cover(Graph::make({"a", "b"}, {{0, 1}})), SchemaError);
}

TEST_CASE("typed cover game structure") {
  const auto triangle = Graph::make({"x", "y", "z"}, {{0, 1}, {1, 2}, {0, 2}});
  const auto game = reduce_vertex_cover_bayesian(triangle, 2);
  CHECK(game.type_count(0) == 2);
  CHECK(game.type_count(1) == 1);
  CHECK(game.prior(0) == vec({q(1, 2), q(1, 2)}));
  CHECK(game.actions(1).front() == "b0");
  CHECK(game.action_count(1) == 4);
  const auto& space = game.profiles();
  for (int v = 0; v < 3; ++v) {
    const Index idle = space.index(std::vector<int>{v, 0});
    CHECK(game.utility(0, 0, idle) == 1);
    CHECK(game.utility(0, 1, idle) == 1);
    CHECK(game.utility(1, 0, idle) == 0);
  }
  // edge x/y: flagging is punished by K when the leader sits on it
  CHECK(game.utility(1, 0, space.index(std::vector<int>{0, 1})) == -2);
  CHECK(game.utility(1, 0, space.index(std::vector<int>{2, 1})) == 1);
  CHECK(game.utility(0, 0, space.index(std::vector<int>{2, 1})) == 0);
}

TEST_CASE("cover game values match the existence of a cover") {
  const auto triangle = Graph::make({"x", "y", "z"}, {{0, 1}, {1, 2}, {0, 2}});
  for (int size = 1; size <= 3; ++size) {
    const auto report = solve_leader_types_pure_exact(reduce_vertex_cover_bayesian(triangle, size));
    CHECK((report.value > 0) == has_vertex_cover(triangle, size));
    CHECK(verify_vertex_cover_witness(triangle, size, report).consistent);
  }
  const auto path = Graph::make({"p", "q", "r"}, {{0, 1}, {1, 2}});
  const auto report = solve_leader_types_pure_exact(reduce_vertex_cover_bayesian(path, 1));
  CHECK(report.value == 1);
  CHECK(std::get<TypedPure>(report.commitment->strategy).actions == std::vector<int>{1});
}

TEST_CASE("exhaustive combinatorial checks agree with the oracles") {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < 5; ++u)
      for (int v = u + 1; v < 5; ++v)
        if (coin(rng)) edges.push_back({u, v});
    const auto g = Graph::make({"a", "b", "c", "d", "e"}, edges);
    for (int size = 0; size <= 5; ++size) CHECK(has_vertex_cover(g, size) == oracle::cover_exists(5, edges, size));
    std::vector<std::pair<int, int>> bip;
    for (int l = 0; l < 3; ++l)
      for (int r = 0; r < 3; ++r)
        if (coin(rng)) bip.push_back({l, r});
    const auto b = BipartiteGraph::make({"l1", "l2", "l3"}, {"r1", "r2", "r3"}, bip);
    for (int k = 1; k <= 3; ++k) CHECK(has_biclique(b, k) == oracle::biclique_exists(3, 3, bip, k));
  }
}

TEST_CASE("pricing game structure and price recovery") {
  const auto instance = PricingInstance::make(2, {vec({10, 0}), vec({6, 6})}, vec({q(1, 2), q(1, 2)}));
  const auto reduced = reduce_item_pricing(instance);
  CHECK(reduced.z == 11);
  const auto& game = reduced.game;
  CHECK(game.actions(1) == std::vector<std::string>{"t0", "t1", "t2"});
  CHECK(game.types(1) == std::vector<std::string>{"v1", "v2"});
  CHECK(game.utility(0, 0, 0) == 0);
  CHECK(game.utility(0, 0, 1) == 11);
  CHECK(game.utility(1, 0, 1) == -1);
  CHECK(game.utility(1, 1, 2) == -5);

  const auto report = solve_bayesian_follower_exact(game);
  CHECK(report.value == 8);
  const auto verdict = verify_pricing_witness(instance, report);
  CHECK(verdict.consistent);
  const auto& pay = report.commitment->payments.follower_action_values();
  std::vector<Rational> prices{reduced.z - pay[1], reduced.z - pay[2]};
  CHECK(pricing_revenue(instance, prices) == report.value);
}

TEST_CASE("pricing revenue conventions") {
  const auto one = PricingInstance::make(1, {vec({5})}, vec({1}));
  CHECK(pricing_revenue(one, {Rational(5)}) == 5);
  CHECK(pricing_revenue(one, {Rational(6)}) == 0);
  const auto budgets = PricingInstance::uniform_budget(2, {Rational(4), Rational(3)}, {{0, 1}, {1}},
                                                       vec({q(1, 2), q(1, 2)}));
  CHECK(budgets.values[0] == vec({4, 4}));
  CHECK(budgets.values[1] == vec({0, 3}));
  CHECK(best_pricing_revenue(budgets, {0, 1, 2, 3, 4}) ==
        oracle::best_integer_revenue(budgets.values, budgets.probabilities, 2, 4));
  CHECK_THROWS_AS(PricingInstance::make(1, {vec({-1})}, vec({1})), SchemaError);
  CHECK_THROWS_AS(PricingInstance::make(1, {vec({1}), vec({2})}, vec({q(1, 2), q(1, 3)})), SchemaError);
}

TEST_CASE("random pricing instances reach the best integer revenue") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> value(0, 6), count(1, 3);
  for (int trial = 0; trial < 15; ++trial) {
    const int items = count(rng), types = count(rng);
    std::vector<VectorXq> values;
    for (int t = 0; t < types; ++t) {
      VectorXq v(items);
      for (int i = 0; i < items; ++i) v[i] = value(rng);
      values.push_back(v);
    }
    const auto instance = PricingInstance::make(items, values, VectorXq::Constant(types, q(1, types)));
    const auto reduced = reduce_item_pricing(instance);
    const auto report = solve_bayesian_follower_exact(reduced.game);
    const Rational top = reduced.z;
    CHECK(report.value == oracle::best_integer_revenue(values, instance.probabilities, items,
                                                       numerator(top).convert_to<int>()));
    CHECK(verify_pricing_witness(instance, report).consistent);
  }
}

TEST_CASE("witness verification rejects tampered reports") {
  const auto k22 = complete22();
  auto report = solve_signaling_mixed(reduce_bcbs(k22, 2));
  SolveReport play;
  play.value = 1;
  play.commitment = Commitment{PureAction{0}, PaymentFunction::zero(reduce_bcbs(k22, 2).profiles())};
  play.follower_play = {{vec({q(1, 2), q(1, 2), 0, 0})}, {vec({q(1, 2), q(1, 2), 0, 0})}};
  CHECK(verify_bcbs_witness(k22, 2, play).consistent);
  auto inflated = play;
  inflated.value = 2;
  CHECK_FALSE(verify_bcbs_witness(k22, 2, inflated).consistent);
  auto exploited = play;
  exploited.follower_play[0][0] = vec({0, 0, 1, 0});
  exploited.value = 0;
  CHECK(verify_bcbs_witness(k22, 2, exploited).consistent);
  CHECK(report.value == 1);

  const auto instance = PricingInstance::make(2, {vec({10, 0}), vec({6, 6})}, vec({q(1, 2), q(1, 2)}));
  auto priced = solve_bayesian_follower_exact(reduce_item_pricing(instance).game);
  priced.value += 1;
  CHECK_FALSE(verify_pricing_witness(instance, priced).consistent);

  const auto triangle = Graph::make({"x", "y", "z"}, {{0, 1}, {1, 2}, {0, 2}});
  auto covered = solve_leader_types_pure_exact(reduce_vertex_cover_bayesian(triangle, 2));
  covered.commitment->strategy = TypedPure{{0, 0}};
  CHECK_FALSE(verify_vertex_cover_witness(triangle, 2, covered).consistent);
}
