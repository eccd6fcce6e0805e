#include <doctest.h>

#include <random>

#include "commitpay/commit_solvers.hpp"
#include "commitpay/random.hpp"
#include "commitpay/reductions.hpp"
#include "commitpay/signaling.hpp"
#include "helpers.hpp"

using namespace commitpay;
using testing_support::fixture_game;
using testing_support::q;
using testing_support::vec;

namespace {

bool has_binding(const std::vector<CertificateEntry>& slacks, const std::string& prefix) {
  for (const auto& s : slacks)
    if (s.constraint.rfind(prefix, 0) == 0 && s.slack == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("signaling on the motivating example dominates plain commitment") {
  const auto game = fixture_game("motivating.json");
  const auto sig = solve_signaling_mixed(game);
  const auto pure = solve_signaling_pure(game);
  CHECK(sig.value >= solve_two_player_mixed(game).value);
  CHECK(pure.value <= sig.value);
  CHECK(pure.value >= solve_two_player_pure(game).value);
  CHECK(check_incentive_compatibility(game, *sig.signaling).passed);
  CHECK(check_incentive_compatibility(game, *pure.signaling).passed);
}

TEST_CASE("dominant follower action that also suits the leader") {
  // follower strictly prefers r; leader's best cell in column r is (y, r)
  const NormalFormGame game({{"x", "y"}, {"l", "r"}}, (MatrixXq(4, 2) << 1, 0, 2, 1, 0, 0, 7, 3).finished());
  const auto report = solve_signaling_mixed(game);
  CHECK(report.value == 7);
  CHECK(report.signaling->distribution == vec({0, 0, 0, 1}));
  CHECK(*report.signaling->payments[0][1] == 0);
  CHECK_FALSE(report.signaling->payments[0][0].has_value());
}

TEST_CASE("matching pennies recommendations that reveal the leader are not obeyed") {
  const auto game = fixture_game("matching_pennies.json");
  SignalingCommitment uniform;
  uniform.distribution = vec({q(1, 4), q(1, 4), q(1, 4), q(1, 4)});
  uniform.payments = {{Rational(0), Rational(0)}};
  uniform.expected_payments = {{0, 0}};
  // the product distribution tells the follower nothing, so it is indifferent
  const auto check = check_incentive_compatibility(game, uniform);
  CHECK(check.passed);
  for (const auto& s : check.slacks) CHECK(s.slack == 0);
  // uniform over the matching diagonal reveals the leader's action
  SignalingCommitment revealing;
  revealing.distribution = vec({q(1, 2), 0, 0, q(1, 2)});
  revealing.payments = {{Rational(0), Rational(0)}};
  const auto leak = check_incentive_compatibility(game, revealing);
  CHECK_FALSE(leak.passed);
  bool gain_two = false;
  for (const auto& s : leak.slacks) gain_two = gain_two || s.slack == -2;
  CHECK(gain_two);
}

TEST_CASE("point mass on a best-response profile passes without payments") {
  const auto game = fixture_game("motivating.json");
  SignalingCommitment point;
  point.distribution = vec({0, 0, 0, 0, 1, 0});  // (Bottom, Middle)
  point.payments = {{std::nullopt, Rational(0), std::nullopt}};
  CHECK(check_incentive_compatibility(game, point).passed);
}

TEST_CASE("matching pennies with a pure leader action") {
  CHECK(solve_signaling_pure(fixture_game("matching_pennies.json")).value == -1);
}

TEST_CASE("single leader action makes pure and mixed signaling agree") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 15; ++trial) {
    const auto game = random_game({1, 3, 2}, 4, rng);
    const auto mixed = solve_signaling_mixed(game);
    const auto pure = solve_signaling_pure(game);
    CHECK(mixed.value == pure.value);
    CHECK(mixed.signaling->distribution == pure.signaling->distribution);
  }
}

TEST_CASE("biclique game has a free cooperative scheme") {
  const auto k22 = BipartiteGraph::make({"v1", "v2"}, {"w1", "w2"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto report = solve_signaling_mixed(reduce_bcbs(k22, 2));
  CHECK(report.value == 1);
  CHECK(check_incentive_compatibility(reduce_bcbs(k22, 2), *report.signaling).passed);
}

TEST_CASE("random three-player schemes pass obedience and bind their payments") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto game = random_game({2, 2, 3}, 4, rng);
    for (const auto& report : {solve_signaling_mixed(game), solve_signaling_pure(game)}) {
      const auto& sc = *report.signaling;
      const auto check = check_incentive_compatibility(game, sc);
      REQUIRE(check.passed);
      Rational paid = 0;
      for (int i = 1; i < 3; ++i)
        for (int a = 0; a < game.action_count(i); ++a) {
          const auto& t = sc.expected_payments[i - 1][a];
          paid += t;
          if (t > 0) {
            REQUIRE(sc.payments[i - 1][a].has_value());
            const std::string prefix = "player " + std::to_string(i + 1) + " obeys " + game.actions(i)[a] + " ";
            CHECK(has_binding(check.slacks, prefix));
            auto cut = sc;
            *cut.payments[i - 1][a] -= q(1, 100);
            CHECK_FALSE(check_incentive_compatibility(game, cut).passed);
          }
          if (!sc.payments[i - 1][a]) CHECK(t == 0);
        }
      Rational direct = -paid;
      for (Index idx = 0; idx < game.profiles().size(); ++idx) direct += sc.distribution[idx] * game.utility(idx, 0);
      CHECK(direct == report.value);
    }
  }
}

TEST_CASE("leader-type signaling degenerates and mirrors") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 15; ++trial) {
    const auto game = random_game({2, 3}, 4, rng);
    const auto single = solve_signaling_mixed(game);
    CHECK(solve_signaling_leader_types_mixed(as_bayesian(game)).value == single.value);
    const BayesianGame twins(game.action_labels(), {{"s", "t"}, {"only"}}, {vec({q(1, 4), q(3, 4)}), vec({1})},
                             {(MatrixXq(6, 2) << game.utilities().col(0), game.utilities().col(0)).finished(),
                              game.utilities().col(1)});
    const auto typed = solve_signaling_leader_types_mixed(twins);
    CHECK(typed.value == single.value);
    CHECK(typed.signaling->type_distributions.size() == 2);
  }
}

TEST_CASE("leader-type signaling on the triangle cover game") {
  const auto triangle = Graph::make({"x", "y", "z"}, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(solve_signaling_leader_types_mixed(reduce_vertex_cover_bayesian(triangle, 2)).value == 1);
}

TEST_CASE("profile guard raises a size error") {
  std::mt19937_64 rng(0);
  SolverOptions tight;
  tight.profile_limit = 10;
  CHECK_THROWS_AS(solve_signaling_mixed(random_game({2, 3, 2}, 2, rng), tight), SizeError);
}
