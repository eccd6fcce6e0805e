#include <doctest.h>

#include <random>

#include "commitpay/random.hpp"
#include "helpers.hpp"

using namespace commitpay;
using testing_support::fixture_game;
using testing_support::q;
using testing_support::vec;

namespace {

Commitment motivating_commitment() {
  // (Bottom, Left) is profile index 3 with Top = 0, Bottom = 1 and three columns
  MatrixXq outcome = MatrixXq::Zero(6, 1);
  outcome(3, 0) = 1;
  return {Mixture<Rational>{vec({q(1, 3), q(2, 3)})}, PaymentFunction::outcome_conditional(outcome)};
}

MatrixXq random_payments(const ProfileSpace& space, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> draw(0, 3);
  MatrixXq out(space.size(), space.players() - 1);
  for (Index r = 0; r < out.rows(); ++r)
    for (Index c = 0; c < out.cols(); ++c) out(r, c) = draw(rng);
  return out;
}

VectorXq random_mixture(int size, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> draw(0, 3);
  VectorXq w(size);
  for (int i = 0; i < size; ++i) w[i] = draw(rng);
  if (w.sum() == 0) w[0] = 1;
  return w / w.sum();
}

}  // namespace

TEST_CASE("rational literals") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational("-4") == q(-4));
  CHECK(to_string(q(6, -4)) == "-3/2");
  CHECK(to_string(q(5)) == "5");
  CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(" 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
}

TEST_CASE("profile indexing puts the leader first") {
  const ProfileSpace space({2, 3, 2});
  CHECK(space.size() == 12);
  for (Index idx = 0; idx < space.size(); ++idx) {
    CHECK(space.index(space.profile(idx)) == idx);
    CHECK(idx % space.stride(0) == space.index(std::vector<int>{0, space.action_of(idx, 1), space.action_of(idx, 2)}));
  }
  CHECK(space.with_action(space.index(std::vector<int>{1, 2, 0}), 1, 0) ==
        space.index(std::vector<int>{1, 0, 0}));
}

TEST_CASE("induced game on the motivating example") {
  const auto game = fixture_game("motivating.json");
  REQUIRE(game.action_count(0) == 2);
  REQUIRE(game.action_count(1) == 3);
  const auto induced = induce_game(game, motivating_commitment());
  CHECK(induced.followers.players() == 1);
  CHECK(induced.followers.utilities().col(0) == vec({q(2, 3), q(2, 3), q(2, 3)}));
  CHECK(induced.leader_utility == vec({q(1, 3), q(-1, 3), q(-1, 3)}));
  CHECK(evaluate_leader(game, motivating_commitment(), {vec({1, 0, 0})}) == q(1, 3));
}

TEST_CASE("pure action with zero payments leaves the row unchanged") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto game = random_game({3, 2, 2}, 5, rng);
    for (int a = 0; a < 3; ++a) {
      const auto induced =
          induce_game(game, Commitment{PureAction{a}, PaymentFunction::zero(game.profiles())});
      const Index block = game.profiles().stride(0);
      for (Index f = 0; f < block; ++f) {
        CHECK(induced.followers.utility(f, 0) == game.utility(a * block + f, 1));
        CHECK(induced.followers.utility(f, 1) == game.utility(a * block + f, 2));
        CHECK(induced.leader_utility[f] == game.utility(a * block + f, 0));
      }
    }
  }
}

TEST_CASE("induced utilities match direct summation over profiles") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto game = random_game({2, 2, 2}, 4, rng);
    const VectorXq sigma = random_mixture(2, rng);
    const MatrixXq pay = random_payments(game.profiles(), rng);
    const Commitment c{Mixture<Rational>{sigma}, PaymentFunction::outcome_conditional(pay)};
    const auto induced = induce_game(game, c);
    for (int a2 = 0; a2 < 2; ++a2)
      for (int a3 = 0; a3 < 2; ++a3) {
        Rational v2 = 0, v3 = 0, v1 = 0;
        for (int a1 = 0; a1 < 2; ++a1) {
          const Index idx = a1 * 4 + a2 * 2 + a3;
          v2 += sigma[a1] * (game.utility(idx, 1) + pay(idx, 0));
          v3 += sigma[a1] * (game.utility(idx, 2) + pay(idx, 1));
          v1 += sigma[a1] * (game.utility(idx, 0) - pay(idx, 0) - pay(idx, 1));
        }
        const Index f = a2 * 2 + a3;
        CHECK(induced.followers.utility(f, 0) == v2);
        CHECK(induced.followers.utility(f, 1) == v3);
        CHECK(induced.leader_utility[f] == v1);
      }
  }
}

TEST_CASE("inducing is linear in payments") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto game = random_game({2, 3, 2}, 4, rng);
    const Mixture<Rational> sigma{random_mixture(2, rng)};
    const MatrixXq p = random_payments(game.profiles(), rng);
    const MatrixXq r = random_payments(game.profiles(), rng);
    auto induce = [&](const MatrixXq& m) {
      return induce_game(game, Commitment{sigma, PaymentFunction::outcome_conditional(m)});
    };
    const auto both = induce(p + r);
    const auto first = induce(p);
    const auto second = induce(r);
    const auto base = induce(MatrixXq::Zero(p.rows(), p.cols()));
    CHECK(both.followers.utilities() ==
          first.followers.utilities() + second.followers.utilities() - base.followers.utilities());
    CHECK(both.leader_utility == first.leader_utility + second.leader_utility - base.leader_utility);
  }
}

TEST_CASE("evaluate_leader equals the brute-force expectation") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto game = random_game({2, 3, 2}, 5, rng);
    const VectorXq sigma = random_mixture(2, rng);
    const MatrixXq pay = random_payments(game.profiles(), rng);
    const std::vector<VectorXq> play{random_mixture(3, rng), random_mixture(2, rng)};
    Rational expected = 0;
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 3; ++a2)
        for (int a3 = 0; a3 < 2; ++a3) {
          const Index idx = a1 * 6 + a2 * 2 + a3;
          expected += sigma[a1] * play[0][a2] * play[1][a3] *
                      (game.utility(idx, 0) - pay(idx, 0) - pay(idx, 1));
        }
    CHECK(evaluate_leader(game, Commitment{Mixture<Rational>{sigma}, PaymentFunction::outcome_conditional(pay)},
                          play) == expected);
  }
}

TEST_CASE("zero payments and a deterministic profile give the raw utility") {
  std::mt19937_64 rng(2);
  const auto game = random_game({2, 2}, 5, rng);
  for (Index idx = 0; idx < 4; ++idx) {
    const int a = game.profiles().action_of(idx, 0), b = game.profiles().action_of(idx, 1);
    VectorXq play = VectorXq::Zero(2);
    play[b] = 1;
    CHECK(evaluate_leader(game, Commitment{PureAction{a}, PaymentFunction::zero(game.profiles())}, {play}) ==
          game.utility(idx, 0));
  }
}

TEST_CASE("evaluate_leader is monotone in the leader's utilities") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto game = random_game({3, 3}, 5, rng);
    MatrixXq raised = game.utilities();
    std::uniform_int_distribution<int> bump(0, 2);
    for (Index r = 0; r < raised.rows(); ++r) raised(r, 0) += bump(rng);
    const NormalFormGame higher(game.action_labels(), raised);
    const Commitment c{Mixture<Rational>{random_mixture(3, rng)}, PaymentFunction::zero(game.profiles())};
    const std::vector<VectorXq> play{random_mixture(3, rng)};
    CHECK(evaluate_leader(higher, c, play) >= evaluate_leader(game, c, play));
  }
}

TEST_CASE("malformed commitments are rejected") {
  const auto game = fixture_game("motivating.json");
  CHECK_THROWS_AS(PaymentFunction::follower_action_only(vec({q(-1), 0, 0})), SchemaError);
  const Commitment bad_mix{Mixture<Rational>{vec({q(1, 2), q(1, 3)})}, PaymentFunction::zero(game.profiles())};
  CHECK_THROWS_AS(evaluate_leader(game, bad_mix, {vec({1, 0, 0})}), SchemaError);
  const Commitment ok{PureAction{0}, PaymentFunction::zero(game.profiles())};
  CHECK_THROWS_AS(evaluate_leader(game, ok, {vec({q(1, 2), 0, 0})}), SchemaError);
  const auto wrong = PaymentFunction::outcome_conditional(MatrixXq::Zero(5, 1));
  CHECK_THROWS_AS(induce_game(game, Commitment{PureAction{0}, wrong}), SchemaError);
  std::mt19937_64 rng(1);
  const auto three = random_game({2, 2, 2}, 3, rng);
  const Commitment action_only{PureAction{0}, PaymentFunction::follower_action_only(vec({0, 0}))};
  CHECK_THROWS_AS(induce_game(three, action_only), SchemaError);
}

TEST_CASE("Bayesian game validation names the offending player") {
  const std::vector<std::vector<std::string>> actions{{"x"}, {"y", "z"}};
  const std::vector<std::vector<std::string>> types{{"s"}, {"t", "u"}};
  const std::vector<MatrixXq> utilities{MatrixXq::Zero(2, 1), MatrixXq::Zero(2, 2)};
  try {
    BayesianGame(actions, types, {vec({1}), vec({q(1, 2), q(2, 5)})}, utilities);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].find("player 2") != std::string::npos);
    CHECK(e.violations()[0].find("9/10") != std::string::npos);
  }
}

TEST_CASE("single-type Bayesian view keeps the utilities") {
  std::mt19937_64 rng(4);
  const auto game = random_game({2, 3}, 4, rng);
  const auto bayes = as_bayesian(game);
  CHECK(bayes.leader_types_only());
  CHECK(bayes.follower_types_only());
  CHECK(bayes.type_slice(std::vector<int>{0, 0}) == game);
}
