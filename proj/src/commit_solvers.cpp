#include "commitpay/commit_solvers.hpp"

#include <stdexcept>

#include "commitpay/parallel.hpp"
#include "lp_support.hpp"

namespace commitpay {
namespace {

VectorXq point_mass(int size, int at) {
  VectorXq v = VectorXq::Zero(size);
  v[at] = 1;
  return v;
}

void require_players(int actual, int expected, const char* setting) {
  if (actual != expected)
    throw SchemaError(std::string(setting) + " requires a " + std::to_string(expected) +
                      "-player game, got " + std::to_string(actual));
}

struct TypedMixedCandidate {
  bool feasible = false;
  Rational value;
  std::vector<VectorXq> mixtures;
  Rational payment;
};

// LP for "the follower plays `target`": one mixture per leader type, a scalar
// payment on `target`, incentive constraints in expectation over the types.
TypedMixedCandidate typed_mixed_for_action(const std::vector<MatrixXq>& leader_u,
                                           const VectorXq& weights, const MatrixXq& follower_u,
                                           int target, const std::vector<std::string>& leader_actions,
                                           const std::vector<std::string>& type_labels,
                                           const std::vector<std::string>& follower_actions,
                                           const SolverOptions& options) {
  const int types = static_cast<int>(leader_u.size());
  const int rows = static_cast<int>(follower_u.rows());
  const int cols = static_cast<int>(follower_u.cols());
  LinearProgram lp;
  std::vector<std::vector<int>> p(types);
  for (int t = 0; t < types; ++t) {
    for (int a = 0; a < rows; ++a) {
      const std::string name = types == 1 ? "p[" + leader_actions[a] + "]"
                                          : "p[" + type_labels[t] + "," + leader_actions[a] + "]";
      p[t].push_back(lp.add_variable(name));
      lp.set_objective(p[t][a], weights[t] * leader_u[t](a, target));
    }
    std::vector<LinearTerm<Rational>> simplex;
    for (int a = 0; a < rows; ++a) simplex.push_back({p[t][a], 1});
    lp.add_constraint(std::move(simplex), Relation::Equal, 1,
                      types == 1 ? "simplex" : "simplex[" + type_labels[t] + "]");
  }
  const int pay = lp.add_variable("P[" + follower_actions[target] + "]", Rational(0),
                                  detail::payment_upper(options));
  lp.set_objective(pay, -1);
  for (int other = 0; other < cols; ++other) {
    if (other == target) continue;
    std::vector<LinearTerm<Rational>> terms;
    for (int t = 0; t < types; ++t)
      for (int a = 0; a < rows; ++a) {
        Rational c = weights[t] * (follower_u(a, target) - follower_u(a, other));
        if (c != 0) terms.push_back({p[t][a], std::move(c)});
      }
    terms.push_back({pay, 1});
    lp.add_constraint(std::move(terms), Relation::GreaterEqual, 0,
                      "ic[" + follower_actions[target] + ">" + follower_actions[other] + "]");
  }

  const auto sol =
      detail::solve_checked(lp, options, "incentivize follower action " + follower_actions[target]);
  TypedMixedCandidate out;
  if (sol.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.value = sol.objective_value;
  for (int t = 0; t < types; ++t) {
    VectorXq mix(rows);
    for (int a = 0; a < rows; ++a) mix[a] = sol.assignment[p[t][a]];
    out.mixtures.push_back(std::move(mix));
  }
  out.payment = sol.assignment[pay];
  return out;
}

long best_candidate(const std::vector<TypedMixedCandidate>& candidates) {
  return first_argmax(
      candidates, [](const TypedMixedCandidate& c) { return c.feasible; },
      [](const TypedMixedCandidate& a, const TypedMixedCandidate& b) { return a.value < b.value; });
}

PaymentFunction single_action_payment(int actions, int target, const Rational& amount) {
  VectorXq pay = VectorXq::Zero(actions);
  pay[target] = amount;
  return PaymentFunction::follower_action_only(std::move(pay));
}

void require_consistent(const Rational& reported, const Rational& recomputed, const char* what) {
  if (reported != recomputed)
    throw std::logic_error(std::string(what) + ": reported value " + to_string(reported) +
                           " differs from recomputed " + to_string(recomputed));
}

}  // namespace

std::vector<CertificateEntry> follower_certificate(const NormalFormGame& game,
                                                   const Commitment& commitment, int action) {
  require_players(game.players(), 2, "follower_certificate");
  const auto induced = induce_game(game, commitment);
  const auto& labels = game.actions(1);
  std::vector<CertificateEntry> out;
  for (int other = 0; other < game.action_count(1); ++other) {
    if (other == action) continue;
    out.push_back({"follower prefers " + labels[action] + " over " + labels[other],
                   induced.followers.utility(action, 0) - induced.followers.utility(other, 0)});
  }
  return out;
}

std::vector<CertificateEntry> follower_certificate(const BayesianGame& game,
                                                   const Commitment& commitment, int action) {
  require_players(game.players(), 2, "follower_certificate");
  if (game.type_count(1) != 1) throw SchemaError("follower must have a single type");
  commitment.payments.check_compatible(game.profiles());
  const auto mixtures =
      leader_type_mixtures(commitment.strategy, game.action_count(0), game.type_count(0));
  const auto& space = game.profiles();
  auto expected = [&](int b) {
    Rational total = 0;
    for (int t = 0; t < game.type_count(0); ++t)
      for (int a = 0; a < game.action_count(0); ++a) {
        const Rational w = game.prior(0)[t] * mixtures[t][a];
        if (w == 0) continue;
        const Index idx = space.index(std::vector<int>{a, b});
        total += w * (game.utility(1, 0, idx) + commitment.payments.at(space, idx, 1));
      }
    return total;
  };
  const Rational own = expected(action);
  std::vector<CertificateEntry> out;
  for (int other = 0; other < game.action_count(1); ++other) {
    if (other == action) continue;
    out.push_back({"follower prefers " + game.actions(1)[action] + " over " +
                       game.actions(1)[other],
                   own - expected(other)});
  }
  return out;
}

SolveReport solve_two_player_pure(const NormalFormGame& game, const SolverOptions& options) {
  require_players(game.players(), 2, "2p-pure");
  const MatrixXq u1 = game.payoff_matrix(0);
  const MatrixXq u2 = game.payoff_matrix(1);
  int best_a = -1, best_b = -1;
  Rational best_value, best_payment;
  for (int a = 0; a < u1.rows(); ++a) {
    const Rational top = u2.row(a).maxCoeff();
    for (int b = 0; b < u1.cols(); ++b) {
      const Rational need = top - u2(a, b);
      if (!options.allow_payments && need != 0) continue;
      const Rational value = u1(a, b) - need;
      if (best_a < 0 || value > best_value) {
        best_a = a;
        best_b = b;
        best_value = value;
        best_payment = need;
      }
    }
  }

  SolveReport report;
  report.setting = "2p-pure";
  report.value = best_value;
  report.commitment =
      Commitment{PureAction{best_a}, single_action_payment(game.action_count(1), best_b, best_payment)};
  report.follower_play = {{point_mass(game.action_count(1), best_b)}};
  report.certificate = follower_certificate(game, *report.commitment, best_b);
  require_consistent(report.value,
                     evaluate_leader(game, *report.commitment, report.follower_play[0]), "2p-pure");
  return report;
}

SolveReport solve_two_player_mixed(const NormalFormGame& game, const SolverOptions& options) {
  require_players(game.players(), 2, "2p-mixed");
  const std::vector<MatrixXq> leader_u{game.payoff_matrix(0)};
  const MatrixXq follower_u = game.payoff_matrix(1);
  const VectorXq weights = VectorXq::Ones(1);
  const std::vector<std::string> no_types{"default"};
  const auto candidates = map_indices(
      game.action_count(1),
      [&](std::size_t b) {
        return typed_mixed_for_action(leader_u, weights, follower_u, static_cast<int>(b),
                                      game.actions(0), no_types, game.actions(1), options);
      },
      options.threads);
  const long b = best_candidate(candidates);
  if (b < 0) throw std::logic_error("2p-mixed: no follower action could be incentivized");
  const auto& best = candidates[b];

  SolveReport report;
  report.setting = "2p-mixed";
  report.value = best.value;
  report.commitment = Commitment{Mixture<Rational>{best.mixtures[0]},
                                 single_action_payment(game.action_count(1), b, best.payment)};
  report.follower_play = {{point_mass(game.action_count(1), b)}};
  report.certificate = follower_certificate(game, *report.commitment, b);
  require_consistent(report.value,
                     evaluate_leader(game, *report.commitment, report.follower_play[0]), "2p-mixed");
  return report;
}

SolveReport solve_two_player_leader_types_mixed(const BayesianGame& game,
                                                const SolverOptions& options) {
  require_players(game.players(), 2, "2p-leader-types-mixed");
  if (game.type_count(1) != 1)
    throw SchemaError("2p-leader-types-mixed requires a single-typed follower");
  const int rows = game.action_count(0);
  const int cols = game.action_count(1);
  auto as_matrix = [&](const MatrixXq& column) -> MatrixXq {
    return column.reshaped(cols, rows).transpose();
  };
  std::vector<MatrixXq> leader_u;
  for (int t = 0; t < game.type_count(0); ++t)
    leader_u.push_back(as_matrix(game.type_utilities(0).col(t)));
  const MatrixXq follower_u = as_matrix(game.type_utilities(1).col(0));
  const auto candidates = map_indices(
      cols,
      [&](std::size_t b) {
        return typed_mixed_for_action(leader_u, game.prior(0), follower_u, static_cast<int>(b),
                                      game.actions(0), game.types(0), game.actions(1), options);
      },
      options.threads);
  const long b = best_candidate(candidates);
  if (b < 0) throw std::logic_error("2p-leader-types-mixed: no follower action could be incentivized");
  const auto& best = candidates[b];

  SolveReport report;
  report.setting = "2p-leader-types-mixed";
  report.value = best.value;
  report.commitment = Commitment{TypedMixture<Rational>{best.mixtures},
                                 single_action_payment(cols, b, best.payment)};
  report.follower_play = {{point_mass(cols, b)}};
  report.certificate = follower_certificate(game, *report.commitment, b);
  require_consistent(report.value,
                     evaluate_leader(game, *report.commitment, report.follower_play),
                     "2p-leader-types-mixed");
  return report;
}

namespace {

struct SequentialCandidate {
  bool feasible = false;
  Rational value;
  Rational t12, t13, t23;
};

Rational column_range(const NormalFormGame& game, int player) {
  const auto col = game.utilities().col(player);
  return col.maxCoeff() - col.minCoeff();
}

// Player 2's worst payoff after deviating to `a2`, and the player 3 action
// attaining it (first minimizer).
std::pair<Rational, int> deviation_floor(const NormalFormGame& game, int a1, int a2) {
  const auto& space = game.profiles();
  int arg = 0;
  Rational low;
  for (int a3 = 0; a3 < game.action_count(2); ++a3) {
    const Rational& v = game.utility(space.index(std::vector<int>{a1, a2, a3}), 1);
    if (a3 == 0 || v < low) {
      low = v;
      arg = a3;
    }
  }
  return {low, arg};
}

SequentialCandidate sequential_for_outcome(const NormalFormGame& game, Index target,
                                           const SolverOptions& options) {
  const auto& space = game.profiles();
  const Profile a = space.profile(target);
  const Rational u2 = game.utility(target, 1);
  const Rational u3 = game.utility(target, 2);
  LinearProgram lp;
  const int t12 = lp.add_variable("t12");
  const int t13 = lp.add_variable("t13");
  const int t23 = lp.add_variable("t23");
  lp.set_objective(t12, -1);
  lp.set_objective(t13, -1);
  for (int a3 = 0; a3 < game.action_count(2); ++a3) {
    if (a3 == a[2]) continue;
    const Index alt = space.with_action(target, 2, a3);
    const std::string tag = game.actions(2)[a3];
    lp.add_constraint({{t13, 1}, {t23, 1}}, Relation::GreaterEqual, game.utility(alt, 2) - u3,
                      "p3_keeps[" + tag + "]");
    lp.add_constraint({{t12, 1}, {t13, 1}}, Relation::GreaterEqual,
                      game.utility(alt, 1) + game.utility(alt, 2) - u2 - u3,
                      "p2_implements[" + tag + "]");
  }
  for (int a2 = 0; a2 < game.action_count(1); ++a2) {
    if (a2 == a[1]) continue;
    lp.add_constraint({{t12, 1}, {t23, -1}}, Relation::GreaterEqual,
                      deviation_floor(game, a[0], a2).first - u2,
                      "p2_stays[" + game.actions(1)[a2] + "]");
  }
  std::string title = "implement";
  for (int p = 0; p < 3; ++p) title += " " + game.actions(p)[a[p]];
  const auto sol = detail::solve_checked(lp, options, title);
  SequentialCandidate out;
  if (sol.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.t12 = sol.assignment[t12];
  out.t13 = sol.assignment[t13];
  out.value = game.utility(target, 0) + sol.objective_value;
  // Smallest transfer from player 2 that still keeps player 3 on a3.
  Rational need = 0;
  for (int a3 = 0; a3 < game.action_count(2); ++a3) {
    if (a3 == a[2]) continue;
    const Rational gap = game.utility(space.with_action(target, 2, a3), 2) - u3 - out.t13;
    if (gap > need) need = gap;
  }
  out.t23 = need;
  return out;
}

std::vector<CertificateEntry> sequential_certificate(const NormalFormGame& game,
                                                     const SequentialPaymentPlan& plan) {
  const auto& space = game.profiles();
  const Index target = space.index(plan.target);
  const Rational u2 = game.utility(target, 1);
  const Rational u3 = game.utility(target, 2);
  std::vector<CertificateEntry> out;
  for (int a3 = 0; a3 < game.action_count(2); ++a3) {
    if (a3 == plan.target[2]) continue;
    const Index alt = space.with_action(target, 2, a3);
    const std::string tag = game.actions(2)[a3];
    out.push_back({"player 3 keeps target over " + tag,
                   u3 + plan.pay_1_to_3 + plan.pay_2_to_3 - game.utility(alt, 2)});
    out.push_back({"player 2 implements target over " + tag,
                   u2 + plan.pay_1_to_2 + u3 + plan.pay_1_to_3 - game.utility(alt, 1) -
                       game.utility(alt, 2)});
  }
  for (int a2 = 0; a2 < game.action_count(1); ++a2) {
    if (a2 == plan.target[1]) continue;
    out.push_back({"player 2 stays over " + game.actions(1)[a2],
                   u2 + plan.pay_1_to_2 - plan.pay_2_to_3 -
                       deviation_floor(game, plan.target[0], a2).first});
  }
  return out;
}

// Backward induction without any transfers: player 3 best-responds, player 2
// anticipates, player 1 picks the best first move. Ties follow each player's
// own utility, then earlier players' utilities, then the lowest index.
SolveReport sequential_without_payments(const NormalFormGame& game) {
  const auto& space = game.profiles();
  auto better = [&](Index x, Index y, int player) {
    for (int p = player; p >= 0; --p) {
      if (game.utility(x, p) != game.utility(y, p)) return game.utility(x, p) > game.utility(y, p);
    }
    return false;
  };
  auto after_a2 = [&](int a1, int a2) {
    Index best = space.index(std::vector<int>{a1, a2, 0});
    for (int a3 = 1; a3 < game.action_count(2); ++a3) {
      const Index idx = space.index(std::vector<int>{a1, a2, a3});
      if (better(idx, best, 2)) best = idx;
    }
    return best;
  };
  auto after_a1 = [&](int a1) {
    Index best = after_a2(a1, 0);
    for (int a2 = 1; a2 < game.action_count(1); ++a2) {
      const Index idx = after_a2(a1, a2);
      if (better(idx, best, 1)) best = idx;
    }
    return best;
  };
  Index outcome = after_a1(0);
  for (int a1 = 1; a1 < game.action_count(0); ++a1) {
    const Index idx = after_a1(a1);
    if (better(idx, outcome, 0)) outcome = idx;
  }

  SequentialPaymentPlan plan{space.profile(outcome), 0, 0, 0, 0, {}};
  SolveReport report;
  report.setting = "3p-seq-pure";
  report.value = game.utility(outcome, 0);
  report.commitment = Commitment{PureAction{plan.target[0]}, PaymentFunction::zero(space)};
  report.follower_play = {{point_mass(game.action_count(1), plan.target[1])},
                          {point_mass(game.action_count(2), plan.target[2])}};
  for (int a3 = 0; a3 < game.action_count(2); ++a3) {
    if (a3 == plan.target[2]) continue;
    report.certificate.push_back(
        {"player 3 keeps target over " + game.actions(2)[a3],
         game.utility(outcome, 2) - game.utility(space.with_action(outcome, 2, a3), 2)});
  }
  for (int a2 = 0; a2 < game.action_count(1); ++a2) {
    if (a2 == plan.target[1]) continue;
    report.certificate.push_back({"player 2 stays over " + game.actions(1)[a2],
                                  game.utility(outcome, 1) -
                                      game.utility(after_a2(plan.target[0], a2), 1)});
  }
  report.sequential = std::move(plan);
  return report;
}

}  // namespace

SolveReport solve_three_player_sequential_pure(const NormalFormGame& game,
                                               const SolverOptions& options) {
  require_players(game.players(), 3, "3p-seq-pure");
  if (!options.allow_payments) return sequential_without_payments(game);
  const auto& space = game.profiles();
  const auto candidates = map_indices(
      static_cast<std::size_t>(space.size()),
      [&](std::size_t idx) { return sequential_for_outcome(game, static_cast<Index>(idx), options); },
      options.threads);
  const long target = first_argmax(
      candidates, [](const SequentialCandidate& c) { return c.feasible; },
      [](const SequentialCandidate& x, const SequentialCandidate& y) { return x.value < y.value; });
  if (target < 0)
    throw std::logic_error("3p-seq-pure: every outcome LP is infeasible, which cannot happen");
  const auto& best = candidates[target];

  SequentialPaymentPlan plan;
  plan.target = space.profile(target);
  plan.pay_1_to_2 = best.t12;
  plan.pay_1_to_3 = best.t13;
  plan.pay_2_to_3 = best.t23;
  plan.big_m = column_range(game, 1) + column_range(game, 2) + 1;
  MatrixXq pay = MatrixXq::Zero(space.size(), 2);
  pay(target, 0) = best.t12;
  pay(target, 1) = best.t13;
  for (int a2 = 0; a2 < game.action_count(1); ++a2) {
    if (a2 == plan.target[1]) continue;
    Profile trigger{plan.target[0], a2, deviation_floor(game, plan.target[0], a2).second};
    pay(space.index(trigger), 1) = plan.big_m;
    plan.triggers.push_back(std::move(trigger));
  }

  SolveReport report;
  report.setting = "3p-seq-pure";
  report.value = best.value;
  report.commitment =
      Commitment{PureAction{plan.target[0]}, PaymentFunction::outcome_conditional(std::move(pay))};
  report.follower_play = {{point_mass(game.action_count(1), plan.target[1])},
                          {point_mass(game.action_count(2), plan.target[2])}};
  report.certificate = sequential_certificate(game, plan);
  require_consistent(report.value,
                     evaluate_leader(game, *report.commitment,
                                     {report.follower_play[0][0], report.follower_play[1][0]}),
                     "3p-seq-pure");
  report.sequential = std::move(plan);
  return report;
}

}  // namespace commitpay
