#include "commitpay/signaling.hpp"

#include <optional>
#include <stdexcept>

#include "commitpay/parallel.hpp"
#include "lp_support.hpp"

namespace commitpay {
namespace {

// Everything the signaling LP needs: follower utilities on the full profile
// space and one leader utility vector per leader type.
struct SignalingInput {
  const NormalFormGame& followers;  // leader column unused
  std::vector<VectorXq> leader_u;
  VectorXq weights;
  std::vector<std::string> type_labels;
};

void guard_size(const ProfileSpace& space, std::size_t types, const SolverOptions& options) {
  if (space.players() < 2) throw SchemaError("signaling requires at least one follower");
  const auto count = static_cast<std::size_t>(space.size()) * types;
  if (count > options.profile_limit)
    throw SizeError("signaling LP would have " + std::to_string(count) +
                    " profile variables, above the limit of " +
                    std::to_string(options.profile_limit));
}

struct SignalingCandidate {
  bool feasible = false;
  Rational value;
  std::vector<VectorXq> distributions;
  std::vector<std::vector<Rational>> expected_payments;
};

SignalingCandidate solve_scheme(const SignalingInput& in, std::optional<int> pure_leader,
                                const SolverOptions& options) {
  const auto& game = in.followers;
  const auto& space = game.profiles();
  const int n = game.players();
  const int types = static_cast<int>(in.leader_u.size());
  LinearProgram lp;

  std::vector<std::vector<int>> p(types, std::vector<int>(space.size()));
  for (int t = 0; t < types; ++t) {
    for (Index idx = 0; idx < space.size(); ++idx) {
      std::string name = "p[";
      if (types > 1) name += in.type_labels[t] + ";";
      const Profile a = space.profile(idx);
      for (int i = 0; i < n; ++i) name += (i ? "," : "") + game.actions(i)[a[i]];
      // a fixed leader action rules out every profile that deviates from it
      const bool excluded = pure_leader && space.action_of(idx, 0) != *pure_leader;
      p[t][idx] = excluded ? lp.add_variable(name + "]", Rational(0), Rational(0))
                           : lp.add_variable(name + "]");
      lp.set_objective(p[t][idx], in.weights[t] * in.leader_u[t][idx]);
    }
    std::vector<LinearTerm<Rational>> simplex;
    for (Index idx = 0; idx < space.size(); ++idx) {
      if (pure_leader && space.action_of(idx, 0) != *pure_leader) continue;
      simplex.push_back({p[t][idx], 1});
    }
    lp.add_constraint(std::move(simplex), Relation::Equal, 1,
                      types == 1 ? "mass" : "mass[" + in.type_labels[t] + "]");
  }

  std::vector<std::vector<int>> pay(n - 1);
  for (int i = 1; i < n; ++i) {
    for (int ai = 0; ai < game.action_count(i); ++ai) {
      const int v = lp.add_variable("t" + std::to_string(i + 1) + "[" + game.actions(i)[ai] + "]",
                                    Rational(0), detail::payment_upper(options));
      lp.set_objective(v, -1);
      pay[i - 1].push_back(v);
    }
  }

  for (int i = 1; i < n; ++i) {
    for (int ai = 0; ai < game.action_count(i); ++ai) {
      for (int dev = 0; dev < game.action_count(i); ++dev) {
        if (dev == ai) continue;
        std::vector<LinearTerm<Rational>> terms;
        for (Index idx = 0; idx < space.size(); ++idx) {
          if (space.action_of(idx, i) != ai) continue;
          const Rational gain = game.utility(idx, i) - game.utility(space.with_action(idx, i, dev), i);
          if (gain == 0) continue;
          for (int t = 0; t < types; ++t)
            if (in.weights[t] != 0) terms.push_back({p[t][idx], in.weights[t] * gain});
        }
        terms.push_back({pay[i - 1][ai], 1});
        lp.add_constraint(std::move(terms), Relation::GreaterEqual, 0,
                          "ic" + std::to_string(i + 1) + "[" + game.actions(i)[ai] + ">" +
                              game.actions(i)[dev] + "]");
      }
    }
  }

  const std::string title =
      pure_leader ? "signaling with leader action " + game.actions(0)[*pure_leader] : "signaling";
  const auto sol = detail::solve_checked(lp, options, title);
  SignalingCandidate out;
  if (sol.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.value = sol.objective_value;
  for (int t = 0; t < types; ++t) {
    VectorXq d(space.size());
    for (Index idx = 0; idx < space.size(); ++idx) d[idx] = sol.assignment[p[t][idx]];
    out.distributions.push_back(std::move(d));
  }
  for (int i = 1; i < n; ++i) {
    std::vector<Rational> ts;
    for (int v : pay[i - 1]) ts.push_back(sol.assignment[v]);
    out.expected_payments.push_back(std::move(ts));
  }
  return out;
}

std::vector<VectorXq> recommendation_marginals(const ProfileSpace& space, const VectorXq& d) {
  std::vector<VectorXq> out;
  for (int i = 1; i < space.players(); ++i) out.push_back(VectorXq::Zero(space.action_count(i)));
  for (Index idx = 0; idx < space.size(); ++idx)
    for (int i = 1; i < space.players(); ++i) out[i - 1][space.action_of(idx, i)] += d[idx];
  return out;
}

SolveReport build_report(const SignalingInput& in, SignalingCandidate best, std::string setting,
                         bool typed) {
  const auto& game = in.followers;
  const auto& space = game.profiles();
  SignalingCommitment sc;
  sc.distribution = VectorXq::Zero(space.size());
  for (std::size_t t = 0; t < best.distributions.size(); ++t)
    sc.distribution += in.weights[t] * best.distributions[t];
  if (typed) sc.type_distributions = best.distributions;
  sc.expected_payments = best.expected_payments;

  const auto marginals = recommendation_marginals(space, sc.distribution);
  Rational paid = 0;
  for (int i = 1; i < game.players(); ++i) {
    std::vector<std::optional<Rational>> per_action;
    for (int ai = 0; ai < game.action_count(i); ++ai) {
      const Rational& t = sc.expected_payments[i - 1][ai];
      paid += t;
      if (marginals[i - 1][ai] == 0) {
        if (t != 0) throw std::logic_error("payment on a never-recommended action");
        per_action.emplace_back();
      } else {
        per_action.emplace_back(t / marginals[i - 1][ai]);
      }
    }
    sc.payments.push_back(std::move(per_action));
  }

  Rational recomputed = -paid;
  for (std::size_t t = 0; t < best.distributions.size(); ++t)
    recomputed += in.weights[t] * best.distributions[t].dot(in.leader_u[t]);
  if (recomputed != best.value)
    throw std::logic_error(setting + ": LP value disagrees with the recomputed leader utility");

  auto check = check_incentive_compatibility(game, sc);
  if (!check.passed) throw std::logic_error(setting + ": solver output fails the obedience check");

  SolveReport report;
  report.setting = std::move(setting);
  report.value = best.value;
  report.signaling = std::move(sc);
  for (auto& m : marginals) report.follower_play.push_back({m});
  report.certificate = std::move(check.slacks);
  return report;
}

SignalingInput untyped_input(const NormalFormGame& game) {
  return {game, {game.utilities().col(0)}, VectorXq::Ones(1), {"default"}};
}

}  // namespace

SolveReport solve_signaling_mixed(const NormalFormGame& game, const SolverOptions& options) {
  guard_size(game.profiles(), 1, options);
  const auto in = untyped_input(game);
  return build_report(in, solve_scheme(in, std::nullopt, options), "sig-mixed", false);
}

SolveReport solve_signaling_pure(const NormalFormGame& game, const SolverOptions& options) {
  guard_size(game.profiles(), 1, options);
  const auto in = untyped_input(game);
  auto candidates = map_indices(
      game.action_count(0),
      [&](std::size_t a1) { return solve_scheme(in, static_cast<int>(a1), options); },
      options.threads);
  const long best = first_argmax(
      candidates, [](const SignalingCandidate& c) { return c.feasible; },
      [](const SignalingCandidate& x, const SignalingCandidate& y) { return x.value < y.value; });
  if (best < 0) throw std::logic_error("sig-pure: every leader action LP is infeasible");
  return build_report(in, std::move(candidates[best]), "sig-pure", false);
}

SolveReport solve_signaling_leader_types_mixed(const BayesianGame& game,
                                               const SolverOptions& options) {
  if (!game.leader_types_only())
    throw SchemaError("sig-leader-types requires single-typed followers");
  guard_size(game.profiles(), game.type_count(0), options);
  const NormalFormGame followers = game.type_slice(std::vector<int>(game.players(), 0));
  SignalingInput in{followers, {}, game.prior(0), game.types(0)};
  for (int t = 0; t < game.type_count(0); ++t) in.leader_u.push_back(game.type_utilities(0).col(t));
  return build_report(in, solve_scheme(in, std::nullopt, options), "sig-leader-types", true);
}

IncentiveCheck check_incentive_compatibility(const NormalFormGame& game,
                                             const SignalingCommitment& commitment) {
  IncentiveCheck out;
  const auto& space = game.profiles();
  const auto& d = commitment.distribution;
  if (d.size() != space.size()) {
    out.problems.push_back("distribution has " + std::to_string(d.size()) + " entries, expected " +
                           std::to_string(space.size()));
    return out;
  }
  if (!is_distribution(d)) out.problems.push_back("distribution is not a probability vector");
  if (static_cast<int>(commitment.payments.size()) != game.players() - 1) {
    out.problems.push_back("payments must list every follower");
    return out;
  }
  for (int i = 1; i < game.players(); ++i) {
    if (static_cast<int>(commitment.payments[i - 1].size()) != game.action_count(i)) {
      out.problems.push_back("payments for player " + std::to_string(i + 1) +
                             " do not match the action count");
      return out;
    }
  }

  const auto marginals = recommendation_marginals(space, d);
  for (int i = 1; i < game.players(); ++i) {
    for (int ai = 0; ai < game.action_count(i); ++ai) {
      const auto& pay = commitment.payments[i - 1][ai];
      if (pay && *pay < 0)
        out.problems.push_back("negative payment to player " + std::to_string(i + 1) + " for " +
                               game.actions(i)[ai]);
      const Rational& mass = marginals[i - 1][ai];
      if (mass == 0) continue;
      for (int dev = 0; dev < game.action_count(i); ++dev) {
        if (dev == ai) continue;
        Rational slack = pay ? *pay : Rational(0);
        for (Index idx = 0; idx < space.size(); ++idx) {
          if (d[idx] == 0 || space.action_of(idx, i) != ai) continue;
          slack += d[idx] / mass *
                   (game.utility(idx, i) - game.utility(space.with_action(idx, i, dev), i));
        }
        out.slacks.push_back({"player " + std::to_string(i + 1) + " obeys " + game.actions(i)[ai] +
                                  " rather than " + game.actions(i)[dev],
                              std::move(slack)});
      }
    }
  }
  out.passed = out.problems.empty() && all_slacks_nonnegative(out.slacks);
  return out;
}

}  // namespace commitpay
