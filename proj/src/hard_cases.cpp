#include "commitpay/hard_cases.hpp"

#include <stdexcept>

#include "commitpay/equilibrium.hpp"
#include "commitpay/parallel.hpp"
#include "grid_support.hpp"
#include "lp_support.hpp"

namespace commitpay {
namespace {

VectorXq point_mass(int size, int at) {
  VectorXq v = VectorXq::Zero(size);
  v[at] = 1;
  return v;
}

// |base|^exponent, or budget + 1 once it passes the budget.
std::size_t bounded_power(std::size_t base, int exponent, std::size_t budget) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > (budget + 1) / base) return budget + 1;
    out *= base;
  }
  return out;
}

std::vector<int> digits(std::size_t code, int base, int count) {
  std::vector<int> out(count);
  for (int i = count - 1; i >= 0; --i) {
    out[i] = static_cast<int>(code % base);
    code /= base;
  }
  return out;
}

MatrixXq as_matrix(const VectorXq& column, int rows, int cols) {
  return column.reshaped(cols, rows).transpose();
}

// ---- typed follower ------------------------------------------------------

struct AssignmentLp {
  LinearProgram lp;
  std::vector<int> mix;
  std::vector<int> pay;  // -1 when the action is not assigned to any type
};

AssignmentLp assignment_lp(const BayesianGame& game, const TypeAssignment& tau,
                           const SolverOptions& options) {
  const int rows = game.action_count(0);
  const int cols = game.action_count(1);
  const MatrixXq leader = as_matrix(game.type_utilities(0).col(0), rows, cols);
  AssignmentLp out;
  auto& lp = out.lp;
  for (int a = 0; a < rows; ++a) out.mix.push_back(lp.add_variable("p[" + game.actions(0)[a] + "]"));
  std::vector<LinearTerm<Rational>> simplex;
  for (int v : out.mix) simplex.push_back({v, 1});
  lp.add_constraint(std::move(simplex), Relation::Equal, 1, "simplex");
  out.pay.assign(cols, -1);
  for (int b : tau)
    if (out.pay[b] < 0)
      out.pay[b] = lp.add_variable("P[" + game.actions(1)[b] + "]", Rational(0),
                                   detail::payment_upper(options));

  for (int t = 0; t < game.type_count(1); ++t) {
    const Rational& w = game.prior(1)[t];
    const int b = tau[t];
    for (int a = 0; a < rows; ++a) {
      Rational c = w * leader(a, b);
      if (c != 0) lp.set_objective(out.mix[a], lp.objective()[out.mix[a]] + c);
    }
    lp.set_objective(out.pay[b], lp.objective()[out.pay[b]] - w);

    const MatrixXq follower = as_matrix(game.type_utilities(1).col(t), rows, cols);
    for (int other = 0; other < cols; ++other) {
      if (other == b) continue;
      std::vector<LinearTerm<Rational>> terms;
      for (int a = 0; a < rows; ++a) {
        Rational c = follower(a, b) - follower(a, other);
        if (c != 0) terms.push_back({out.mix[a], std::move(c)});
      }
      terms.push_back({out.pay[b], 1});
      if (out.pay[other] >= 0) terms.push_back({out.pay[other], -1});
      lp.add_constraint(std::move(terms), Relation::GreaterEqual, 0,
                        "ic[" + game.types(1)[t] + ":" + game.actions(1)[b] + ">" +
                            game.actions(1)[other] + "]");
    }
  }
  return out;
}

std::string assignment_title(const BayesianGame& game, const TypeAssignment& tau) {
  std::string title = "type assignment";
  for (std::size_t t = 0; t < tau.size(); ++t)
    title += " " + game.types(1)[t] + "->" + game.actions(1)[tau[t]];
  return title;
}

// Follower type's choice: own utility, then the leader's, then lowest index.
int leader_favoring_response(const VectorXq& own, const VectorXq& leader) {
  int best = 0;
  for (int b = 1; b < own.size(); ++b) {
    if (own[b] > own[best] || (own[b] == own[best] && leader[b] > leader[best])) best = b;
  }
  return best;
}

struct ValueOnly {
  bool feasible = false;
  Rational value;
};

ValueOnly best_value(const std::vector<ValueOnly>& values, long& index) {
  index = first_argmax(
      values, [](const ValueOnly& v) { return v.feasible; },
      [](const ValueOnly& a, const ValueOnly& b) { return a.value < b.value; });
  if (index < 0) throw std::logic_error("no enumerated candidate is feasible");
  return values[index];
}

}  // namespace

Rational follower_utility_range(const NormalFormGame& game) {
  Rational out = 0;
  for (int i = 1; i < game.players(); ++i) {
    const auto col = game.utilities().col(i);
    const Rational range = col.maxCoeff() - col.minCoeff();
    if (range > out) out = range;
  }
  return out;
}

SolveReport solve_bayesian_follower_exact(const BayesianGame& game, const SolverOptions& options) {
  if (game.players() != 2 || !game.follower_types_only())
    throw SchemaError("bayes-follower-exact requires two players and a single-typed leader");
  const int rows = game.action_count(0);
  const int cols = game.action_count(1);
  const int types = game.type_count(1);
  const std::size_t count = bounded_power(cols, types, options.enumeration_budget);
  if (count > options.enumeration_budget)
    throw SizeError("bayes-follower-exact would enumerate " + std::to_string(cols) + "^" +
                    std::to_string(types) + " type assignments, above the budget of " +
                    std::to_string(options.enumeration_budget) +
                    "; use an approximate setting instead");

  const auto values = map_indices(
      count,
      [&](std::size_t code) {
        const auto tau = digits(code, cols, types);
        const auto built = assignment_lp(game, tau, options);
        const auto sol = detail::solve_checked(built.lp, options, assignment_title(game, tau));
        return sol.status == LpStatus::Optimal ? ValueOnly{true, sol.objective_value} : ValueOnly{};
      },
      options.threads);
  long best = -1;
  const ValueOnly winner = best_value(values, best);

  const auto tau = digits(best, cols, types);
  const auto built = assignment_lp(game, tau, options);
  const auto sol = solve_lp(built.lp);
  VectorXq mix(rows);
  for (int a = 0; a < rows; ++a) mix[a] = sol.assignment[built.mix[a]];
  VectorXq pay = VectorXq::Zero(cols);
  for (int b = 0; b < cols; ++b)
    if (built.pay[b] >= 0) pay[b] = sol.assignment[built.pay[b]];

  const MatrixXq leader = as_matrix(game.type_utilities(0).col(0), rows, cols);
  const VectorXq leader_row = leader.transpose() * mix - pay;
  SolveReport report;
  report.setting = "bayes-follower-exact";
  report.value = winner.value;
  report.commitment = Commitment{Mixture<Rational>{mix}, PaymentFunction::follower_action_only(pay)};
  std::vector<VectorXq> play;
  Rational realized = 0;
  for (int t = 0; t < types; ++t) {
    const MatrixXq follower = as_matrix(game.type_utilities(1).col(t), rows, cols);
    const VectorXq own = follower.transpose() * mix + pay;
    const int b = leader_favoring_response(own, leader_row);
    realized += game.prior(1)[t] * leader_row[b];
    play.push_back(point_mass(cols, b));
    for (int other = 0; other < cols; ++other) {
      if (other == b) continue;
      report.certificate.push_back({"type " + game.types(1)[t] + " prefers " + game.actions(1)[b] +
                                        " over " + game.actions(1)[other],
                                    own[b] - own[other]});
    }
  }
  if (realized != report.value)
    throw std::logic_error("bayes-follower-exact: realized play disagrees with the LP value");
  if (evaluate_leader(game, *report.commitment, {play}) != report.value)
    throw std::logic_error("bayes-follower-exact: recomputed value disagrees");
  report.follower_play = {std::move(play)};
  return report;
}

SolveReport solve_leader_types_pure_exact(const BayesianGame& game, const SolverOptions& options) {
  if (game.players() != 2 || !game.leader_types_only())
    throw SchemaError("leader-types-pure-exact requires two players and a single-typed follower");
  const int rows = game.action_count(0);
  const int cols = game.action_count(1);
  const int types = game.type_count(0);
  const std::size_t count = bounded_power(rows, types, options.enumeration_budget);
  if (count > options.enumeration_budget)
    throw SizeError("leader-types-pure-exact would enumerate " + std::to_string(rows) + "^" +
                    std::to_string(types) + " action functions, above the budget of " +
                    std::to_string(options.enumeration_budget));
  std::vector<MatrixXq> leader;
  for (int t = 0; t < types; ++t)
    leader.push_back(as_matrix(game.type_utilities(0).col(t), rows, cols));
  const MatrixXq follower = as_matrix(game.type_utilities(1).col(0), rows, cols);

  struct Choice {
    bool feasible = false;
    Rational value;
    int action = 0;
    Rational payment;
  };
  const auto choices = map_indices(
      count,
      [&](std::size_t code) {
        const auto f = digits(code, rows, types);
        VectorXq own = VectorXq::Zero(cols), lead = VectorXq::Zero(cols);
        for (int t = 0; t < types; ++t) {
          own += game.prior(0)[t] * follower.row(f[t]).transpose();
          lead += game.prior(0)[t] * leader[t].row(f[t]).transpose();
        }
        const Rational top = own.maxCoeff();
        Choice best;
        for (int b = 0; b < cols; ++b) {
          const Rational need = top - own[b];
          if (!options.allow_payments && need != 0) continue;
          const Rational v = lead[b] - need;
          if (!best.feasible || v > best.value) best = {true, v, b, need};
        }
        return best;
      },
      options.threads);
  const long code = first_argmax(
      choices, [](const Choice& c) { return c.feasible; },
      [](const Choice& a, const Choice& b) { return a.value < b.value; });
  const auto& best = choices[code];

  VectorXq pay = VectorXq::Zero(cols);
  pay[best.action] = best.payment;
  SolveReport report;
  report.setting = "leader-types-pure-exact";
  report.value = best.value;
  report.commitment = Commitment{TypedPure{digits(code, rows, types)},
                                 PaymentFunction::follower_action_only(pay)};
  report.follower_play = {{point_mass(cols, best.action)}};
  // expected follower utilities over leader types
  for (int other = 0; other < cols; ++other) {
    if (other == best.action) continue;
    Rational slack = best.payment;
    const auto f = digits(code, rows, types);
    for (int t = 0; t < types; ++t)
      slack += game.prior(0)[t] * (follower(f[t], best.action) - follower(f[t], other));
    report.certificate.push_back({"follower prefers " + game.actions(1)[best.action] + " over " +
                                      game.actions(1)[other],
                                  slack});
  }
  if (evaluate_leader(game, *report.commitment, report.follower_play) != report.value)
    throw std::logic_error("leader-types-pure-exact: recomputed value disagrees");
  return report;
}

namespace {

// ---- grid approximators ----------------------------------------------------

using SparsePayment = std::vector<std::pair<int, Rational>>;  // (coordinate, amount)

std::vector<SparsePayment> sparse_payments(int coordinates, const std::vector<Rational>& levels,
                                           int max_support, std::size_t budget) {
  std::vector<SparsePayment> out{{}};
  std::vector<SparsePayment> frontier{{}};
  for (int s = 1; s <= max_support; ++s) {
    std::vector<SparsePayment> next;
    for (const auto& base : frontier) {
      const int start = base.empty() ? 0 : base.back().first + 1;
      for (int c = start; c < coordinates; ++c)
        for (std::size_t l = 1; l < levels.size(); ++l) {
          auto grown = base;
          grown.emplace_back(c, levels[l]);
          next.push_back(std::move(grown));
          if (out.size() + next.size() > budget)
            throw SizeError("payment grid exceeds the budget of " + std::to_string(budget));
        }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

struct GridSpace {
  std::vector<VectorXq> mixtures;
  std::vector<SparsePayment> payments;
  std::size_t size() const { return mixtures.size() * payments.size(); }
};

GridSpace build_grid(const NormalFormGame& game, const GridOptions& grid,
                     const SolverOptions& options) {
  if (game.players() != 3) throw SchemaError("grid approximators require a three-player game");
  GridSpace out;
  out.mixtures = detail::simplex_grid(game.action_count(0), detail::grid_divisions(grid.step),
                                      grid.budget);
  Rational cap = grid.payment_cap ? *grid.payment_cap : follower_utility_range(game);
  if (!options.allow_payments) cap = 0;
  const auto levels = detail::payment_levels(grid.step, cap);
  out.payments = sparse_payments(static_cast<int>(game.profiles().size()) * 2, levels,
                                 grid.max_payment_support, grid.budget);
  if (out.size() > grid.budget)
    throw SizeError("grid has " + std::to_string(out.size()) + " points, above the budget of " +
                    std::to_string(grid.budget));
  return out;
}

Commitment grid_commitment(const NormalFormGame& game, const GridSpace& space, std::size_t k) {
  const auto& mix = space.mixtures[k / space.payments.size()];
  MatrixXq pay = MatrixXq::Zero(game.profiles().size(), 2);
  for (const auto& [coord, amount] : space.payments[k % space.payments.size()])
    pay(coord / 2, coord % 2) = amount;
  return Commitment{Mixture<Rational>{mix}, PaymentFunction::outcome_conditional(std::move(pay))};
}

// Player 2 leads player 3 on the induced game: first maximize player 2's
// value, then player 1's among player 2's optima.
struct InnerSolution {
  bool feasible = false;
  Rational leader_value;
  Rational middle_value;
  VectorXq mixture;
  Rational payment;
  int response = 0;
};

InnerSolution second_stage(const InducedGame& induced, const SolverOptions& options) {
  const auto& g = induced.followers;
  const int rows = g.action_count(0);
  const int cols = g.action_count(1);
  const MatrixXq middle = g.payoff_matrix(0);
  const MatrixXq last = g.payoff_matrix(1);
  const MatrixXq first = as_matrix(induced.leader_utility, rows, cols);

  auto build = [&](int b, LinearProgram& lp, std::vector<int>& p, int& pay) {
    for (int a = 0; a < rows; ++a) p.push_back(lp.add_variable("q[" + g.actions(0)[a] + "]"));
    pay = lp.add_variable("P[" + g.actions(1)[b] + "]", Rational(0), detail::payment_upper(options));
    std::vector<LinearTerm<Rational>> simplex;
    for (int v : p) simplex.push_back({v, 1});
    lp.add_constraint(std::move(simplex), Relation::Equal, 1, "simplex");
    for (int other = 0; other < cols; ++other) {
      if (other == b) continue;
      std::vector<LinearTerm<Rational>> terms;
      for (int a = 0; a < rows; ++a) {
        Rational c = last(a, b) - last(a, other);
        if (c != 0) terms.push_back({p[a], std::move(c)});
      }
      terms.push_back({pay, 1});
      lp.add_constraint(std::move(terms), Relation::GreaterEqual, 0,
                        "ic[" + g.actions(1)[b] + ">" + g.actions(1)[other] + "]");
    }
  };

  std::vector<std::optional<Rational>> own(cols);
  for (int b = 0; b < cols; ++b) {
    LinearProgram lp;
    std::vector<int> p;
    int pay = 0;
    build(b, lp, p, pay);
    for (int a = 0; a < rows; ++a) lp.set_objective(p[a], middle(a, b));
    lp.set_objective(pay, -1);
    const auto sol = detail::solve_checked(lp, options, "player 2 value for " + g.actions(1)[b]);
    if (sol.status == LpStatus::Optimal) own[b] = sol.objective_value;
  }
  std::optional<Rational> top;
  for (const auto& v : own)
    if (v && (!top || *v > *top)) top = v;
  InnerSolution out;
  if (!top) return out;

  for (int b = 0; b < cols; ++b) {
    if (!own[b] || *own[b] != *top) continue;
    LinearProgram lp;
    std::vector<int> p;
    int pay = 0;
    build(b, lp, p, pay);
    std::vector<LinearTerm<Rational>> keep;
    for (int a = 0; a < rows; ++a) {
      if (middle(a, b) != 0) keep.push_back({p[a], middle(a, b)});
      lp.set_objective(p[a], first(a, b));
    }
    keep.push_back({pay, -1});
    lp.add_constraint(std::move(keep), Relation::GreaterEqual, *top, "player 2 optimal");
    const auto sol = detail::solve_checked(lp, options, "player 1 value for " + g.actions(1)[b]);
    if (sol.status != LpStatus::Optimal) continue;
    if (!out.feasible || sol.objective_value > out.leader_value) {
      out.feasible = true;
      out.leader_value = sol.objective_value;
      out.middle_value = *top;
      out.mixture = VectorXq(rows);
      for (int a = 0; a < rows; ++a) out.mixture[a] = sol.assignment[p[a]];
      out.payment = sol.assignment[pay];
      out.response = b;
    }
  }
  return out;
}

void add_note(SolveReport& report, const GridOptions& grid, const GridSpace& space) {
  report.notes.push_back("grid step " + to_string(grid.step) + ", " +
                         std::to_string(space.size()) + " points, at most " +
                         std::to_string(grid.max_payment_support) +
                         " nonzero payment coordinate(s)");
}

}  // namespace

SolveReport approx_single_commitment(const NormalFormGame& game, const GridOptions& grid,
                                     const SolverOptions& options) {
  const auto space = build_grid(game, grid, options);
  const auto values = map_indices(
      space.size(),
      [&](std::size_t k) {
        return best_nash_for_leader(game, grid_commitment(game, space, k), grid.nash_cap).value;
      },
      grid.threads);
  const long k = first_argmax(
      values, [](const Rational&) { return true; },
      [](const Rational& a, const Rational& b) { return a < b; });

  SolveReport report;
  report.setting = "single-commit";
  report.bound = Bound::Lower;
  report.commitment = grid_commitment(game, space, k);
  const auto best = best_nash_for_leader(game, *report.commitment, grid.nash_cap);
  report.value = best.value;
  report.follower_play = {{best.play.row}, {best.play.column}};
  const auto induced = induce_game(game, *report.commitment);
  const MatrixXq middle = induced.followers.payoff_matrix(0);
  const MatrixXq last = induced.followers.payoff_matrix(1);
  const Rational v2 = best.play.row.dot(middle * best.play.column);
  const Rational v3 = best.play.row.dot(last * best.play.column);
  const VectorXq dev2 = middle * best.play.column;
  const VectorXq dev3 = last.transpose() * best.play.row;
  for (int a = 0; a < dev2.size(); ++a)
    report.certificate.push_back({"player 2 gains nothing from " + game.actions(1)[a], v2 - dev2[a]});
  for (int a = 0; a < dev3.size(); ++a)
    report.certificate.push_back({"player 3 gains nothing from " + game.actions(2)[a], v3 - dev3[a]});
  add_note(report, grid, space);
  if (best.completeness == Completeness::VertexRepresentativesOnly)
    report.notes.push_back("induced game has equilibrium continua; value taken over extreme equilibria");
  return report;
}

SolveReport approx_sequential_mixed(const NormalFormGame& game, const GridOptions& grid,
                                    const SolverOptions& options) {
  const auto space = build_grid(game, grid, options);
  SolverOptions inner = options;
  inner.threads = 1;
  const auto values = map_indices(
      space.size(),
      [&](std::size_t k) {
        const auto sol = second_stage(induce_game(game, grid_commitment(game, space, k)), inner);
        return ValueOnly{sol.feasible, sol.leader_value};
      },
      grid.threads);
  long k = -1;
  best_value(values, k);

  SolveReport report;
  report.setting = "seq-mixed";
  report.bound = Bound::Lower;
  report.commitment = grid_commitment(game, space, k);
  const auto induced = induce_game(game, *report.commitment);
  const auto sol = second_stage(induced, inner);
  report.value = sol.leader_value;
  const int cols = game.action_count(2);
  report.second_stage = Commitment{
      Mixture<Rational>{sol.mixture},
      PaymentFunction::follower_action_only(point_mass(cols, sol.response) * sol.payment)};
  report.follower_play = {{sol.mixture}, {point_mass(cols, sol.response)}};
  const MatrixXq last = induced.followers.payoff_matrix(1);
  const VectorXq own = last.transpose() * sol.mixture;
  for (int b = 0; b < cols; ++b) {
    if (b == sol.response) continue;
    report.certificate.push_back({"player 3 prefers " + game.actions(2)[sol.response] + " over " +
                                      game.actions(2)[b],
                                  own[sol.response] + sol.payment - own[b]});
  }
  report.notes.push_back("player 2 value " + to_string(sol.middle_value));
  add_note(report, grid, space);
  return report;
}

}  // namespace commitpay
