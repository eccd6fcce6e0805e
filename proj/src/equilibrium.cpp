#include "commitpay/equilibrium.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "commitpay/parallel.hpp"
#include "grid_support.hpp"

namespace commitpay {
namespace {

struct Vertex {
  VectorXq point;
  std::uint32_t labels;
};

// Solves system * z = (1, ..., 1) by Gaussian elimination; nullopt when the
// system is singular.
std::optional<VectorXq> solve_unit_system(MatrixXq system) {
  const Index k = system.rows();
  VectorXq rhs = VectorXq::Ones(k);
  for (Index col = 0; col < k; ++col) {
    Index pivot = col;
    while (pivot < k && system(pivot, col) == 0) ++pivot;
    if (pivot == k) return std::nullopt;
    if (pivot != col) {
      system.row(pivot).swap(system.row(col));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (Index r = 0; r < k; ++r) {
      if (r == col || system(r, col) == 0) continue;
      const Rational factor = system(r, col) / system(col, col);
      for (Index j = col; j < k; ++j) system(r, j) -= factor * system(col, j);
      rhs[r] -= factor * rhs[col];
    }
  }
  for (Index r = 0; r < k; ++r) rhs[r] /= system(r, r);
  return rhs;
}

// Vertices of {z >= 0, M z <= 1} other than the origin, labeled in the shared
// space where 0..m-1 are row actions and m..m+n-1 column actions. For the row
// polytope a zero coordinate k carries label k; for the column polytope it
// carries m + k, and a tight row r carries r.
std::vector<Vertex> polytope_vertices(const MatrixXq& tight_rows, bool row_polytope,
                                      int row_actions) {
  const int dims = static_cast<int>(tight_rows.cols());
  const int rows = static_cast<int>(tight_rows.rows());
  const int total = dims + rows;
  std::vector<Vertex> out;
  std::vector<int> pick(dims);
  for (int i = 0; i < dims; ++i) pick[i] = i;

  // constraint < dims is a nonnegativity bound, the rest are rows of M
  auto label_of = [&](int constraint) {
    if (row_polytope) return constraint;
    return constraint < dims ? row_actions + constraint : constraint - dims;
  };

  for (;;) {
    // coordinates fixed at zero drop out; the chosen rows must pin down the rest
    std::vector<int> free_coords, rows_used;
    std::uint32_t fixed = 0;
    for (int c : pick) {
      if (c < dims) fixed |= 1u << c;
      else rows_used.push_back(c - dims);
    }
    for (int i = 0; i < dims; ++i)
      if (!((fixed >> i) & 1)) free_coords.push_back(i);
    const int k = static_cast<int>(rows_used.size());
    MatrixXq system(k, k);
    for (int r = 0; r < k; ++r)
      for (int j = 0; j < k; ++j) system(r, j) = tight_rows(rows_used[r], free_coords[j]);
    if (auto solved = solve_unit_system(std::move(system))) {
      VectorXq z = VectorXq::Zero(dims);
      for (int j = 0; j < k; ++j) z[free_coords[j]] = (*solved)[j];
      bool feasible = k > 0;
      for (int i = 0; i < dims && feasible; ++i) feasible = z[i] >= 0;
      VectorXq load;
      if (feasible) {
        load = tight_rows * z;
        for (int r = 0; r < rows && feasible; ++r) feasible = load[r] <= 1;
      }
      const bool seen = feasible && std::any_of(out.begin(), out.end(),
                                                [&](const Vertex& v) { return v.point == z; });
      if (feasible && !seen) {
        std::uint32_t labels = 0;
        for (int i = 0; i < dims; ++i)
          if (z[i] == 0) labels |= 1u << label_of(i);
        for (int r = 0; r < rows; ++r)
          if (load[r] == 1) labels |= 1u << label_of(dims + r);
        out.push_back({std::move(z), labels});
      }
    }
    // next combination of `dims` constraints out of `total`
    int i = dims - 1;
    while (i >= 0 && pick[i] == total - dims + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < dims; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

MatrixXq shifted_positive(const MatrixXq& m) {
  const Rational low = m.minCoeff();
  return m.array() - low + 1;
}

VectorXq normalized(const VectorXq& v) { return v / v.sum(); }

LeaderBestNash pick_best(const EquilibriumSet& set, const MatrixXq& leader_payoff) {
  LeaderBestNash out;
  out.completeness = set.completeness;
  bool first = true;
  for (const auto& eq : set.equilibria) {
    Rational v = eq.row.dot(leader_payoff * eq.column);
    if (first || v > out.value) {
      out.value = std::move(v);
      out.play = eq;
      first = false;
    }
  }
  if (first) throw std::logic_error("equilibrium enumeration returned no equilibrium");
  return out;
}

}  // namespace

bool is_nash_equilibrium(const MatrixXq& row_payoff, const MatrixXq& column_payoff,
                         const VectorXq& row, const VectorXq& column) {
  if (row.size() != row_payoff.rows() || column.size() != row_payoff.cols()) return false;
  if (!is_distribution(row) || !is_distribution(column)) return false;
  const VectorXq row_values = row_payoff * column;
  const VectorXq column_values = column_payoff.transpose() * row;
  const Rational row_value = row.dot(row_values);
  const Rational column_value = column.dot(column_values);
  return row_values.maxCoeff() == row_value && column_values.maxCoeff() == column_value;
}

EquilibriumSet enumerate_nash_two_player(const MatrixXq& row_payoff, const MatrixXq& column_payoff,
                                         int cap) {
  const int m = static_cast<int>(row_payoff.rows());
  const int n = static_cast<int>(row_payoff.cols());
  if (column_payoff.rows() != m || column_payoff.cols() != n)
    throw SchemaError("payoff matrices differ in shape");
  if (m > cap || n > cap)
    throw SizeError("equilibrium enumeration is capped at " + std::to_string(cap) +
                    " actions per player, game is " + std::to_string(m) + "x" + std::to_string(n));
  // Row player's polytope is constrained by the column player's payoffs and
  // vice versa; labels 0..m-1 are row actions, m..m+n-1 column actions.
  const auto row_vertices = polytope_vertices(shifted_positive(column_payoff).transpose(), true, m);
  const auto column_vertices = polytope_vertices(shifted_positive(row_payoff), false, m);
  const std::uint32_t all = (m + n >= 32) ? ~0u : ((1u << (m + n)) - 1);

  EquilibriumSet out;
  std::vector<int> row_degree(row_vertices.size(), 0), column_degree(column_vertices.size(), 0);
  for (std::size_t i = 0; i < row_vertices.size(); ++i) {
    for (std::size_t j = 0; j < column_vertices.size(); ++j) {
      if ((row_vertices[i].labels | column_vertices[j].labels) != all) continue;
      ++row_degree[i];
      ++column_degree[j];
      StrategyPair eq{normalized(row_vertices[i].point), normalized(column_vertices[j].point)};
      if (!is_nash_equilibrium(row_payoff, column_payoff, eq.row, eq.column))
        throw std::logic_error("enumerated profile fails the best-response check");
      out.equilibria.push_back(std::move(eq));
    }
  }
  const bool matching = std::all_of(row_degree.begin(), row_degree.end(), [](int d) { return d <= 1; }) &&
                        std::all_of(column_degree.begin(), column_degree.end(), [](int d) { return d <= 1; });
  out.completeness = matching ? Completeness::Complete : Completeness::VertexRepresentativesOnly;
  return out;
}

EquilibriumSet enumerate_nash_two_player(const NormalFormGame& game, int cap) {
  if (game.players() != 2) throw SchemaError("equilibrium enumeration requires a two-player game");
  return enumerate_nash_two_player(game.payoff_matrix(0), game.payoff_matrix(1), cap);
}

LeaderBestNash best_nash_for_leader(const NormalFormGame& game, const Commitment& commitment,
                                    int cap) {
  if (game.players() != 3) throw SchemaError("best_nash_for_leader requires a three-player game");
  const auto induced = induce_game(game, commitment);
  const auto set = enumerate_nash_two_player(induced.followers, cap);
  const int rows = induced.followers.action_count(0);
  const int cols = induced.followers.action_count(1);
  const MatrixXq leader = induced.leader_utility.reshaped(cols, rows).transpose();
  return pick_best(set, leader);
}

LeaderBestNash best_nash_payments_only(const NormalFormGame& game, const PaymentFunction& payments,
                                       int cap) {
  if (game.players() != 2) throw SchemaError("payments-only play requires a two-player game");
  payments.check_compatible(game.profiles());
  const auto& space = game.profiles();
  MatrixXq pay(game.action_count(0), game.action_count(1));
  for (Index idx = 0; idx < space.size(); ++idx)
    pay(space.action_of(idx, 0), space.action_of(idx, 1)) = payments.at(space, idx, 1);
  const MatrixXq leader = game.payoff_matrix(0) - pay;
  const MatrixXq follower = game.payoff_matrix(1) + pay;
  return pick_best(enumerate_nash_two_player(leader, follower, cap), leader);
}

SolveReport brute_force_commitment(const NormalFormGame& game, const Rational& step,
                                   const Rational& cap, const GridOptions& options) {
  if (game.players() != 2) throw SchemaError("brute-force commitment requires a two-player game");
  const long divisions = detail::grid_divisions(step);
  const auto mixtures = detail::simplex_grid(game.action_count(0), divisions, options.budget);
  const auto levels = detail::payment_levels(step, cap);
  const int actions = game.action_count(1);
  const std::size_t per_mixture = 1 + static_cast<std::size_t>(actions) * (levels.size() - 1);
  if (mixtures.size() * per_mixture > options.budget)
    throw SizeError("brute-force grid has " + std::to_string(mixtures.size() * per_mixture) +
                    " points, above the budget of " + std::to_string(options.budget));
  const MatrixXq u1 = game.payoff_matrix(0);
  const MatrixXq u2 = game.payoff_matrix(1);

  struct Point {
    Rational value;
    int paid_action = 0;
    Rational payment;
    int response = 0;
  };
  auto best_for = [&](std::size_t k) {
    const VectorXq leader_row = mixtures[k].transpose() * u1;
    const VectorXq follower_row = mixtures[k].transpose() * u2;
    Point best;
    bool have = false;
    for (int paid = 0; paid < actions; ++paid) {
      for (std::size_t l = 0; l < levels.size(); ++l) {
        if (l == 0 && paid > 0) continue;  // zero payment already covered
        const Rational& amount = levels[l];
        // follower: own utility first, then the leader's, then lowest index
        int response = 0;
        Rational own, lead;
        for (int b = 0; b < actions; ++b) {
          const Rational extra = b == paid ? amount : Rational(0);
          Rational o = follower_row[b] + extra;
          Rational ld = leader_row[b] - extra;
          if (b == 0 || o > own || (o == own && ld > lead)) {
            response = b;
            own = std::move(o);
            lead = std::move(ld);
          }
        }
        if (!have || lead > best.value) {
          best = {lead, paid, amount, response};
          have = true;
        }
      }
    }
    return best;
  };
  const auto points = map_indices(mixtures.size(), best_for, options.threads);
  const long k = first_argmax(
      points, [](const Point&) { return true; },
      [](const Point& a, const Point& b) { return a.value < b.value; });
  const auto& best = points[k];

  VectorXq pay = VectorXq::Zero(actions);
  pay[best.paid_action] = best.payment;
  SolveReport report;
  report.setting = "brute-force";
  report.value = best.value;
  report.bound = Bound::Lower;
  report.commitment =
      Commitment{Mixture<Rational>{mixtures[k]}, PaymentFunction::follower_action_only(pay)};
  VectorXq play = VectorXq::Zero(actions);
  play[best.response] = 1;
  report.follower_play = {{play}};
  for (int b = 0; b < actions; ++b) {
    if (b == best.response) continue;
    const Rational pb = b == best.paid_action ? best.payment : Rational(0);
    const Rational pr = best.response == best.paid_action ? best.payment : Rational(0);
    report.certificate.push_back(
        {"follower prefers " + game.actions(1)[best.response] + " over " + game.actions(1)[b],
         mixtures[k].dot(u2.col(best.response)) + pr - mixtures[k].dot(u2.col(b)) - pb});
  }
  return report;
}

}  // namespace commitpay
