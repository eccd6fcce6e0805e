#ifndef COMMITPAY_EQUILIBRIUM_HPP
#define COMMITPAY_EQUILIBRIUM_HPP

#include <vector>

#include "commitpay/game.hpp"
#include "commitpay/options.hpp"
#include "commitpay/report.hpp"

namespace commitpay {

enum class Completeness { Complete, VertexRepresentativesOnly };

struct StrategyPair {
  VectorXq row;
  VectorXq column;
};

/// Extreme equilibria of a bimatrix game. With `Complete` these are all the
/// equilibria; otherwise some equilibria are convex combinations of the
/// listed ones (and every equilibrium is such a combination).
struct EquilibriumSet {
  std::vector<StrategyPair> equilibria;
  Completeness completeness = Completeness::Complete;
};

/// Exact best-response test for both players.
bool is_nash_equilibrium(const MatrixXq& row_payoff, const MatrixXq& column_payoff,
                         const VectorXq& row, const VectorXq& column);

/// Enumerates the vertices of both best-response polytopes and keeps the
/// completely labeled pairs. Throws SizeError past `cap` actions per player.
EquilibriumSet enumerate_nash_two_player(const MatrixXq& row_payoff, const MatrixXq& column_payoff,
                                         int cap = 6);
EquilibriumSet enumerate_nash_two_player(const NormalFormGame& game, int cap = 6);

/// Leader value of the best equilibrium for the leader. A bilinear objective
/// attains its maximum over a product of polytopes at a vertex pair, so the
/// maximum over extreme equilibria is the maximum over all equilibria.
struct LeaderBestNash {
  Rational value;
  StrategyPair play;
  Completeness completeness = Completeness::Complete;
};

/// Three-player game: followers play the leader-best equilibrium of the
/// induced two-player game.
LeaderBestNash best_nash_for_leader(const NormalFormGame& game, const Commitment& commitment,
                                    int cap = 6);

/// Two-player game where the leader commits to outcome payments only and then
/// plays an equilibrium of the game with utilities (u1 - P, u2 + P).
LeaderBestNash best_nash_payments_only(const NormalFormGame& game, const PaymentFunction& payments,
                                       int cap = 6);

/// Grid search over leader mixtures (simplex grid of `step`) and a payment on
/// one follower action (multiples of `step` up to `cap`); the follower
/// best-responds with ties broken for the leader. Concentrating the payment
/// on the action actually played loses nothing, so this matches a search over
/// full payment vectors on the same grid. Returns a lower bound.
SolveReport brute_force_commitment(const NormalFormGame& game, const Rational& step,
                                   const Rational& cap, const GridOptions& options = {});

}  // namespace commitpay

#endif  // COMMITPAY_EQUILIBRIUM_HPP
