#ifndef COMMITPAY_COMMIT_SOLVERS_HPP
#define COMMITPAY_COMMIT_SOLVERS_HPP

#include "commitpay/game.hpp"
#include "commitpay/options.hpp"
#include "commitpay/report.hpp"

namespace commitpay {

/// Best outcome to implement with a pure leader action and a payment on the
/// follower's action. Ties go to the lowest (leader, follower) index pair.
SolveReport solve_two_player_pure(const NormalFormGame& game, const SolverOptions& options = {});

/// Leader mixture plus a payment on one follower action; one LP per follower
/// action.
SolveReport solve_two_player_mixed(const NormalFormGame& game, const SolverOptions& options = {});

/// Three players commit in order (pure action plus payments to later
/// players). One three-variable LP per outcome; off-path deterrence uses a
/// big payment to player 3.
SolveReport solve_three_player_sequential_pure(const NormalFormGame& game,
                                               const SolverOptions& options = {});

/// Typed leader, single-typed follower: one mixture per leader type plus a
/// payment on the follower's action.
SolveReport solve_two_player_leader_types_mixed(const BayesianGame& game,
                                                const SolverOptions& options = {});

/// Slack of "follower plays `action`" against every alternative in a
/// two-player game under `commitment`, recomputed from expected utilities.
std::vector<CertificateEntry> follower_certificate(const NormalFormGame& game,
                                                   const Commitment& commitment, int action);

/// Follower 1 of a Bayesian game with a typed leader: same check, with
/// expectations taken over leader types.
std::vector<CertificateEntry> follower_certificate(const BayesianGame& game,
                                                   const Commitment& commitment, int action);

}  // namespace commitpay

#endif  // COMMITPAY_COMMIT_SOLVERS_HPP
