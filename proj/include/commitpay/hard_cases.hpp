#ifndef COMMITPAY_HARD_CASES_HPP
#define COMMITPAY_HARD_CASES_HPP

#include <vector>

#include "commitpay/game.hpp"
#include "commitpay/options.hpp"
#include "commitpay/report.hpp"

namespace commitpay {

/// Follower action chosen by each follower type.
using TypeAssignment = std::vector<int>;

/// Typed follower, single-typed leader. Enumerates every assignment of
/// follower types to actions and solves one LP per assignment over the leader
/// mixture and payments on the assigned actions.
SolveReport solve_bayesian_follower_exact(const BayesianGame& game,
                                          const SolverOptions& options = {});

/// Typed leader committing to one pure action per type, single-typed
/// follower. Enumerates every action function.
SolveReport solve_leader_types_pure_exact(const BayesianGame& game,
                                          const SolverOptions& options = {});

/// Three players, followers play the leader-best equilibrium. Grid over
/// leader mixtures and sparse outcome payments; result is a lower bound.
SolveReport approx_single_commitment(const NormalFormGame& game, const GridOptions& grid = {},
                                     const SolverOptions& options = {});

/// Three players committing in sequence with mixtures. Grid over the
/// leader's mixture and sparse outcome payments; player 2 then solves its own
/// commitment problem against player 3 exactly. Result is a lower bound.
SolveReport approx_sequential_mixed(const NormalFormGame& game, const GridOptions& grid = {},
                                    const SolverOptions& options = {});

/// Default payment cap of the grid approximators: the largest utility range
/// among the followers.
Rational follower_utility_range(const NormalFormGame& game);

}  // namespace commitpay

#endif  // COMMITPAY_HARD_CASES_HPP
