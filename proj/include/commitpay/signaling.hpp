#ifndef COMMITPAY_SIGNALING_HPP
#define COMMITPAY_SIGNALING_HPP

#include <string>
#include <vector>

#include "commitpay/game.hpp"
#include "commitpay/options.hpp"
#include "commitpay/report.hpp"

namespace commitpay {

/// Optimal recommendation scheme over full profiles with payments for
/// following a recommendation. Single LP.
SolveReport solve_signaling_mixed(const NormalFormGame& game, const SolverOptions& options = {});

/// As solve_signaling_mixed with all mass on one leader action; one LP per
/// leader action, ties to the lowest index.
SolveReport solve_signaling_pure(const NormalFormGame& game, const SolverOptions& options = {});

/// Typed leader: one distribution per leader type, obedience in expectation
/// over the prior. Followers must be single-typed.
SolveReport solve_signaling_leader_types_mixed(const BayesianGame& game,
                                               const SolverOptions& options = {});

struct IncentiveCheck {
  bool passed = false;
  /// One entry per (follower, recommended action, deviation).
  std::vector<CertificateEntry> slacks;
  /// Structural problems (bad distribution, negative payment, ...).
  std::vector<std::string> problems;
};

/// Exact obedience check of `commitment.distribution` with conditional
/// probabilities. Payments on never-recommended actions are ignored.
IncentiveCheck check_incentive_compatibility(const NormalFormGame& game,
                                             const SignalingCommitment& commitment);

}  // namespace commitpay

#endif  // COMMITPAY_SIGNALING_HPP
