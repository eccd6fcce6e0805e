#ifndef COMMITPAY_REPORT_HPP
#define COMMITPAY_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "commitpay/game.hpp"

namespace commitpay {

struct CertificateEntry {
  std::string constraint;
  Rational slack;
};

inline bool all_slacks_nonnegative(const std::vector<CertificateEntry>& certificate) {
  for (const auto& e : certificate)
    if (e.slack < 0) return false;
  return true;
}

/// Recommendation scheme: a distribution over full action profiles (one per
/// leader type when the leader is typed) plus payments for following a
/// recommendation.
struct SignalingCommitment {
  /// Ex-ante distribution over profiles.
  VectorXq distribution;
  /// Per leader type; empty for an untyped leader.
  std::vector<VectorXq> type_distributions;
  /// expected_payments[i - 1][a_i]: ex-ante expected transfer to follower i
  /// for being recommended a_i.
  std::vector<std::vector<Rational>> expected_payments;
  /// payments[i - 1][a_i]: transfer when a_i is recommended, absent when a_i
  /// is never recommended.
  std::vector<std::vector<std::optional<Rational>>> payments;
};

/// Sequential pure commitment for three players: the leader's outcome
/// payments live in the accompanying Commitment; this holds the rest.
struct SequentialPaymentPlan {
  Profile target;
  Rational pay_1_to_2;
  Rational pay_1_to_3;
  /// Player 2 to player 3 on the target, already clamped to its minimum.
  Rational pay_2_to_3;
  Rational big_m;
  /// Profiles (a1, a2', m(a2')) on which player 3 receives big_m.
  std::vector<Profile> triggers;
};

enum class Bound { Exact, Lower };

struct SolveReport {
  std::string setting;
  Rational value;
  Bound bound = Bound::Exact;
  std::optional<Commitment> commitment;
  std::optional<SignalingCommitment> signaling;
  std::optional<SequentialPaymentPlan> sequential;
  /// Player 2's own commitment towards player 3 in the sequential mixed
  /// setting (mixture over player 2 actions, payments to player 3).
  std::optional<Commitment> second_stage;
  /// follower_play[i - 1][type] is the realized mixture of follower i.
  std::vector<std::vector<VectorXq>> follower_play;
  std::vector<CertificateEntry> certificate;
  /// Free-form qualifiers, e.g. incomplete equilibrium enumeration.
  std::vector<std::string> notes;
};

}  // namespace commitpay

#endif  // COMMITPAY_REPORT_HPP
