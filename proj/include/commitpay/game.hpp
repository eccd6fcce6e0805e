#ifndef COMMITPAY_GAME_HPP
#define COMMITPAY_GAME_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "commitpay/errors.hpp"
#include "commitpay/rational.hpp"

namespace commitpay {

using Eigen::Index;
using Profile = std::vector<int>;

/// Mixed-radix indexing of action profiles. Player 0 is the most significant
/// digit, so profiles sharing a leader action form a contiguous block and the
/// follower part of an index is `index % (size() / action_count(0))`.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<int> action_counts) : counts_(std::move(action_counts)) {
    strides_.assign(counts_.size(), 1);
    size_ = 1;
    for (int p = static_cast<int>(counts_.size()) - 1; p >= 0; --p) {
      strides_[p] = size_;
      size_ *= std::max(counts_[p], 0);
    }
  }

  int players() const { return static_cast<int>(counts_.size()); }
  int action_count(int player) const { return counts_[player]; }
  const std::vector<int>& action_counts() const { return counts_; }
  Index size() const { return size_; }
  Index stride(int player) const { return strides_[player]; }
  bool operator==(const ProfileSpace& other) const { return counts_ == other.counts_; }

  Index index(std::span<const int> profile) const {
    Index idx = 0;
    for (int p = 0; p < players(); ++p) idx += profile[p] * strides_[p];
    return idx;
  }

  Profile profile(Index idx) const {
    Profile out(counts_.size());
    for (int p = 0; p < players(); ++p) out[p] = action_of(idx, p);
    return out;
  }

  int action_of(Index idx, int player) const {
    return static_cast<int>((idx / strides_[player]) % counts_[player]);
  }

  /// Index of the profile equal to `idx` except that `player` plays `action`.
  Index with_action(Index idx, int player, int action) const {
    return idx + (action - action_of(idx, player)) * strides_[player];
  }

 private:
  std::vector<int> counts_;
  std::vector<Index> strides_;
  Index size_ = 0;
};

namespace detail {

inline void check_labels(const std::vector<std::vector<std::string>>& labels, const char* what,
                         std::vector<std::string>& violations) {
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p].empty()) {
      violations.push_back("player " + std::to_string(p + 1) + " has an empty " + what + " set");
    }
    for (std::size_t i = 0; i < labels[p].size(); ++i) {
      const auto& label = labels[p][i];
      if (label.empty() || label.find('|') != std::string::npos) {
        violations.push_back("player " + std::to_string(p + 1) + " " + what + " label \"" + label +
                             "\" is empty or contains '|'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (labels[p][j] == label) {
          violations.push_back("player " + std::to_string(p + 1) + " repeats " + what + " label \"" +
                               label + "\"");
        }
      }
    }
  }
}

// Eigen's == assumes equal shapes; this checks them first.
template <typename Left, typename Right>
bool same_entries(const Left& a, const Right& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

template <typename Dense>
bool same_entries(const std::vector<Dense>& a, const std::vector<Dense>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_entries(a[i], b[i])) return false;
  return true;
}

inline std::vector<int> counts_of(const std::vector<std::vector<std::string>>& labels) {
  std::vector<int> counts;
  for (const auto& set : labels) counts.push_back(static_cast<int>(set.size()));
  return counts;
}

inline int find_label(const std::vector<std::string>& labels, std::string_view label) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

}  // namespace detail

/// Probability vector check: nonnegative entries summing exactly to one.
template <typename Scalar>
bool is_distribution(const VectorX<Scalar>& probabilities) {
  if (probabilities.size() == 0) return false;
  for (Index i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] < 0) return false;
  }
  return probabilities.sum() == Scalar(1);
}

template <typename Scalar>
void require_distribution(const VectorX<Scalar>& probabilities, Index expected_size,
                          const std::string& what) {
  if (probabilities.size() != expected_size) {
    throw SchemaError(what + " has " + std::to_string(probabilities.size()) +
                      " entries, expected " + std::to_string(expected_size));
  }
  if (!is_distribution(probabilities)) {
    throw SchemaError(what + " is not a probability distribution");
  }
}

/// An n-player normal-form game with utilities stored as a
/// (profile count) x (player count) matrix.
template <typename Scalar>
class BasicNormalFormGame {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  BasicNormalFormGame(std::vector<std::vector<std::string>> action_labels, Matrix utilities)
      : labels_(std::move(action_labels)),
        space_(detail::counts_of(labels_)),
        utilities_(std::move(utilities)) {
    std::vector<std::string> violations;
    if (labels_.empty()) violations.push_back("a game needs at least one player");
    detail::check_labels(labels_, "action", violations);
    if (violations.empty()) {
      if (utilities_.rows() != space_.size()) {
        violations.push_back("utility table has " + std::to_string(utilities_.rows()) +
                             " profiles, expected " + std::to_string(space_.size()));
      }
      if (utilities_.cols() != players()) {
        violations.push_back("utility vectors have length " + std::to_string(utilities_.cols()) +
                             ", expected " + std::to_string(players()));
      }
    }
    if (!violations.empty()) throw SchemaError(std::move(violations));
  }

  int players() const { return static_cast<int>(labels_.size()); }
  int action_count(int player) const { return space_.action_count(player); }
  const std::vector<std::string>& actions(int player) const { return labels_[player]; }
  const std::vector<std::vector<std::string>>& action_labels() const { return labels_; }
  const ProfileSpace& profiles() const { return space_; }
  const Matrix& utilities() const { return utilities_; }
  const Scalar& utility(Index profile, int player) const { return utilities_(profile, player); }

  int action_index(int player, std::string_view label) const {
    const int idx = detail::find_label(labels_[player], label);
    if (idx < 0) {
      throw SchemaError("player " + std::to_string(player + 1) + " has no action \"" +
                        std::string(label) + "\"");
    }
    return idx;
  }

  /// |A_1| x |A_2| payoff matrix of `player` in a two-player game.
  Matrix payoff_matrix(int player) const {
    if (players() != 2) throw SchemaError("payoff_matrix requires a two-player game");
    return utilities_.col(player).reshaped(action_count(1), action_count(0)).transpose();
  }

  bool operator==(const BasicNormalFormGame& other) const {
    return labels_ == other.labels_ && detail::same_entries(utilities_, other.utilities_);
  }

 private:
  std::vector<std::vector<std::string>> labels_;
  ProfileSpace space_;
  Matrix utilities_;
};

/// Bayesian game: per-player type sets with a prior, and for each player a
/// (profile count) x (own type count) utility matrix.
template <typename Scalar>
class BasicBayesianGame {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  BasicBayesianGame(std::vector<std::vector<std::string>> action_labels,
                    std::vector<std::vector<std::string>> type_labels, std::vector<Vector> priors,
                    std::vector<Matrix> utilities)
      : labels_(std::move(action_labels)),
        type_labels_(std::move(type_labels)),
        space_(detail::counts_of(labels_)),
        priors_(std::move(priors)),
        utilities_(std::move(utilities)) {
    std::vector<std::string> violations;
    if (labels_.empty()) violations.push_back("a game needs at least one player");
    detail::check_labels(labels_, "action", violations);
    detail::check_labels(type_labels_, "type", violations);
    const auto n = labels_.size();
    if (type_labels_.size() != n) violations.push_back("type sets must be given for every player");
    if (priors_.size() != n) violations.push_back("priors must be given for every player");
    if (utilities_.size() != n) violations.push_back("utilities must be given for every player");
    if (violations.empty()) {
      for (std::size_t p = 0; p < n; ++p) {
        const std::string who = "player " + std::to_string(p + 1);
        const auto types = static_cast<Index>(type_labels_[p].size());
        if (priors_[p].size() != types) {
          violations.push_back(who + " prior has " + std::to_string(priors_[p].size()) +
                               " entries for " + std::to_string(types) + " types");
        } else if (!is_distribution(priors_[p])) {
          violations.push_back(who + " prior is not a distribution (sum " +
                               to_string(Rational(priors_[p].sum())) + ")");
        }
        if (utilities_[p].rows() != space_.size() || utilities_[p].cols() != types) {
          violations.push_back(who + " utility table has wrong shape");
        }
      }
    }
    if (!violations.empty()) throw SchemaError(std::move(violations));
  }

  int players() const { return static_cast<int>(labels_.size()); }
  int action_count(int player) const { return space_.action_count(player); }
  int type_count(int player) const { return static_cast<int>(type_labels_[player].size()); }
  const std::vector<std::string>& actions(int player) const { return labels_[player]; }
  const std::vector<std::string>& types(int player) const { return type_labels_[player]; }
  const std::vector<std::vector<std::string>>& action_labels() const { return labels_; }
  const std::vector<std::vector<std::string>>& type_labels() const { return type_labels_; }
  const ProfileSpace& profiles() const { return space_; }
  const Vector& prior(int player) const { return priors_[player]; }
  const Matrix& type_utilities(int player) const { return utilities_[player]; }
  const Scalar& utility(int player, int type, Index profile) const {
    return utilities_[player](profile, type);
  }

  bool leader_types_only() const {
    for (int p = 1; p < players(); ++p) {
      if (type_count(p) != 1) return false;
    }
    return true;
  }
  bool follower_types_only() const { return type_count(0) == 1; }

  /// Normal-form game obtained by fixing one type per player.
  BasicNormalFormGame<Scalar> type_slice(std::span<const int> type_profile) const {
    Matrix u(space_.size(), players());
    for (int p = 0; p < players(); ++p) u.col(p) = utilities_[p].col(type_profile[p]);
    return BasicNormalFormGame<Scalar>(labels_, std::move(u));
  }

  bool operator==(const BasicBayesianGame& other) const {
    return labels_ == other.labels_ && type_labels_ == other.type_labels_ &&
           detail::same_entries(priors_, other.priors_) &&
           detail::same_entries(utilities_, other.utilities_);
  }

 private:
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::string>> type_labels_;
  ProfileSpace space_;
  std::vector<Vector> priors_;
  std::vector<Matrix> utilities_;
};

/// Wraps a normal-form game as a Bayesian game where every player has one type.
template <typename Scalar>
BasicBayesianGame<Scalar> as_bayesian(const BasicNormalFormGame<Scalar>& game,
                                      const std::string& type_label = "default") {
  std::vector<std::vector<std::string>> types(game.players(), std::vector<std::string>{type_label});
  std::vector<VectorX<Scalar>> priors(game.players(), VectorX<Scalar>::Ones(1));
  std::vector<MatrixX<Scalar>> utilities;
  for (int p = 0; p < game.players(); ++p) utilities.push_back(game.utilities().col(p));
  return BasicBayesianGame<Scalar>(game.action_labels(), std::move(types), std::move(priors),
                                   std::move(utilities));
}

/// Nonnegative leader-to-follower transfers in one of three shapes.
template <typename Scalar>
class BasicPaymentFunction {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;
  enum class Kind { OutcomeConditional, RecommendationConditional, FollowerActionOnly };

  /// `values(profile, i - 1)` is the transfer to follower i at that outcome.
  static BasicPaymentFunction outcome_conditional(Matrix values) {
    BasicPaymentFunction f(Kind::OutcomeConditional);
    for (Index r = 0; r < values.rows(); ++r)
      for (Index c = 0; c < values.cols(); ++c) f.require_nonnegative(values(r, c));
    f.outcome_ = std::move(values);
    return f;
  }

  /// `values[i - 1][a_i]`; an absent entry marks a never-recommended action.
  static BasicPaymentFunction recommendation_conditional(
      std::vector<std::vector<std::optional<Scalar>>> values) {
    BasicPaymentFunction f(Kind::RecommendationConditional);
    for (const auto& per_follower : values)
      for (const auto& v : per_follower)
        if (v) f.require_nonnegative(*v);
    f.recommendation_ = std::move(values);
    return f;
  }

  static BasicPaymentFunction follower_action_only(Vector values) {
    BasicPaymentFunction f(Kind::FollowerActionOnly);
    for (Index i = 0; i < values.size(); ++i) f.require_nonnegative(values[i]);
    f.follower_action_ = std::move(values);
    return f;
  }

  static BasicPaymentFunction zero(const ProfileSpace& space) {
    return outcome_conditional(Matrix::Zero(space.size(), std::max(space.players() - 1, 0)));
  }

  Kind kind() const { return kind_; }
  const Matrix& outcome_values() const { return outcome_; }
  const std::vector<std::vector<std::optional<Scalar>>>& recommendation_values() const {
    return recommendation_;
  }
  const Vector& follower_action_values() const { return follower_action_; }

  /// Throws SchemaError when the payment shape does not fit the game.
  void check_compatible(const ProfileSpace& space) const {
    const int followers = space.players() - 1;
    switch (kind_) {
      case Kind::OutcomeConditional:
        if (outcome_.rows() != space.size() || outcome_.cols() != followers)
          throw SchemaError("outcome-conditional payments do not match the game dimensions");
        break;
      case Kind::RecommendationConditional:
        if (static_cast<int>(recommendation_.size()) != followers)
          throw SchemaError("recommendation payments must list every follower");
        for (int i = 0; i < followers; ++i)
          if (static_cast<int>(recommendation_[i].size()) != space.action_count(i + 1))
            throw SchemaError("recommendation payments for follower " + std::to_string(i + 2) +
                              " do not match the action count");
        break;
      case Kind::FollowerActionOnly:
        if (space.players() != 2)
          throw SchemaError("follower-action-only payments require a two-player game");
        if (follower_action_.size() != space.action_count(1))
          throw SchemaError("follower-action payments do not match the follower action count");
        break;
    }
  }

  /// Transfer to `player` (>= 1) when `profile` is played. Recommendation
  /// payments are read as "paid for playing a_i"; absent entries pay nothing.
  Scalar at(const ProfileSpace& space, Index profile, int player) const {
    switch (kind_) {
      case Kind::OutcomeConditional:
        return outcome_(profile, player - 1);
      case Kind::RecommendationConditional: {
        const auto& v = recommendation_[player - 1][space.action_of(profile, player)];
        return v ? *v : Scalar(0);
      }
      case Kind::FollowerActionOnly:
        return follower_action_[space.action_of(profile, 1)];
    }
    return Scalar(0);
  }

  bool operator==(const BasicPaymentFunction& other) const {
    return kind_ == other.kind_ && detail::same_entries(outcome_, other.outcome_) &&
           recommendation_ == other.recommendation_ &&
           detail::same_entries(follower_action_, other.follower_action_);
  }

 private:
  explicit BasicPaymentFunction(Kind kind) : kind_(kind) {}

  static void require_nonnegative(const Scalar& v) {
    if (v < 0) throw SchemaError("payments must be nonnegative");
  }

  Kind kind_;
  Matrix outcome_;
  std::vector<std::vector<std::optional<Scalar>>> recommendation_;
  Vector follower_action_;
};

struct PureAction {
  int action = 0;
  bool operator==(const PureAction&) const = default;
};
template <typename Scalar>
struct Mixture {
  VectorX<Scalar> probabilities;
  bool operator==(const Mixture& other) const {
    return detail::same_entries(probabilities, other.probabilities);
  }
};
/// One leader action per leader type.
struct TypedPure {
  std::vector<int> actions;
  bool operator==(const TypedPure&) const = default;
};
template <typename Scalar>
struct TypedMixture {
  std::vector<VectorX<Scalar>> probabilities;
  bool operator==(const TypedMixture& other) const {
    return detail::same_entries(probabilities, other.probabilities);
  }
};

template <typename Scalar>
using LeaderStrategy = std::variant<PureAction, Mixture<Scalar>, TypedPure, TypedMixture<Scalar>>;

template <typename Scalar>
struct BasicCommitment {
  LeaderStrategy<Scalar> strategy;
  BasicPaymentFunction<Scalar> payments;
  bool operator==(const BasicCommitment&) const = default;
};

/// Leader mixture as a dense vector; typed strategies are rejected.
template <typename Scalar>
VectorX<Scalar> leader_mixture(const LeaderStrategy<Scalar>& strategy, int action_count) {
  if (const auto* pure = std::get_if<PureAction>(&strategy)) {
    if (pure->action < 0 || pure->action >= action_count)
      throw SchemaError("pure leader action out of range");
    VectorX<Scalar> out = VectorX<Scalar>::Zero(action_count);
    out[pure->action] = 1;
    return out;
  }
  if (const auto* mix = std::get_if<Mixture<Scalar>>(&strategy)) {
    require_distribution(mix->probabilities, action_count, "leader mixture");
    return mix->probabilities;
  }
  throw SchemaError("expected an untyped leader strategy");
}

/// Leader mixture for each leader type.
template <typename Scalar>
std::vector<VectorX<Scalar>> leader_type_mixtures(const LeaderStrategy<Scalar>& strategy,
                                                  int action_count, int type_count) {
  std::vector<VectorX<Scalar>> out;
  if (const auto* typed = std::get_if<TypedPure>(&strategy)) {
    if (static_cast<int>(typed->actions.size()) != type_count)
      throw SchemaError("typed strategy must cover every leader type");
    for (int a : typed->actions) out.push_back(leader_mixture<Scalar>(PureAction{a}, action_count));
    return out;
  }
  if (const auto* typed = std::get_if<TypedMixture<Scalar>>(&strategy)) {
    if (static_cast<int>(typed->probabilities.size()) != type_count)
      throw SchemaError("typed strategy must cover every leader type");
    for (const auto& p : typed->probabilities) {
      require_distribution(p, action_count, "leader type mixture");
      out.push_back(p);
    }
    return out;
  }
  out.assign(type_count, leader_mixture(strategy, action_count));
  return out;
}

/// The (n-1)-player game left to the followers after a commitment, plus the
/// leader's expected utility net of payments on each follower profile.
template <typename Scalar>
struct BasicInducedGame {
  BasicNormalFormGame<Scalar> followers;
  VectorX<Scalar> leader_utility;
};

template <typename Scalar>
BasicInducedGame<Scalar> induce_game(const BasicNormalFormGame<Scalar>& game,
                                     const BasicCommitment<Scalar>& commitment) {
  if (game.players() < 2) throw SchemaError("inducing a game requires at least two players");
  commitment.payments.check_compatible(game.profiles());
  const auto sigma = leader_mixture(commitment.strategy, game.action_count(0));
  const auto& space = game.profiles();
  const int n = game.players();
  const Index block = space.stride(0);

  MatrixX<Scalar> follower_u = MatrixX<Scalar>::Zero(block, n - 1);
  VectorX<Scalar> leader_u = VectorX<Scalar>::Zero(block);
  for (Index idx = 0; idx < space.size(); ++idx) {
    const Scalar& w = sigma[space.action_of(idx, 0)];
    if (w == 0) continue;
    const Index f = idx % block;
    Scalar leader = game.utility(idx, 0);
    for (int i = 1; i < n; ++i) {
      const Scalar pay = commitment.payments.at(space, idx, i);
      follower_u(f, i - 1) += w * (game.utility(idx, i) + pay);
      leader -= pay;
    }
    leader_u[f] += w * leader;
  }
  std::vector<std::vector<std::string>> labels(game.action_labels().begin() + 1,
                                               game.action_labels().end());
  return {BasicNormalFormGame<Scalar>(std::move(labels), std::move(follower_u)), std::move(leader_u)};
}

/// Exact expected leader utility after payments when followers play the
/// independent mixtures `follower_play[i - 1]`.
template <typename Scalar>
Scalar evaluate_leader(const BasicNormalFormGame<Scalar>& game,
                       const BasicCommitment<Scalar>& commitment,
                       const std::vector<VectorX<Scalar>>& follower_play) {
  commitment.payments.check_compatible(game.profiles());
  const auto sigma = leader_mixture(commitment.strategy, game.action_count(0));
  if (static_cast<int>(follower_play.size()) != game.players() - 1)
    throw SchemaError("follower play must list every follower");
  for (int i = 1; i < game.players(); ++i)
    require_distribution(follower_play[i - 1], game.action_count(i),
                         "follower " + std::to_string(i + 1) + " strategy");

  const auto& space = game.profiles();
  Scalar total = 0;
  for (Index idx = 0; idx < space.size(); ++idx) {
    Scalar prob = sigma[space.action_of(idx, 0)];
    for (int i = 1; i < game.players() && prob != 0; ++i)
      prob *= follower_play[i - 1][space.action_of(idx, i)];
    if (prob == 0) continue;
    Scalar value = game.utility(idx, 0);
    for (int i = 1; i < game.players(); ++i) value -= commitment.payments.at(space, idx, i);
    total += prob * value;
  }
  return total;
}

/// Ex-ante leader utility in a Bayesian game. `follower_play[i - 1][t]` is
/// the mixture of follower i when of type t.
template <typename Scalar>
Scalar evaluate_leader(const BasicBayesianGame<Scalar>& game,
                       const BasicCommitment<Scalar>& commitment,
                       const std::vector<std::vector<VectorX<Scalar>>>& follower_play) {
  commitment.payments.check_compatible(game.profiles());
  const auto sigma =
      leader_type_mixtures(commitment.strategy, game.action_count(0), game.type_count(0));
  const int n = game.players();
  if (static_cast<int>(follower_play.size()) != n - 1)
    throw SchemaError("follower play must list every follower");
  std::vector<int> type_counts;
  for (int p = 0; p < n; ++p) type_counts.push_back(game.type_count(p));
  for (int i = 1; i < n; ++i) {
    if (static_cast<int>(follower_play[i - 1].size()) != type_counts[i])
      throw SchemaError("follower play must cover every follower type");
    for (const auto& mix : follower_play[i - 1])
      require_distribution(mix, game.action_count(i), "follower strategy");
  }

  const ProfileSpace type_space(type_counts);
  const auto& space = game.profiles();
  Scalar total = 0;
  for (Index t = 0; t < type_space.size(); ++t) {
    const Profile types = type_space.profile(t);
    Scalar type_prob = 1;
    for (int p = 0; p < n; ++p) type_prob *= game.prior(p)[types[p]];
    if (type_prob == 0) continue;
    for (Index idx = 0; idx < space.size(); ++idx) {
      Scalar prob = sigma[types[0]][space.action_of(idx, 0)];
      for (int i = 1; i < n && prob != 0; ++i)
        prob *= follower_play[i - 1][types[i]][space.action_of(idx, i)];
      if (prob == 0) continue;
      Scalar value = game.utility(0, types[0], idx);
      for (int i = 1; i < n; ++i) value -= commitment.payments.at(space, idx, i);
      total += type_prob * prob * value;
    }
  }
  return total;
}

using NormalFormGame = BasicNormalFormGame<Rational>;
using BayesianGame = BasicBayesianGame<Rational>;
using PaymentFunction = BasicPaymentFunction<Rational>;
using Commitment = BasicCommitment<Rational>;
using InducedGame = BasicInducedGame<Rational>;

}  // namespace commitpay

#endif  // COMMITPAY_GAME_HPP
