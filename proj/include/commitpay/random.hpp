#ifndef COMMITPAY_RANDOM_HPP
#define COMMITPAY_RANDOM_HPP

#include <random>
#include <string>
#include <vector>

#include "commitpay/game.hpp"

namespace commitpay {

/// Game with `action_counts[p]` actions per player and integer utilities drawn
/// uniformly from [-range, range]. Actions are labeled "a0", "a1", ...
inline NormalFormGame random_game(const std::vector<int>& action_counts, int range,
                                  std::mt19937_64& rng) {
  std::vector<std::vector<std::string>> labels;
  for (int count : action_counts) {
    std::vector<std::string> set;
    for (int a = 0; a < count; ++a) set.push_back("a" + std::to_string(a));
    labels.push_back(std::move(set));
  }
  const ProfileSpace space(action_counts);
  std::uniform_int_distribution<int> draw(-range, range);
  MatrixXq u(space.size(), static_cast<Index>(action_counts.size()));
  for (Index i = 0; i < u.rows(); ++i)
    for (Index p = 0; p < u.cols(); ++p) u(i, p) = draw(rng);
  return NormalFormGame(std::move(labels), std::move(u));
}

/// Random prior over `count` types with small integer weights (all positive).
inline VectorXq random_prior(int count, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> draw(1, 4);
  VectorXq weights(count);
  for (int t = 0; t < count; ++t) weights[t] = draw(rng);
  return weights / weights.sum();
}

/// Bayesian game with integer utilities in [-range, range] for every type.
inline BayesianGame random_bayesian_game(const std::vector<int>& action_counts,
                                         const std::vector<int>& type_counts, int range,
                                         std::mt19937_64& rng) {
  std::vector<std::vector<std::string>> actions, types;
  std::vector<VectorXq> priors;
  for (std::size_t p = 0; p < action_counts.size(); ++p) {
    std::vector<std::string> set, kinds;
    for (int a = 0; a < action_counts[p]; ++a) set.push_back("a" + std::to_string(a));
    for (int t = 0; t < type_counts[p]; ++t) kinds.push_back("t" + std::to_string(t));
    actions.push_back(std::move(set));
    types.push_back(std::move(kinds));
    priors.push_back(random_prior(type_counts[p], rng));
  }
  const ProfileSpace space(action_counts);
  std::uniform_int_distribution<int> draw(-range, range);
  std::vector<MatrixXq> utilities;
  for (std::size_t p = 0; p < action_counts.size(); ++p) {
    MatrixXq u(space.size(), type_counts[p]);
    for (Index i = 0; i < u.rows(); ++i)
      for (Index t = 0; t < u.cols(); ++t) u(i, t) = draw(rng);
    utilities.push_back(std::move(u));
  }
  return BayesianGame(std::move(actions), std::move(types), std::move(priors), std::move(utilities));
}

}  // namespace commitpay

#endif  // COMMITPAY_RANDOM_HPP
