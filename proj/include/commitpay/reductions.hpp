#ifndef COMMITPAY_REDUCTIONS_HPP
#define COMMITPAY_REDUCTIONS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commitpay/game.hpp"
#include "commitpay/report.hpp"

namespace commitpay {

/// Simple undirected graph; edges are stored once with the smaller index first.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;

  /// Validates labels and edges, drops duplicate edges, rejects self-loops.
  static Graph make(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges);
};

/// Bipartite graph; edges are (left index, right index).
struct BipartiteGraph {
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::vector<std::pair<int, int>> edges;

  static BipartiteGraph make(std::vector<std::string> left, std::vector<std::string> right,
                             std::vector<std::pair<int, int>> edges);
  bool adjacent(int l, int r) const;
};

struct PricingInstance {
  int items = 0;
  /// One value vector per buyer type.
  std::vector<VectorXq> values;
  VectorXq probabilities;
  std::optional<Rational> threshold;

  static PricingInstance make(int items, std::vector<VectorXq> values, VectorXq probabilities,
                              std::optional<Rational> threshold = std::nullopt);
  /// Every buyer type has a budget and wants a subset of the items, valuing
  /// each wanted item at exactly its budget.
  static PricingInstance uniform_budget(int items, const std::vector<Rational>& budgets,
                                        const std::vector<std::vector<int>>& wanted,
                                        VectorXq probabilities,
                                        std::optional<Rational> threshold = std::nullopt);
};

/// Single-action leader, two followers who can cooperate on an edge or
/// exploit the other's vertex. k must be a positive integer.
NormalFormGame reduce_bcbs(const BipartiteGraph& graph, int k);

/// Three players; players 1 and 2 both get epsilon when player 3 plays the
/// default action. Defaults epsilon to 1/|V|^5.
NormalFormGame reduce_balanced_vertex_cover(const Graph& graph,
                                            std::optional<Rational> epsilon = std::nullopt);

/// K equiprobable leader types choosing vertices; the follower can flag an
/// edge or play the default action the leader wants.
BayesianGame reduce_vertex_cover_bayesian(const Graph& graph, int cover_size);

struct PricingGame {
  BayesianGame game;
  /// Offset between payments and prices: price = z - payment.
  Rational z;
};
PricingGame reduce_item_pricing(const PricingInstance& instance);

/// Revenue of posted prices. Each buyer type takes the item with the largest
/// nonnegative surplus, preferring the higher price, then the lower item
/// index; a zero-surplus purchase at price 0 is the same as not buying.
Rational pricing_revenue(const PricingInstance& instance, const std::vector<Rational>& prices);
/// Best revenue over all price vectors with entries from `candidates`.
Rational best_pricing_revenue(const PricingInstance& instance,
                              const std::vector<Rational>& candidates);

// Combinatorial ground truth by exhaustive search.
bool has_biclique(const BipartiteGraph& graph, int k);
bool has_vertex_cover(const Graph& graph, int size);
bool is_vertex_cover(const Graph& graph, const std::vector<int>& cover);

enum class ReductionKind { Bcbs, BalancedVertexCover, VertexCoverBayesian, ItemPricing };

struct WitnessVerdict {
  bool consistent = false;
  std::string detail;
};

/// Value >= 1 iff the followers' supports are C-actions forming a k-biclique.
WitnessVerdict verify_bcbs_witness(const BipartiteGraph& graph, int k, const SolveReport& report);
/// Value > 0 iff the per-type leader actions form a cover of size <= K.
WitnessVerdict verify_vertex_cover_witness(const Graph& graph, int cover_size,
                                           const SolveReport& report);
/// Value equals the revenue of the prices read off the payments.
WitnessVerdict verify_pricing_witness(const PricingInstance& instance, const SolveReport& report);

}  // namespace commitpay

#endif  // COMMITPAY_REDUCTIONS_HPP
