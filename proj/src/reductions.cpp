#include "commitpay/reductions.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace commitpay {
namespace {

void check_vertex_labels(const std::vector<std::string>& labels, const std::string& what,
                         std::vector<std::string>& violations) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty() || labels[i].find('|') != std::string::npos)
      violations.push_back(what + " label \"" + labels[i] + "\" is empty or contains '|'");
    for (std::size_t j = 0; j < i; ++j)
      if (labels[i] == labels[j]) violations.push_back(what + " label \"" + labels[i] + "\" repeats");
  }
}

std::string edge_label(const Graph& g, const std::pair<int, int>& e) {
  return g.vertices[e.first] + "/" + g.vertices[e.second];
}

// Calls `fn` with every subset of {0..n-1} of size `size`, stopping early
// when it returns true.
bool any_subset(int n, int size, const std::function<bool(const std::vector<int>&)>& fn) {
  if (size < 0 || size > n) return false;
  std::vector<int> pick(size);
  for (int i = 0; i < size; ++i) pick[i] = i;
  for (;;) {
    if (fn(pick)) return true;
    int i = size - 1;
    while (i >= 0 && pick[i] == n - size + i) --i;
    if (i < 0) return false;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

WitnessVerdict violation(std::string detail) { return {false, std::move(detail)}; }

}  // namespace

Graph Graph::make(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges) {
  std::vector<std::string> violations;
  check_vertex_labels(vertices, "vertex", violations);
  std::set<std::pair<int, int>> seen;
  const int n = static_cast<int>(vertices.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      violations.push_back("edge references an unknown vertex");
      continue;
    }
    if (u == v) {
      violations.push_back("self-loop on vertex \"" + vertices[u] + "\"");
      continue;
    }
    seen.insert({std::min(u, v), std::max(u, v)});
  }
  if (!violations.empty()) throw SchemaError(std::move(violations));
  return Graph{std::move(vertices), {seen.begin(), seen.end()}};
}

BipartiteGraph BipartiteGraph::make(std::vector<std::string> left, std::vector<std::string> right,
                                    std::vector<std::pair<int, int>> edges) {
  std::vector<std::string> violations;
  if (left.empty() && right.empty()) violations.push_back("bipartite graph has no vertices");
  check_vertex_labels(left, "left vertex", violations);
  check_vertex_labels(right, "right vertex", violations);
  std::set<std::pair<int, int>> seen;
  for (auto [l, r] : edges) {
    if (l < 0 || r < 0 || l >= static_cast<int>(left.size()) || r >= static_cast<int>(right.size()))
      violations.push_back("edge does not join a left vertex to a right vertex");
    else
      seen.insert({l, r});
  }
  if (!violations.empty()) throw SchemaError(std::move(violations));
  return BipartiteGraph{std::move(left), std::move(right), {seen.begin(), seen.end()}};
}

bool BipartiteGraph::adjacent(int l, int r) const {
  return std::binary_search(edges.begin(), edges.end(), std::pair<int, int>{l, r});
}

PricingInstance PricingInstance::make(int items, std::vector<VectorXq> values,
                                      VectorXq probabilities, std::optional<Rational> threshold) {
  std::vector<std::string> violations;
  if (items < 1) violations.push_back("pricing instance needs at least one item");
  if (values.empty()) violations.push_back("pricing instance needs at least one buyer type");
  if (static_cast<Index>(values.size()) != probabilities.size())
    violations.push_back("one probability per buyer type is required");
  else if (!is_distribution(probabilities))
    violations.push_back("buyer type probabilities do not form a distribution");
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t].size() != items) {
      violations.push_back("buyer type " + std::to_string(t + 1) + " lists " +
                           std::to_string(values[t].size()) + " values for " +
                           std::to_string(items) + " items");
      continue;
    }
    for (Index i = 0; i < items; ++i)
      if (values[t][i] < 0)
        violations.push_back("buyer type " + std::to_string(t + 1) + " has a negative value");
  }
  if (!violations.empty()) throw SchemaError(std::move(violations));
  return PricingInstance{items, std::move(values), std::move(probabilities), std::move(threshold)};
}

PricingInstance PricingInstance::uniform_budget(int items, const std::vector<Rational>& budgets,
                                                const std::vector<std::vector<int>>& wanted,
                                                VectorXq probabilities,
                                                std::optional<Rational> threshold) {
  if (budgets.size() != wanted.size())
    throw SchemaError("one wanted-item list per budget is required");
  std::vector<VectorXq> values;
  for (std::size_t t = 0; t < budgets.size(); ++t) {
    VectorXq v = VectorXq::Zero(items);
    for (int i : wanted[t]) {
      if (i < 0 || i >= items) throw SchemaError("wanted item index out of range");
      v[i] = budgets[t];
    }
    values.push_back(std::move(v));
  }
  return make(items, std::move(values), std::move(probabilities), std::move(threshold));
}

NormalFormGame reduce_bcbs(const BipartiteGraph& graph, int k) {
  if (k < 1) throw SchemaError("k must be a positive integer");
  const int nl = static_cast<int>(graph.left.size());
  const int nr = static_cast<int>(graph.right.size());
  std::vector<std::string> second, third;
  for (const auto& l : graph.left) second.push_back("C:" + l);
  for (const auto& r : graph.right) second.push_back("E:" + r);
  for (const auto& r : graph.right) third.push_back("C:" + r);
  for (const auto& l : graph.left) third.push_back("E:" + l);
  const int size = nl + nr;
  MatrixXq u = MatrixXq::Zero(size * size, 3);
  const Rational gain = k, loss = -k - 1;
  for (int a2 = 0; a2 < size; ++a2) {
    for (int a3 = 0; a3 < size; ++a3) {
      const Index idx = a2 * size + a3;
      const bool coop2 = a2 < nl, coop3 = a3 < nr;
      if (coop2 && coop3) {
        if (graph.adjacent(a2, a3)) u.row(idx).setOnes();
      } else if (!coop2 && coop3) {
        if (a2 - nl == a3) {  // player 2 exploits player 3's right vertex
          u(idx, 1) = gain;
          u(idx, 2) = loss;
        }
      } else if (coop2 && !coop3) {
        if (a3 - nr == a2) {
          u(idx, 1) = loss;
          u(idx, 2) = gain;
        }
      }
    }
  }
  return NormalFormGame({{"s"}, std::move(second), std::move(third)}, std::move(u));
}

NormalFormGame reduce_balanced_vertex_cover(const Graph& graph, std::optional<Rational> epsilon) {
  const int n = static_cast<int>(graph.vertices.size());
  if (n < 4 || n % 2 != 0)
    throw SchemaError("balanced vertex cover needs an even number of vertices, at least 4");
  Rational limit = Rational(1) / Rational(static_cast<long>(n) * n * n * n * n);
  const Rational eps = epsilon.value_or(limit);
  if (eps <= 0 || eps > limit)
    throw SchemaError("epsilon must lie in (0, " + to_string(limit) + "]");

  std::vector<std::string> first, second, third;
  for (const auto& v : graph.vertices) {
    first.push_back("a:" + v);
    second.push_back("b:" + v);
    third.push_back("c:" + v);
  }
  for (const auto& e : graph.edges) third.push_back("e:" + edge_label(graph, e));
  third.push_back("c0");
  const int m = static_cast<int>(graph.edges.size());
  const int c0 = n + m;
  const Rational high = Rational(n, n - 2);
  const ProfileSpace space({n, n, n + m + 1});
  MatrixXq u = MatrixXq::Zero(space.size(), 3);
  for (Index idx = 0; idx < space.size(); ++idx) {
    const Profile a = space.profile(idx);
    const int c = a[2];
    if (c == c0) {
      u(idx, 0) = eps;
      u(idx, 1) = eps;
      u(idx, 2) = 1;
    } else if (c < n) {
      u(idx, 2) = (a[0] != c && a[1] != c) ? high : Rational(0);
    } else {
      const auto& e = graph.edges[c - n];
      u(idx, 2) = (a[0] == e.first || a[0] == e.second) ? Rational(0) : high;
    }
  }
  return NormalFormGame({std::move(first), std::move(second), std::move(third)}, std::move(u));
}

BayesianGame reduce_vertex_cover_bayesian(const Graph& graph, int cover_size) {
  if (cover_size < 1) throw SchemaError("K must be a positive integer");
  if (graph.vertices.empty()) throw SchemaError("vertex cover reduction needs at least one vertex");
  const int n = static_cast<int>(graph.vertices.size());
  const int m = static_cast<int>(graph.edges.size());
  std::vector<std::string> leader, follower{"b0"}, types;
  for (const auto& v : graph.vertices) leader.push_back("a:" + v);
  for (const auto& e : graph.edges) follower.push_back("b:" + edge_label(graph, e));
  for (int t = 1; t <= cover_size; ++t) types.push_back("t" + std::to_string(t));
  const ProfileSpace space({n, m + 1});
  MatrixXq u1 = MatrixXq::Zero(space.size(), cover_size);
  MatrixXq u2 = MatrixXq::Zero(space.size(), 1);
  for (Index idx = 0; idx < space.size(); ++idx) {
    const int v = space.action_of(idx, 0);
    const int b = space.action_of(idx, 1);
    if (b == 0) {
      u1.row(idx).setOnes();
    } else {
      const auto& e = graph.edges[b - 1];
      u2(idx, 0) = (v == e.first || v == e.second) ? Rational(-cover_size) : Rational(1);
    }
  }
  VectorXq prior = VectorXq::Constant(cover_size, Rational(1, cover_size));
  return BayesianGame({std::move(leader), std::move(follower)}, {std::move(types), {"default"}},
                      {std::move(prior), VectorXq::Ones(1)}, {std::move(u1), std::move(u2)});
}

PricingGame reduce_item_pricing(const PricingInstance& instance) {
  Rational top = 0;
  for (const auto& v : instance.values)
    if (v.maxCoeff() > top) top = v.maxCoeff();
  const Rational z = top + 1;
  std::vector<std::string> follower{"t0"}, types;
  for (int i = 1; i <= instance.items; ++i) follower.push_back("t" + std::to_string(i));
  for (std::size_t t = 1; t <= instance.values.size(); ++t) types.push_back("v" + std::to_string(t));
  const int types_n = static_cast<int>(instance.values.size());
  MatrixXq u1 = MatrixXq::Zero(instance.items + 1, 1);
  MatrixXq u2 = MatrixXq::Zero(instance.items + 1, types_n);
  for (int i = 1; i <= instance.items; ++i) {
    u1(i, 0) = z;
    for (int t = 0; t < types_n; ++t) u2(i, t) = instance.values[t][i - 1] - z;
  }
  return {BayesianGame({{"s"}, std::move(follower)}, {{"default"}, std::move(types)},
                       {VectorXq::Ones(1), instance.probabilities}, {std::move(u1), std::move(u2)}),
          z};
}

Rational pricing_revenue(const PricingInstance& instance, const std::vector<Rational>& prices) {
  if (static_cast<int>(prices.size()) != instance.items)
    throw SchemaError("one price per item is required");
  Rational revenue = 0;
  for (std::size_t t = 0; t < instance.values.size(); ++t) {
    Rational surplus = 0, paid = 0;
    for (int i = 0; i < instance.items; ++i) {
      const Rational s = instance.values[t][i] - prices[i];
      if (s > surplus || (s == surplus && prices[i] > paid)) {
        surplus = s;
        paid = prices[i];
      }
    }
    revenue += instance.probabilities[t] * paid;
  }
  return revenue;
}

Rational best_pricing_revenue(const PricingInstance& instance,
                              const std::vector<Rational>& candidates) {
  if (candidates.empty()) throw SchemaError("no candidate prices");
  std::vector<std::size_t> pick(instance.items, 0);
  std::vector<Rational> prices(instance.items, candidates[0]);
  Rational best = pricing_revenue(instance, prices);
  for (;;) {
    int i = instance.items - 1;
    while (i >= 0 && pick[i] + 1 == candidates.size()) {
      pick[i] = 0;
      prices[i] = candidates[0];
      --i;
    }
    if (i < 0) return best;
    prices[i] = candidates[++pick[i]];
    best = std::max(best, pricing_revenue(instance, prices));
  }
}

bool has_biclique(const BipartiteGraph& graph, int k) {
  const int nl = static_cast<int>(graph.left.size());
  const int nr = static_cast<int>(graph.right.size());
  return any_subset(nl, k, [&](const std::vector<int>& ls) {
    int common = 0;
    for (int r = 0; r < nr; ++r)
      if (std::all_of(ls.begin(), ls.end(), [&](int l) { return graph.adjacent(l, r); })) ++common;
    return common >= k;
  });
}

bool is_vertex_cover(const Graph& graph, const std::vector<int>& cover) {
  return std::all_of(graph.edges.begin(), graph.edges.end(), [&](const auto& e) {
    return std::find(cover.begin(), cover.end(), e.first) != cover.end() ||
           std::find(cover.begin(), cover.end(), e.second) != cover.end();
  });
}

bool has_vertex_cover(const Graph& graph, int size) {
  const int n = static_cast<int>(graph.vertices.size());
  for (int s = 0; s <= std::min(size, n); ++s)
    if (any_subset(n, s, [&](const std::vector<int>& c) { return is_vertex_cover(graph, c); }))
      return true;
  return false;
}

WitnessVerdict verify_bcbs_witness(const BipartiteGraph& graph, int k, const SolveReport& report) {
  const auto game = reduce_bcbs(graph, k);
  if (!report.commitment || report.follower_play.size() != 2 || report.follower_play[0].empty() ||
      report.follower_play[1].empty())
    return violation("report lacks the commitment or the followers' play");
  const VectorXq& x = report.follower_play[0][0];
  const VectorXq& y = report.follower_play[1][0];
  Rational recomputed;
  try {
    recomputed = evaluate_leader(game, *report.commitment, {x, y});
  } catch (const SchemaError& e) {
    return violation(std::string("report does not fit the reduced game: ") + e.what());
  }
  if (recomputed != report.value)
    return violation("reported value " + to_string(report.value) + " but the play yields " +
                     to_string(recomputed));
  const int nl = static_cast<int>(graph.left.size());
  const int nr = static_cast<int>(graph.right.size());
  std::vector<int> ls, rs;
  bool cooperative_only = true;
  for (Index a = 0; a < x.size(); ++a)
    if (x[a] != 0) {
      if (a < nl) ls.push_back(static_cast<int>(a));
      else cooperative_only = false;
    }
  for (Index a = 0; a < y.size(); ++a)
    if (y[a] != 0) {
      if (a < nr) rs.push_back(static_cast<int>(a));
      else cooperative_only = false;
    }
  bool biclique = cooperative_only && static_cast<int>(ls.size()) >= k &&
                  static_cast<int>(rs.size()) >= k;
  for (int l : ls)
    for (int r : rs) biclique = biclique && graph.adjacent(l, r);
  const bool high = report.value >= 1;
  if (high != biclique)
    return violation(high ? "value reaches 1 but the supports are not a k-biclique"
                          : "supports form a k-biclique but the value is below 1");
  if (!biclique) return {true, "no biclique claimed"};
  std::string detail = "biclique ({";
  for (std::size_t i = 0; i < ls.size(); ++i) detail += (i ? "," : "") + graph.left[ls[i]];
  detail += "},{";
  for (std::size_t i = 0; i < rs.size(); ++i) detail += (i ? "," : "") + graph.right[rs[i]];
  return {true, detail + "})"};
}

WitnessVerdict verify_vertex_cover_witness(const Graph& graph, int cover_size,
                                           const SolveReport& report) {
  const auto game = reduce_vertex_cover_bayesian(graph, cover_size);
  if (!report.commitment || report.follower_play.size() != 1)
    return violation("report lacks the commitment or the follower's play");
  const auto* typed = std::get_if<TypedPure>(&report.commitment->strategy);
  if (!typed) return violation("expected one pure leader action per type");
  Rational recomputed;
  try {
    recomputed = evaluate_leader(game, *report.commitment, report.follower_play);
  } catch (const SchemaError& e) {
    return violation(std::string("report does not fit the reduced game: ") + e.what());
  }
  if (recomputed != report.value)
    return violation("reported value " + to_string(report.value) + " but the play yields " +
                     to_string(recomputed));
  const bool cover = is_vertex_cover(graph, typed->actions);
  const bool positive = report.value > 0;
  if (positive != cover)
    return violation(positive ? "positive value but the leader's actions are not a cover"
                              : "the leader's actions form a cover but the value is not positive");
  return {true, cover ? "leader actions form a cover" : "no cover claimed"};
}

WitnessVerdict verify_pricing_witness(const PricingInstance& instance, const SolveReport& report) {
  const auto reduced = reduce_item_pricing(instance);
  if (!report.commitment || report.follower_play.size() != 1)
    return violation("report lacks the commitment or the follower's play");
  const auto& payments = report.commitment->payments;
  if (payments.kind() != PaymentFunction::Kind::FollowerActionOnly ||
      payments.follower_action_values().size() != instance.items + 1)
    return violation("expected one payment per follower action");
  Rational recomputed;
  try {
    recomputed = evaluate_leader(reduced.game, *report.commitment, report.follower_play);
  } catch (const SchemaError& e) {
    return violation(std::string("report does not fit the reduced game: ") + e.what());
  }
  if (recomputed != report.value)
    return violation("reported value " + to_string(report.value) + " but the play yields " +
                     to_string(recomputed));
  std::vector<Rational> prices;
  for (int i = 1; i <= instance.items; ++i)
    prices.push_back(reduced.z - payments.follower_action_values()[i]);
  const Rational revenue = pricing_revenue(instance, prices);
  if (revenue != report.value)
    return violation("recovered prices earn " + to_string(revenue) + ", value is " +
                     to_string(report.value));
  std::string detail = "prices";
  for (const auto& p : prices) detail += " " + to_string(p);
  return {true, detail};
}

}  // namespace commitpay
