#include "commitpay/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace commitpay {
namespace {

std::string join_profile(const std::vector<std::vector<std::string>>& actions,
                         const Profile& profile) {
  std::string key;
  for (std::size_t p = 0; p < profile.size(); ++p) {
    if (p) key += '|';
    key += actions[p][profile[p]];
  }
  return key;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto bar = key.find('|', start);
    out.push_back(key.substr(start, bar - start));
    if (bar == std::string::npos) return out;
    start = bar + 1;
  }
}

// Collects problems while walking a document so all of them can be reported.
class Collector {
 public:
  void add(std::string message) { violations_.push_back(std::move(message)); }
  bool ok() const { return violations_.empty(); }
  void throw_if_any() {
    if (!violations_.empty()) throw SchemaError(std::move(violations_));
  }

  std::optional<Rational> rational(const Json& value, const std::string& where) {
    try {
      return parse_rational_json(value, where);
    } catch (const SchemaError& e) {
      add(e.what());
      return std::nullopt;
    }
  }

  std::vector<std::vector<std::string>> label_lists(const Json& doc, const std::string& key,
                                                    int expected) {
    std::vector<std::vector<std::string>> out;
    if (!doc.contains(key)) {
      add("missing field \"" + key + "\"");
      return out;
    }
    const Json& lists = doc.at(key);
    if (!lists.is_array() || static_cast<int>(lists.size()) != expected) {
      add("\"" + key + "\" must be an array with one list per player");
      return out;
    }
    for (std::size_t p = 0; p < lists.size(); ++p) {
      std::vector<std::string> labels;
      if (!lists[p].is_array()) {
        add("\"" + key + "\"[" + std::to_string(p) + "] must be an array of strings");
      } else {
        for (const auto& l : lists[p]) {
          if (l.is_string()) labels.push_back(l.get<std::string>());
          else add("\"" + key + "\"[" + std::to_string(p) + "] contains a non-string label");
        }
      }
      out.push_back(std::move(labels));
    }
    return out;
  }

 private:
  std::vector<std::string> violations_;
};

int find_index(const std::vector<std::string>& labels, const std::string& label) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

// Maps every key of `utilities` to a profile index; unknown keys are reported.
std::map<Index, const Json*> profile_entries(const Json& utilities, const ProfileSpace& space,
                                             const std::vector<std::vector<std::string>>& actions,
                                             Collector& errors) {
  std::map<Index, const Json*> out;
  for (auto it = utilities.begin(); it != utilities.end(); ++it) {
    const auto parts = split_key(it.key());
    if (static_cast<int>(parts.size()) != space.players()) {
      errors.add("utility key \"" + it.key() + "\" does not name one action per player");
      continue;
    }
    Profile profile(parts.size());
    bool known = true;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      profile[p] = find_index(actions[p], parts[p]);
      if (profile[p] < 0) {
        errors.add("utility key \"" + it.key() + "\": player " + std::to_string(p + 1) +
                   " has no action \"" + parts[p] + "\"");
        known = false;
      }
    }
    if (known) out[space.index(profile)] = &it.value();
  }
  int missing = 0;
  for (Index idx = 0; idx < space.size(); ++idx) {
    if (out.count(idx)) continue;
    if (++missing <= 10)
      errors.add("missing utility entry for profile \"" + join_profile(actions, space.profile(idx)) +
                 "\"");
  }
  if (missing > 10) errors.add(std::to_string(missing - 10) + " further profiles are missing");
  return out;
}

Json mixture_json(const std::vector<std::string>& labels, const VectorXq& mix) {
  Json out = Json::object();
  for (Index a = 0; a < mix.size(); ++a) out[labels[a]] = rational_json(mix[a]);
  return out;
}

VectorXq mixture_from_json(const Json& doc, const std::vector<std::string>& labels,
                           const std::string& where) {
  if (!doc.is_object()) throw SchemaError(where + " must be an object of probabilities");
  VectorXq out = VectorXq::Zero(static_cast<Index>(labels.size()));
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const int a = find_index(labels, it.key());
    if (a < 0) throw SchemaError(where + " names unknown action \"" + it.key() + "\"");
    out[a] = parse_rational_json(it.value(), where + "." + it.key());
  }
  return out;
}

const Json& field(const Json& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key))
    throw SchemaError(where + " is missing field \"" + key + "\"");
  return doc.at(key);
}

std::string string_field(const Json& doc, const std::string& key, const std::string& where) {
  const Json& v = field(doc, key, where);
  if (!v.is_string()) throw SchemaError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

// `actions[0]` belongs to the committing player, the rest to the players who
// may receive payments.
Json commitment_to_json(const Commitment& c, const std::vector<std::vector<std::string>>& actions,
                        const std::vector<std::string>& committer_types) {
  Json strategy;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PureAction>) {
          strategy = {{"kind", "pure"}, {"action", actions[0][s.action]}};
        } else if constexpr (std::is_same_v<S, Mixture<Rational>>) {
          strategy = {{"kind", "mixture"}, {"probabilities", mixture_json(actions[0], s.probabilities)}};
        } else if constexpr (std::is_same_v<S, TypedPure>) {
          Json m = Json::object();
          for (std::size_t t = 0; t < s.actions.size(); ++t)
            m[committer_types[t]] = actions[0][s.actions[t]];
          strategy = {{"kind", "typed-pure"}, {"actions", m}};
        } else {
          Json m = Json::object();
          for (std::size_t t = 0; t < s.probabilities.size(); ++t)
            m[committer_types[t]] = mixture_json(actions[0], s.probabilities[t]);
          strategy = {{"kind", "typed-mixture"}, {"probabilities", m}};
        }
      },
      c.strategy);

  Json payments;
  switch (c.payments.kind()) {
    case PaymentFunction::Kind::FollowerActionOnly:
      payments = {{"kind", "follower-action"},
                  {"values", mixture_json(actions[1], c.payments.follower_action_values())}};
      break;
    case PaymentFunction::Kind::RecommendationConditional: {
      Json per = Json::array();
      const auto& values = c.payments.recommendation_values();
      for (std::size_t i = 0; i < values.size(); ++i) {
        Json m = Json::object();
        for (std::size_t a = 0; a < values[i].size(); ++a)
          m[actions[i + 1][a]] = values[i][a] ? rational_json(*values[i][a]) : Json(nullptr);
        per.push_back(std::move(m));
      }
      payments = {{"kind", "recommendation"}, {"values", per}};
      break;
    }
    case PaymentFunction::Kind::OutcomeConditional: {
      const ProfileSpace space(detail::counts_of(actions));
      const auto& values = c.payments.outcome_values();
      Json m = Json::object();
      for (Index idx = 0; idx < values.rows(); ++idx) {
        if (values.row(idx).isZero()) continue;
        Json row = Json::array();
        for (Index i = 0; i < values.cols(); ++i) row.push_back(rational_json(values(idx, i)));
        m[join_profile(actions, space.profile(idx))] = std::move(row);
      }
      payments = {{"kind", "outcome"}, {"values", m}};
      break;
    }
  }
  return {{"strategy", strategy}, {"payments", payments}};
}

Commitment commitment_from_json(const Json& doc, const std::vector<std::vector<std::string>>& actions,
                                const std::vector<std::string>& committer_types) {
  const std::string where = "commitment";
  const Json& s = field(doc, "strategy", where);
  const std::string kind = string_field(s, "kind", "strategy");
  LeaderStrategy<Rational> strategy;
  auto action_of = [&](const Json& v, const std::string& w) {
    if (!v.is_string()) throw SchemaError(w + " must be an action label");
    const int a = find_index(actions[0], v.get<std::string>());
    if (a < 0) throw SchemaError(w + " names unknown action \"" + v.get<std::string>() + "\"");
    return a;
  };
  auto per_type = [&](const Json& m, const std::string& w) {
    if (!m.is_object()) throw SchemaError(w + " must map every type");
    for (auto it = m.begin(); it != m.end(); ++it)
      if (find_index(committer_types, it.key()) < 0)
        throw SchemaError(w + " names unknown type \"" + it.key() + "\"");
    for (const auto& t : committer_types)
      if (!m.contains(t)) throw SchemaError(w + " does not cover type \"" + t + "\"");
  };
  if (kind == "pure") {
    strategy = PureAction{action_of(field(s, "action", "strategy"), "strategy.action")};
  } else if (kind == "mixture") {
    strategy = Mixture<Rational>{
        mixture_from_json(field(s, "probabilities", "strategy"), actions[0], "strategy.probabilities")};
  } else if (kind == "typed-pure") {
    const Json& m = field(s, "actions", "strategy");
    per_type(m, "strategy.actions");
    TypedPure typed;
    for (const auto& t : committer_types) typed.actions.push_back(action_of(m.at(t), "strategy.actions." + t));
    strategy = typed;
  } else if (kind == "typed-mixture") {
    const Json& m = field(s, "probabilities", "strategy");
    per_type(m, "strategy.probabilities");
    TypedMixture<Rational> typed;
    for (const auto& t : committer_types)
      typed.probabilities.push_back(mixture_from_json(m.at(t), actions[0], "strategy.probabilities." + t));
    strategy = typed;
  } else {
    throw SchemaError("unknown strategy kind \"" + kind + "\"");
  }

  const Json& p = field(doc, "payments", where);
  const std::string pkind = string_field(p, "kind", "payments");
  const Json& values = field(p, "values", "payments");
  if (pkind == "follower-action") {
    return {strategy, PaymentFunction::follower_action_only(
                          mixture_from_json(values, actions[1], "payments.values"))};
  }
  if (pkind == "recommendation") {
    if (!values.is_array() || values.size() + 1 != actions.size())
      throw SchemaError("payments.values must list every follower");
    std::vector<std::vector<std::optional<Rational>>> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::vector<std::optional<Rational>> per(actions[i + 1].size());
      for (auto it = values[i].begin(); it != values[i].end(); ++it) {
        const int a = find_index(actions[i + 1], it.key());
        if (a < 0) throw SchemaError("payments name unknown action \"" + it.key() + "\"");
        if (!it.value().is_null()) per[a] = parse_rational_json(it.value(), "payments." + it.key());
      }
      out.push_back(std::move(per));
    }
    return {strategy, PaymentFunction::recommendation_conditional(std::move(out))};
  }
  if (pkind == "outcome") {
    const ProfileSpace space(detail::counts_of(actions));
    MatrixXq m = MatrixXq::Zero(space.size(), space.players() - 1);
    for (auto it = values.begin(); it != values.end(); ++it) {
      const auto parts = split_key(it.key());
      if (parts.size() != actions.size()) throw SchemaError("bad payment key \"" + it.key() + "\"");
      Profile profile;
      for (std::size_t q = 0; q < parts.size(); ++q) {
        profile.push_back(find_index(actions[q], parts[q]));
        if (profile.back() < 0) throw SchemaError("bad payment key \"" + it.key() + "\"");
      }
      if (!it.value().is_array() || static_cast<Index>(it.value().size()) != m.cols())
        throw SchemaError("payment entry \"" + it.key() + "\" needs one amount per follower");
      for (Index i = 0; i < m.cols(); ++i)
        m(space.index(profile), i) = parse_rational_json(it.value()[i], "payments." + it.key());
    }
    return {strategy, PaymentFunction::outcome_conditional(std::move(m))};
  }
  throw SchemaError("unknown payment kind \"" + pkind + "\"");
}

Json distribution_json(const std::vector<std::vector<std::string>>& actions, const VectorXq& d) {
  const ProfileSpace space(detail::counts_of(actions));
  Json out = Json::object();
  for (Index idx = 0; idx < d.size(); ++idx)
    if (d[idx] != 0) out[join_profile(actions, space.profile(idx))] = rational_json(d[idx]);
  return out;
}

VectorXq distribution_from_json(const Json& doc, const std::vector<std::vector<std::string>>& actions,
                                const std::string& where) {
  const ProfileSpace space(detail::counts_of(actions));
  if (!doc.is_object()) throw SchemaError(where + " must map profiles to probabilities");
  VectorXq out = VectorXq::Zero(space.size());
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto parts = split_key(it.key());
    if (parts.size() != actions.size()) throw SchemaError(where + ": bad profile \"" + it.key() + "\"");
    Profile profile;
    for (std::size_t q = 0; q < parts.size(); ++q) {
      profile.push_back(find_index(actions[q], parts[q]));
      if (profile.back() < 0) throw SchemaError(where + ": bad profile \"" + it.key() + "\"");
    }
    out[space.index(profile)] = parse_rational_json(it.value(), where + "." + it.key());
  }
  return out;
}

Profile profile_from_key(const std::string& key, const std::vector<std::vector<std::string>>& actions) {
  const auto parts = split_key(key);
  if (parts.size() != actions.size()) throw SchemaError("bad profile \"" + key + "\"");
  Profile out;
  for (std::size_t q = 0; q < parts.size(); ++q) {
    out.push_back(find_index(actions[q], parts[q]));
    if (out.back() < 0) throw SchemaError("bad profile \"" + key + "\"");
  }
  return out;
}

std::vector<std::pair<int, int>> adjacency_edges(const Json& doc, const std::vector<std::string>& from,
                                                 const std::vector<std::string>& to,
                                                 Collector& errors) {
  std::vector<std::pair<int, int>> edges;
  if (!doc.contains("adjacency")) return edges;
  const Json& adj = doc.at("adjacency");
  if (!adj.is_object()) {
    errors.add("\"adjacency\" must map vertices to neighbour lists");
    return edges;
  }
  for (auto it = adj.begin(); it != adj.end(); ++it) {
    const int u = find_index(from, it.key());
    if (u < 0) {
      errors.add("adjacency names unknown vertex \"" + it.key() + "\"");
      continue;
    }
    if (!it.value().is_array()) {
      errors.add("neighbours of \"" + it.key() + "\" must be an array");
      continue;
    }
    for (const auto& w : it.value()) {
      const int v = w.is_string() ? find_index(to, w.get<std::string>()) : -1;
      if (v < 0) errors.add("\"" + it.key() + "\" lists an unknown neighbour");
      else edges.emplace_back(u, v);
    }
  }
  return edges;
}

std::vector<std::string> string_list(const Json& doc, const std::string& key, Collector& errors) {
  std::vector<std::string> out;
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    errors.add("\"" + key + "\" must be an array of labels");
    return out;
  }
  for (const auto& v : doc.at(key)) {
    if (v.is_string()) out.push_back(v.get<std::string>());
    else errors.add("\"" + key + "\" contains a non-string label");
  }
  return out;
}

}  // namespace

Rational parse_rational_json(const Json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (!value.is_string())
    throw SchemaError(where + ": expected a rational string such as \"3/4\"");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw SchemaError(where + ": \"" + value.get<std::string>() + "\" is not a rational literal");
  }
}

Json rational_json(const Rational& value) { return to_string(value); }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

std::string canonical_text(const Json& document) { return document.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write \"" + path + "\"");
  out << text;
}

AnyGame parse_game(const Json& doc) {
  Collector errors;
  if (!doc.is_object()) throw SchemaError("game document must be a JSON object");
  int n = 0;
  if (!doc.contains("players") || !doc.at("players").is_number_integer() ||
      doc.at("players").get<int>() < 1) {
    errors.add("\"players\" must be a positive integer");
    errors.throw_if_any();
  }
  n = doc.at("players").get<int>();
  const auto actions = errors.label_lists(doc, "actions", n);
  const bool bayesian = doc.contains("types") || doc.contains("prior");
  std::vector<std::vector<std::string>> types;
  if (bayesian) types = errors.label_lists(doc, "types", n);
  if (!doc.contains("utilities") || !doc.at("utilities").is_object())
    errors.add("\"utilities\" must be an object keyed by action profiles");
  errors.throw_if_any();
  for (const auto& set : actions)
    if (set.empty()) errors.add("every player needs at least one action");
  errors.throw_if_any();

  const ProfileSpace space(detail::counts_of(actions));
  const auto entries = profile_entries(doc.at("utilities"), space, actions, errors);

  if (!bayesian) {
    MatrixXq u = MatrixXq::Zero(space.size(), n);
    for (const auto& [idx, value] : entries) {
      const std::string where = "utilities[\"" + join_profile(actions, space.profile(idx)) + "\"]";
      if (!value->is_array() || static_cast<int>(value->size()) != n) {
        errors.add(where + " must list " + std::to_string(n) + " utilities");
        continue;
      }
      for (int p = 0; p < n; ++p)
        if (auto r = errors.rational((*value)[p], where + "[" + std::to_string(p) + "]")) u(idx, p) = *r;
    }
    errors.throw_if_any();
    return NormalFormGame(actions, std::move(u));
  }

  std::vector<VectorXq> priors;
  if (!doc.contains("prior") || !doc.at("prior").is_array() ||
      static_cast<int>(doc.at("prior").size()) != n) {
    errors.add("\"prior\" must hold one distribution per player");
  } else {
    for (int p = 0; p < n; ++p) {
      const Json& list = doc.at("prior")[p];
      VectorXq prior = VectorXq::Zero(list.is_array() ? static_cast<Index>(list.size()) : 0);
      if (!list.is_array()) errors.add("prior of player " + std::to_string(p + 1) + " must be an array");
      for (Index t = 0; t < prior.size(); ++t)
        if (auto r = errors.rational(list[t], "prior[" + std::to_string(p) + "]")) prior[t] = *r;
      priors.push_back(std::move(prior));
    }
  }
  std::vector<MatrixXq> utilities;
  for (int p = 0; p < n; ++p)
    utilities.push_back(MatrixXq::Zero(space.size(), static_cast<Index>(types[p].size())));
  for (const auto& [idx, value] : entries) {
    const std::string where = "utilities[\"" + join_profile(actions, space.profile(idx)) + "\"]";
    if (!value->is_array() || static_cast<int>(value->size()) != n) {
      errors.add(where + " must hold one type map per player");
      continue;
    }
    for (int p = 0; p < n; ++p) {
      const Json& per_type = (*value)[p];
      const std::string w = where + "[" + std::to_string(p) + "]";
      if (!per_type.is_object()) {
        errors.add(w + " must map type labels to utilities");
        continue;
      }
      for (std::size_t t = 0; t < types[p].size(); ++t) {
        if (!per_type.contains(types[p][t])) {
          errors.add(w + " is missing type \"" + types[p][t] + "\"");
          continue;
        }
        if (auto r = errors.rational(per_type.at(types[p][t]), w + "." + types[p][t]))
          utilities[p](idx, static_cast<Index>(t)) = *r;
      }
      for (auto it = per_type.begin(); it != per_type.end(); ++it)
        if (find_index(types[p], it.key()) < 0) errors.add(w + " names unknown type \"" + it.key() + "\"");
    }
  }
  errors.throw_if_any();
  return BayesianGame(actions, types, std::move(priors), std::move(utilities));
}

Json game_to_json(const NormalFormGame& game) {
  const auto& space = game.profiles();
  Json utilities = Json::object();
  for (Index idx = 0; idx < space.size(); ++idx) {
    Json row = Json::array();
    for (int p = 0; p < game.players(); ++p) row.push_back(rational_json(game.utility(idx, p)));
    utilities[join_profile(game.action_labels(), space.profile(idx))] = std::move(row);
  }
  return {{"players", game.players()}, {"actions", game.action_labels()}, {"utilities", utilities}};
}

Json game_to_json(const BayesianGame& game) {
  const auto& space = game.profiles();
  Json utilities = Json::object();
  for (Index idx = 0; idx < space.size(); ++idx) {
    Json row = Json::array();
    for (int p = 0; p < game.players(); ++p) {
      Json per = Json::object();
      for (int t = 0; t < game.type_count(p); ++t)
        per[game.types(p)[t]] = rational_json(game.utility(p, t, idx));
      row.push_back(std::move(per));
    }
    utilities[join_profile(game.action_labels(), space.profile(idx))] = std::move(row);
  }
  Json prior = Json::array();
  for (int p = 0; p < game.players(); ++p) {
    Json list = Json::array();
    for (Index t = 0; t < game.prior(p).size(); ++t) list.push_back(rational_json(game.prior(p)[t]));
    prior.push_back(std::move(list));
  }
  return {{"players", game.players()},
          {"actions", game.action_labels()},
          {"types", game.type_labels()},
          {"prior", prior},
          {"utilities", utilities}};
}

Json game_to_json(const AnyGame& game) {
  return std::visit([](const auto& g) { return game_to_json(g); }, game);
}

NormalFormGame as_normal_form(const AnyGame& game) {
  if (const auto* g = std::get_if<NormalFormGame>(&game)) return *g;
  const auto& b = std::get<BayesianGame>(game);
  for (int p = 0; p < b.players(); ++p)
    if (b.type_count(p) != 1)
      throw SchemaError("this setting needs a normal-form game; player " + std::to_string(p + 1) +
                        " has several types");
  return b.type_slice(std::vector<int>(b.players(), 0));
}

BayesianGame as_bayesian(const AnyGame& game) {
  if (const auto* b = std::get_if<BayesianGame>(&game)) return *b;
  return as_bayesian(std::get<NormalFormGame>(game));
}

int parse_positive_int(const Json& doc, const std::string& key) {
  if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_number_integer() ||
      doc.at(key).get<long long>() < 1)
    throw SchemaError("\"" + key + "\" must be a positive integer");
  return doc.at(key).get<int>();
}

Graph parse_graph(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("graph document must be a JSON object");
  Collector errors;
  auto vertices = string_list(doc, "vertices", errors);
  auto edges = adjacency_edges(doc, vertices, vertices, errors);
  errors.throw_if_any();
  return Graph::make(std::move(vertices), std::move(edges));
}

BipartiteGraph parse_bipartite_graph(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("graph document must be a JSON object");
  Collector errors;
  auto left = string_list(doc, "left", errors);
  auto right = string_list(doc, "right", errors);
  auto edges = adjacency_edges(doc, left, right, errors);
  errors.throw_if_any();
  return BipartiteGraph::make(std::move(left), std::move(right), std::move(edges));
}

Json graph_to_json(const Graph& graph) {
  Json adj = Json::object();
  for (const auto& [u, v] : graph.edges) adj[graph.vertices[u]].push_back(graph.vertices[v]);
  return {{"vertices", graph.vertices}, {"adjacency", adj}};
}

Json bipartite_graph_to_json(const BipartiteGraph& graph) {
  Json adj = Json::object();
  for (const auto& [l, r] : graph.edges) adj[graph.left[l]].push_back(graph.right[r]);
  return {{"left", graph.left}, {"right", graph.right}, {"adjacency", adj}};
}

PricingInstance parse_pricing(const Json& doc) {
  const int items = parse_positive_int(doc, "items");
  const Json& types = field(doc, "types", "pricing instance");
  if (!types.is_array() || types.empty()) throw SchemaError("\"types\" must be a nonempty array");
  std::optional<Rational> threshold;
  if (doc.contains("threshold")) threshold = parse_rational_json(doc.at("threshold"), "threshold");
  VectorXq probabilities(static_cast<Index>(types.size()));
  const bool budgets = types[0].is_object() && types[0].contains("budget");
  std::vector<VectorXq> values;
  std::vector<Rational> budget_list;
  std::vector<std::vector<int>> wanted;
  for (std::size_t t = 0; t < types.size(); ++t) {
    const std::string where = "types[" + std::to_string(t) + "]";
    probabilities[static_cast<Index>(t)] =
        parse_rational_json(field(types[t], "probability", where), where + ".probability");
    if (budgets) {
      budget_list.push_back(parse_rational_json(field(types[t], "budget", where), where + ".budget"));
      std::vector<int> items_wanted;
      const Json& w = field(types[t], "wants", where);
      if (!w.is_array()) throw SchemaError(where + ".wants must list item numbers");
      for (const auto& i : w) {
        if (!i.is_number_integer()) throw SchemaError(where + ".wants must list item numbers");
        items_wanted.push_back(i.get<int>() - 1);
      }
      wanted.push_back(std::move(items_wanted));
    } else {
      const Json& v = field(types[t], "values", where);
      if (!v.is_array()) throw SchemaError(where + ".values must be an array");
      VectorXq vec(static_cast<Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i)
        vec[static_cast<Index>(i)] = parse_rational_json(v[i], where + ".values");
      values.push_back(std::move(vec));
    }
  }
  if (budgets)
    return PricingInstance::uniform_budget(items, budget_list, wanted, std::move(probabilities),
                                           std::move(threshold));
  return PricingInstance::make(items, std::move(values), std::move(probabilities), std::move(threshold));
}

Json pricing_to_json(const PricingInstance& instance) {
  Json types = Json::array();
  for (std::size_t t = 0; t < instance.values.size(); ++t) {
    Json v = Json::array();
    for (Index i = 0; i < instance.values[t].size(); ++i) v.push_back(rational_json(instance.values[t][i]));
    types.push_back({{"values", v}, {"probability", rational_json(instance.probabilities[t])}});
  }
  Json out = {{"items", instance.items}, {"types", types}};
  if (instance.threshold) out["threshold"] = rational_json(*instance.threshold);
  return out;
}

LabelSet LabelSet::of(const NormalFormGame& game) {
  return {game.action_labels(),
          std::vector<std::vector<std::string>>(game.players(), std::vector<std::string>{"default"})};
}

LabelSet LabelSet::of(const BayesianGame& game) { return {game.action_labels(), game.type_labels()}; }

LabelSet LabelSet::of(const AnyGame& game) {
  return std::visit([](const auto& g) { return LabelSet::of(g); }, game);
}

Json report_to_json(const SolveReport& report, const LabelSet& labels) {
  Json out = {{"setting", report.setting},
              {"value", rational_json(report.value)},
              {"bound", report.bound == Bound::Lower ? "lower" : "exact"}};
  if (report.commitment)
    out["commitment"] = commitment_to_json(*report.commitment, labels.actions, labels.types[0]);
  if (report.second_stage) {
    std::vector<std::vector<std::string>> later(labels.actions.begin() + 1, labels.actions.end());
    out["second_stage"] = commitment_to_json(*report.second_stage, later, labels.types[1]);
  }
  if (report.signaling) {
    const auto& s = *report.signaling;
    Json sig = {{"distribution", distribution_json(labels.actions, s.distribution)}};
    if (!s.type_distributions.empty()) {
      Json per = Json::object();
      for (std::size_t t = 0; t < s.type_distributions.size(); ++t)
        per[labels.types[0][t]] = distribution_json(labels.actions, s.type_distributions[t]);
      sig["type_distributions"] = per;
    }
    Json expected = Json::array(), payments = Json::array();
    for (std::size_t i = 0; i < s.payments.size(); ++i) {
      Json e = Json::object(), p = Json::object();
      for (std::size_t a = 0; a < s.payments[i].size(); ++a) {
        const auto& label = labels.actions[i + 1][a];
        if (i < s.expected_payments.size()) e[label] = rational_json(s.expected_payments[i][a]);
        p[label] = s.payments[i][a] ? rational_json(*s.payments[i][a]) : Json(nullptr);
      }
      expected.push_back(std::move(e));
      payments.push_back(std::move(p));
    }
    sig["expected_payments"] = expected;
    sig["payments"] = payments;
    out["signaling"] = sig;
  }
  if (report.sequential) {
    const auto& s = *report.sequential;
    Json triggers = Json::array();
    for (const auto& t : s.triggers) triggers.push_back(join_profile(labels.actions, t));
    out["sequential"] = {{"target", join_profile(labels.actions, s.target)},
                         {"pay_1_to_2", rational_json(s.pay_1_to_2)},
                         {"pay_1_to_3", rational_json(s.pay_1_to_3)},
                         {"pay_2_to_3", rational_json(s.pay_2_to_3)},
                         {"big_m", rational_json(s.big_m)},
                         {"triggers", triggers}};
  }
  Json play = Json::array();
  for (std::size_t i = 0; i < report.follower_play.size(); ++i) {
    Json per = Json::object();
    for (std::size_t t = 0; t < report.follower_play[i].size(); ++t)
      per[labels.types[i + 1][t]] = mixture_json(labels.actions[i + 1], report.follower_play[i][t]);
    play.push_back(std::move(per));
  }
  out["follower_play"] = play;
  Json cert = Json::array();
  for (const auto& e : report.certificate)
    cert.push_back({{"constraint", e.constraint}, {"slack", rational_json(e.slack)}});
  out["certificate"] = cert;
  if (!report.notes.empty()) out["notes"] = report.notes;
  return out;
}

SolveReport report_from_json(const Json& doc, const LabelSet& labels) {
  if (!doc.is_object()) throw SchemaError("report must be a JSON object");
  SolveReport report;
  report.setting = string_field(doc, "setting", "report");
  report.value = parse_rational_json(field(doc, "value", "report"), "value");
  if (doc.contains("bound")) report.bound = doc.at("bound") == "lower" ? Bound::Lower : Bound::Exact;
  if (doc.contains("commitment"))
    report.commitment = commitment_from_json(doc.at("commitment"), labels.actions, labels.types[0]);
  if (doc.contains("second_stage")) {
    std::vector<std::vector<std::string>> later(labels.actions.begin() + 1, labels.actions.end());
    report.second_stage = commitment_from_json(doc.at("second_stage"), later, labels.types[1]);
  }
  if (doc.contains("signaling")) {
    const Json& s = doc.at("signaling");
    SignalingCommitment sc;
    sc.distribution =
        distribution_from_json(field(s, "distribution", "signaling"), labels.actions, "distribution");
    if (s.contains("type_distributions")) {
      for (const auto& t : labels.types[0]) {
        const Json& d = field(s.at("type_distributions"), t, "type_distributions");
        sc.type_distributions.push_back(distribution_from_json(d, labels.actions, "type_distributions"));
      }
    }
    const Json& pay = field(s, "payments", "signaling");
    if (!pay.is_array() || pay.size() + 1 != labels.actions.size())
      throw SchemaError("signaling.payments must list every follower");
    for (std::size_t i = 0; i < pay.size(); ++i) {
      std::vector<std::optional<Rational>> per(labels.actions[i + 1].size());
      std::vector<Rational> expected(labels.actions[i + 1].size(), Rational(0));
      for (auto it = pay[i].begin(); it != pay[i].end(); ++it) {
        const int a = find_index(labels.actions[i + 1], it.key());
        if (a < 0) throw SchemaError("signaling payments name unknown action \"" + it.key() + "\"");
        if (!it.value().is_null()) per[a] = parse_rational_json(it.value(), "signaling.payments");
      }
      if (s.contains("expected_payments") && s.at("expected_payments").size() > i) {
        const Json& e = s.at("expected_payments")[i];
        for (auto it = e.begin(); it != e.end(); ++it) {
          const int a = find_index(labels.actions[i + 1], it.key());
          if (a < 0) throw SchemaError("expected payments name unknown action \"" + it.key() + "\"");
          expected[a] = parse_rational_json(it.value(), "signaling.expected_payments");
        }
      }
      sc.payments.push_back(std::move(per));
      sc.expected_payments.push_back(std::move(expected));
    }
    report.signaling = std::move(sc);
  }
  if (doc.contains("sequential")) {
    const Json& s = doc.at("sequential");
    SequentialPaymentPlan plan;
    plan.target = profile_from_key(string_field(s, "target", "sequential"), labels.actions);
    plan.pay_1_to_2 = parse_rational_json(field(s, "pay_1_to_2", "sequential"), "pay_1_to_2");
    plan.pay_1_to_3 = parse_rational_json(field(s, "pay_1_to_3", "sequential"), "pay_1_to_3");
    plan.pay_2_to_3 = parse_rational_json(field(s, "pay_2_to_3", "sequential"), "pay_2_to_3");
    plan.big_m = parse_rational_json(field(s, "big_m", "sequential"), "big_m");
    for (const auto& t : field(s, "triggers", "sequential"))
      plan.triggers.push_back(profile_from_key(t.get<std::string>(), labels.actions));
    report.sequential = std::move(plan);
  }
  if (doc.contains("follower_play")) {
    const Json& play = doc.at("follower_play");
    if (!play.is_array() || play.size() + 1 > labels.actions.size())
      throw SchemaError("follower_play must hold one entry per follower");
    for (std::size_t i = 0; i < play.size(); ++i) {
      std::vector<VectorXq> per;
      for (const auto& t : labels.types[i + 1])
        per.push_back(mixture_from_json(field(play[i], t, "follower_play"), labels.actions[i + 1],
                                        "follower_play"));
      report.follower_play.push_back(std::move(per));
    }
  }
  if (doc.contains("certificate"))
    for (const auto& e : doc.at("certificate"))
      report.certificate.push_back({string_field(e, "constraint", "certificate"),
                                    parse_rational_json(field(e, "slack", "certificate"), "slack")});
  if (doc.contains("notes"))
    for (const auto& n : doc.at("notes")) report.notes.push_back(n.get<std::string>());
  return report;
}

}  // namespace commitpay
