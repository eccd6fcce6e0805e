#ifndef COMMITPAY_IO_HPP
#define COMMITPAY_IO_HPP

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "commitpay/game.hpp"
#include "commitpay/reductions.hpp"
#include "commitpay/report.hpp"

namespace commitpay {

using Json = nlohmann::json;
using AnyGame = std::variant<NormalFormGame, BayesianGame>;

/// Reads and parses a JSON file; a missing or malformed file is a SchemaError.
Json read_json_file(const std::string& path);
/// Canonical text: two-space indentation, sorted keys, trailing newline.
std::string canonical_text(const Json& document);
void write_text_file(const std::string& path, const std::string& text);

/// Validates a game document, collecting every violation before throwing.
/// Documents with "types" become Bayesian games.
AnyGame parse_game(const Json& document);
Json game_to_json(const NormalFormGame& game);
Json game_to_json(const BayesianGame& game);
Json game_to_json(const AnyGame& game);

/// Normal-form view; a Bayesian game qualifies only if every player has one type.
NormalFormGame as_normal_form(const AnyGame& game);
BayesianGame as_bayesian(const AnyGame& game);

/// Graph documents: {"vertices": [...], "adjacency": {"v": ["w", ...]}} and
/// {"left": [...], "right": [...], "adjacency": {...}}. Parameters (k, K,
/// epsilon) are read separately.
Graph parse_graph(const Json& document);
BipartiteGraph parse_bipartite_graph(const Json& document);
Json graph_to_json(const Graph& graph);
Json bipartite_graph_to_json(const BipartiteGraph& graph);
/// Positive integer field `key`.
int parse_positive_int(const Json& document, const std::string& key);

/// {"items": m, "types": [{"values": [...], "probability": "p/q"}]} or, for
/// uniform budgets, {"budget": "b", "wants": [item numbers from 1]} per type.
PricingInstance parse_pricing(const Json& document);
Json pricing_to_json(const PricingInstance& instance);

/// Labels needed to translate indices back and forth.
struct LabelSet {
  std::vector<std::vector<std::string>> actions;
  std::vector<std::vector<std::string>> types;

  static LabelSet of(const NormalFormGame& game);
  static LabelSet of(const BayesianGame& game);
  static LabelSet of(const AnyGame& game);
};

Json report_to_json(const SolveReport& report, const LabelSet& labels);
SolveReport report_from_json(const Json& document, const LabelSet& labels);

Rational parse_rational_json(const Json& value, const std::string& where);
Json rational_json(const Rational& value);

}  // namespace commitpay

#endif  // COMMITPAY_IO_HPP
