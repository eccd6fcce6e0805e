// commitpay: optimal commitments with payments from the command line.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>

#include "commitpay/commit_solvers.hpp"
#include "commitpay/equilibrium.hpp"
#include "commitpay/hard_cases.hpp"
#include "commitpay/io.hpp"
#include "commitpay/random.hpp"
#include "commitpay/reductions.hpp"
#include "commitpay/signaling.hpp"

using namespace commitpay;

namespace {

constexpr int kVerifyFailed = 1;
constexpr int kSchema = 2;
constexpr int kSize = 3;

const char* kSolveHelp = R"(Settings:
  2p-pure                 pure leader action plus a payment on the follower's
                          action; every outcome is checked by direct comparison
  2p-mixed                leader mixture plus follower payments; one LP per
                          follower action
  3p-seq-pure             three players commit in turn to a pure action and
                          payments to later players; one small LP per outcome
                          with a large off-path payment as deterrent
  2p-leader-types-mixed   typed leader, one mixture per type; one LP per
                          follower action
  sig-mixed               recommendation scheme over full profiles with
                          payments for obedience; single LP
  sig-pure                as sig-mixed with a fixed leader action; one LP per
                          leader action
  sig-leader-types        typed leader, one recommendation scheme per type;
                          single LP
  bayes-follower-exact    typed follower; enumerates every type-to-action
                          assignment and solves one LP each (exponential)
  leader-types-pure-exact typed leader committing to one action per type;
                          enumerates every action function (exponential))";

const char* kApproxHelp = R"(Settings:
  single-commit  three players, followers play the leader-best equilibrium;
                 grid over leader mixtures and sparse outcome payments
  seq-mixed      three players committing in turn with mixtures; grid over
                 the leader's commitment, player 2 solved exactly
Both report "bound": "lower".)";

Rational rational_flag(const std::string& text, const std::string& flag) {
  Rational value;
  try {
    value = parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw SchemaError(flag + ": \"" + text + "\" is not a rational literal");
  }
  return value;
}

Rational positive_flag(const std::string& text, const std::string& flag) {
  Rational value = rational_flag(text, flag);
  if (value <= 0) throw SchemaError(flag + " must be positive");
  return value;
}

void print(const Json& doc) { std::cout << canonical_text(doc); }

// Collects every LP a solver builds so it can be written out afterwards.
struct LpDump {
  std::mutex lock;
  std::ostringstream text;

  void attach(SolverOptions& options) {
    options.on_lp = [this](const LinearProgram& lp, const std::string& title) {
      std::lock_guard<std::mutex> guard(lock);
      write_lp(text, lp, title);
      text << '\n';
    };
  }
};

SolveReport run_solver(const std::string& setting, const AnyGame& game,
                       const SolverOptions& options) {
  if (setting == "2p-pure") return solve_two_player_pure(as_normal_form(game), options);
  if (setting == "2p-mixed") return solve_two_player_mixed(as_normal_form(game), options);
  if (setting == "3p-seq-pure")
    return solve_three_player_sequential_pure(as_normal_form(game), options);
  if (setting == "2p-leader-types-mixed")
    return solve_two_player_leader_types_mixed(as_bayesian(game), options);
  if (setting == "sig-mixed") return solve_signaling_mixed(as_normal_form(game), options);
  if (setting == "sig-pure") return solve_signaling_pure(as_normal_form(game), options);
  if (setting == "sig-leader-types")
    return solve_signaling_leader_types_mixed(as_bayesian(game), options);
  if (setting == "bayes-follower-exact")
    return solve_bayesian_follower_exact(as_bayesian(game), options);
  if (setting == "leader-types-pure-exact")
    return solve_leader_types_pure_exact(as_bayesian(game), options);
  throw SchemaError("unknown setting \"" + setting + "\"");
}

Json mixture_json(const std::vector<std::string>& labels, const VectorXq& mix) {
  Json out = Json::object();
  for (Index a = 0; a < mix.size(); ++a) out[labels[a]] = rational_json(mix[a]);
  return out;
}

std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> shape;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, 'x')) {
    int count = 0;
    try {
      count = std::stoi(part);
    } catch (const std::exception&) {
      throw SchemaError("--shape must look like 2x3x2");
    }
    if (count < 1 || count > 12) throw SchemaError("--shape entries must be between 1 and 12");
    shape.push_back(count);
  }
  if (shape.empty()) throw SchemaError("--shape must look like 2x3x2");
  return shape;
}

ReductionKind reduction_kind(const std::string& name) {
  if (name == "bcbs") return ReductionKind::Bcbs;
  if (name == "bvc") return ReductionKind::BalancedVertexCover;
  if (name == "vc-bayes") return ReductionKind::VertexCoverBayesian;
  if (name == "pricing") return ReductionKind::ItemPricing;
  throw SchemaError("unknown reduction \"" + name + "\"");
}

Json generate_reduction(ReductionKind kind, const Json& source) {
  switch (kind) {
    case ReductionKind::Bcbs:
      return game_to_json(reduce_bcbs(parse_bipartite_graph(source), parse_positive_int(source, "k")));
    case ReductionKind::BalancedVertexCover: {
      std::optional<Rational> epsilon;
      if (source.contains("epsilon")) epsilon = parse_rational_json(source.at("epsilon"), "epsilon");
      return game_to_json(reduce_balanced_vertex_cover(parse_graph(source), epsilon));
    }
    case ReductionKind::VertexCoverBayesian:
      return game_to_json(
          reduce_vertex_cover_bayesian(parse_graph(source), parse_positive_int(source, "K")));
    case ReductionKind::ItemPricing: {
      const auto reduced = reduce_item_pricing(parse_pricing(source));
      Json out = game_to_json(reduced.game);
      out["metadata"] = {{"z", rational_json(reduced.z)}};
      return out;
    }
  }
  throw std::logic_error("unhandled reduction kind");
}

int verify_witness(ReductionKind kind, const Json& source, const Json& report_doc) {
  WitnessVerdict verdict;
  switch (kind) {
    case ReductionKind::Bcbs: {
      const auto graph = parse_bipartite_graph(source);
      const int k = parse_positive_int(source, "k");
      const auto report = report_from_json(report_doc, LabelSet::of(reduce_bcbs(graph, k)));
      verdict = verify_bcbs_witness(graph, k, report);
      break;
    }
    case ReductionKind::VertexCoverBayesian: {
      const auto graph = parse_graph(source);
      const int cover = parse_positive_int(source, "K");
      const auto report =
          report_from_json(report_doc, LabelSet::of(reduce_vertex_cover_bayesian(graph, cover)));
      verdict = verify_vertex_cover_witness(graph, cover, report);
      break;
    }
    case ReductionKind::ItemPricing: {
      const auto instance = parse_pricing(source);
      const auto report =
          report_from_json(report_doc, LabelSet::of(reduce_item_pricing(instance).game));
      verdict = verify_pricing_witness(instance, report);
      break;
    }
    case ReductionKind::BalancedVertexCover:
      throw SchemaError("no witness check is defined for the bvc reduction");
  }
  print({{"consistent", verdict.consistent}, {"detail", verdict.detail}});
  return verdict.consistent ? 0 : kVerifyFailed;
}

Json certificate_json(const std::vector<CertificateEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) out.push_back({{"constraint", e.constraint}, {"slack", rational_json(e.slack)}});
  return out;
}

// Accepts a bare recommendation scheme or any report the tool emits.
int verify_report(const Json& doc, const AnyGame& any) {
  const LabelSet labels = LabelSet::of(any);
  const bool bare = doc.is_object() && doc.contains("distribution") && !doc.contains("setting");
  const SolveReport report =
      bare ? report_from_json(Json{{"setting", "input"}, {"value", "0"}, {"signaling", doc}}, labels)
           : report_from_json(doc, labels);

  if (report.signaling) {
    NormalFormGame followers = std::holds_alternative<NormalFormGame>(any)
                                   ? std::get<NormalFormGame>(any)
                                   : std::get<BayesianGame>(any).type_slice(
                                         std::vector<int>(std::get<BayesianGame>(any).players(), 0));
    const auto check = check_incentive_compatibility(followers, *report.signaling);
    Json out = {{"passed", check.passed}, {"slacks", certificate_json(check.slacks)},
                {"problems", check.problems}};
    print(out);
    return check.passed ? 0 : kVerifyFailed;
  }
  if (!report.commitment || report.follower_play.empty())
    throw SchemaError("report carries neither a recommendation scheme nor a commitment with play");

  std::vector<std::string> problems;
  std::vector<CertificateEntry> slacks;
  Rational recomputed;
  if (const auto* game = std::get_if<NormalFormGame>(&any); game && report.follower_play.size() == 1 &&
                                                            !report.second_stage && !report.sequential) {
    std::vector<VectorXq> play;
    for (const auto& per_follower : report.follower_play) play.push_back(per_follower.at(0));
    recomputed = evaluate_leader(*game, *report.commitment, play);
    if (game->players() == 2) {
      for (Index b = 0; b < play[0].size(); ++b)
        if (play[0][b] != 0) {
          auto entries = follower_certificate(*game, *report.commitment, static_cast<int>(b));
          slacks.insert(slacks.end(), entries.begin(), entries.end());
        }
    }
  } else {
    recomputed = evaluate_leader(as_bayesian(any), *report.commitment, report.follower_play);
  }
  if (recomputed != report.value)
    problems.push_back("reported value " + to_string(report.value) + " but the play yields " +
                       to_string(recomputed));
  const bool passed = problems.empty() && all_slacks_nonnegative(slacks);
  print({{"passed", passed}, {"slacks", certificate_json(slacks)}, {"problems", problems}});
  return passed ? 0 : kVerifyFailed;
}

void print_error(const std::string& kind, const std::vector<std::string>& messages) {
  std::cerr << Json{{"error", kind}, {"violations", messages}}.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal leader commitments with payments in normal-form and Bayesian games.\n"
               "Numbers in every document are exact rationals written as \"p/q\"."};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for independent subproblems (0 = all cores)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a commitment problem exactly");
  solve->footer(kSolveHelp);
  std::string solve_setting, game_path, dump_path;
  bool no_payments = false;
  solve->add_option("--setting", solve_setting, "Solver setting (see below)")
      ->required()
      ->check(CLI::IsMember({"2p-pure", "2p-mixed", "3p-seq-pure", "2p-leader-types-mixed", "sig-mixed",
                             "sig-pure", "sig-leader-types", "bayes-follower-exact",
                             "leader-types-pure-exact"}));
  solve->add_flag("--no-payments", no_payments, "Force every payment to zero");
  solve->add_option("--dump-lp", dump_path, "Write every LP built to this file");
  solve->add_option("game", game_path, "Game document")->required();

  // approx
  auto* approx = app.add_subcommand("approx", "Grid approximation for the hard three-player settings");
  approx->footer(kApproxHelp);
  std::string approx_setting, step_text = "1/8", cap_text;
  int support = 1, nash_cap = 6;
  std::size_t budget = 2000000;
  approx->add_option("--setting", approx_setting, "single-commit or seq-mixed")
      ->required()
      ->check(CLI::IsMember({"single-commit", "seq-mixed"}));
  approx->add_option("--step", step_text, "Grid step 1/k")->capture_default_str();
  approx->add_option("--cap", cap_text, "Largest payment tried (default: follower utility range)");
  approx->add_option("--support", support, "Outcome payments allowed to be nonzero at once")->capture_default_str();
  approx->add_option("--budget", budget, "Upper limit on evaluated grid points")->capture_default_str();
  approx->add_option("--nash-cap", nash_cap, "Action cap for equilibrium enumeration")->capture_default_str();
  approx->add_option("game", game_path, "Game document")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Ground-truth computations for small two-player games");
  bool nash = false, brute = false;
  std::string oracle_step = "1/16", oracle_cap;
  oracle->add_flag("--nash", nash, "Enumerate the extreme Nash equilibria");
  oracle->add_flag("--brute-force", brute, "Grid search over leader mixtures and follower payments");
  oracle->add_option("--step", oracle_step, "Grid step 1/k")->capture_default_str();
  oracle->add_option("--cap", oracle_cap, "Largest payment (default: follower utility range)");
  oracle->add_option("--budget", budget, "Upper limit on evaluated grid points")->capture_default_str();
  oracle->add_option("game", game_path, "Game document")->required();

  // generate
  auto* generate = app.add_subcommand("generate", "Build games from combinatorial instances or at random");
  std::string reduction, input_path, output_path, shape_text = "2x2";
  bool random = false;
  std::uint64_t seed = 0;
  int range = 5;
  generate->add_option("--reduction", reduction, "bcbs, bvc, vc-bayes or pricing")
      ->check(CLI::IsMember({"bcbs", "bvc", "vc-bayes", "pricing"}));
  generate->add_flag("--random", random, "Random game with integer utilities");
  generate->add_option("--seed", seed, "Seed for --random")->capture_default_str();
  generate->add_option("--shape", shape_text, "Action counts per player, e.g. 2x3x2")->capture_default_str();
  generate->add_option("--range", range, "Utilities are drawn from [-range, range]")->capture_default_str();
  generate->add_option("-o,--output", output_path, "Output file (default: stdout)");
  generate->add_option("input", input_path, "Source instance for --reduction");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a report");
  bool ic = false, witness = false;
  std::string first_path, second_path, witness_kind;
  verify->add_flag("--ic", ic, "Obedience check: verify --ic report.json game.json");
  verify->add_flag("--witness", witness,
                   "Reduction witness: verify --witness --reduction kind source.json report.json");
  verify->add_option("--reduction", witness_kind, "bcbs, vc-bayes or pricing");
  verify->add_option("first", first_path, "Report (--ic) or source instance (--witness)")->required();
  verify->add_option("second", second_path, "Game (--ic) or report (--witness)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", {e.what()});
    return kSchema;
  }

  try {
    if (*solve) {
      const AnyGame game = parse_game(read_json_file(game_path));
      SolverOptions options;
      options.allow_payments = !no_payments;
      options.threads = threads;
      LpDump dump;
      if (!dump_path.empty()) {
        options.threads = 1;  // keeps the dump in a fixed order
        dump.attach(options);
      }
      const auto report = run_solver(solve_setting, game, options);
      if (!dump_path.empty()) write_text_file(dump_path, dump.text.str());
      print(report_to_json(report, LabelSet::of(game)));
      return 0;
    }
    if (*approx) {
      const AnyGame any = parse_game(read_json_file(game_path));
      const NormalFormGame game = as_normal_form(any);
      GridOptions grid;
      grid.step = positive_flag(step_text, "--step");
      if (!cap_text.empty()) grid.payment_cap = rational_flag(cap_text, "--cap");
      if (grid.payment_cap && *grid.payment_cap < 0) throw SchemaError("--cap must be nonnegative");
      grid.max_payment_support = support;
      grid.budget = budget;
      grid.threads = threads;
      grid.nash_cap = nash_cap;
      SolverOptions options;
      options.threads = threads;
      const auto report = approx_setting == "single-commit" ? approx_single_commitment(game, grid, options)
                                                            : approx_sequential_mixed(game, grid, options);
      print(report_to_json(report, LabelSet::of(game)));
      return 0;
    }
    if (*oracle) {
      if (nash == brute) throw SchemaError("oracle needs exactly one of --nash or --brute-force");
      const NormalFormGame game = as_normal_form(parse_game(read_json_file(game_path)));
      if (nash) {
        const auto set = enumerate_nash_two_player(game);
        Json list = Json::array();
        const MatrixXq leader = game.payoff_matrix(0);
        for (const auto& eq : set.equilibria)
          list.push_back({{"row", mixture_json(game.actions(0), eq.row)},
                          {"column", mixture_json(game.actions(1), eq.column)},
                          {"leader_value", rational_json(eq.row.dot(leader * eq.column))}});
        print({{"equilibria", list},
               {"completeness", set.completeness == Completeness::Complete ? "complete"
                                                                           : "vertex-representatives"}});
        return 0;
      }
      GridOptions grid;
      grid.budget = budget;
      grid.threads = threads;
      const Rational step = positive_flag(oracle_step, "--step");
      const Rational cap = oracle_cap.empty() ? follower_utility_range(game) : rational_flag(oracle_cap, "--cap");
      if (cap < 0) throw SchemaError("--cap must be nonnegative");
      print(report_to_json(brute_force_commitment(game, step, cap, grid), LabelSet::of(game)));
      return 0;
    }
    if (*generate) {
      if (random == !reduction.empty())
        throw SchemaError("generate needs exactly one of --random or --reduction");
      Json out;
      if (random) {
        if (range < 0) throw SchemaError("--range must be nonnegative");
        std::mt19937_64 rng(seed);
        out = game_to_json(random_game(parse_shape(shape_text), range, rng));
      } else {
        if (input_path.empty()) throw SchemaError("--reduction needs an input instance");
        out = generate_reduction(reduction_kind(reduction), read_json_file(input_path));
      }
      if (output_path.empty()) print(out);
      else write_text_file(output_path, canonical_text(out));
      return 0;
    }
    if (*verify) {
      if (ic == witness) throw SchemaError("verify needs exactly one of --ic or --witness");
      if (ic) {
        const Json report = read_json_file(first_path);
        return verify_report(report, parse_game(read_json_file(second_path)));
      }
      if (witness_kind.empty()) throw SchemaError("--witness needs --reduction");
      const Json source = read_json_file(first_path);
      return verify_witness(reduction_kind(witness_kind), source, read_json_file(second_path));
    }
  } catch (const SchemaError& e) {
    print_error("schema", e.violations());
    return kSchema;
  } catch (const SizeError& e) {
    print_error("size", {e.what()});
    return kSize;
  }
  return 0;
}
