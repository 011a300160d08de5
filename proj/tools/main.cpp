// Command-line front end: gen, solve, verify, sparsify, experiment, and
// reduce-x3c subcommands over the JSON/CSV file formats.
//
// Exit codes: 0 success, 2 argument error, 3 budget refusal, 4 verification
// failure (verify subcommand), 1 anything else.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparseq/experiment.hpp"
#include "sparseq/json_io.hpp"
#include "sparseq/solve.hpp"
#include "sparseq/sparsify.hpp"

namespace {

using namespace sparseq;

void write_output(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << '\n';
  else
    save_json(out_path, j);
}

Budget budget_from(std::optional<long long> flag) {
  Budget b = Budget::from_env();
  if (flag && *flag > 0) {
    b.lp_variable_cap = static_cast<std::size_t>(*flag);
    b.enumeration_cap = static_cast<std::size_t>(*flag);
  }
  return b;
}

struct GenArgs {
  std::string family;
  double v = 1.0;
  int pairs = 2;
  int m = 3;
  int n = 2;
  std::uint64_t seed = 1;
  std::string instance;
  std::string out;
  std::string ce_out;
};

int run_gen(const GenArgs& args) {
  if (args.family == "dummy-pennies") {
    DummyPennies dp = gen_dummy_pennies(args.m);
    write_output(game_to_json(dp.game), args.out);
    if (!args.ce_out.empty())
      save_json(args.ce_out, distribution_to_json(dp.game, dp.equilibrium));
    return 0;
  }
  std::optional<Game> game;
  if (args.family == "figure1") game = gen_figure1(args.v);
  else if (args.family == "chain") game = gen_scaled_pennies_chain(args.pairs);
  else if (args.family == "matching") game = gen_matching_game(args.m);
  else if (args.family == "rps") game = gen_rps(args.m);
  else if (args.family == "random") game = gen_random_game(args.n, args.m, args.seed);
  else if (args.family == "x3c") {
    if (args.instance.empty())
      throw std::invalid_argument("gen --family x3c needs --instance <file>");
    game = x3c_reduce(x3c_from_json(load_json(args.instance)));
  } else {
    throw std::invalid_argument("unknown family '" + args.family + "'");
  }
  write_output(game_to_json(*game), args.out);
  return 0;
}

struct SolveArgs {
  std::string game_spec;
  std::string kind = "ce";
  long long rounds = 100000;
  std::uint64_t seed = 1;
  int max_support = 8;
  std::optional<long long> budget;
  std::string out;
};

int run_solve(const SolveArgs& args) {
  const Game game = resolve_game_spec(args.game_spec).game;
  const Budget budget = budget_from(args.budget);
  if (args.kind == "ce") {
    write_output(solution_to_json(game, solve_ce_lp(game, LpObjective::any_feasible(), budget)),
                 args.out);
  } else if (args.kind == "cce") {
    write_output(solution_to_json(game, solve_cce_lp(game, LpObjective::any_feasible(), budget)),
                 args.out);
  } else if (args.kind == "maxmin") {
    json out = json::array();
    for (int player = 1; player <= 2; ++player) {
      const auto [sigma, value] = maxmin_strategy(game, player);
      out.push_back(json{{"player", player}, {"value", value}, {"probs", sigma.probs}});
    }
    write_output(out, args.out);
  } else if (args.kind == "regret-matching") {
    const KUniformMultiset history = regret_matching(game, args.rounds, args.seed);
    const JointDistribution empirical = history.to_distribution();
    const VerifyReport report = verify_ce_single_switch(game, empirical, 0.0);
    write_output(json{{"kind", "regret-matching-empirical"},
                      {"rounds", args.rounds},
                      {"seed", args.seed},
                      {"support_size", empirical.support_size()},
                      {"worst_single_switch_regret", report.worst_value},
                      {"distribution", distribution_to_json(game, empirical)}},
                 args.out);
  } else if (args.kind == "sparsest-ce") {
    const auto sol = sparsest_ce_bruteforce(game, args.max_support, budget);
    if (sol)
      write_output(solution_to_json(game, *sol), args.out);
    else
      write_output(json{{"kind", "none"}, {"max_support", args.max_support}}, args.out);
  } else if (args.kind == "sparsest-ne") {
    write_output(solution_to_json(game, sparsest_ne_bruteforce(game, budget)), args.out);
  } else {
    throw std::invalid_argument("unknown solve kind '" + args.kind + "'");
  }
  return 0;
}

struct VerifyArgs {
  std::string game_spec;
  std::string dist_path;
  double epsilon = 0.0;
  std::string definition = "ce";
  std::string out;
};

int run_verify(const VerifyArgs& args) {
  const Game game = resolve_game_spec(args.game_spec).game;
  const json dist_json = load_json(args.dist_path);
  // Accept either a bare distribution array or a multiset object.
  const JointDistribution x = dist_json.is_array()
                                  ? distribution_from_json(game, dist_json)
                                  : multiset_from_json(game, dist_json).to_distribution();
  VerifyReport report;
  if (args.definition == "cce") report = verify_cce(game, x, args.epsilon);
  else if (args.definition == "ce") report = verify_ce(game, x, args.epsilon);
  else if (args.definition == "ce-single-switch")
    report = verify_ce_single_switch(game, x, args.epsilon);
  else if (args.definition == "ce-bruteforce")
    report = brute_force_verify_ce(game, x, args.epsilon);
  else throw std::invalid_argument("unknown definition '" + args.definition + "'");
  write_output(report_to_json(report), args.out);
  return report.satisfied ? 0 : 4;
}

struct SparsifyArgs {
  std::string game_spec;
  std::string dist_path;
  std::string target = "cce";
  double epsilon = 0.3;
  std::uint64_t seed = 1;
  int max_attempts = 64;
  std::optional<long long> k_override;
  std::optional<long long> budget;
  std::string out;
};

int run_sparsify(const SparsifyArgs& args) {
  const ResolvedGame resolved = resolve_game_spec(args.game_spec);
  const Game& game = resolved.game;
  const Budget budget = budget_from(args.budget);
  const Target target = target_from_string(args.target);
  std::optional<JointDistribution> sigma;
  if (!args.dist_path.empty())
    sigma = distribution_from_json(game, load_json(args.dist_path));
  else if (resolved.bundled_ce)
    sigma = resolved.bundled_ce;
  else
    sigma = (target == Target::CCE
                 ? solve_cce_lp(game, LpObjective::any_feasible(), budget)
                 : solve_ce_lp(game, LpObjective::any_feasible(), budget))
                .distribution;
  const SparsifyOutcome outcome =
      target == Target::CCE
          ? sparsify_cce(game, *sigma, args.epsilon, args.seed, args.max_attempts,
                         args.k_override)
          : sparsify_ce(game, *sigma, args.epsilon, args.seed, args.max_attempts,
                        args.k_override);
  write_output(outcome_to_json(game, outcome), args.out);
  return 0;
}

struct ExperimentArgs {
  std::string game_spec;
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> targets = {"cce"};
  std::string out;
  std::string artifacts;
  int max_attempts = 64;
  std::optional<long long> k_override;
  std::optional<long long> budget;
  bool timings = false;
};

int run_experiment_cmd(const ExperimentArgs& args) {
  ExperimentConfig config;
  config.game_spec = args.game_spec;
  config.epsilons = args.epsilons;
  config.seeds = args.seeds;
  config.targets.clear();
  for (const auto& t : args.targets) config.targets.push_back(target_from_string(t));
  config.out_path = args.out;
  config.max_attempts = args.max_attempts;
  config.k_override = args.k_override;
  config.artifact_dir = args.artifacts;
  config.budget = budget_from(args.budget);
  const std::vector<ExperimentRow> rows = run_experiment(config);
  emit_csv(rows, config.out_path, args.timings);
  int verified = 0;
  for (const auto& row : rows) verified += row.verified ? 1 : 0;
  std::cerr << rows.size() << " rows (" << verified << " verified) -> " << config.out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-support equilibrium toolkit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a game as JSON");
  gen->add_option("--family", gen_args.family,
                  "figure1|chain|matching|rps|dummy-pennies|random|x3c")
      ->required();
  gen->add_option("--v", gen_args.v, "figure1 parameter v > 0");
  gen->add_option("--pairs", gen_args.pairs, "chain pair count");
  gen->add_option("-m,--m", gen_args.m, "actions per player (matching/rps/dummy-pennies/random)");
  gen->add_option("-n,--n", gen_args.n, "player count (random)");
  gen->add_option("--seed", gen_args.seed, "random generator seed");
  gen->add_option("--instance", gen_args.instance, "x3c instance JSON path");
  gen->add_option("--out", gen_args.out, "output path (stdout when omitted)");
  gen->add_option("--ce-out", gen_args.ce_out, "dummy-pennies: also write the exact CE");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Compute an equilibrium");
  solve->add_option("--game", solve_args.game_spec, "game JSON path or family:params")
      ->required();
  solve->add_option("--kind", solve_args.kind,
                    "ce|cce|maxmin|regret-matching|sparsest-ce|sparsest-ne");
  solve->add_option("--rounds", solve_args.rounds, "regret-matching rounds T");
  solve->add_option("--seed", solve_args.seed, "regret-matching seed");
  solve->add_option("--max-support", solve_args.max_support, "sparsest-ce support cap");
  solve->add_option("--budget", solve_args.budget, "LP/enumeration size cap");
  solve->add_option("--out", solve_args.out, "output path (stdout when omitted)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Check a distribution against a definition");
  verify->add_option("--game", verify_args.game_spec)->required();
  verify->add_option("--dist", verify_args.dist_path, "distribution or multiset JSON")
      ->required();
  verify->add_option("--epsilon", verify_args.epsilon, "tolerance (default 0)");
  verify->add_option("--definition", verify_args.definition,
                     "cce|ce|ce-single-switch|ce-bruteforce");
  verify->add_option("--out", verify_args.out);

  SparsifyArgs sparsify_args;
  CLI::App* sparsify = app.add_subcommand("sparsify", "Sample a k-uniform approximate equilibrium");
  sparsify->add_option("--game", sparsify_args.game_spec)->required();
  sparsify->add_option("--dist", sparsify_args.dist_path,
                       "exact equilibrium JSON (computed via LP when omitted)");
  sparsify->add_option("--target", sparsify_args.target, "cce|ce");
  sparsify->add_option("--epsilon", sparsify_args.epsilon)->required();
  sparsify->add_option("--seed", sparsify_args.seed);
  sparsify->add_option("--max-attempts", sparsify_args.max_attempts);
  sparsify->add_option("--k-override", sparsify_args.k_override, "sample count override");
  sparsify->add_option("--budget", sparsify_args.budget);
  sparsify->add_option("--out", sparsify_args.out);

  ExperimentArgs experiment_args;
  CLI::App* experiment = app.add_subcommand("experiment", "Run a sparsification sweep to CSV");
  experiment->add_option("--game", experiment_args.game_spec)->required();
  experiment->add_option("--epsilon", experiment_args.epsilons, "epsilon grid")
      ->required()
      ->delimiter(',');
  experiment->add_option("--seeds", experiment_args.seeds, "seed list")
      ->required()
      ->delimiter(',');
  experiment->add_option("--target", experiment_args.targets, "cce and/or ce")->delimiter(',');
  experiment->add_option("--out", experiment_args.out, "CSV output path")->required();
  experiment->add_option("--artifacts", experiment_args.artifacts,
                         "directory for per-row multiset JSON");
  experiment->add_option("--max-attempts", experiment_args.max_attempts);
  experiment->add_option("--k-override", experiment_args.k_override);
  experiment->add_option("--budget", experiment_args.budget);
  experiment->add_flag("--timings", experiment_args.timings, "include wall_ms in the CSV");

  struct ReduceArgs {
    std::string instance;
    std::string out;
  } reduce_args;
  CLI::App* reduce = app.add_subcommand("reduce-x3c", "Build the set-cover game from an instance");
  reduce->add_option("--instance", reduce_args.instance, "x3c instance JSON")->required();
  reduce->add_option("--out", reduce_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(gen_args);
    if (*solve) return run_solve(solve_args);
    if (*verify) return run_verify(verify_args);
    if (*sparsify) return run_sparsify(sparsify_args);
    if (*experiment) return run_experiment_cmd(experiment_args);
    if (*reduce) {
      write_output(game_to_json(x3c_reduce(x3c_from_json(load_json(reduce_args.instance)))),
                   reduce_args.out);
      return 0;
    }
  } catch (const sparseq::BudgetError& e) {
    std::cerr << "budget refusal: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
