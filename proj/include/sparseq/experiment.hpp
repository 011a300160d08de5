#pragma once

// Batch experiment harness: resolve a game spec, compute a base equilibrium,
// sparsify across an (epsilon, seed) grid, verify, and tabulate CSV rows.
// Identical configs produce byte-identical CSV; wall-clock timings are kept
// out of the default output so that guarantee holds.

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparseq/budget.hpp"
#include "sparseq/game.hpp"
#include "sparseq/gamegen.hpp"
#include "sparseq/json_io.hpp"
#include "sparseq/solve.hpp"
#include "sparseq/sparsify.hpp"

namespace sparseq {

enum class Target { CCE, CE };

inline std::string to_string(Target t) { return t == Target::CCE ? "cce" : "ce"; }

inline Target target_from_string(const std::string& s) {
  if (s == "cce") return Target::CCE;
  if (s == "ce") return Target::CE;
  throw std::invalid_argument("unknown target '" + s + "' (expected cce or ce)");
}

/// A generated or loaded game, plus the generator-provided exact CE when the
/// family ships one (dummy-pennies).
struct ResolvedGame {
  Game game;
  std::optional<JointDistribution> bundled_ce;
};

namespace detail {

inline std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("game spec: expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

inline double param_double(const std::map<std::string, std::string>& params,
                           const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("game spec: missing parameter '" + key + "'");
  return std::stod(it->second);
}

inline long long param_int(const std::map<std::string, std::string>& params,
                           const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("game spec: missing parameter '" + key + "'");
  return std::stoll(it->second);
}

}  // namespace detail

/// Resolves "family:key=value,..." specs or a JSON file path. Families:
/// figure1:v=..., chain:pairs=..., matching:m=..., rps:m=...,
/// dummy-pennies:m=..., random:n=..,m=..,seed=.., x3c:path=instance.json.
inline ResolvedGame resolve_game_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (family == "figure1") {
    return {gen_figure1(detail::param_double(detail::parse_params(rest), "v")), std::nullopt};
  } else if (family == "chain") {
    return {gen_scaled_pennies_chain(
                static_cast<int>(detail::param_int(detail::parse_params(rest), "pairs"))),
            std::nullopt};
  } else if (family == "matching") {
    return {gen_matching_game(
                static_cast<int>(detail::param_int(detail::parse_params(rest), "m"))),
            std::nullopt};
  } else if (family == "rps") {
    return {gen_rps(static_cast<int>(detail::param_int(detail::parse_params(rest), "m"))),
            std::nullopt};
  } else if (family == "dummy-pennies") {
    DummyPennies dp = gen_dummy_pennies(
        static_cast<int>(detail::param_int(detail::parse_params(rest), "m")));
    return {std::move(dp.game), std::move(dp.equilibrium)};
  } else if (family == "random") {
    const auto params = detail::parse_params(rest);
    return {gen_random_game(static_cast<int>(detail::param_int(params, "n")),
                            static_cast<int>(detail::param_int(params, "m")),
                            static_cast<std::uint64_t>(detail::param_int(params, "seed"))),
            std::nullopt};
  } else if (family == "x3c") {
    const auto params = detail::parse_params(rest);
    const auto it = params.find("path");
    if (it == params.end()) throw std::invalid_argument("x3c spec needs path=<instance.json>");
    return {x3c_reduce(x3c_from_json(load_json(it->second))), std::nullopt};
  }
  // Anything else is a game JSON file path.
  return {game_from_json(load_json(spec)), std::nullopt};
}

struct ExperimentConfig {
  std::string game_spec;
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds;
  std::vector<Target> targets = {Target::CCE};
  std::string out_path;
  int max_attempts = 64;
  std::optional<long long> k_override;
  std::string artifact_dir;  // when set, per-row multiset JSON lands here
  Budget budget = Budget::from_env();
};

struct ExperimentRow {
  std::string label;
  int num_players = 0;
  int num_actions = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  Target target = Target::CCE;
  long long k = 0;
  int attempts = 0;
  int support = 0;
  double worst_value = 0.0;
  bool verified = false;
  std::string status = "ok";
  double wall_ms = 0.0;
  std::string artifact_path;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string sanitize(const std::string& text) {
  std::string out;
  for (char c : text)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return out;
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Runs the full sparsify pipeline for every (target, epsilon, seed) cell.
/// Failures become rows with a non-"ok" status instead of being dropped.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  if (config.seeds.empty()) throw std::invalid_argument("experiment: empty seed list");
  if (config.epsilons.empty()) throw std::invalid_argument("experiment: empty epsilon grid");
  if (config.targets.empty()) throw std::invalid_argument("experiment: empty target list");
  for (double eps : config.epsilons)
    if (!(eps > 0.0) || eps > 1.0)
      throw std::invalid_argument("experiment: epsilon values must lie in (0, 1]");

  const ResolvedGame resolved = resolve_game_spec(config.game_spec);
  const Game& game = resolved.game;
  std::vector<ExperimentRow> rows;

  for (const Target target : config.targets) {
    // Base equilibrium for this target; generator-bundled CE wins (it is a
    // CCE as well), otherwise solve the LP.
    std::optional<JointDistribution> base;
    std::string base_error;
    if (resolved.bundled_ce) {
      base = resolved.bundled_ce;
    } else {
      try {
        base = target == Target::CCE ? solve_cce_lp(game, LpObjective::any_feasible(),
                                                    config.budget)
                                         .distribution
                                     : solve_ce_lp(game, LpObjective::any_feasible(),
                                                   config.budget)
                                           .distribution;
      } catch (const BudgetError& e) {
        base_error = std::string("refused: ") + e.what();
      }
    }

    for (const double eps : config.epsilons) {
      for (const std::uint64_t seed : config.seeds) {
        ExperimentRow row;
        row.label = game.label();
        row.num_players = game.num_players();
        row.num_actions = game.num_actions();
        row.epsilon = eps;
        row.seed = seed;
        row.target = target;
        if (!base) {
          row.status = base_error;
          rows.push_back(std::move(row));
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
          const SparsifyOutcome out =
              target == Target::CCE
                  ? sparsify_cce(game, *base, eps, seed, config.max_attempts,
                                 config.k_override)
                  : sparsify_ce(game, *base, eps, seed, config.max_attempts,
                                config.k_override);
          row.k = out.k;
          row.attempts = out.attempts;
          row.support = out.multiset.to_distribution().support_size();
          row.worst_value = out.worst_value;
          row.verified = out.verified;
          if (!out.verified) row.status = "unverified";
          if (!config.artifact_dir.empty()) {
            std::ostringstream name;
            name << detail::sanitize(game.label()) << "_" << to_string(target) << "_eps"
                 << detail::format_double(eps) << "_seed" << seed << ".json";
            row.artifact_path = config.artifact_dir + "/" + name.str();
            save_json(row.artifact_path, multiset_to_json(game, out.multiset));
          }
        } catch (const BudgetError& e) {
          row.status = std::string("refused: ") + e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Writes the rows as RFC-4180 CSV. Numeric fields use shortest round-trip
/// formatting, so re-parsing recovers them exactly. Wall-clock timings are
/// only included on request because they vary run to run.
inline void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path,
                     bool include_timings = false) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot write " + path);
  out << "label,num_players,num_actions,epsilon,seed,target,k,attempts,support,"
         "worst_value,verified,status";
  if (include_timings) out << ",wall_ms";
  out << "\n";
  for (const auto& row : rows) {
    out << detail::csv_quote(row.label) << ',' << row.num_players << ',' << row.num_actions
        << ',' << detail::format_double(row.epsilon) << ',' << row.seed << ','
        << to_string(row.target) << ',' << row.k << ',' << row.attempts << ',' << row.support
        << ',' << detail::format_double(row.worst_value) << ','
        << (row.verified ? "true" : "false") << ',' << detail::csv_quote(row.status);
    if (include_timings) out << ',' << detail::format_double(row.wall_ms);
    out << "\n";
  }
}

}  // namespace sparseq
