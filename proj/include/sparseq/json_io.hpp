#pragma once

// JSON encodings of the file formats:
//   game          {"label": str, "num_players": n, "num_actions": m,
//                  "payoffs": [n * m^n floats, mixed-radix profile order,
//                              n values per profile, player 1 first]}
//   distribution  [{"profile": [a_1..a_n], "prob": p}, ...]   (1-based actions)
//   multiset      {"num_players": n, "num_actions": m, "samples": [[a..], ...]}
//   x3c instance  {"universe": n, "sets": [[a,b,c], ...]}
// plus one-way encodings of reports and solutions for the CLI.

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparseq/game.hpp"
#include "sparseq/gamegen.hpp"
#include "sparseq/solve.hpp"
#include "sparseq/sparsify.hpp"
#include "sparseq/verify.hpp"

namespace sparseq {

using nlohmann::json;

inline json game_to_json(const Game& game) {
  return json{{"label", game.label()},
              {"num_players", game.num_players()},
              {"num_actions", game.num_actions()},
              {"payoffs", game.payoffs()}};
}

inline Game game_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("game JSON: expected an object");
  return Game(j.at("num_players").get<int>(), j.at("num_actions").get<int>(),
              j.at("payoffs").get<std::vector<double>>(),
              j.value("label", std::string{}));
}

inline json distribution_to_json(const Game& game, const JointDistribution& x) {
  json out = json::array();
  for (const auto& [idx, p] : x.mass())
    out.push_back(json{{"profile", game.profile_at(idx).actions}, {"prob", p}});
  return out;
}

inline JointDistribution distribution_from_json(const Game& game, const json& j) {
  if (!j.is_array()) throw std::invalid_argument("distribution JSON: expected an array");
  std::map<std::size_t, double> mass;
  for (const auto& entry : j) {
    const ActionProfile profile(entry.at("profile").get<std::vector<int>>());
    mass[game.profile_index(profile)] += entry.at("prob").get<double>();
  }
  return JointDistribution(game.num_players(), game.num_actions(), std::move(mass));
}

inline json multiset_to_json(const Game& game, const KUniformMultiset& s) {
  json samples = json::array();
  for (std::size_t idx : s.samples()) samples.push_back(game.profile_at(idx).actions);
  return json{{"num_players", s.num_players()},
              {"num_actions", s.num_actions()},
              {"samples", std::move(samples)}};
}

inline KUniformMultiset multiset_from_json(const Game& game, const json& j) {
  std::vector<ActionProfile> profiles;
  for (const auto& sample : j.at("samples"))
    profiles.emplace_back(sample.get<std::vector<int>>());
  return KUniformMultiset::from_profiles(game, profiles);
}

inline json x3c_to_json(const X3CInstance& inst) {
  return json{{"universe", inst.universe_size}, {"sets", inst.sets}};
}

inline X3CInstance x3c_from_json(const json& j) {
  X3CInstance inst;
  inst.universe_size = j.at("universe").get<int>();
  inst.sets = j.at("sets").get<std::vector<std::vector<int>>>();
  inst.validate();
  return inst;
}

inline json report_to_json(const VerifyReport& r) {
  json out{{"satisfied", r.satisfied},
           {"worst_value", r.worst_value},
           {"definition", to_string(r.definition_used)},
           {"epsilon", r.epsilon},
           {"witness", nullptr}};
  if (r.witness)
    out["witness"] = json{{"player", r.witness->player}, {"deviation", r.witness->deviation}};
  return out;
}

inline json solution_to_json(const Game& game, const EquilibriumSolution& sol) {
  json out{{"kind", to_string(sol.kind)},
           {"solver", sol.solver},
           {"support_size", sol.support_size},
           {"distribution", distribution_to_json(game, sol.distribution)}};
  if (!sol.factors.empty()) {
    json factors = json::array();
    for (const auto& f : sol.factors)
      factors.push_back(json{{"player", f.player}, {"probs", f.probs}});
    out["factors"] = std::move(factors);
  }
  return out;
}

inline json outcome_to_json(const Game& game, const SparsifyOutcome& out) {
  return json{{"verified", out.verified},
              {"attempts", out.attempts},
              {"worst_value", out.worst_value},
              {"k", out.k},
              {"support_size", out.multiset.to_distribution().support_size()},
              {"multiset", multiset_to_json(game, out.multiset)}};
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace sparseq
