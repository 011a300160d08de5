#pragma once

// Equilibrium verifiers. Three definitions are supported:
//   * CCE:              no single fixed action improves on the recommendation;
//   * CE_rule:          no switching rule f: A_i -> A_i improves (checked via
//                       the per-recommendation best rule, which is exact
//                       because the maximizing rule decomposes coordinatewise);
//   * CE_single_switch: the nm(m-1) pairwise inequalities; equivalent to
//                       CE_rule at epsilon = 0 but weaker for epsilon > 0.
// brute_force_verify_ce enumerates all m^m rules per player and exists as an
// independent oracle for the best-rule shortcut.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sparseq/budget.hpp"
#include "sparseq/game.hpp"

namespace sparseq {

inline constexpr double kVerifySlack = 1e-12;

enum class Definition { CCE, CE_rule, CE_single_switch };

inline std::string to_string(Definition d) {
  switch (d) {
    case Definition::CCE: return "CCE";
    case Definition::CE_rule: return "CE_rule";
    case Definition::CE_single_switch: return "CE_single_switch";
  }
  return "?";
}

struct Witness {
  int player = 0;
  std::string deviation;
};

struct VerifyReport {
  bool satisfied = true;
  double worst_value = 0.0;
  std::optional<Witness> witness;
  Definition definition_used = Definition::CCE;
  double epsilon = 0.0;
};

namespace detail {

inline VerifyReport make_report(Definition def, double eps, double worst,
                                std::optional<Witness> witness) {
  VerifyReport r;
  r.definition_used = def;
  r.epsilon = eps;
  r.worst_value = worst;
  r.satisfied = worst <= eps + kVerifySlack;
  if (!r.satisfied) r.witness = std::move(witness);
  return r;
}

inline std::string describe_rule(const SwitchingRule& f) {
  std::ostringstream out;
  out << "rule";
  bool any = false;
  for (std::size_t j = 0; j < f.map.size(); ++j) {
    if (f.map[j] != static_cast<int>(j) + 1) {
      out << (any ? "," : " ") << (j + 1) << "->" << f.map[j];
      any = true;
    }
  }
  if (!any) out << " identity";
  return out.str();
}

}  // namespace detail

/// Checks all nm (player, action) pairs of the CCE definition.
inline VerifyReport verify_cce(const Game& game, const JointDistribution& x, double eps) {
  x.require_compatible(game);
  double worst = -2.0;
  Witness witness;
  for (int i = 1; i <= game.num_players(); ++i) {
    for (int j = 1; j <= game.num_actions(); ++j) {
      const double value = expected_regret(game, i, j, x);
      if (value > worst) {
        worst = value;
        witness = Witness{i, "action " + std::to_string(j)};
      }
    }
  }
  return detail::make_report(Definition::CCE, eps, worst, witness);
}

/// The switching rule maximizing player i's expected regret under x.
/// Ties broken toward the smallest action index; actions that are never
/// recommended map to themselves.
inline SwitchingRule best_switching_rule(const Game& game, const JointDistribution& x,
                                         int player) {
  x.require_compatible(game);
  const int m = game.num_actions();
  // Bucket the support by the recommendation to `player`.
  std::vector<std::vector<std::pair<std::size_t, double>>> by_action(
      static_cast<std::size_t>(m));
  for (const auto& [idx, p] : x.mass())
    by_action[static_cast<std::size_t>(game.action_of(idx, player) - 1)].emplace_back(idx, p);

  std::vector<int> image(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) {
    const auto& bucket = by_action[static_cast<std::size_t>(a - 1)];
    if (bucket.empty()) {
      image[static_cast<std::size_t>(a - 1)] = a;
      continue;
    }
    int best = 1;
    double best_value = -2.0;
    for (int j = 1; j <= m; ++j) {
      double value = 0.0;
      for (const auto& [idx, p] : bucket)
        value += p * regret_action_at(game, player, j, idx);
      if (value > best_value) {
        best_value = value;
        best = j;
      }
    }
    image[static_cast<std::size_t>(a - 1)] = best;
  }
  return SwitchingRule(player, std::move(image));
}

/// epsilon-CE check against every switching rule, via the per-player best rule.
inline VerifyReport verify_ce(const Game& game, const JointDistribution& x, double eps) {
  x.require_compatible(game);
  double worst = -2.0;
  Witness witness;
  for (int i = 1; i <= game.num_players(); ++i) {
    const SwitchingRule f = best_switching_rule(game, x, i);
    const double value = expected_regret(game, i, f, x);
    if (value > worst) {
      worst = value;
      witness = Witness{i, detail::describe_rule(f)};
    }
  }
  return detail::make_report(Definition::CE_rule, eps, worst, witness);
}

/// The nm(m-1) single-recommendation inequalities
///   sum_{a_-i} (u_i(j, a_-i) - u_i(a_i, a_-i)) x(a_i, a_-i) <= eps.
inline VerifyReport verify_ce_single_switch(const Game& game, const JointDistribution& x,
                                            double eps) {
  x.require_compatible(game);
  const int m = game.num_actions();
  double worst = m > 1 ? -2.0 : 0.0;
  Witness witness;
  for (int i = 1; i <= game.num_players(); ++i) {
    std::vector<std::vector<std::pair<std::size_t, double>>> by_action(
        static_cast<std::size_t>(m));
    for (const auto& [idx, p] : x.mass())
      by_action[static_cast<std::size_t>(game.action_of(idx, i) - 1)].emplace_back(idx, p);
    for (int a = 1; a <= m; ++a) {
      for (int j = 1; j <= m; ++j) {
        if (j == a) continue;
        double value = 0.0;
        for (const auto& [idx, p] : by_action[static_cast<std::size_t>(a - 1)])
          value += p * regret_action_at(game, i, j, idx);
        if (value > worst) {
          worst = value;
          witness = Witness{i, "switch " + std::to_string(a) + "->" + std::to_string(j)};
        }
      }
    }
  }
  return detail::make_report(Definition::CE_single_switch, eps, worst, witness);
}

/// Exhaustive oracle over all m^m switching rules per player. Refuses games
/// with more than `max_actions` actions (m^m blows up immediately).
inline VerifyReport brute_force_verify_ce(const Game& game, const JointDistribution& x,
                                          double eps, int max_actions = 6) {
  x.require_compatible(game);
  const int m = game.num_actions();
  if (m > max_actions)
    throw BudgetError("brute_force_verify_ce: m^m rule enumeration over budget");
  double worst = -2.0;
  Witness witness;
  for (int i = 1; i <= game.num_players(); ++i) {
    std::vector<int> image(static_cast<std::size_t>(m), 1);
    while (true) {
      const SwitchingRule f(i, image);
      const double value = expected_regret(game, i, f, x);
      if (value > worst) {
        worst = value;
        witness = Witness{i, detail::describe_rule(f)};
      }
      // Odometer over all m^m images.
      int pos = 0;
      while (pos < m && image[static_cast<std::size_t>(pos)] == m) {
        image[static_cast<std::size_t>(pos)] = 1;
        ++pos;
      }
      if (pos == m) break;
      ++image[static_cast<std::size_t>(pos)];
    }
  }
  return detail::make_report(Definition::CE_rule, eps, worst, witness);
}

}  // namespace sparseq
