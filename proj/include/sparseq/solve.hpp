#pragma once

// Equilibrium computation: feasibility/optimization over the CE and CCE
// polytopes (full joint simplex, desk scale), maxmin strategies of two-player
// constant-sum games, regret-matching dynamics, and the exponential-time
// sparsest-equilibrium searches used as hardness-side oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sparseq/budget.hpp"
#include "sparseq/game.hpp"
#include "sparseq/rng.hpp"
#include "sparseq/simplex.hpp"
#include "sparseq/verify.hpp"

namespace sparseq {

inline constexpr double kEquilibriumTol = 1e-7;

enum class EquilibriumKind { CE, CCE, NE_product };

inline std::string to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::CE: return "CE";
    case EquilibriumKind::CCE: return "CCE";
    case EquilibriumKind::NE_product: return "NE-product";
  }
  return "?";
}

struct EquilibriumSolution {
  JointDistribution distribution;
  EquilibriumKind kind = EquilibriumKind::CE;
  std::string solver;
  int support_size = 0;
  std::vector<MixedStrategy> factors;  // per-player strategies for NE_product
};

struct LpObjective {
  enum class Sense { AnyFeasible, Minimize, Maximize };
  Sense sense = Sense::AnyFeasible;
  std::vector<double> coeffs;  // one per profile when sense != AnyFeasible

  static LpObjective any_feasible() { return {}; }
  static LpObjective minimize(std::vector<double> c) {
    return LpObjective{Sense::Minimize, std::move(c)};
  }
  static LpObjective maximize(std::vector<double> c) {
    return LpObjective{Sense::Maximize, std::move(c)};
  }
};

namespace detail {

enum class ConstraintKind { CE, CCE };

/// Equilibrium feasibility LP over the given profiles (variables in the same
/// order as `support`): all deviation inequalities <= 0 plus sum x = 1.
inline LinearProgram make_equilibrium_lp(const Game& game, ConstraintKind kind,
                                         const std::vector<std::size_t>& support) {
  LinearProgram lp;
  lp.num_vars = support.size();
  const int n = game.num_players();
  const int m = game.num_actions();
  const bool per_recommendation = kind == ConstraintKind::CE;
  // CE: one row per (player, recommended action, deviation); CCE: one row per
  // (player, deviation), summing over all recommendations.
  const int rec_count = per_recommendation ? m : 1;
  for (int i = 1; i <= n; ++i) {
    for (int rec = 1; rec <= rec_count; ++rec) {
      for (int j = 1; j <= m; ++j) {
        if (per_recommendation && j == rec) continue;
        std::vector<double> row(lp.num_vars, 0.0);
        bool nonzero = false;
        for (std::size_t s = 0; s < support.size(); ++s) {
          const std::size_t idx = support[s];
          if (per_recommendation && game.action_of(idx, i) != rec) continue;
          const double coef = regret_action_at(game, i, j, idx);
          if (coef != 0.0) {
            row[s] = coef;
            nonzero = true;
          }
        }
        if (nonzero) lp.add_row(std::move(row), LinearProgram::Relation::LessEq, 0.0);
      }
    }
  }
  lp.add_row(std::vector<double>(lp.num_vars, 1.0), LinearProgram::Relation::Equal, 1.0);
  return lp;
}

inline std::vector<std::size_t> all_profiles(const Game& game) {
  std::vector<std::size_t> out(game.num_profiles());
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = idx;
  return out;
}

inline JointDistribution distribution_from_lp(const Game& game,
                                              const std::vector<std::size_t>& support,
                                              const std::vector<double>& x) {
  std::map<std::size_t, double> weights;
  for (std::size_t s = 0; s < support.size(); ++s)
    if (x[s] > 0.0) weights[support[s]] += x[s];
  return JointDistribution::normalized(game.num_players(), game.num_actions(), weights);
}

inline EquilibriumSolution solve_equilibrium_lp(const Game& game, ConstraintKind kind,
                                                const LpObjective& objective,
                                                const Budget& budget) {
  if (game.num_profiles() > budget.lp_variable_cap)
    throw BudgetError("equilibrium LP: profile count exceeds the variable cap");
  const std::vector<std::size_t> support = all_profiles(game);
  LinearProgram lp = make_equilibrium_lp(game, kind, support);
  if (objective.sense != LpObjective::Sense::AnyFeasible) {
    if (objective.coeffs.size() != game.num_profiles())
      throw std::invalid_argument("equilibrium LP: objective needs one coefficient per profile");
    lp.objective = objective.coeffs;
    if (objective.sense == LpObjective::Sense::Maximize)
      for (double& c : lp.objective) c = -c;
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverError("equilibrium LP: solver failed (an exact equilibrium always exists)");

  EquilibriumSolution out{distribution_from_lp(game, support, sol.x),
                          kind == ConstraintKind::CE ? EquilibriumKind::CE
                                                     : EquilibriumKind::CCE,
                          "simplex", 0, {}};
  out.support_size = out.distribution.support_size();
  const VerifyReport check = kind == ConstraintKind::CE
                                 ? verify_ce(game, out.distribution, 0.0)
                                 : verify_cce(game, out.distribution, 0.0);
  if (check.worst_value > kEquilibriumTol)
    throw SolverError("equilibrium LP: solution failed re-verification");
  return out;
}

}  // namespace detail

/// Exact CE via LP over all m^n profile variables.
inline EquilibriumSolution solve_ce_lp(const Game& game,
                                       const LpObjective& objective = LpObjective::any_feasible(),
                                       const Budget& budget = Budget::from_env()) {
  return detail::solve_equilibrium_lp(game, detail::ConstraintKind::CE, objective, budget);
}

/// Exact CCE via LP with the nm constant-deviation constraints.
inline EquilibriumSolution solve_cce_lp(const Game& game,
                                        const LpObjective& objective = LpObjective::any_feasible(),
                                        const Budget& budget = Budget::from_env()) {
  return detail::solve_equilibrium_lp(game, detail::ConstraintKind::CCE, objective, budget);
}

/// Basic feasible CE of the polytope; as a vertex its support size is at most
/// the constraint count nm(m-1) + 1.
inline EquilibriumSolution find_vertex_ce(const Game& game,
                                          const Budget& budget = Budget::from_env()) {
  EquilibriumSolution sol = solve_ce_lp(game, LpObjective::any_feasible(), budget);
  sol.solver = "simplex-vertex";
  return sol;
}

/// True iff every profile coordinate has equal min and max over the CE
/// polytope (within kEquilibriumTol), i.e. the game has a unique CE.
inline bool ce_polytope_is_singleton(const Game& game,
                                     const Budget& budget = Budget::from_env()) {
  if (game.num_profiles() > budget.lp_variable_cap)
    throw BudgetError("ce_polytope_is_singleton: profile count exceeds the variable cap");
  const std::vector<std::size_t> support = detail::all_profiles(game);
  const LinearProgram base = detail::make_equilibrium_lp(game, detail::ConstraintKind::CE, support);
  for (std::size_t p = 0; p < game.num_profiles(); ++p) {
    LinearProgram lp = base;
    lp.objective.assign(game.num_profiles(), 0.0);
    lp.objective[p] = 1.0;
    const LpSolution lo = solve_lp(lp);
    for (double& c : lp.objective) c = -c;
    const LpSolution hi = solve_lp(lp);
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
      throw SolverError("ce_polytope_is_singleton: coordinate LP failed");
    if (-hi.objective_value - lo.objective_value > kEquilibriumTol) return false;
  }
  return true;
}

namespace detail {

inline double constant_sum_of(const Game& game) {
  if (game.num_players() != 2)
    throw std::invalid_argument("expected a two-player game");
  const double c = game.payoff_at(0, 1) + game.payoff_at(0, 2);
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx)
    if (std::abs(game.payoff_at(idx, 1) + game.payoff_at(idx, 2) - c) > kProbTolerance)
      throw std::invalid_argument("expected a constant-sum (zero-sum up to shift) game");
  return c;
}

inline std::size_t pair_index(const Game& game, int player, int own, int other) {
  return player == 1 ? game.profile_index(ActionProfile({own, other}))
                     : game.profile_index(ActionProfile({other, own}));
}

}  // namespace detail

/// Optimal (maxmin) strategy and value for one player of a two-player
/// constant-sum game: maximize t subject to all pure opponent replies
/// yielding at least t.
inline std::pair<MixedStrategy, double> maxmin_strategy(const Game& game, int player) {
  detail::constant_sum_of(game);
  if (player < 1 || player > 2)
    throw std::invalid_argument("maxmin_strategy: player must be 1 or 2");
  const int m = game.num_actions();
  LinearProgram lp;
  lp.num_vars = static_cast<std::size_t>(m) + 1;  // sigma(1..m), t
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[static_cast<std::size_t>(m)] = -1.0;  // maximize t
  for (int b = 1; b <= m; ++b) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int a = 1; a <= m; ++a)
      row[static_cast<std::size_t>(a - 1)] =
          -game.payoff_at(detail::pair_index(game, player, a, b), player);
    row[static_cast<std::size_t>(m)] = 1.0;  // t - sigma . u <= 0
    lp.add_row(std::move(row), LinearProgram::Relation::LessEq, 0.0);
  }
  std::vector<double> sum_row(lp.num_vars, 1.0);
  sum_row[static_cast<std::size_t>(m)] = 0.0;
  lp.add_row(std::move(sum_row), LinearProgram::Relation::Equal, 1.0);

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverError("maxmin_strategy: LP failed");
  std::vector<double> probs(sol.x.begin(), sol.x.begin() + m);
  double total = 0.0;
  for (double& q : probs) {
    q = std::max(q, 0.0);
    total += q;
  }
  for (double& q : probs) q /= total;
  return {MixedStrategy(player, std::move(probs)), sol.x[static_cast<std::size_t>(m)]};
}

/// Conditional regret matching: each player tracks cumulative pair regrets
/// D(j, k) over the rounds where she played j, and after playing j switches
/// to k with probability max(D(j,k), 0) / (mu * t); the leftover probability
/// stays on j. mu = 2m keeps the rule well defined for [0,1] payoffs. The
/// first round is uniform. Returns the full T-round history; its empirical
/// single-switch regrets decay as O(1/sqrt(T)).
inline KUniformMultiset regret_matching(const Game& game, long long rounds,
                                        std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("regret_matching: need rounds >= 1");
  const int n = game.num_players();
  const int m = game.num_actions();
  const double mu = 2.0 * static_cast<double>(m);
  Rng rng(seed);

  // pair_regret[i-1][(j-1)*m + (k-1)] accumulates D_i(j, k).
  std::vector<std::vector<double>> pair_regret(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0));
  std::vector<int> prev(static_cast<std::size_t>(n), 1);
  std::vector<std::size_t> history;
  history.reserve(static_cast<std::size_t>(rounds));
  std::vector<double> weights(static_cast<std::size_t>(m));
  std::vector<int> actions(static_cast<std::size_t>(n));

  for (long long t = 0; t < rounds; ++t) {
    for (int i = 1; i <= n; ++i) {
      int choice;
      if (t == 0) {
        choice = rng.uniform_int(1, m);
      } else {
        const int j = prev[static_cast<std::size_t>(i - 1)];
        const auto& reg = pair_regret[static_cast<std::size_t>(i - 1)];
        double stay = 1.0;
        for (int k = 1; k <= m; ++k) {
          double w = 0.0;
          if (k != j) {
            w = std::max(reg[static_cast<std::size_t>(j - 1) * m + (k - 1)], 0.0) /
                (mu * static_cast<double>(t));
            stay -= w;
          }
          weights[static_cast<std::size_t>(k - 1)] = w;
        }
        weights[static_cast<std::size_t>(j - 1)] = stay;
        choice = static_cast<int>(rng.weighted_index(weights)) + 1;
      }
      actions[static_cast<std::size_t>(i - 1)] = choice;
    }
    const std::size_t idx = game.profile_index(ActionProfile(actions));
    history.push_back(idx);
    for (int i = 1; i <= n; ++i) {
      const int j = actions[static_cast<std::size_t>(i - 1)];
      auto& reg = pair_regret[static_cast<std::size_t>(i - 1)];
      for (int k = 1; k <= m; ++k)
        if (k != j)
          reg[static_cast<std::size_t>(j - 1) * m + (k - 1)] +=
              regret_action_at(game, i, k, idx);
      prev[static_cast<std::size_t>(i - 1)] = j;
    }
  }
  return KUniformMultiset(n, m, std::move(history));
}

namespace detail {

/// Number of size-k subsets, saturating at `cap`.
inline std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  double value = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    value *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (value > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(value + 0.5);
}

template <typename TryCombo>
inline bool enumerate_supports(std::size_t pool, int max_size, const Budget& budget,
                               const char* what, TryCombo&& try_combo) {
  std::size_t total = 0;
  for (int s = 1; s <= max_size; ++s) {
    total += binomial_capped(pool, static_cast<std::size_t>(s), budget.enumeration_cap);
    if (total > budget.enumeration_cap)
      throw BudgetError(std::string(what) + ": support enumeration over budget");
  }
  for (int s = 1; s <= max_size; ++s) {
    std::vector<std::size_t> combo(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) combo[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    while (true) {
      if (try_combo(combo)) return true;
      // Lexicographic next combination over [0, pool).
      int pos = s - 1;
      while (pos >= 0 &&
             combo[static_cast<std::size_t>(pos)] == pool - static_cast<std::size_t>(s - pos))
        --pos;
      if (pos < 0) break;
      ++combo[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < s; ++i)
        combo[static_cast<std::size_t>(i)] = combo[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return false;
}

inline std::optional<EquilibriumSolution> sparsest_bruteforce(const Game& game,
                                                              int max_support,
                                                              ConstraintKind kind,
                                                              const Budget& budget) {
  if (max_support < 1)
    throw std::invalid_argument("sparsest search: need max_support >= 1");
  const char* what = kind == ConstraintKind::CE ? "sparsest_ce" : "sparsest_cce";
  std::optional<EquilibriumSolution> found;
  enumerate_supports(
      game.num_profiles(),
      std::min<int>(max_support, static_cast<int>(game.num_profiles())), budget, what,
      [&](const std::vector<std::size_t>& combo) {
        const LinearProgram lp = make_equilibrium_lp(game, kind, combo);
        const LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::Optimal) return false;
        EquilibriumSolution out{distribution_from_lp(game, combo, sol.x),
                                kind == ConstraintKind::CE ? EquilibriumKind::CE
                                                           : EquilibriumKind::CCE,
                                "support-enumeration", 0, {}};
        out.support_size = out.distribution.support_size();
        const double worst = kind == ConstraintKind::CE
                                 ? verify_ce(game, out.distribution, 0.0).worst_value
                                 : verify_cce(game, out.distribution, 0.0).worst_value;
        if (worst > kEquilibriumTol) return false;
        found = std::move(out);
        return true;
      });
  return found;
}

}  // namespace detail

/// Smallest-support exact CE with support size <= max_support, by enumerating
/// support sets in (size, lexicographic) order and solving the restricted
/// feasibility LP; nullopt if every tried support is infeasible.
inline std::optional<EquilibriumSolution> sparsest_ce_bruteforce(
    const Game& game, int max_support, const Budget& budget = Budget::from_env()) {
  return detail::sparsest_bruteforce(game, max_support, detail::ConstraintKind::CE, budget);
}

/// CCE variant of the sparsest search (used for the support lower-bound
/// demonstrations).
inline std::optional<EquilibriumSolution> sparsest_cce_bruteforce(
    const Game& game, int max_support, const Budget& budget = Budget::from_env()) {
  return detail::sparsest_bruteforce(game, max_support, detail::ConstraintKind::CCE, budget);
}

/// Sparsest Nash equilibrium of a two-player constant-sum game: the pair of
/// optimal strategies minimizing |supp(sigma_1)| first and |supp(sigma_2)|
/// second, found by support enumeration over optimal-strategy LPs.
inline EquilibriumSolution sparsest_ne_bruteforce(const Game& game,
                                                  const Budget& budget = Budget::from_env()) {
  detail::constant_sum_of(game);
  const int m = game.num_actions();
  std::vector<MixedStrategy> factors;
  for (int player = 1; player <= 2; ++player) {
    const double value = maxmin_strategy(game, player).second;
    std::optional<MixedStrategy> best;
    detail::enumerate_supports(
        static_cast<std::size_t>(m), m, budget, "sparsest_ne",
        [&](const std::vector<std::size_t>& combo) {
          // Maximize the guarantee restricted to this support; the support is
          // accepted when the restricted value reaches the game value (within
          // tolerance), and the maximizing strategy is what gets returned.
          LinearProgram lp;
          lp.num_vars = combo.size() + 1;  // sigma over the support, then t
          lp.objective.assign(lp.num_vars, 0.0);
          lp.objective[combo.size()] = -1.0;
          for (int b = 1; b <= m; ++b) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t s = 0; s < combo.size(); ++s) {
              const int a = static_cast<int>(combo[s]) + 1;
              row[s] = -game.payoff_at(detail::pair_index(game, player, a, b), player);
            }
            row[combo.size()] = 1.0;
            lp.add_row(std::move(row), LinearProgram::Relation::LessEq, 0.0);
          }
          std::vector<double> sum_row(lp.num_vars, 1.0);
          sum_row[combo.size()] = 0.0;
          lp.add_row(std::move(sum_row), LinearProgram::Relation::Equal, 1.0);
          const LpSolution sol = solve_lp(lp);
          if (sol.status != LpStatus::Optimal) return false;
          if (sol.x[combo.size()] < value - kEquilibriumTol) return false;
          std::vector<double> probs(static_cast<std::size_t>(m), 0.0);
          double total = 0.0;
          for (std::size_t s = 0; s < combo.size(); ++s) {
            probs[combo[s]] = std::max(sol.x[s], 0.0);
            total += probs[combo[s]];
          }
          for (double& q : probs) q /= total;
          best = MixedStrategy(player, std::move(probs));
          return true;
        });
    if (!best) throw SolverError("sparsest_ne_bruteforce: no optimal support found");
    factors.push_back(std::move(*best));
  }
  EquilibriumSolution out{product_distribution(game, factors), EquilibriumKind::NE_product,
                          "support-enumeration", 0, factors};
  out.support_size = out.distribution.support_size();
  if (verify_ce(game, out.distribution, 0.0).worst_value > kEquilibriumTol)
    throw SolverError("sparsest_ne_bruteforce: product failed CE re-verification");
  return out;
}

/// True iff every positive-probability conditional of the exact CE `pi` is an
/// optimal strategy of the (constant-sum, two-player) game: conditioning on
/// either player's recommendation yields a maxmin strategy of the other.
inline bool ce_conditional_correspondence_check(const Game& game, const JointDistribution& pi,
                                                double value_tol = 1e-6) {
  detail::constant_sum_of(game);
  pi.require_compatible(game);
  if (verify_ce(game, pi, 0.0).worst_value > kEquilibriumTol)
    throw std::invalid_argument("ce_conditional_correspondence_check: pi is not an exact CE");
  const int m = game.num_actions();
  const double values[2] = {maxmin_strategy(game, 1).second, maxmin_strategy(game, 2).second};
  for (int observer = 1; observer <= 2; ++observer) {
    // Conditionals over the *other* player's actions, given the observer's
    // recommendation.
    const int other = 3 - observer;
    const double value = values[other - 1];
    const std::vector<double> marg = pi.marginal(game, observer);
    for (int rec = 1; rec <= m; ++rec) {
      if (marg[static_cast<std::size_t>(rec - 1)] <= 1e-12) continue;
      std::vector<double> conditional(static_cast<std::size_t>(m), 0.0);
      for (const auto& [idx, p] : pi.mass())
        if (game.action_of(idx, observer) == rec)
          conditional[static_cast<std::size_t>(game.action_of(idx, other) - 1)] +=
              p / marg[static_cast<std::size_t>(rec - 1)];
      // Guarantee of the conditional against every pure reply.
      double guarantee = 2.0;
      for (int b = 1; b <= m; ++b) {
        double u = 0.0;
        for (int a = 1; a <= m; ++a)
          u += conditional[static_cast<std::size_t>(a - 1)] *
               game.payoff_at(detail::pair_index(game, other, a, b), other);
        guarantee = std::min(guarantee, u);
      }
      if (guarantee < value - value_tol) return false;
    }
  }
  return true;
}

}  // namespace sparseq
