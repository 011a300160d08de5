#pragma once

// Game constructions: the 2x2 parameterized zero-sum game and its n-pair
// chain, match/mismatch and cyclic games, the matching-pennies-with-dummies
// example, random games, the exact-cover reduction, and the partial-sum
// generator search.
//
// Raw payoffs of the zero-sum constructions live in {-1, 0, 1} (or {v, 0, 1}
// for the parameterized game); every generator applies one affine map to all
// players so stored utilities land in [0, 1]. The map is recorded on the game
// label. For +-1 games it is u -> (u+1)/2, which halves payoff differences:
// a raw deviation gain g corresponds to a normalized gain g/2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparseq/budget.hpp"
#include "sparseq/game.hpp"
#include "sparseq/rng.hpp"

namespace sparseq {

/// 2-player 2-action zero-sum game with raw row-player payoffs
///   [[v, 0], [0, 1]]
/// and column player the negation. Normalized by u -> (u+M)/(2M) with
/// M = max(v, 1), i.e. (u+v)/(2v) for the usual v >= 1 case. Its unique
/// correlated equilibrium is the product of the marginals
/// (1/(v+1), v/(v+1)) for each player.
inline Game gen_figure1(double v) {
  if (!(v > 0.0)) throw std::invalid_argument("gen_figure1: need v > 0");
  const double bound = std::max(v, 1.0);  // raw payoffs lie in [-bound, bound]
  auto norm = [&](double u) { return (u + bound) / (2.0 * bound); };
  std::vector<double> payoffs;
  payoffs.reserve(8);
  const double raw1[2][2] = {{v, 0.0}, {0.0, 1.0}};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      payoffs.push_back(norm(raw1[a][b]));
      payoffs.push_back(norm(-raw1[a][b]));
    }
  std::ostringstream label;
  label << "figure1 v=" << v << " [u->(u+" << bound << ")/" << 2.0 * bound << "]";
  return Game(2, 2, std::move(payoffs), label.str());
}

/// The unique-correlated-equilibrium cell masses of gen_figure1(v):
/// [1, v, v, v^2] / (v+1)^2 in flat-index order.
inline JointDistribution figure1_unique_ce(const Game& game, double v) {
  const double d = (v + 1.0) * (v + 1.0);
  std::map<std::size_t, double> mass{
      {0, 1.0 / d}, {1, v / d}, {2, v / d}, {3, v * v / d}};
  return JointDistribution(game.num_players(), game.num_actions(), std::move(mass));
}

/// n independent pairs of players; pair i plays gen_figure1 with v_i = 2^i - 1.
/// Players 2i-1 and 2i form pair i; their payoffs ignore all other pairs.
inline Game gen_scaled_pennies_chain(int pairs) {
  if (pairs < 1) throw std::invalid_argument("gen_scaled_pennies_chain: need pairs >= 1");
  if (pairs > 6) throw BudgetError("gen_scaled_pennies_chain: pairs > 6 over budget");
  const int n = 2 * pairs;
  const std::size_t profiles = std::size_t(1) << n;
  std::vector<double> payoffs(profiles * static_cast<std::size_t>(n));
  std::vector<Game> pair_games;
  for (int i = 1; i <= pairs; ++i)
    pair_games.push_back(gen_figure1(std::pow(2.0, i) - 1.0));

  Game skeleton(n, 2, std::vector<double>(profiles * static_cast<std::size_t>(n), 0.0));
  for (std::size_t idx = 0; idx < profiles; ++idx) {
    for (int i = 1; i <= pairs; ++i) {
      const int a = skeleton.action_of(idx, 2 * i - 1);
      const int b = skeleton.action_of(idx, 2 * i);
      const Game& pg = pair_games[static_cast<std::size_t>(i - 1)];
      const std::size_t pair_idx = pg.profile_index(ActionProfile({a, b}));
      payoffs[idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(2 * i - 2)] =
          pg.payoff_at(pair_idx, 1);
      payoffs[idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(2 * i - 1)] =
          pg.payoff_at(pair_idx, 2);
    }
  }
  return Game(n, 2, std::move(payoffs),
              "chain pairs=" + std::to_string(pairs) + " [v_i=2^i-1, per-pair norm]");
}

/// 2-player m-action zero-sum game: player 1 wants to match, player 2 to
/// mismatch. Raw u1 = 1 if a=b else 0, u2 = -u1; normalized by u -> (u+1)/2.
inline Game gen_matching_game(int m) {
  if (m < 2) throw std::invalid_argument("gen_matching_game: need m >= 2");
  std::vector<double> payoffs;
  payoffs.reserve(2 * static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      const double raw = a == b ? 1.0 : 0.0;
      payoffs.push_back((raw + 1.0) / 2.0);
      payoffs.push_back((-raw + 1.0) / 2.0);
    }
  return Game(2, m, std::move(payoffs),
              "matching m=" + std::to_string(m) + " [u->(u+1)/2]");
}

/// Cyclic m-action (m odd) generalization of rock-paper-scissors: each action
/// beats the (m-1)/2 actions preceding it cyclically. Raw payoffs +-1 with 0
/// on ties, normalized by u -> (u+1)/2.
inline Game gen_rps(int m) {
  if (m < 3 || m % 2 == 0) throw std::invalid_argument("gen_rps: need odd m >= 3");
  const int half = (m - 1) / 2;
  auto beats = [&](int a, int b) {
    const int gap = ((a - b) % m + m) % m;
    return gap >= 1 && gap <= half;
  };
  std::vector<double> payoffs;
  payoffs.reserve(2 * static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      const double raw = a == b ? 0.0 : (beats(a, b) ? 1.0 : -1.0);
      payoffs.push_back((raw + 1.0) / 2.0);
      payoffs.push_back((-raw + 1.0) / 2.0);
    }
  return Game(2, m, std::move(payoffs), "rps m=" + std::to_string(m) + " [u->(u+1)/2]");
}

/// Matching pennies with dummy numbers: each player's action is a pair
/// (r, d) with r in {+1, -1} and d in [m], encoded as action r_idx*m + d with
/// r_idx = 0 for r = +1 and 1 for r = -1. Raw u1 = r1*r2 = -u2, so d is
/// payoff-irrelevant. Returns the game together with the exact correlated
/// equilibrium that draws d uniformly and then r1, r2 independently uniform:
/// 4m profiles of mass 1/(4m) each.
struct DummyPennies {
  Game game;
  JointDistribution equilibrium;
};

inline int dummy_pennies_action(int m, int r_sign, int d) {
  return (r_sign > 0 ? 0 : m) + d;
}

inline int dummy_pennies_dummy_of(int m, int action) {
  return (action - 1) % m + 1;
}

inline DummyPennies gen_dummy_pennies(int m) {
  if (m < 1) throw std::invalid_argument("gen_dummy_pennies: need m >= 1");
  const int actions = 2 * m;
  const std::size_t profiles = static_cast<std::size_t>(actions) * actions;
  std::vector<double> payoffs(profiles * 2);
  Game skeleton(2, actions, std::vector<double>(profiles * 2, 0.0));
  for (std::size_t idx = 0; idx < profiles; ++idx) {
    const int r1 = skeleton.action_of(idx, 1) <= m ? 1 : -1;
    const int r2 = skeleton.action_of(idx, 2) <= m ? 1 : -1;
    const double raw = static_cast<double>(r1 * r2);
    payoffs[idx * 2] = (raw + 1.0) / 2.0;
    payoffs[idx * 2 + 1] = (-raw + 1.0) / 2.0;
  }
  Game game(2, actions, std::move(payoffs),
            "dummy-pennies m=" + std::to_string(m) + " [u->(u+1)/2]");
  std::map<std::size_t, double> mass;
  const double p = 1.0 / (4.0 * m);
  for (int d = 1; d <= m; ++d)
    for (int r1 : {1, -1})
      for (int r2 : {1, -1}) {
        const ActionProfile a({dummy_pennies_action(m, r1, d),
                               dummy_pennies_action(m, r2, d)});
        mass[game.profile_index(a)] = p;
      }
  JointDistribution eq(2, actions, std::move(mass));
  return DummyPennies{std::move(game), std::move(eq)};
}

/// i.i.d. uniform [0,1] payoffs from a seeded generator.
inline Game gen_random_game(int n, int m, std::uint64_t seed,
                            const Budget& budget = Budget::from_env()) {
  if (n < 1 || m < 1) throw std::invalid_argument("gen_random_game: need n, m >= 1");
  double size = static_cast<double>(n);
  for (int i = 0; i < n; ++i) size *= static_cast<double>(m);
  if (size > static_cast<double>(budget.lp_variable_cap) * 64.0)
    throw BudgetError("gen_random_game: payoff array over budget");
  Rng rng(seed);
  std::size_t profiles = 1;
  for (int i = 0; i < n; ++i) profiles *= static_cast<std::size_t>(m);
  std::vector<double> payoffs(profiles * static_cast<std::size_t>(n));
  for (double& u : payoffs) u = rng.uniform01();
  std::ostringstream label;
  label << "random n=" << n << " m=" << m << " seed=" << seed;
  return Game(n, m, std::move(payoffs), label.str());
}

/// Exact cover by 3-sets instance: a universe [1, universe_size] with
/// |universe| divisible by 3 and a collection of 3-element subsets covering
/// every element at least once.
struct X3CInstance {
  int universe_size = 0;
  std::vector<std::vector<int>> sets;

  void validate() const {
    if (universe_size < 3 || universe_size % 3 != 0)
      throw std::invalid_argument("X3CInstance: universe size must be a positive multiple of 3");
    if (sets.empty()) throw std::invalid_argument("X3CInstance: empty collection");
    std::vector<bool> covered(static_cast<std::size_t>(universe_size) + 1, false);
    for (const auto& s : sets) {
      if (s.size() != 3) throw std::invalid_argument("X3CInstance: sets must have 3 elements");
      std::set<int> distinct(s.begin(), s.end());
      if (distinct.size() != 3)
        throw std::invalid_argument("X3CInstance: set elements must be distinct");
      for (int e : s) {
        if (e < 1 || e > universe_size)
          throw std::invalid_argument("X3CInstance: element out of range");
        covered[static_cast<std::size_t>(e)] = true;
      }
    }
    for (int e = 1; e <= universe_size; ++e)
      if (!covered[static_cast<std::size_t>(e)])
        throw std::invalid_argument("X3CInstance: element " + std::to_string(e) +
                                    " is not covered by any set");
  }
};

/// Zero-sum set-cover game: the row player picks a set, the column player an
/// element; raw payoff +1 to the row player if the element is covered, else
/// -1. Normalized by u -> (u+1)/2, which turns u1 into the cover indicator.
/// When |collection| != |universe| the shorter side is padded with exact
/// duplicates of its first action, which preserves values and equilibria;
/// support counts over distinct original actions are unaffected because the
/// deterministic sparsest searches prefer the lowest-index (original) copies.
inline Game x3c_reduce(const X3CInstance& inst) {
  inst.validate();
  const int rows = static_cast<int>(inst.sets.size());
  const int cols = inst.universe_size;
  const int m = std::max(rows, cols);
  std::vector<double> payoffs;
  payoffs.reserve(2 * static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const auto& set = inst.sets[static_cast<std::size_t>(i <= rows ? i - 1 : 0)];
    for (int j = 1; j <= m; ++j) {
      const int element = j <= cols ? j : 1;
      const bool in_set = std::find(set.begin(), set.end(), element) != set.end();
      const double raw = in_set ? 1.0 : -1.0;
      payoffs.push_back((raw + 1.0) / 2.0);
      payoffs.push_back((-raw + 1.0) / 2.0);
    }
  }
  std::ostringstream label;
  label << "x3c |J|=" << cols << " |I|=" << rows << " [u->(u+1)/2]";
  return Game(2, m, std::move(payoffs), label.str());
}

// ---------------------------------------------------------------------------
// Partial-sum generator search (exact rational arithmetic).

namespace detail {

struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return Rational{g ? n / g : 0, g ? d / g : 1};
  }

  Rational operator+(const Rational& o) const {
    return make(num * o.den + o.num * den, den * o.den);
  }
  Rational operator-(const Rational& o) const {
    return make(num * o.den - o.num * den, den * o.den);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
  bool positive() const { return num > 0; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Best rational approximation with bounded denominator (continued fractions).
inline Rational to_rational(double x, long long max_den = 1 << 20) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::invalid_argument("min_partial_sum_generators: targets must be positive");
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(v);
    const long long a = static_cast<long long>(fl);
    if (p1 > (std::numeric_limits<long long>::max() - p0) / std::max(a, 1ll)) break;
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  const Rational r = Rational::make(p1, q1);
  if (std::abs(r.value() - x) > 1e-9)
    throw std::invalid_argument("min_partial_sum_generators: target is not a small rational");
  return r;
}

}  // namespace detail

/// Minimum size of a positive multiset P such that every target is an exact
/// subset sum of P. Candidate generator values are drawn from the closure of
/// the targets under pairwise sums and differences (two rounds, clipped to
/// (0, max target]); for dyadic targets the optimum lies in this closure.
inline int min_partial_sum_generators(const std::vector<double>& targets) {
  using detail::Rational;
  if (targets.empty())
    throw std::invalid_argument("min_partial_sum_generators: empty target list");
  if (targets.size() > 5)
    throw BudgetError("min_partial_sum_generators: more than 5 targets over budget");

  std::vector<Rational> goals;
  for (double t : targets) goals.push_back(detail::to_rational(t));
  Rational max_goal = goals.front();
  for (const auto& g : goals)
    if (max_goal < g) max_goal = g;

  // Candidate pool: closure under sums/differences, two rounds.
  std::set<std::pair<long long, long long>> pool_keys;
  std::vector<Rational> pool = goals;
  for (const auto& g : pool) pool_keys.insert({g.num, g.den});
  for (int round = 0; round < 2; ++round) {
    const std::vector<Rational> snapshot = pool;
    for (std::size_t a = 0; a < snapshot.size(); ++a) {
      for (std::size_t b = a; b < snapshot.size(); ++b) {
        for (const Rational& cand :
             {snapshot[a] + snapshot[b], snapshot[a] - snapshot[b], snapshot[b] - snapshot[a]}) {
          if (!cand.positive() || max_goal < cand) continue;
          if (pool_keys.insert({cand.num, cand.den}).second) pool.push_back(cand);
          if (pool.size() > 64) throw BudgetError("min_partial_sum_generators: candidate pool over budget");
        }
      }
    }
  }
  std::sort(pool.begin(), pool.end());

  auto covers_all = [&](const std::vector<Rational>& multiset) {
    for (const auto& goal : goals) {
      bool found = false;
      const std::size_t subsets = std::size_t(1) << multiset.size();
      for (std::size_t bits = 1; bits < subsets && !found; ++bits) {
        Rational sum{0, 1};
        for (std::size_t j = 0; j < multiset.size(); ++j)
          if (bits & (std::size_t(1) << j)) sum = sum + multiset[j];
        if (sum == goal) found = true;
      }
      if (!found) return false;
    }
    return true;
  };

  // Multisets of size k in nondecreasing pool order; the targets themselves
  // always work, so k <= |targets|.
  for (int k = 1; k <= static_cast<int>(goals.size()); ++k) {
    std::vector<std::size_t> choice(static_cast<std::size_t>(k), 0);
    while (true) {
      std::vector<Rational> multiset;
      for (std::size_t c : choice) multiset.push_back(pool[c]);
      if (covers_all(multiset)) return k;
      // Next combination with repetition.
      int pos = k - 1;
      while (pos >= 0 && choice[static_cast<std::size_t>(pos)] == pool.size() - 1) --pos;
      if (pos < 0) break;
      const std::size_t next = choice[static_cast<std::size_t>(pos)] + 1;
      for (std::size_t j = static_cast<std::size_t>(pos); j < choice.size(); ++j)
        choice[j] = next;
    }
  }
  return static_cast<int>(goals.size());
}

}  // namespace sparseq
