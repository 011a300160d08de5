#pragma once

// Normal-form games with n players and m actions per player, payoffs
// normalized to [0, 1], plus the probability objects and regret formulas the
// rest of the library is built on.
//
// Indexing conventions, shared with the JSON file formats:
//   * players and actions are 1-based in the public interface;
//   * a profile (a_1, ..., a_n) maps to the flat 0-based index
//       sum_i (a_i - 1) * m^(n - i)
//     i.e. mixed radix with player 1 most significant;
//   * the dense payoff array stores n consecutive values per profile
//     (player 1 first), profiles in flat-index order.

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparseq {

inline constexpr double kProbTolerance = 1e-9;

/// One action per player; actions[i-1] is player i's action in [1, m].
struct ActionProfile {
  std::vector<int> actions;

  ActionProfile() = default;
  explicit ActionProfile(std::vector<int> a) : actions(std::move(a)) {}

  int num_players() const { return static_cast<int>(actions.size()); }
  bool operator==(const ActionProfile&) const = default;
};

class Game {
 public:
  Game(int num_players, int num_actions, std::vector<double> payoffs,
       std::string label = "")
      : n_(num_players), m_(num_actions), payoffs_(std::move(payoffs)),
        label_(std::move(label)) {
    if (n_ < 1 || m_ < 1) throw std::invalid_argument("Game: need n >= 1 and m >= 1");
    num_profiles_ = 1;
    strides_.assign(static_cast<std::size_t>(n_), 1);
    for (int i = n_ - 1; i >= 0; --i) {
      strides_[static_cast<std::size_t>(i)] = num_profiles_;
      if (num_profiles_ > (std::size_t(1) << 40) / static_cast<std::size_t>(m_))
        throw std::invalid_argument("Game: profile space too large");
      num_profiles_ *= static_cast<std::size_t>(m_);
    }
    if (payoffs_.size() != num_profiles_ * static_cast<std::size_t>(n_))
      throw std::invalid_argument("Game: payoff array must hold n*m^n values");
    for (double u : payoffs_)
      if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
        throw std::invalid_argument("Game: payoffs must lie in [0, 1]");
  }

  int num_players() const { return n_; }
  int num_actions() const { return m_; }
  std::size_t num_profiles() const { return num_profiles_; }
  const std::string& label() const { return label_; }
  const std::vector<double>& payoffs() const { return payoffs_; }

  /// Flat-index distance between consecutive actions of `player`.
  std::size_t stride(int player) const {
    check_player(player);
    return strides_[static_cast<std::size_t>(player - 1)];
  }

  std::size_t profile_index(const ActionProfile& a) const {
    if (a.num_players() != n_)
      throw std::invalid_argument("profile_index: wrong profile length");
    std::size_t idx = 0;
    for (int i = 1; i <= n_; ++i) {
      const int ai = a.actions[static_cast<std::size_t>(i - 1)];
      if (ai < 1 || ai > m_)
        throw std::invalid_argument("profile_index: action out of range");
      idx += static_cast<std::size_t>(ai - 1) * strides_[static_cast<std::size_t>(i - 1)];
    }
    return idx;
  }

  ActionProfile profile_at(std::size_t idx) const {
    check_index(idx);
    std::vector<int> a(static_cast<std::size_t>(n_));
    for (int i = 1; i <= n_; ++i)
      a[static_cast<std::size_t>(i - 1)] = action_of(idx, i);
    return ActionProfile(std::move(a));
  }

  /// Player `player`'s action at the profile with flat index `idx`.
  int action_of(std::size_t idx, int player) const {
    return static_cast<int>(idx / stride(player) % static_cast<std::size_t>(m_)) + 1;
  }

  /// Flat index of `idx` with player `player`'s action replaced by `action`.
  std::size_t with_action(std::size_t idx, int player, int action) const {
    check_action(action);
    const auto s = static_cast<std::ptrdiff_t>(stride(player));
    const std::ptrdiff_t delta = action - action_of(idx, player);
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + delta * s);
  }

  double payoff_at(std::size_t idx, int player) const {
    check_index(idx);
    check_player(player);
    return payoffs_[idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(player - 1)];
  }

 private:
  void check_player(int player) const {
    if (player < 1 || player > n_)
      throw std::invalid_argument("player index out of range");
  }
  void check_action(int action) const {
    if (action < 1 || action > m_)
      throw std::invalid_argument("action index out of range");
  }
  void check_index(std::size_t idx) const {
    if (idx >= num_profiles_)
      throw std::invalid_argument("profile index out of range");
  }

  int n_;
  int m_;
  std::vector<double> payoffs_;
  std::string label_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_;
};

/// Sparse probability distribution over action profiles, keyed by flat index.
/// Entries are strictly positive and sum to 1 within kProbTolerance.
class JointDistribution {
 public:
  JointDistribution(int num_players, int num_actions,
                    std::map<std::size_t, double> mass)
      : n_(num_players), m_(num_actions), mass_(std::move(mass)) {
    std::size_t limit = 1;
    for (int i = 0; i < n_; ++i) limit *= static_cast<std::size_t>(m_);
    double total = 0.0;
    for (const auto& [idx, p] : mass_) {
      if (idx >= limit)
        throw std::invalid_argument("JointDistribution: profile index out of range");
      if (!(p > 0.0))
        throw std::invalid_argument("JointDistribution: masses must be strictly positive");
      total += p;
    }
    if (std::abs(total - 1.0) > kProbTolerance)
      throw std::invalid_argument("JointDistribution: masses must sum to 1");
  }

  /// Drops entries at or below `drop_tol` and rescales the rest to sum to 1.
  static JointDistribution normalized(int num_players, int num_actions,
                                      const std::map<std::size_t, double>& weights,
                                      double drop_tol = 1e-12) {
    std::map<std::size_t, double> mass;
    double total = 0.0;
    for (const auto& [idx, w] : weights) {
      if (w > drop_tol) {
        mass[idx] = w;
        total += w;
      }
    }
    if (!(total > 0.0))
      throw std::invalid_argument("JointDistribution: no positive mass");
    for (auto& [idx, w] : mass) w /= total;
    return JointDistribution(num_players, num_actions, std::move(mass));
  }

  static JointDistribution point_mass(const Game& game, const ActionProfile& a) {
    return JointDistribution(game.num_players(), game.num_actions(),
                             {{game.profile_index(a), 1.0}});
  }

  int num_players() const { return n_; }
  int num_actions() const { return m_; }
  const std::map<std::size_t, double>& mass() const { return mass_; }
  int support_size() const { return static_cast<int>(mass_.size()); }

  double prob(std::size_t idx) const {
    auto it = mass_.find(idx);
    return it == mass_.end() ? 0.0 : it->second;
  }

  bool compatible_with(const Game& game) const {
    return n_ == game.num_players() && m_ == game.num_actions();
  }

  /// Marginal action distribution of one player, indexed by action - 1.
  std::vector<double> marginal(const Game& game, int player) const {
    require_compatible(game);
    std::vector<double> out(static_cast<std::size_t>(m_), 0.0);
    for (const auto& [idx, p] : mass_)
      out[static_cast<std::size_t>(game.action_of(idx, player) - 1)] += p;
    return out;
  }

  void require_compatible(const Game& game) const {
    if (!compatible_with(game))
      throw std::invalid_argument("distribution does not match game dimensions");
  }

 private:
  int n_;
  int m_;
  std::map<std::size_t, double> mass_;
};

/// Size-k multiset of profiles; stands for the uniform distribution over its
/// entries (the "k-uniform" object every sampling bound talks about).
class KUniformMultiset {
 public:
  KUniformMultiset(int num_players, int num_actions, std::vector<std::size_t> samples)
      : n_(num_players), m_(num_actions), samples_(std::move(samples)) {
    if (samples_.empty())
      throw std::invalid_argument("KUniformMultiset: need k >= 1");
    std::size_t limit = 1;
    for (int i = 0; i < n_; ++i) limit *= static_cast<std::size_t>(m_);
    for (std::size_t idx : samples_)
      if (idx >= limit)
        throw std::invalid_argument("KUniformMultiset: profile index out of range");
  }

  static KUniformMultiset from_profiles(const Game& game,
                                        const std::vector<ActionProfile>& profiles) {
    std::vector<std::size_t> s;
    s.reserve(profiles.size());
    for (const auto& p : profiles) s.push_back(game.profile_index(p));
    return KUniformMultiset(game.num_players(), game.num_actions(), std::move(s));
  }

  int num_players() const { return n_; }
  int num_actions() const { return m_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<std::size_t>& samples() const { return samples_; }

  JointDistribution to_distribution() const {
    std::map<std::size_t, double> mass;
    const double k = static_cast<double>(samples_.size());
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t idx : samples_) ++counts[idx];
    for (const auto& [idx, c] : counts) mass[idx] = static_cast<double>(c) / k;
    return JointDistribution(n_, m_, std::move(mass));
  }

  bool operator==(const KUniformMultiset&) const = default;

 private:
  int n_;
  int m_;
  std::vector<std::size_t> samples_;
};

/// Deviation map f: A_i -> A_i for one player; map[j-1] = f(j).
struct SwitchingRule {
  int player = 1;
  std::vector<int> map;

  SwitchingRule() = default;
  SwitchingRule(int player_index, std::vector<int> images)
      : player(player_index), map(std::move(images)) {
    for (int j : map)
      if (j < 1 || j > static_cast<int>(map.size()))
        throw std::invalid_argument("SwitchingRule: image out of range");
  }

  static SwitchingRule identity(int player_index, int num_actions) {
    std::vector<int> f(static_cast<std::size_t>(num_actions));
    for (int j = 1; j <= num_actions; ++j) f[static_cast<std::size_t>(j - 1)] = j;
    return SwitchingRule(player_index, std::move(f));
  }

  static SwitchingRule constant(int player_index, int num_actions, int target) {
    return SwitchingRule(player_index,
                         std::vector<int>(static_cast<std::size_t>(num_actions), target));
  }

  int apply(int action) const { return map[static_cast<std::size_t>(action - 1)]; }

  bool is_identity() const {
    for (std::size_t j = 0; j < map.size(); ++j)
      if (map[j] != static_cast<int>(j) + 1) return false;
    return true;
  }

  bool operator==(const SwitchingRule&) const = default;
};

/// Single player's randomization over her own actions; probs[j-1] = P(j).
struct MixedStrategy {
  int player = 1;
  std::vector<double> probs;

  MixedStrategy() = default;
  MixedStrategy(int player_index, std::vector<double> p)
      : player(player_index), probs(std::move(p)) {
    double total = 0.0;
    for (double q : probs) {
      if (q < -1e-12) throw std::invalid_argument("MixedStrategy: negative probability");
      total += q;
    }
    if (std::abs(total - 1.0) > kProbTolerance)
      throw std::invalid_argument("MixedStrategy: probabilities must sum to 1");
  }

  /// Actions played with strictly positive probability (the set B_i).
  std::vector<int> support() const {
    std::vector<int> out;
    for (std::size_t j = 0; j < probs.size(); ++j)
      if (probs[j] > 0.0) out.push_back(static_cast<int>(j) + 1);
    return out;
  }
};

/// Independent product of per-player mixed strategies as a JointDistribution.
inline JointDistribution product_distribution(const Game& game,
                                              const std::vector<MixedStrategy>& strategies) {
  const int n = game.num_players();
  if (static_cast<int>(strategies.size()) != n)
    throw std::invalid_argument("product_distribution: need one strategy per player");
  for (int i = 1; i <= n; ++i) {
    const auto& s = strategies[static_cast<std::size_t>(i - 1)];
    if (s.player != i || static_cast<int>(s.probs.size()) != game.num_actions())
      throw std::invalid_argument("product_distribution: strategy/player mismatch");
  }
  std::map<std::size_t, double> mass;
  std::vector<int> actions(static_cast<std::size_t>(n), 1);
  // Depth-first walk over the product of the supports.
  auto rec = [&](auto&& self, int player, double p) -> void {
    if (player > n) {
      mass[game.profile_index(ActionProfile(actions))] += p;
      return;
    }
    const auto& probs = strategies[static_cast<std::size_t>(player - 1)].probs;
    for (int j = 1; j <= game.num_actions(); ++j) {
      const double q = probs[static_cast<std::size_t>(j - 1)];
      if (q > 0.0) {
        actions[static_cast<std::size_t>(player - 1)] = j;
        self(self, player + 1, p * q);
      }
    }
  };
  rec(rec, 1, 1.0);
  return JointDistribution(n, game.num_actions(), std::move(mass));
}

// ---------------------------------------------------------------------------
// Payoff and regret formulas.

inline double payoff(const Game& game, int player, const ActionProfile& a) {
  return game.payoff_at(game.profile_index(a), player);
}

/// Regret of `player` for not playing `action` at profile index `idx`.
inline double regret_action_at(const Game& game, int player, int action, std::size_t idx) {
  return game.payoff_at(game.with_action(idx, player, action), player) -
         game.payoff_at(idx, player);
}

inline double regret_action(const Game& game, int player, int action,
                            const ActionProfile& a) {
  return regret_action_at(game, player, action, game.profile_index(a));
}

/// Regret of `player` for not applying switching rule `f` at `idx`.
inline double regret_rule_at(const Game& game, int player, const SwitchingRule& f,
                             std::size_t idx) {
  if (f.player != player)
    throw std::invalid_argument("regret_rule: rule belongs to another player");
  if (static_cast<int>(f.map.size()) != game.num_actions())
    throw std::invalid_argument("regret_rule: rule has wrong arity");
  const int target = f.apply(game.action_of(idx, player));
  return regret_action_at(game, player, target, idx);
}

inline double regret_rule(const Game& game, int player, const SwitchingRule& f,
                          const ActionProfile& a) {
  return regret_rule_at(game, player, f, game.profile_index(a));
}

inline double expected_regret(const Game& game, int player, int action,
                              const JointDistribution& x) {
  x.require_compatible(game);
  double total = 0.0;
  for (const auto& [idx, p] : x.mass())
    total += p * regret_action_at(game, player, action, idx);
  return total;
}

inline double expected_regret(const Game& game, int player, const SwitchingRule& f,
                              const JointDistribution& x) {
  x.require_compatible(game);
  double total = 0.0;
  for (const auto& [idx, p] : x.mass())
    total += p * regret_rule_at(game, player, f, idx);
  return total;
}

/// Mean regret over the multiset entries, (1/k) sum_l R(a(l)).
inline double expected_regret(const Game& game, int player, int action,
                              const KUniformMultiset& s) {
  double total = 0.0;
  for (std::size_t idx : s.samples())
    total += regret_action_at(game, player, action, idx);
  return total / static_cast<double>(s.size());
}

inline double expected_regret(const Game& game, int player, const SwitchingRule& f,
                              const KUniformMultiset& s) {
  double total = 0.0;
  for (std::size_t idx : s.samples())
    total += regret_rule_at(game, player, f, idx);
  return total / static_cast<double>(s.size());
}

}  // namespace sparseq
