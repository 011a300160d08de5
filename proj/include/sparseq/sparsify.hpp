#pragma once

// Sample-based construction of k-uniform approximate equilibria: the
// closed-form sample-size bounds, the i.i.d. profile sampler, and the
// sample-verify-retry loops that turn an exact equilibrium into a small
// k-uniform one.
//
// All bounds use natural logarithms and the floor(...)+1 reading of the
// "k > floor(...)" / "k >= floor(...)" thresholds, i.e. the smallest integer
// strictly above the printed floor expression.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparseq/game.hpp"
#include "sparseq/rng.hpp"
#include "sparseq/verify.hpp"

namespace sparseq {

namespace detail {

inline void check_bound_args(int n, int m, double eps) {
  if (n < 1 || m < 1) throw std::invalid_argument("sample bound: need n, m >= 1");
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("sample bound: need epsilon in (0, 1]");
}

}  // namespace detail

/// Existence bound for k-uniform eps-CCE: floor(2(ln m + ln n)/eps^2) + 1.
inline long long k_bound_cce_exist(int n, int m, double eps) {
  detail::check_bound_args(n, m, eps);
  const double raw = 2.0 * (std::log(m) + std::log(n)) / (eps * eps);
  return static_cast<long long>(std::floor(raw)) + 1;
}

/// Algorithmic bound (success probability >= 1/2 per attempt):
/// floor(2(ln m + ln n + ln 2)/eps^2) + 1.
inline long long k_bound_cce_alg(int n, int m, double eps) {
  detail::check_bound_args(n, m, eps);
  const double raw = 2.0 * (std::log(m) + std::log(n) + std::log(2.0)) / (eps * eps);
  return static_cast<long long>(std::floor(raw)) + 1;
}

struct CeExistBound {
  long long k = 0;  // sample count
  long long b = 0;  // per-player support budget of the seed equilibrium
};

/// Existence bound for k-uniform eps-CE via small-support seeds:
///   k = floor(264 ln m (ln m + ln n - ln eps + ln 16)/eps^4) + 1,
///   b = ceil(32 (ln n + ln m - ln eps + ln 16)/eps^2).
inline CeExistBound k_bound_ce_exist(int n, int m, double eps) {
  detail::check_bound_args(n, m, eps);
  if (m < 2)
    throw std::invalid_argument("k_bound_ce_exist: bound degenerates for m < 2");
  const double inner = std::log(m) + std::log(n) - std::log(eps) + std::log(16.0);
  const double k_raw = 264.0 * std::log(m) * inner / (eps * eps * eps * eps);
  const double b_raw = 32.0 * inner / (eps * eps);
  return CeExistBound{static_cast<long long>(std::floor(k_raw)) + 1,
                      static_cast<long long>(std::ceil(b_raw))};
}

/// Algorithmic bound for sampling from an arbitrary exact CE:
/// floor(2(m ln m + ln n + ln 2)/eps^2) + 1.
inline long long k_bound_ce_alg(int n, int m, double eps) {
  detail::check_bound_args(n, m, eps);
  const double raw =
      2.0 * (m * std::log(m) + std::log(n) + std::log(2.0)) / (eps * eps);
  return static_cast<long long>(std::floor(raw)) + 1;
}

enum class BoundKind { CCE_exist, CCE_alg, CE_exist, CE_alg };

inline std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::CCE_exist: return "CCE_exist";
    case BoundKind::CCE_alg: return "CCE_alg";
    case BoundKind::CE_exist: return "CE_exist";
    case BoundKind::CE_alg: return "CE_alg";
  }
  return "?";
}

/// A sample-size bound instance: which closed form, its inputs, and the
/// resulting k (plus the seed-support budget b for the CE existence bound).
struct SampleBound {
  BoundKind kind = BoundKind::CCE_exist;
  int n = 1;
  int m = 1;
  double epsilon = 1.0;
  long long k = 1;
  std::optional<long long> b;

  static SampleBound compute(BoundKind kind, int n, int m, double eps) {
    SampleBound out{kind, n, m, eps, 0, std::nullopt};
    switch (kind) {
      case BoundKind::CCE_exist: out.k = k_bound_cce_exist(n, m, eps); break;
      case BoundKind::CCE_alg: out.k = k_bound_cce_alg(n, m, eps); break;
      case BoundKind::CE_exist: {
        const CeExistBound ce = k_bound_ce_exist(n, m, eps);
        out.k = ce.k;
        out.b = ce.b;
        break;
      }
      case BoundKind::CE_alg: out.k = k_bound_ce_alg(n, m, eps); break;
    }
    return out;
  }
};

/// Hoeffding tail for the empirical mean of k regrets in [-1, 1]:
/// e^{-k eps^2 / 2} when the true mean is <= 0, e^{-k eps^2 / 8} when it is
/// only <= eps/2 (the small-support seed case).
inline double hoeffding_failure_bound(long long k, double eps, double mean_gap) {
  if (k < 1) throw std::invalid_argument("hoeffding_failure_bound: need k >= 1");
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("hoeffding_failure_bound: need epsilon in (0, 1]");
  const double kd = static_cast<double>(k);
  if (mean_gap == 0.0) return std::exp(-kd * eps * eps / 2.0);
  if (std::abs(mean_gap - eps / 2.0) < 1e-12) return std::exp(-kd * eps * eps / 8.0);
  throw std::invalid_argument("hoeffding_failure_bound: mean_gap must be 0 or eps/2");
}

/// k i.i.d. draws from x. Deterministic given (x, k, seed): the support is
/// walked in flat-index order against a single uniform variate per draw.
inline KUniformMultiset sample_k_uniform(const JointDistribution& x, long long k,
                                         std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("sample_k_uniform: need k >= 1");
  Rng rng(seed);
  std::vector<std::size_t> samples;
  samples.reserve(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) {
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t chosen = x.mass().rbegin()->first;
    for (const auto& [idx, p] : x.mass()) {
      acc += p;
      if (u < acc) {
        chosen = idx;
        break;
      }
    }
    samples.push_back(chosen);
  }
  return KUniformMultiset(x.num_players(), x.num_actions(), std::move(samples));
}

struct SparsifyOutcome {
  KUniformMultiset multiset;
  int attempts = 0;
  bool verified = false;
  double worst_value = 0.0;
  long long k = 0;
};

namespace detail {

template <typename Verifier>
SparsifyOutcome sample_verify_retry(const JointDistribution& sigma, long long k, double eps,
                                    std::uint64_t seed, int max_attempts,
                                    Verifier&& verify) {
  if (max_attempts < 1)
    throw std::invalid_argument("sparsify: need max_attempts >= 1");
  std::optional<SparsifyOutcome> last;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    KUniformMultiset s =
        sample_k_uniform(sigma, k, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const VerifyReport report = verify(s.to_distribution(), eps);
    last = SparsifyOutcome{std::move(s), attempt, report.satisfied, report.worst_value, k};
    if (report.satisfied) break;
  }
  return std::move(*last);
}

}  // namespace detail

/// Draws k = k_bound_cce_alg(n, m, eps) samples from the exact CCE sigma and
/// re-samples until the empirical distribution verifies as an eps-CCE. Each
/// attempt succeeds with probability at least 1/2, so the expected number of
/// attempts is at most 2.
inline SparsifyOutcome sparsify_cce(const Game& game, const JointDistribution& sigma,
                                    double eps, std::uint64_t seed, int max_attempts = 64,
                                    std::optional<long long> k_override = std::nullopt) {
  sigma.require_compatible(game);
  if (verify_cce(game, sigma, 0.0).worst_value > 1e-7)
    throw std::invalid_argument("sparsify_cce: sigma is not an exact CCE");
  const long long k =
      k_override ? *k_override : k_bound_cce_alg(game.num_players(), game.num_actions(), eps);
  return detail::sample_verify_retry(
      sigma, k, eps, seed, max_attempts,
      [&](const JointDistribution& d, double e) { return verify_cce(game, d, e); });
}

/// CE variant: k = k_bound_ce_alg and the switching-rule verifier.
inline SparsifyOutcome sparsify_ce(const Game& game, const JointDistribution& sigma,
                                   double eps, std::uint64_t seed, int max_attempts = 64,
                                   std::optional<long long> k_override = std::nullopt) {
  sigma.require_compatible(game);
  if (verify_ce(game, sigma, 0.0).worst_value > 1e-7)
    throw std::invalid_argument("sparsify_ce: sigma is not an exact CE");
  const long long k =
      k_override ? *k_override : k_bound_ce_alg(game.num_players(), game.num_actions(), eps);
  return detail::sample_verify_retry(
      sigma, k, eps, seed, max_attempts,
      [&](const JointDistribution& d, double e) { return verify_ce(game, d, e); });
}

/// Small-support seed variant: sigma is the product of per-player strategies
/// whose supports B_i have size at most b from k_bound_ce_exist, and which is
/// an (eps/2)-CE; k defaults to the existence bound (callers usually override
/// with something far smaller at desk scale). For two-player constant-sum
/// games the natural seed is the pair of maxmin strategies.
inline SparsifyOutcome sparsify_ce_from_small_support(
    const Game& game, const std::vector<MixedStrategy>& seed_strategies, double eps,
    std::uint64_t seed, int max_attempts = 64,
    std::optional<long long> k_override = std::nullopt) {
  const JointDistribution sigma = product_distribution(game, seed_strategies);
  long long k;
  if (k_override) {
    k = *k_override;
  } else {
    const CeExistBound bound =
        k_bound_ce_exist(game.num_players(), game.num_actions(), eps);
    for (const auto& s : seed_strategies)
      if (static_cast<long long>(s.support().size()) > bound.b)
        throw std::invalid_argument(
            "sparsify_ce_from_small_support: seed support exceeds the b budget");
    k = bound.k;
  }
  if (verify_ce(game, sigma, eps / 2.0).worst_value > eps / 2.0 + 1e-7)
    throw std::invalid_argument(
        "sparsify_ce_from_small_support: seed is not an (eps/2)-CE");
  return detail::sample_verify_retry(
      sigma, k, eps, seed, max_attempts,
      [&](const JointDistribution& d, double e) { return verify_ce(game, d, e); });
}

}  // namespace sparseq
