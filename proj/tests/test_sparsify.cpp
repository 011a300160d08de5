#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sparseq/gamegen.hpp"
#include "sparseq/solve.hpp"
#include "sparseq/sparsify.hpp"

using namespace sparseq;
using Catch::Approx;

TEST_CASE("k_bound_cce_exist") {
  // Frozen from high-precision evaluation of floor(2(ln m + ln n)/eps^2) + 1.
  CHECK(k_bound_cce_exist(2, 2, 0.1) == 278);
  CHECK(k_bound_cce_exist(10, 10, 0.3) == 103);
  CHECK(k_bound_cce_exist(1, 1, 1.0) == 1);
  CHECK_THROWS_AS(k_bound_cce_exist(2, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(k_bound_cce_exist(2, 2, 1.5), std::invalid_argument);
}

TEST_CASE("k_bound_cce_alg") {
  CHECK(k_bound_cce_alg(10, 10, 0.3) == 118);
  CHECK(k_bound_cce_alg(2, 2, 0.5) == 17);  // floor(16.63...) + 1
  CHECK(k_bound_cce_alg(10, 2, 0.3) == 82);

  SECTION("dominates the existence bound (extra ln 2)") {
    for (int n : {1, 2, 5, 10})
      for (int m : {1, 2, 3, 7})
        for (double eps : {0.1, 0.3, 0.5, 1.0})
          CHECK(k_bound_cce_alg(n, m, eps) >= k_bound_cce_exist(n, m, eps));
  }
}

TEST_CASE("k_bound_ce_exist") {
  const CeExistBound b = k_bound_ce_exist(2, 2, 0.5);
  CHECK(b.k == 14207);
  CHECK(b.b == 622);

  SECTION("epsilon = 1 drops the -ln eps term") {
    const CeExistBound unit = k_bound_ce_exist(2, 2, 1.0);
    const double inner = 2.0 * std::log(2.0) + std::log(16.0);
    CHECK(unit.k == static_cast<long long>(std::floor(264.0 * std::log(2.0) * inner)) + 1);
    CHECK(unit.k == 762);
    CHECK(unit.b == 134);
  }

  SECTION("k grows as epsilon shrinks") {
    long long prev = 0;
    for (double eps : {1.0, 0.7, 0.5, 0.3, 0.2}) {
      const long long k = k_bound_ce_exist(3, 4, eps).k;
      CHECK(k > prev);
      prev = k;
    }
  }

  CHECK_THROWS_AS(k_bound_ce_exist(2, 1, 0.5), std::invalid_argument);
}

TEST_CASE("k_bound_ce_alg") {
  CHECK(k_bound_ce_alg(2, 4, 0.2) == 347);
  CHECK(k_bound_ce_alg(2, 2, 0.5) == 23);
  CHECK(k_bound_ce_alg(2, 2, 0.3) == 62);

  SECTION("superlinear growth in m") {
    // Doubling m more than doubles k once m ln m dominates.
    const long long k8 = k_bound_ce_alg(2, 8, 0.2);
    const long long k16 = k_bound_ce_alg(2, 16, 0.2);
    CHECK(k16 > 2 * k8);
  }
}

TEST_CASE("SampleBound dispatches to the matching closed form") {
  const SampleBound cce = SampleBound::compute(BoundKind::CCE_alg, 10, 10, 0.3);
  CHECK(cce.k == k_bound_cce_alg(10, 10, 0.3));
  CHECK_FALSE(cce.b.has_value());
  const SampleBound ce = SampleBound::compute(BoundKind::CE_exist, 2, 2, 0.5);
  CHECK(ce.k == 14207);
  REQUIRE(ce.b.has_value());
  CHECK(*ce.b == 622);
  for (BoundKind kind : {BoundKind::CCE_exist, BoundKind::CCE_alg, BoundKind::CE_exist,
                         BoundKind::CE_alg})
    CHECK(SampleBound::compute(kind, 3, 4, 0.4).k >= 1);
}

TEST_CASE("hoeffding_failure_bound") {
  CHECK(hoeffding_failure_bound(103, 0.3, 0.0) == Approx(0.009706107).epsilon(1e-6));
  CHECK(hoeffding_failure_bound(103, 0.3, 0.0) < 0.01);  // union bound at n=m=10
  CHECK(hoeffding_failure_bound(278, 0.1, 0.0) == Approx(0.2490753).epsilon(1e-6));

  SECTION("strictly decreasing in k") {
    for (long long k : {1ll, 10ll, 100ll})
      CHECK(hoeffding_failure_bound(k + 1, 0.3, 0.0) < hoeffding_failure_bound(k, 0.3, 0.0));
  }

  SECTION("the eps/2 mean gap uses the /8 exponent") {
    CHECK(hoeffding_failure_bound(100, 0.4, 0.2) == Approx(std::exp(-100 * 0.16 / 8.0)));
  }

  CHECK_THROWS_AS(hoeffding_failure_bound(0, 0.3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_failure_bound(10, 0.3, 0.1), std::invalid_argument);
}

TEST_CASE("sample_k_uniform") {
  const Game fig = gen_figure1(1.0);
  const JointDistribution ce = figure1_unique_ce(fig, 1.0);

  SECTION("point mass yields k copies") {
    const JointDistribution pm = JointDistribution::point_mass(fig, ActionProfile({2, 1}));
    const KUniformMultiset s = sample_k_uniform(pm, 5, 9);
    CHECK(s.size() == 5);
    for (std::size_t idx : s.samples()) CHECK(idx == fig.profile_index(ActionProfile({2, 1})));
  }

  SECTION("same seed reproduces the multiset") {
    CHECK(sample_k_uniform(ce, 50, 123) == sample_k_uniform(ce, 50, 123));
    CHECK(sample_k_uniform(ce, 50, 123).samples() != sample_k_uniform(ce, 50, 124).samples());
  }

  SECTION("single draws follow the distribution (chi-square, 4 cells)") {
    // 10^4 single draws from the uniform 4-cell CE; chi-square with 3 degrees
    // of freedom, critical value 11.345 at p = 0.01.
    std::vector<int> counts(4, 0);
    for (int t = 0; t < 10000; ++t)
      ++counts[sample_k_uniform(ce, 1, 1000 + static_cast<std::uint64_t>(t)).samples()[0]];
    double chi2 = 0.0;
    for (int c : counts) {
      const double expected = 2500.0;
      chi2 += (c - expected) * (c - expected) / expected;
    }
    CHECK(chi2 < 11.345);
  }
}

TEST_CASE("sparsify_cce") {
  SECTION("rejects non-equilibrium input") {
    const Game g = gen_matching_game(2);
    const JointDistribution pm = JointDistribution::point_mass(g, ActionProfile({1, 1}));
    CHECK_THROWS_AS(sparsify_cce(g, pm, 0.3, 1), std::invalid_argument);
  }

  SECTION("epsilon = 1 verifies on the first attempt") {
    const Game g = gen_rps(3);
    const SparsifyOutcome out = sparsify_cce(g, solve_cce_lp(g).distribution, 1.0, 7, 64,
                                             std::optional<long long>(1));
    CHECK(out.verified);
    CHECK(out.attempts == 1);
    CHECK(out.multiset.size() == 1);
  }

  SECTION("an already-k-uniform equilibrium can succeed immediately") {
    const Game coord(2, 2, {1, 1, 0, 0, 0, 0, 1, 1}, "coordination");
    const JointDistribution pm = JointDistribution::point_mass(coord, ActionProfile({1, 1}));
    const SparsifyOutcome out = sparsify_cce(coord, pm, 0.2, 3);
    CHECK(out.verified);
    CHECK(out.attempts == 1);
    CHECK(out.multiset.to_distribution().support_size() == 1);
  }

  SECTION("verified outcomes re-verify and respect the k budget") {
    const Game g = gen_random_game(3, 2, 31);
    const JointDistribution sigma = solve_cce_lp(g).distribution;
    const double eps = 0.3;
    const SparsifyOutcome out = sparsify_cce(g, sigma, eps, 17);
    REQUIRE(out.verified);
    CHECK(out.k == k_bound_cce_alg(3, 2, eps));
    CHECK(static_cast<long long>(out.multiset.size()) == out.k);
    CHECK(out.multiset.to_distribution().support_size() <= out.k);
    const VerifyReport again = verify_cce(g, out.multiset.to_distribution(), eps);
    CHECK(again.satisfied);
    CHECK(again.worst_value == Approx(out.worst_value));
  }

  SECTION("exhausted attempts return a diagnosable failure, not a throw") {
    // k forced to 2 samples at a tight epsilon: every attempt fails.
    const Game g = gen_matching_game(3);
    const JointDistribution sigma = solve_cce_lp(g).distribution;
    const SparsifyOutcome out = sparsify_cce(g, sigma, 0.01, 5, 4,
                                             std::optional<long long>(2));
    CHECK_FALSE(out.verified);
    CHECK(out.attempts == 4);
    CHECK(out.worst_value > 0.01);
    CHECK(out.multiset.size() == 2);
  }

  SECTION("mean attempts stay near the guaranteed two") {
    // Proposition-style statistics at desk scale: 100 retry loops on small
    // random games; each attempt succeeds with probability >= 1/2.
    double total_attempts = 0.0;
    int runs = 0;
    for (std::uint64_t game_seed = 1; game_seed <= 5; ++game_seed) {
      const Game g = gen_random_game(3, 2, 9000 + game_seed);
      const JointDistribution sigma = solve_cce_lp(g).distribution;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        total_attempts += sparsify_cce(g, sigma, 0.3, seed).attempts;
        ++runs;
      }
    }
    CHECK(total_attempts / runs <= 2.6);
  }
}

TEST_CASE("sparsify_ce") {
  SECTION("figure1 at eps = 0.3 stays within the bound-size support") {
    const Game fig = gen_figure1(1.0);
    const SparsifyOutcome out = sparsify_ce(fig, figure1_unique_ce(fig, 1.0), 0.3, 11);
    REQUIRE(out.verified);
    CHECK(out.k == 62);  // k_bound_ce_alg(2, 2, 0.3)
    CHECK(out.multiset.to_distribution().support_size() <= 62);
    CHECK(verify_ce(fig, out.multiset.to_distribution(), 0.3).satisfied);
  }

  SECTION("rps at eps = 0.3 verifies within a few attempts across seeds") {
    const Game rps = gen_rps(3);
    const JointDistribution uniform = solve_ce_lp(rps).distribution;
    double total_attempts = 0.0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const SparsifyOutcome out = sparsify_ce(rps, uniform, 0.3, seed);
      CHECK(out.verified);
      total_attempts += out.attempts;
    }
    CHECK(total_attempts / 40.0 <= 2.6);
  }

  SECTION("point mass on a pure equilibrium sparsifies to support 1") {
    const Game coord(2, 2, {1, 1, 0, 0, 0, 0, 1, 1}, "coordination");
    const JointDistribution pm = JointDistribution::point_mass(coord, ActionProfile({1, 1}));
    const SparsifyOutcome out = sparsify_ce(coord, pm, 0.5, 2);
    CHECK(out.verified);
    CHECK(out.attempts == 1);
    CHECK(out.multiset.to_distribution().support_size() == 1);
  }
}

TEST_CASE("sparsify_ce_from_small_support") {
  SECTION("maxmin pair of figure1 at eps = 0.4 with k = 200") {
    const Game fig = gen_figure1(1.0);
    const auto [s1, v1] = maxmin_strategy(fig, 1);
    const auto [s2, v2] = maxmin_strategy(fig, 2);
    const SparsifyOutcome out = sparsify_ce_from_small_support(
        fig, {s1, s2}, 0.4, 5, 64, std::optional<long long>(200));
    CHECK(out.verified);
    CHECK(out.multiset.size() == 200);
  }

  SECTION("a pure (eps/2)-CE seed needs one sample") {
    const Game coord(2, 2, {1, 1, 0, 0, 0, 0, 1, 1}, "coordination");
    const MixedStrategy s1(1, {1.0, 0.0});
    const MixedStrategy s2(2, {1.0, 0.0});
    const SparsifyOutcome out = sparsify_ce_from_small_support(
        coord, {s1, s2}, 0.4, 5, 64, std::optional<long long>(1));
    CHECK(out.verified);
    CHECK(out.attempts == 1);
    CHECK(out.multiset.to_distribution().support_size() == 1);
  }

  SECTION("rejects seeds that are not (eps/2)-CE") {
    const Game matching = gen_matching_game(2);
    const MixedStrategy s1(1, {1.0, 0.0});
    const MixedStrategy s2(2, {1.0, 0.0});
    CHECK_THROWS_AS(sparsify_ce_from_small_support(matching, {s1, s2}, 0.2, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("empirical per-event failure rate respects the Hoeffding envelope") {
  // Fixed exact CCE (uniform play of figure1 v=1), fixed pair (i=1, j=1);
  // 2000 draws of k samples; compare the violation frequency to
  // e^{-k eps^2/2} plus 3-sigma binomial slack.
  const Game fig = gen_figure1(1.0);
  const JointDistribution sigma = figure1_unique_ce(fig, 1.0);
  const long long k = 103;
  const double eps = 0.3;
  int violations = 0;
  const int runs = 2000;
  for (int t = 0; t < runs; ++t) {
    const KUniformMultiset s = sample_k_uniform(sigma, k, 50000 + static_cast<std::uint64_t>(t));
    if (expected_regret(fig, 1, 1, s) >= eps) ++violations;
  }
  const double bound = hoeffding_failure_bound(k, eps, 0.0);
  const double slack = 3.0 * std::sqrt(bound * (1.0 - bound) / runs);
  CHECK(static_cast<double>(violations) / runs <= bound + slack);
}
