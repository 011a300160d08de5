#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "sparseq/gamegen.hpp"
#include "sparseq/verify.hpp"

using namespace sparseq;
using Catch::Approx;

namespace {

JointDistribution uniform_over_all(const Game& g) {
  std::map<std::size_t, double> mass;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx)
    mass[idx] = 1.0 / static_cast<double>(g.num_profiles());
  return JointDistribution(g.num_players(), g.num_actions(), std::move(mass));
}

JointDistribution random_distribution(const Game& g, Rng& rng) {
  std::map<std::size_t, double> weights;
  // Random support of random size, at least one profile.
  const int support = rng.uniform_int(1, static_cast<int>(g.num_profiles()));
  for (int i = 0; i < support; ++i) {
    const auto idx = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(g.num_profiles()) - 1));
    weights[idx] += rng.uniform01() + 1e-3;
  }
  return JointDistribution::normalized(g.num_players(), g.num_actions(), weights);
}

}  // namespace

TEST_CASE("verify_cce") {
  const Game fig = gen_figure1(1.0);

  SECTION("uniform play of matching pennies is an exact CCE") {
    const VerifyReport r = verify_cce(fig, uniform_over_all(fig), 0.0);
    CHECK(r.satisfied);
    CHECK(r.worst_value == Approx(0.0).margin(1e-12));
  }

  SECTION("point mass on (1,1) in the matching game is violated by player 2") {
    const Game matching = gen_matching_game(2);
    const JointDistribution pm = JointDistribution::point_mass(matching, ActionProfile({1, 1}));
    const VerifyReport r = verify_cce(matching, pm, 0.0);
    CHECK_FALSE(r.satisfied);
    CHECK(r.worst_value == Approx(0.5));
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->player == 2);
    CHECK(r.witness->deviation == "action 2");
  }

  SECTION("epsilon = 2 is satisfied by anything") {
    Rng rng(3);
    const Game g = gen_random_game(2, 3, 77);
    const VerifyReport r = verify_cce(g, random_distribution(g, rng), 2.0);
    CHECK(r.satisfied);
  }
}

TEST_CASE("best_switching_rule") {
  const Game matching = gen_matching_game(2);

  SECTION("point mass on (1,1), player 2 switches 1 -> 2") {
    const JointDistribution pm = JointDistribution::point_mass(matching, ActionProfile({1, 1}));
    const SwitchingRule f = best_switching_rule(matching, pm, 2);
    CHECK(f.apply(1) == 2);
    CHECK(f.apply(2) == 2);  // never recommended -> identity
  }

  SECTION("rule regret at an exact equilibrium is nonpositive") {
    const Game rps = gen_rps(3);
    const SwitchingRule f = best_switching_rule(rps, uniform_over_all(rps), 1);
    CHECK(expected_regret(rps, 1, f, uniform_over_all(rps)) <= 1e-12);
  }

  SECTION("ties resolve to the smallest action index") {
    // All-equal payoffs tie every candidate at zero gain, so recommended
    // actions map to action 1 while unrecommended ones stay put.
    const Game flat(2, 3, std::vector<double>(18, 0.5), "flat");
    std::map<std::size_t, double> mass{{flat.profile_index(ActionProfile({2, 3})), 1.0}};
    const JointDistribution x(2, 3, std::move(mass));
    const SwitchingRule f = best_switching_rule(flat, x, 1);
    CHECK(f.apply(2) == 1);
    CHECK(f.apply(1) == 1);
    CHECK(f.apply(3) == 3);
  }

  SECTION("off-support recommendations map to themselves") {
    const Game g = gen_random_game(2, 4, 5);
    std::map<std::size_t, double> mass;
    // Support confined to actions {1, 2} of player 1.
    mass[g.profile_index(ActionProfile({1, 3}))] = 0.5;
    mass[g.profile_index(ActionProfile({2, 1}))] = 0.5;
    const JointDistribution x(2, 4, std::move(mass));
    const SwitchingRule f = best_switching_rule(g, x, 1);
    CHECK(f.apply(3) == 3);
    CHECK(f.apply(4) == 4);
  }
}

TEST_CASE("verify_ce") {
  SECTION("uniform over all 9 profiles of rock-paper-scissors is an exact CE") {
    const Game rps = gen_rps(3);
    const VerifyReport r = verify_ce(rps, uniform_over_all(rps), 0.0);
    CHECK(r.satisfied);
    CHECK(r.worst_value == Approx(0.0).margin(1e-12));
  }

  SECTION("point mass on a pure Nash equilibrium is an exact CE") {
    // Coordination game: both prefer to match; (1,1) and (2,2) are pure Nash.
    const std::vector<double> payoffs{1, 1, 0, 0, 0, 0, 1, 1};
    const Game coord(2, 2, payoffs, "coordination");
    const VerifyReport r =
        verify_ce(coord, JointDistribution::point_mass(coord, ActionProfile({1, 1})), 0.0);
    CHECK(r.satisfied);
  }

  SECTION("a uniquely sampled dummy number breaks the sampled distribution") {
    // One draw per dummy number d in [m]; every d is sampled exactly once, and
    // mismatched r's hand the other player a profitable deviation.
    const int m = 8;
    const DummyPennies dp = gen_dummy_pennies(m);
    std::vector<ActionProfile> samples;
    for (int d = 1; d <= m; ++d) {
      const int r1 = d % 2 == 0 ? 1 : -1;
      samples.push_back(ActionProfile({dummy_pennies_action(m, r1, d),
                                       dummy_pennies_action(m, -r1, d)}));
    }
    const KUniformMultiset s = KUniformMultiset::from_profiles(dp.game, samples);
    const VerifyReport r = verify_ce(dp.game, s.to_distribution(), 0.05);
    CHECK_FALSE(r.satisfied);
    // All 8 recommendations are mismatched, each worth 1/8 of the halved raw
    // gain 2, so the best rule gains 1 exactly.
    CHECK(r.worst_value == Approx(1.0));
  }
}

TEST_CASE("verify_ce_single_switch") {
  SECTION("diagonal uniform distribution is a 1/k-CE irrespective of payoffs") {
    for (std::uint64_t seed : {1ull, 9ull}) {
      const Game g = gen_random_game(2, 6, seed);
      const int k = 4;
      std::map<std::size_t, double> mass;
      for (int j = 1; j <= k; ++j)
        mass[g.profile_index(ActionProfile({j, j}))] = 1.0 / k;
      const JointDistribution diag(2, 6, std::move(mass));
      CHECK(verify_ce_single_switch(g, diag, 1.0 / k).satisfied);
    }
  }

  SECTION("point mass on a non-equilibrium profile is violated") {
    const Game matching = gen_matching_game(2);
    const JointDistribution pm = JointDistribution::point_mass(matching, ActionProfile({1, 1}));
    CHECK_FALSE(verify_ce_single_switch(matching, pm, 0.0).satisfied);
  }

  SECTION("at epsilon = 0 the verdict coincides with verify_ce") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
      const Game g = gen_random_game(rng.uniform_int(1, 3), rng.uniform_int(2, 3),
                                     rng.raw());
      const JointDistribution x = random_distribution(g, rng);
      CHECK(verify_ce(g, x, 0.0).satisfied == verify_ce_single_switch(g, x, 0.0).satisfied);
    }
  }
}

TEST_CASE("brute_force_verify_ce") {
  SECTION("agrees with verify_ce on random games") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
      const Game g = gen_random_game(rng.uniform_int(1, 3), rng.uniform_int(1, 3), rng.raw());
      const JointDistribution x = random_distribution(g, rng);
      const double best = verify_ce(g, x, 0.0).worst_value;
      const double brute = brute_force_verify_ce(g, x, 0.0).worst_value;
      CHECK(best == Approx(brute).margin(1e-9));
    }
  }

  SECTION("all-equal payoffs are satisfied for any distribution") {
    const Game flat(2, 3, std::vector<double>(18, 0.25), "flat");
    Rng rng(5);
    CHECK(brute_force_verify_ce(flat, random_distribution(flat, rng), 0.0).satisfied);
  }

  SECTION("m = 1 has only the identity rule") {
    const Game g(2, 1, std::vector<double>{0.3, 0.8});
    const JointDistribution x(2, 1, {{0, 1.0}});
    CHECK(brute_force_verify_ce(g, x, 0.0).satisfied);
    CHECK(verify_ce_single_switch(g, x, 0.0).satisfied);
  }

  SECTION("refuses games over the rule-enumeration cap") {
    const Game big = gen_matching_game(7);
    const JointDistribution pm = JointDistribution::point_mass(big, ActionProfile({1, 1}));
    CHECK_THROWS_AS(brute_force_verify_ce(big, pm, 0.0), BudgetError);
  }

  SECTION("dummy-pennies fixture at m = 3 violates 0.05 in both verifiers") {
    const int m = 3;
    const DummyPennies dp = gen_dummy_pennies(m);
    std::vector<ActionProfile> samples;
    for (int d = 1; d <= m; ++d)
      samples.push_back(ActionProfile({dummy_pennies_action(m, 1, d),
                                       dummy_pennies_action(m, -1, d)}));
    const JointDistribution x =
        KUniformMultiset::from_profiles(dp.game, samples).to_distribution();
    const VerifyReport fast = verify_ce(dp.game, x, 0.05);
    const VerifyReport brute = brute_force_verify_ce(dp.game, x, 0.05);
    CHECK_FALSE(fast.satisfied);
    CHECK_FALSE(brute.satisfied);
    CHECK(fast.worst_value == Approx(brute.worst_value).margin(1e-9));
  }
}

TEST_CASE("verifier properties on random instances") {
  Rng rng(4242);

  SECTION("monotonicity in epsilon and definitional ordering") {
    for (int trial = 0; trial < 40; ++trial) {
      const Game g = gen_random_game(rng.uniform_int(2, 3), rng.uniform_int(2, 3), rng.raw());
      const JointDistribution x = random_distribution(g, rng);
      const double eps = rng.uniform01();
      const VerifyReport ce = verify_ce(g, x, eps);
      if (ce.satisfied) {
        // The rule check dominates both restricted checks at the same eps.
        CHECK(verify_ce_single_switch(g, x, eps).satisfied);
        CHECK(verify_cce(g, x, eps).satisfied);
        CHECK(verify_ce(g, x, eps + 0.25).satisfied);
      }
      // At eps = 0 all three definitions agree in verdict.
      const bool exact = verify_ce(g, x, 0.0).satisfied;
      CHECK(verify_ce_single_switch(g, x, 0.0).satisfied == exact);
      if (exact) CHECK(verify_cce(g, x, 0.0).satisfied);
    }
  }

  SECTION("affine payoff changes rescale worst_value and keep verdicts") {
    for (int trial = 0; trial < 20; ++trial) {
      const Game g = gen_random_game(2, 3, rng.raw());
      const double alpha = 0.5, beta = 0.25;
      std::vector<double> scaled = g.payoffs();
      for (double& u : scaled) u = alpha * u + beta;
      const Game h(g.num_players(), g.num_actions(), scaled);
      const JointDistribution x = random_distribution(g, rng);
      const double eps = 0.05 + 0.2 * rng.uniform01();
      const VerifyReport rg = verify_ce(g, x, eps);
      const VerifyReport rh = verify_ce(h, x, alpha * eps);
      CHECK(rg.satisfied == rh.satisfied);
      CHECK(rh.worst_value == Approx(alpha * rg.worst_value).margin(1e-9));
      CHECK(verify_cce(g, x, eps).satisfied == verify_cce(h, x, alpha * eps).satisfied);
    }
  }

  SECTION("satisfied flag is exactly worst_value <= eps + slack") {
    for (int trial = 0; trial < 20; ++trial) {
      const Game g = gen_random_game(2, 2, rng.raw());
      const JointDistribution x = random_distribution(g, rng);
      const VerifyReport r = verify_cce(g, x, 0.1);
      CHECK(r.satisfied == (r.worst_value <= 0.1 + 1e-12));
    }
  }
}
