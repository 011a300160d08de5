#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "sparseq/json_io.hpp"

using namespace sparseq;
using Catch::Approx;

TEST_CASE("game JSON round trip") {
  const Game g = gen_random_game(3, 2, 99);
  const json j = game_to_json(g);
  CHECK(j.at("num_players") == 3);
  CHECK(j.at("num_actions") == 2);
  const Game back = game_from_json(j);
  CHECK(back.num_players() == g.num_players());
  CHECK(back.num_actions() == g.num_actions());
  CHECK(back.payoffs() == g.payoffs());  // exact: shortest round-trip floats
  CHECK(back.label() == g.label());

  SECTION("malformed payoff arrays are rejected on load") {
    json bad = j;
    bad["payoffs"].erase(0);
    CHECK_THROWS_AS(game_from_json(bad), std::invalid_argument);
    json worse = j;
    worse["payoffs"][0] = 2.5;
    CHECK_THROWS_AS(game_from_json(worse), std::invalid_argument);
  }
}

TEST_CASE("distribution JSON uses 1-based profiles") {
  const Game g = gen_matching_game(2);
  const JointDistribution x(2, 2, {{0, 0.25}, {3, 0.75}});
  const json j = distribution_to_json(g, x);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0].at("profile") == json::array({1, 1}));
  CHECK(j[1].at("profile") == json::array({2, 2}));
  const JointDistribution back = distribution_from_json(g, j);
  CHECK(back.prob(0) == Approx(0.25));
  CHECK(back.prob(3) == Approx(0.75));

  SECTION("out-of-range profiles are rejected") {
    json bad = j;
    bad[0]["profile"] = json::array({3, 1});
    CHECK_THROWS_AS(distribution_from_json(g, bad), std::invalid_argument);
  }
}

TEST_CASE("multiset JSON round trip preserves multiplicity and order") {
  const Game g = gen_rps(3);
  const KUniformMultiset s(2, 3, {4, 4, 0, 8});
  const json j = multiset_to_json(g, s);
  const KUniformMultiset back = multiset_from_json(g, j);
  CHECK(back == s);
}

TEST_CASE("x3c JSON round trip and validation") {
  const X3CInstance inst{6, {{1, 2, 3}, {4, 5, 6}, {2, 3, 4}}};
  const X3CInstance back = x3c_from_json(x3c_to_json(inst));
  CHECK(back.universe_size == 6);
  CHECK(back.sets == inst.sets);
  json bad = x3c_to_json(inst);
  bad["sets"][0] = json::array({1, 2});
  CHECK_THROWS_AS(x3c_from_json(bad), std::invalid_argument);
}

TEST_CASE("report and solution JSON shapes") {
  const Game g = gen_matching_game(2);
  const JointDistribution pm = JointDistribution::point_mass(g, ActionProfile({1, 1}));
  const json r = report_to_json(verify_cce(g, pm, 0.0));
  CHECK(r.at("satisfied") == false);
  CHECK(r.at("definition") == "CCE");
  CHECK(r.at("witness").at("player") == 2);

  const json sol = solution_to_json(g, solve_ce_lp(g));
  CHECK(sol.at("kind") == "CE");
  CHECK(sol.at("support_size") == 4);
  CHECK(sol.at("distribution").is_array());

  const json ok = report_to_json(verify_cce(g, solve_ce_lp(g).distribution, 0.0));
  CHECK(ok.at("satisfied") == true);
  CHECK(ok.at("witness").is_null());
}

TEST_CASE("file save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "sparseq-json-test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "game.json").string();
  const Game g = gen_figure1(3.0);
  save_json(path, game_to_json(g));
  const Game back = game_from_json(load_json(path));
  CHECK(back.payoffs() == g.payoffs());
  CHECK_THROWS_AS(load_json((dir / "missing.json").string()), std::invalid_argument);
  std::filesystem::remove_all(dir);
}
