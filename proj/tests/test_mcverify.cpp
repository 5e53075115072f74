#include <catch2/catch_amalgamated.hpp>

#include "bellmeet/bounds.hpp"
#include "bellmeet/mcverify.hpp"
#include "oracles.hpp"

using namespace bellmeet;

TEST_CASE("simulate: deterministic move-to-smallest box concentrates near 1/2") {
  const Scenario sc(build_cycle(4, true, false), 1, false, false);
  const BellGame game = compile_game(sc);
  const auto s = bellmeet_test::move_to_smallest(sc);
  const Box box = deterministic_box(s, s, game.num_outcomes);
  const auto rep = simulate(sc, box, 1000000, 99, default_tolerances(), 2);
  REQUIRE(rep.trials == 1000000);
  REQUIRE(rep.estimate == Catch::Approx(0.5).margin(0.002));
  REQUIRE(rep.ci_low <= 0.5);
  REQUIRE(rep.ci_high >= 0.5);
}

TEST_CASE("simulate: reference NS box covers 2/3 on the reflexive 4-cycle") {
  const Scenario sc(build_cycle(4, true, false), 1, false, false);
  const Box box = bellmeet_test::reference_ns_box_cycle4();
  const auto rep = simulate(sc, box, 1000000, 4242, default_tolerances(), 2);
  REQUIRE(rep.ci_low <= 2.0 / 3.0);
  REQUIRE(rep.ci_high >= 2.0 / 3.0);
  REQUIRE(rep.estimate == Catch::Approx(2.0 / 3.0).margin(0.002));
}

TEST_CASE("simulate: reproducible and thread-count independent") {
  const Scenario sc(build_cycle(3, false, false), 1, false, true);
  const BellGame game = compile_game(sc);
  const Box u = uniform_box(game.num_outcomes, game.num_outcomes, 3, 3);
  const auto a = simulate(sc, u, 200000, 7, default_tolerances(), 1);
  const auto b = simulate(sc, u, 200000, 7, default_tolerances(), 2);
  REQUIRE(a.successes == b.successes);
  const auto c = simulate(sc, u, 1, 7);
  REQUIRE((c.successes == 0 || c.successes == 1));
  const auto c2 = simulate(sc, u, 1, 7);
  REQUIRE(c.successes == c2.successes);
}

TEST_CASE("simulate: validation") {
  const Scenario sc(build_cycle(3, false, false), 1, false, true);
  const Box u = uniform_box(2, 2, 3, 3);
  REQUIRE_THROWS_AS(simulate(sc, u, 0, 1), ValidationError);
  Box bad = u;
  bad.p[0] += 1e-6;  // break normalization
  REQUIRE_THROWS_AS(simulate(sc, bad, 10, 1), ValidationError);
  const Box wrong_dims = uniform_box(3, 3, 3, 3);
  REQUIRE_THROWS_AS(simulate(sc, wrong_dims, 10, 1), ValidationError);
}

TEST_CASE("simulate: empirical conditional frequencies track the box") {
  const Scenario sc(build_cycle(4, true, false), 1, false, false);
  const Box box = bellmeet_test::reference_ns_box_cycle4();
  std::vector<SimTraceRow> trace;
  const std::uint64_t trials = 400000;
  simulate(sc, box, trials, 11, default_tolerances(), 1, &trace);
  REQUIRE(trace.size() == trials);
  // chi-square per setting pair against the box distribution
  std::map<std::pair<int, int>, std::map<std::pair<int, int>, int>> counts;
  std::map<std::pair<int, int>, int> totals;
  for (const auto& row : trace) {
    counts[{row.x, row.y}][{row.a, row.b}]++;
    totals[{row.x, row.y}]++;
  }
  for (const auto& [xy, obs] : counts) {
    const auto [x, y] = xy;
    if (x == y) continue;  // S=0 scenario has no diagonal draws
    const int n = totals[xy];
    REQUIRE(n > 5000);
    double chi2 = 0.0;
    int dof = 0;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) {
        const double p = box.at(a, b, x, y);
        const double expect = p * n;
        const auto it = obs.find({a, b});
        const double got = it == obs.end() ? 0.0 : it->second;
        if (p == 0.0) {
          REQUIRE(got == 0.0);  // impossible outcomes never sampled
        } else {
          chi2 += (got - expect) * (got - expect) / expect;
          ++dof;
        }
      }
    // dof-1 ~ 2; far tail threshold keeps the test stable across seeds
    REQUIRE(chi2 < 40.0);
  }
}

TEST_CASE("simulate: wilson interval coverage on a small sweep") {
  // not the full 100-seed acceptance check; a quick 20-seed version
  const Scenario sc(build_cycle(4, true, false), 1, false, false);
  const BellGame game = compile_game(sc);
  const Box box = bellmeet_test::reference_ns_box_cycle4();
  const double truth = game_value(game, box);
  int covered = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const auto rep = simulate(sc, box, 100000, 1000 + seed, default_tolerances(), 2);
    if (rep.ci_low <= truth && truth <= rep.ci_high) ++covered;
  }
  REQUIRE(covered >= 17);
}
