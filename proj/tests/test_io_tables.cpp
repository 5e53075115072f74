#include <catch2/catch_amalgamated.hpp>

#include "bellmeet/io.hpp"
#include "bellmeet/reproduce.hpp"
#include "bellmeet/tables.hpp"
#include "oracles.hpp"

using namespace bellmeet;

TEST_CASE("graph json round-trip and flag validation") {
  const Graph g = make_reflexive(catalog_graph("cubic-5"));
  const Graph back = graph_from_json(graph_to_json(g));
  REQUIRE(back.out == g.out);
  REQUIRE(back.reflexive == g.reflexive);

  json j = graph_to_json(g);
  j["reflexive"] = false;
  REQUIRE_THROWS_AS(graph_from_json(j), ValidationError);
}

TEST_CASE("game dump counts nonzero quadruples") {
  const Scenario sc(build_cycle(4, true, false), 1, false, false);
  const BellGame game = compile_game(sc);
  const json j = game_to_json(game);
  REQUIRE(j.at("p").get<double>() == Catch::Approx(1.0 / 12));
  size_t nonzero = 0;
  for (double c : game.coeff) nonzero += c != 0.0;
  REQUIRE(j.at("nonzero").size() == nonzero);
  const BellGame back = game_from_json(j);
  REQUIRE(back.coeff == game.coeff);
}

TEST_CASE("box and strategy json round-trips") {
  const Box box = bellmeet_test::reference_ns_box_cycle4();
  const Box back = box_from_json(box_to_json(box));
  REQUIRE(back.p == box.p);

  DeterministicStrategy s;
  s.outcome_for_setting = {1, 3, 2};
  REQUIRE(strategy_from_json(strategy_to_json(s)).outcome_for_setting ==
          s.outcome_for_setting);
}

TEST_CASE("quantum strategy json round-trip") {
  Rng rng(5);
  QuantumStrategy qs;
  qs.d_a = qs.d_b = 2;
  qs.povms_a = seesaw_detail::random_povms(2, 2, 2, rng);
  qs.povms_b = seesaw_detail::random_povms(2, 2, 2, rng);
  std::vector<cplx> psi = {cplx(1 / std::sqrt(2.0), 0), 0, 0, cplx(0, 1 / std::sqrt(2.0))};
  qs.set_pure(psi);
  const QuantumStrategy back = quantum_strategy_from_json(quantum_strategy_to_json(qs));
  back.validate();
  REQUIRE((back.rho - qs.rho).max_abs() < 1e-15);
  REQUIRE(back.pure.has_value());
}

TEST_CASE("reference tables are internally consistent") {
  int total = 0;
  for (const auto& id : reference_table_ids()) {
    for (const auto& cell : reference_cells(id)) {
      ++total;
      if (!cell.has_reference()) {
        REQUIRE(cell.kind == 'Q');  // only see-saw cells may lack a value
        continue;
      }
      if (cell.rational()) {
        // numerator recovery must land within print precision
        const long m = cell.mult();
        REQUIRE(m >= 0);
        REQUIRE(m <= cell.pair_count());
        REQUIRE(std::abs(double(m) / cell.pair_count() - cell.printed) <= 5e-6);
      }
      REQUIRE(cell.printed >= 0.0);
      REQUIRE(cell.printed <= 1.0);
    }
  }
  REQUIRE(total == (16 * 4) + (16 * 6) + (4 * 4) + (8 * 7) + (8 * 4) + (8 * 4) + (4 * 5));
}

TEST_CASE("reference tables: classical rows never exceed no-signaling rows") {
  for (const auto& id : reference_table_ids()) {
    const auto cells = reference_cells(id);
    for (const auto& s : cells) {
      if (s.kind != 'S') continue;
      for (const auto& n : cells)
        if (n.kind == 'N' && n.graph == s.graph && n.e_flag == s.e_flag &&
            n.s_flag == s.s_flag)
          REQUIRE(s.expected() <= n.expected() + 1e-12);
    }
  }
}

TEST_CASE("reproduce: table III without see-saw is exact") {
  ReproduceOptions opts;
  opts.run_seesaw = false;
  opts.threads = 2;
  const auto results = reproduce_table("III", opts);
  REQUIRE(results.size() == 16);
  int passes = 0, skips = 0;
  for (const auto& r : results) {
    if (r.status == "pass") ++passes;
    if (r.status == "skip") ++skips;
    REQUIRE(r.status != "fail");
  }
  REQUIRE(passes == 12);  // S, M, N rows
  REQUIRE(skips == 4);    // Q row skipped without see-saw
  std::ostringstream csv;
  write_results_csv(results, csv);
  REQUIRE(csv.str().find("cycle-4") != std::string::npos);
  REQUIRE(count_failures(results) == 0);
}

TEST_CASE("reproduce: unknown table id") {
  REQUIRE_THROWS_AS(reference_cells("IX"), ValidationError);
}
