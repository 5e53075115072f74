#include <catch2/catch_amalgamated.hpp>

#include "bellmeet/bounds.hpp"
#include "bellmeet/catalog.hpp"
#include "bellmeet/quantum.hpp"
#include "oracles.hpp"

using namespace bellmeet;

namespace {

QuantumStrategy product_mixed_strategy(int d_a, int d_b, int settings, int outcomes, Rng& rng) {
  QuantumStrategy qs;
  qs.d_a = d_a;
  qs.d_b = d_b;
  qs.povms_a = seesaw_detail::random_povms(settings, outcomes, d_a, rng);
  qs.povms_b = seesaw_detail::random_povms(settings, outcomes, d_b, rng);
  CMat rho = CMat::identity(d_a * d_b);
  rho *= cplx(1.0 / (d_a * d_b));
  qs.rho = rho;
  return qs;
}

}  // namespace

TEST_CASE("quantum_box on the maximally mixed state uses the product rule") {
  Rng rng(21);
  const QuantumStrategy qs = product_mixed_strategy(3, 2, 2, 3, rng);
  qs.validate();
  const Box box = quantum_box(qs);
  for (int x = 1; x <= 2; ++x)
    for (int y = 1; y <= 2; ++y)
      for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
          const double want = qs.povms_a[x - 1][a - 1].trace().real() *
                              qs.povms_b[y - 1][b - 1].trace().real() / 6.0;
          REQUIRE(box.at(a, b, x, y) == Catch::Approx(want).margin(1e-12));
        }
}

TEST_CASE("quantum_box of an embedded deterministic strategy is the deterministic box") {
  const Scenario sc(build_cycle(4, true, false), 1, false, false);
  const BellGame game = compile_game(sc);
  const DeterministicStrategy s = bellmeet_test::move_to_smallest(sc);

  QuantumStrategy qs;
  qs.d_a = qs.d_b = 3;
  qs.povms_a = seesaw_detail::embed_strategy(s, game.num_outcomes, 3);
  qs.povms_b = seesaw_detail::embed_strategy(s, game.num_outcomes, 3);
  std::vector<cplx> psi(9);
  psi[0] = 1.0;
  qs.set_pure(psi);
  qs.validate();

  const Box qbox = quantum_box(qs);
  const Box dbox = deterministic_box(s, s, game.num_outcomes);
  for (size_t i = 0; i < qbox.p.size(); ++i)
    REQUIRE(qbox.p[i] == Catch::Approx(dbox.p[i]).margin(1e-12));
  REQUIRE(game_value(game, qbox) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("quantum_box output is normalized and non-signaling") {
  Rng rng(77);
  QuantumStrategy qs = product_mixed_strategy(3, 3, 4, 3, rng);
  // entangle the state: random pure vector
  std::vector<cplx> psi(9);
  for (auto& v : psi) v = cplx(rng.gaussian(), rng.gaussian());
  double nrm = 0.0;
  for (const auto& v : psi) nrm += std::norm(v);
  for (auto& v : psi) v /= std::sqrt(nrm);
  qs.set_pure(psi);
  qs.validate();
  const Box box = quantum_box(qs);
  REQUIRE(box.normalization_defect() <= 1e-9);
  REQUIRE(box.ns_defect() <= 1e-9);
}

TEST_CASE("strategy validation rejects malformed POVMs") {
  QuantumStrategy qs;
  qs.d_a = qs.d_b = 2;
  std::vector<cplx> psi(4);
  psi[0] = 1.0;
  qs.set_pure(psi);
  qs.povms_a = {{CMat::identity(2), CMat(2, 2)}};
  qs.povms_b = {{CMat::identity(2), CMat(2, 2)}};
  qs.validate();  // fine
  qs.povms_a[0][1](0, 0) = 0.5;  // sum now exceeds identity
  REQUIRE_THROWS_AS(qs.validate(), ValidationError);
}

TEST_CASE("noise_value endpoints, linearity, and nu_crit") {
  const Scenario sc(build_cycle(3, false, false), 1, false, true);
  const BellGame game = compile_game(sc);
  const auto lhv = lhv_bound(game);

  // a genuinely quantum strategy from a short see-saw run
  const BoundReport ss = seesaw(game, 2, 2, 6, 424242, default_tolerances(), &lhv);
  REQUIRE(ss.quantum.has_value());
  const QuantumStrategy& qs = *ss.quantum;

  const double v1 = noise_value(qs, game, 1.0);
  REQUIRE(v1 == Catch::Approx(game_value(game, quantum_box(qs))).margin(1e-10));
  const double v0 = noise_value(qs, game, 0.0);
  const double mid = noise_value(qs, game, 0.5);
  REQUIRE(mid == Catch::Approx(0.5 * (v0 + v1)).margin(1e-12));
  // collinearity of three samples
  const double va = noise_value(qs, game, 0.25);
  const double vb = noise_value(qs, game, 0.75);
  REQUIRE(va + vb == Catch::Approx(v0 + v1).margin(1e-12));
  REQUIRE_THROWS_AS(noise_value(qs, game, 1.5), ValidationError);

  if (v1 > lhv.value + 1e-6) {
    const auto nc = nu_crit(qs, game, lhv.value);
    REQUIRE(nc.nu > 0.0);
    REQUIRE(nc.nu <= 1.0);
    REQUIRE(noise_value(qs, game, nc.nu) == Catch::Approx(lhv.value).margin(1e-9));
  }

  // synthetic degenerate threshold: a caller-supplied classical bound equal
  // to the noise floor flags the 0+ limit instead of dividing by zero
  if (v1 > v0 + 1e-9) {
    const auto degenerate = nu_crit(qs, game, v0);
    REQUIRE(degenerate.degenerate);
    REQUIRE(degenerate.nu == 0.0);
  }

  // no advantage -> no finite nu_crit
  QuantumStrategy classical;
  classical.d_a = classical.d_b = 2;
  classical.povms_a = seesaw_detail::embed_strategy(lhv.strategies->first, game.num_outcomes, 2);
  classical.povms_b = seesaw_detail::embed_strategy(lhv.strategies->second, game.num_outcomes, 2);
  std::vector<cplx> psi(4);
  psi[0] = 1.0;
  classical.set_pure(psi);
  REQUIRE_THROWS_AS(nu_crit(classical, game, lhv.value), ValidationError);
}
