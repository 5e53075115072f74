#pragma once

// Test-only oracles shared by the unit and acceptance suites.

#include <utility>
#include <vector>

#include "bellmeet/bounds.hpp"
#include "bellmeet/game.hpp"

namespace bellmeet_test {

// Full two-sided enumeration of deterministic strategy pairs; quadratically
// slower than the best-response scan it cross-checks.
inline double lhv_two_sided(const bellmeet::BellGame& game) {
  using namespace bellmeet;
  const int n = game.num_settings;
  const int k = game.num_outcomes;
  std::uint64_t per_party = 1;
  for (int i = 0; i < n; ++i) per_party *= static_cast<std::uint64_t>(k);

  std::vector<std::vector<int>> all(per_party, std::vector<int>(n));
  for (std::uint64_t s = 0; s < per_party; ++s) {
    std::uint64_t rest = s;
    for (int i = 0; i < n; ++i) {
      all[s][i] = static_cast<int>(rest % k) + 1;
      rest /= k;
    }
  }
  double best = -1.0;
  for (const auto& fa : all)
    for (const auto& fb : all) {
      double v = 0.0;
      for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) v += game.at(fa[x - 1], fb[y - 1], x, y);
      best = std::max(best, v);
    }
  return best;
}

// The 3-outcome no-signaling box for the reflexive 4-cycle that reaches 2/3:
// uniform 1/9 on equal settings, perfectly correlated outcomes on six setting
// pairs, and two permutation patterns on the remaining pairs.
inline bellmeet::Box reference_ns_box_cycle4() {
  bellmeet::Box box(3, 3, 4, 4);
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int x = 1; x <= 4; ++x) box.at(a, b, x, x) = 1.0 / 9.0;
  const std::pair<int, int> correlated[] = {{2, 1}, {4, 1}, {1, 2}, {4, 3}, {1, 4}, {3, 4}};
  for (const auto& [x, y] : correlated)
    for (int a = 1; a <= 3; ++a) box.at(a, a, x, y) = 1.0 / 3.0;
  const std::pair<int, int> b1_pairs[] = {{3, 1}, {1, 3}};
  for (const auto& [x, y] : b1_pairs) {
    box.at(2, 1, x, y) = 1.0 / 3.0;
    box.at(1, 2, x, y) = 1.0 / 3.0;
    box.at(3, 3, x, y) = 1.0 / 3.0;
  }
  const std::pair<int, int> b2_pairs[] = {{2, 4}, {4, 2}};
  for (const auto& [x, y] : b2_pairs) {
    box.at(1, 1, x, y) = 1.0 / 3.0;
    box.at(3, 2, x, y) = 1.0 / 3.0;
    box.at(2, 3, x, y) = 1.0 / 3.0;
  }
  box.at(3, 1, 3, 2) = 1.0 / 3.0;
  box.at(1, 2, 3, 2) = 1.0 / 3.0;
  box.at(2, 3, 3, 2) = 1.0 / 3.0;
  box.at(2, 1, 2, 3) = 1.0 / 3.0;
  box.at(3, 2, 2, 3) = 1.0 / 3.0;
  box.at(1, 3, 2, 3) = 1.0 / 3.0;
  return box;
}

// Deterministic strategy that walks toward the smallest-numbered neighbor at
// every step.
inline bellmeet::DeterministicStrategy move_to_smallest(const bellmeet::Scenario& sc) {
  bellmeet::DeterministicStrategy s;
  s.outcome_for_setting.resize(sc.nodes());
  for (int x = 1; x <= sc.nodes(); ++x) {
    std::vector<int> moves;
    int pos = x;
    for (int step = 0; step < sc.n_max; ++step) {
      moves.push_back(1);
      pos = bellmeet::edge_target(sc.graph, pos, 1);
    }
    s.outcome_for_setting[x - 1] = bellmeet::moves_to_outcome(moves, sc.degree());
  }
  return s;
}

// Strategy defined by the nodes visited from each start.
inline bellmeet::DeterministicStrategy strategy_from_targets(
    const bellmeet::Scenario& sc, const std::vector<std::vector<int>>& targets) {
  using namespace bellmeet;
  DeterministicStrategy s;
  s.outcome_for_setting.resize(sc.nodes());
  for (int x = 1; x <= sc.nodes(); ++x) {
    std::vector<int> moves;
    int pos = x;
    for (int node : targets[x - 1]) {
      const auto& nb = sc.graph.neighbors(pos);
      int k = 0;
      for (size_t i = 0; i < nb.size(); ++i)
        if (nb[i] == node) k = static_cast<int>(i) + 1;
      if (k == 0) throw ValidationError("strategy target is not a neighbor");
      moves.push_back(k);
      pos = node;
    }
    s.outcome_for_setting[x - 1] = moves_to_outcome(moves, sc.degree());
  }
  return s;
}

// Alice in the asymmetric pair from the directed-cycle analysis: wait at the
// starting node for the whole budget.
inline bellmeet::DeterministicStrategy wait_everywhere(const bellmeet::Scenario& sc) {
  using namespace bellmeet;
  DeterministicStrategy s;
  s.outcome_for_setting.resize(sc.nodes());
  for (int x = 1; x <= sc.nodes(); ++x) {
    const auto& nb = sc.graph.neighbors(x);
    int self_edge = 0;
    for (size_t i = 0; i < nb.size(); ++i)
      if (nb[i] == x) self_edge = static_cast<int>(i) + 1;
    if (self_edge == 0) throw ValidationError("waiting requires a reflexive graph");
    s.outcome_for_setting[x - 1] =
        moves_to_outcome(std::vector<int>(sc.n_max, self_edge), sc.degree());
  }
  return s;
}

// Bob's four-rule walk on the directed reflexive 4-cycle.
inline bellmeet::DeterministicStrategy four_rule_bob(const bellmeet::Scenario& sc) {
  return strategy_from_targets(sc, {{1, 2}, {2, 3}, {4, 1}, {1, 2}});
}

// The shared six-rule walk on the directed reflexive 6-cycle.
inline bellmeet::DeterministicStrategy six_rule_strategy(const bellmeet::Scenario& sc) {
  return strategy_from_targets(sc, {{1, 1}, {3, 4}, {3, 4}, {4, 4}, {6, 1}, {1, 1}});
}

}  // namespace bellmeet_test
