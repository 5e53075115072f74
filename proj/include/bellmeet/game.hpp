#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bellmeet/graph.hpp"
#include "bellmeet/tolerances.hpp"

namespace bellmeet {

// Rendezvous task: R-regular arena, per-party step budget, whether meeting
// in transit (node transposition) counts, and whether both parties may be
// drawn at the same starting node.
struct Scenario {
  Graph graph;
  int n_max = 1;
  bool edge_meeting = false;   // E
  bool same_start = false;     // S

  Scenario() = default;
  Scenario(Graph g, int steps, bool e_flag, bool s_flag)
      : graph(std::move(g)), n_max(steps), edge_meeting(e_flag), same_start(s_flag) {
    if (!graph.is_regular())
      throw ValidationError("scenario requires a regular graph (uniform out-degree)");
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
  }

  int nodes() const { return graph.n; }
  int degree() const { return *graph.regular_degree; }
  // outcomes per party: R^n_max
  int outcomes() const {
    std::int64_t k = 1;
    for (int s = 0; s < n_max; ++s) {
      k *= degree();
      if (k > (1 << 30)) throw ValidationError("outcome alphabet too large");
    }
    return static_cast<int>(k);
  }
};

// Outcome index a in 1..R^n_max <-> move sequence (a_1..a_n_max), each move
// in 1..R.  Little-endian: a - 1 = sum_s (a_s - 1) R^(s-1), so step 1 is the
// least significant digit.
inline std::vector<int> outcome_to_moves(int a, int r, int n_max) {
  std::int64_t range = 1;
  for (int s = 0; s < n_max; ++s) range *= r;
  if (a < 1 || a > range)
    throw ValidationError("outcome index out of range: " + std::to_string(a));
  std::vector<int> moves(n_max);
  int rest = a - 1;
  for (int s = 0; s < n_max; ++s) {
    moves[s] = rest % r + 1;
    rest /= r;
  }
  return moves;
}

inline int moves_to_outcome(const std::vector<int>& moves, int r) {
  int a = 0;
  for (int s = static_cast<int>(moves.size()) - 1; s >= 0; --s) {
    if (moves[s] < 1 || moves[s] > r) throw ValidationError("move out of range");
    a = a * r + (moves[s] - 1);
  }
  return a + 1;
}

// First step (1-based) at which the two walks meet, or 0 if they never do.
// A step meets when the post-move positions coincide, or, with edge_meeting,
// when the parties swap their pre-move positions.  Positions at step 0 are
// never compared.
inline int meeting_step(const Graph& g, int start_a, int start_b, const std::vector<int>& moves_a,
                        const std::vector<int>& moves_b, bool edge_meeting) {
  int pa = start_a, pb = start_b;
  const int steps = static_cast<int>(moves_a.size());
  for (int s = 0; s < steps; ++s) {
    const int na = edge_target(g, pa, moves_a[s]);
    const int nb = edge_target(g, pb, moves_b[s]);
    if (na == nb) return s + 1;
    if (edge_meeting && pa == nb && pb == na) return s + 1;
    pa = na;
    pb = nb;
  }
  return 0;
}

// Coefficient tensor of the compiled game.  Every entry is 0 or p with
// p = 1/N^2 (same_start) or 1/(N(N-1)); stored dense, row-major in
// (a, b, x, y) with 1-based public indices.
struct BellGame {
  Scenario scenario;
  int num_outcomes = 0;  // |A| = |B|
  int num_settings = 0;  // |X| = |Y|
  double p = 0.0;
  std::vector<double> coeff;

  double at(int a, int b, int x, int y) const {
    return coeff[index(a, b, x, y)];
  }
  size_t index(int a, int b, int x, int y) const {
    return ((static_cast<size_t>(a - 1) * num_outcomes + (b - 1)) * num_settings + (x - 1)) *
               num_settings +
           (y - 1);
  }
};

inline BellGame compile_game(const Scenario& sc) {
  BellGame game;
  game.scenario = sc;
  game.num_outcomes = sc.outcomes();
  game.num_settings = sc.nodes();
  const int n = sc.nodes();
  game.p = sc.same_start ? 1.0 / (static_cast<double>(n) * n)
                         : 1.0 / (static_cast<double>(n) * (n - 1));
  const int k = game.num_outcomes;
  game.coeff.assign(static_cast<size_t>(k) * k * n * n, 0.0);

  std::vector<std::vector<int>> moves(k);
  for (int a = 1; a <= k; ++a) moves[a - 1] = outcome_to_moves(a, sc.degree(), sc.n_max);

  size_t idx = 0;
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b)
      for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y, ++idx) {
          if (!sc.same_start && x == y) continue;
          if (meeting_step(sc.graph, x, y, moves[a - 1], moves[b - 1], sc.edge_meeting) > 0)
            game.coeff[idx] = game.p;
        }
  return game;
}

// Joint conditional distribution P(a,b|x,y), dense row-major (a, b, x, y).
struct Box {
  int na = 0, nb = 0, nx = 0, ny = 0;
  std::vector<double> p;

  Box() = default;
  Box(int a, int b, int x, int y)
      : na(a), nb(b), nx(x), ny(y), p(static_cast<size_t>(a) * b * x * y, 0.0) {}

  double& at(int a, int b, int x, int y) { return p[index(a, b, x, y)]; }
  double at(int a, int b, int x, int y) const { return p[index(a, b, x, y)]; }
  size_t index(int a, int b, int x, int y) const {
    return ((static_cast<size_t>(a - 1) * nb + (b - 1)) * nx + (x - 1)) * ny + (y - 1);
  }

  // max over settings of |sum_ab P - 1|
  double normalization_defect() const {
    double worst = 0.0;
    for (int x = 1; x <= nx; ++x)
      for (int y = 1; y <= ny; ++y) {
        double s = 0.0;
        for (int a = 1; a <= na; ++a)
          for (int b = 1; b <= nb; ++b) s += at(a, b, x, y);
        worst = std::max(worst, std::abs(s - 1.0));
      }
    return worst;
  }

  double min_entry() const {
    double m = 0.0;
    for (double v : p) m = std::min(m, v);
    return m;
  }

  // max violation of marginal consistency (Alice marginal independent of y,
  // Bob marginal independent of x)
  double ns_defect() const {
    double worst = 0.0;
    for (int x = 1; x <= nx; ++x)
      for (int a = 1; a <= na; ++a) {
        double ref = 0.0;
        for (int b = 1; b <= nb; ++b) ref += at(a, b, x, 1);
        for (int y = 2; y <= ny; ++y) {
          double s = 0.0;
          for (int b = 1; b <= nb; ++b) s += at(a, b, x, y);
          worst = std::max(worst, std::abs(s - ref));
        }
      }
    for (int y = 1; y <= ny; ++y)
      for (int b = 1; b <= nb; ++b) {
        double ref = 0.0;
        for (int a = 1; a <= na; ++a) ref += at(a, b, 1, y);
        for (int x = 2; x <= nx; ++x) {
          double s = 0.0;
          for (int a = 1; a <= na; ++a) s += at(a, b, x, y);
          worst = std::max(worst, std::abs(s - ref));
        }
      }
    return worst;
  }
};

inline Box uniform_box(int na, int nb, int nx, int ny) {
  Box box(na, nb, nx, ny);
  const double v = 1.0 / (static_cast<double>(na) * nb);
  for (auto& e : box.p) e = v;
  return box;
}

// Per-party map setting -> outcome, 1-based.
struct DeterministicStrategy {
  std::vector<int> outcome_for_setting;  // size = settings

  int operator()(int x) const { return outcome_for_setting[x - 1]; }
  int settings() const { return static_cast<int>(outcome_for_setting.size()); }
};

inline Box deterministic_box(const DeterministicStrategy& sa, const DeterministicStrategy& sb,
                             int num_outcomes) {
  const int nx = sa.settings(), ny = sb.settings();
  Box box(num_outcomes, num_outcomes, nx, ny);
  for (int x = 1; x <= nx; ++x)
    for (int y = 1; y <= ny; ++y) {
      if (sa(x) < 1 || sa(x) > num_outcomes || sb(y) < 1 || sb(y) > num_outcomes)
        throw ValidationError("strategy outcome out of range");
      box.at(sa(x), sb(y), x, y) = 1.0;
    }
  return box;
}

// sum of coeff * P in the tensor's storage order (fixed for reproducible
// floating point).
inline double game_value(const BellGame& game, const Box& box) {
  if (box.na != game.num_outcomes || box.nb != game.num_outcomes ||
      box.nx != game.num_settings || box.ny != game.num_settings)
    throw ValidationError("game/box dimension mismatch");
  double v = 0.0;
  for (size_t i = 0; i < game.coeff.size(); ++i) v += game.coeff[i] * box.p[i];
  return v;
}

}  // namespace bellmeet
