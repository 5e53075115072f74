#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "bellmeet/game.hpp"
#include "bellmeet/parallel.hpp"
#include "bellmeet/rng.hpp"

namespace bellmeet {

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
  std::uint64_t seed = 0;
};

struct SimTraceRow {
  int x, y, a, b, met_at_step;  // met_at_step = 0 when the walk never meets
};

// Draw starting pairs uniformly over the admissible set, sample outcomes
// from the box, walk both parties, and count rendezvous successes.  Trials
// are partitioned into fixed chunks with per-chunk derived streams, so the
// counts are identical at any thread count.
inline SimReport simulate(const Scenario& sc, const Box& box, std::uint64_t trials,
                          std::uint64_t seed, const Tolerances& tol = default_tolerances(),
                          int threads = 1, std::vector<SimTraceRow>* trace = nullptr) {
  if (trials < 1) throw ValidationError("simulate: trials must be >= 1");
  const int n = sc.nodes();
  const int k = sc.outcomes();
  if (box.na != k || box.nb != k || box.nx != n || box.ny != n)
    throw ValidationError("simulate: box dimensions do not match the scenario");
  if (box.normalization_defect() > tol.box_sample_norm)
    throw ValidationError("simulate: box normalization violated beyond tolerance; refusing to sample");

  // admissible starting pairs
  std::vector<std::pair<int, int>> pairs;
  for (int x = 1; x <= n; ++x)
    for (int y = 1; y <= n; ++y)
      if (sc.same_start || x != y) pairs.emplace_back(x, y);

  // per-pair cumulative distribution over (a, b), row-major in (a, b)
  std::vector<std::vector<double>> cdf(pairs.size());
  for (size_t pi = 0; pi < pairs.size(); ++pi) {
    auto& c = cdf[pi];
    c.reserve(static_cast<size_t>(k) * k);
    double acc = 0.0;
    for (int a = 1; a <= k; ++a)
      for (int b = 1; b <= k; ++b) {
        acc += std::max(box.at(a, b, pairs[pi].first, pairs[pi].second), 0.0);
        c.push_back(acc);
      }
  }

  std::vector<std::vector<int>> moves(k);
  for (int a = 1; a <= k; ++a) moves[a - 1] = outcome_to_moves(a, sc.degree(), sc.n_max);

  const std::uint64_t chunk_size = 1 << 16;
  const std::uint64_t chunks = (trials + chunk_size - 1) / chunk_size;
  std::vector<std::uint64_t> chunk_hits(chunks, 0);
  if (trace) {
    trace->clear();
    threads = 1;
  }

  Rng base(seed);
  auto run_chunk = [&](int ci) {
    Rng rng = base.split(static_cast<std::uint64_t>(ci));
    const std::uint64_t begin = static_cast<std::uint64_t>(ci) * chunk_size;
    const std::uint64_t end = std::min(trials, begin + chunk_size);
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      const size_t pi = rng.uniform_below(pairs.size());
      const auto [x, y] = pairs[pi];
      const double u = rng.uniform() * cdf[pi].back();
      size_t cell =
          static_cast<size_t>(std::lower_bound(cdf[pi].begin(), cdf[pi].end(), u) -
                              cdf[pi].begin());
      if (cell >= cdf[pi].size()) cell = cdf[pi].size() - 1;
      const int a = static_cast<int>(cell) / k + 1;
      const int b = static_cast<int>(cell) % k + 1;
      const int met = meeting_step(sc.graph, x, y, moves[a - 1], moves[b - 1], sc.edge_meeting);
      if (met > 0) ++hits;
      if (trace) trace->push_back({x, y, a, b, met});
    }
    chunk_hits[ci] = hits;
  };
  parallel_for(static_cast<int>(chunks), threads, run_chunk);

  SimReport rep;
  rep.trials = trials;
  rep.seed = seed;
  for (std::uint64_t h : chunk_hits) rep.successes += h;
  rep.estimate = static_cast<double>(rep.successes) / static_cast<double>(trials);

  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(trials);
  const double ph = rep.estimate;
  const double denom = 1.0 + z * z / nn;
  const double center = (ph + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / denom;
  rep.ci_low = std::max(0.0, center - half);
  rep.ci_high = std::min(1.0, center + half);
  return rep;
}

inline void write_trace_csv(const std::vector<SimTraceRow>& trace, std::ostream& os) {
  os << "x,y,a,b,met_at_step\n";
  for (const auto& r : trace)
    os << r.x << ',' << r.y << ',' << r.a << ',' << r.b << ',' << r.met_at_step << '\n';
}

}  // namespace bellmeet
