#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bellmeet/game.hpp"
#include "bellmeet/lp.hpp"
#include "bellmeet/npa.hpp"
#include "bellmeet/parallel.hpp"
#include "bellmeet/quantum.hpp"
#include "bellmeet/rng.hpp"

namespace bellmeet {

enum class BoundKind { LHV, NS, ML, SEESAW };

inline const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::LHV: return "lhv";
    case BoundKind::NS: return "ns";
    case BoundKind::ML: return "ml";
    case BoundKind::SEESAW: return "seesaw";
  }
  return "?";
}

struct RestartTrace {
  int index = 0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  std::vector<double> value_history;  // value after each full sweep
};

struct BoundReport {
  BoundKind kind = BoundKind::LHV;
  double value = 0.0;

  // certificate: exactly one of these is populated, matching `kind`
  std::optional<std::pair<DeterministicStrategy, DeterministicStrategy>> strategies;
  std::optional<Box> box;
  std::optional<RMat> moment_matrix;
  std::optional<QuantumStrategy> quantum;

  struct Diagnostics {
    long iterations = 0;
    double gap = 0.0;
    int restarts_used = 0;
    std::uint64_t seed = 0;
    bool reliable = true;  // false when no see-saw restart converged
    std::vector<RestartTrace> restarts;
    std::string note;
  } diag;
};

// ---------------------------------------------------------------------------
// LHV: exact maximum over deterministic strategy pairs.  Bob's strategies are
// enumerated (setting 1 as the least significant digit); Alice's best
// response decomposes per setting.  Ties resolve to the smallest Bob index,
// then the smallest outcome per Alice setting, so certificates are stable.
inline BoundReport lhv_bound(const BellGame& game,
                             const Tolerances& tol = default_tolerances()) {
  const int n = game.num_settings;
  const int k = game.num_outcomes;
  std::uint64_t bob_count = 1;
  for (int i = 0; i < n; ++i) {
    bob_count *= static_cast<std::uint64_t>(k);
    if (bob_count > tol.lhv_enum_cap)
      throw ValidationError("lhv enumeration too large: " + std::to_string(k) + "^" +
                            std::to_string(n) + " exceeds the cap");
  }

  // coeff rearranged as planes[(b,y)][x][a] for cache-friendly accumulation
  std::vector<double> planes(static_cast<size_t>(k) * n * n * k);
  for (int b = 1; b <= k; ++b)
    for (int y = 1; y <= n; ++y)
      for (int x = 1; x <= n; ++x)
        for (int a = 1; a <= k; ++a)
          planes[((static_cast<size_t>(b - 1) * n + (y - 1)) * n + (x - 1)) * k + (a - 1)] =
              game.at(a, b, x, y);

  double best = -1.0;
  std::uint64_t best_bob = 0;
  std::vector<int> best_alice(n, 1);
  std::vector<double> acc(static_cast<size_t>(n) * k);
  std::vector<int> fb(n);

  for (std::uint64_t bi = 0; bi < bob_count; ++bi) {
    std::uint64_t rest = bi;
    for (int y = 0; y < n; ++y) {
      fb[y] = static_cast<int>(rest % k) + 1;
      rest /= k;
    }
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int y = 0; y < n; ++y) {
      const double* plane = &planes[(static_cast<size_t>(fb[y] - 1) * n + y) * n * k];
      for (size_t i = 0; i < static_cast<size_t>(n) * k; ++i) acc[i] += plane[i];
    }
    double total = 0.0;
    for (int x = 0; x < n; ++x) {
      double mx = acc[static_cast<size_t>(x) * k];
      for (int a = 1; a < k; ++a) mx = std::max(mx, acc[static_cast<size_t>(x) * k + a]);
      total += mx;
    }
    if (total > best + 1e-15) {
      best = total;
      best_bob = bi;
      for (int x = 0; x < n; ++x) {
        int arg = 0;
        for (int a = 1; a < k; ++a)
          if (acc[static_cast<size_t>(x) * k + a] > acc[static_cast<size_t>(x) * k + arg]) arg = a;
        best_alice[x] = arg + 1;
      }
    }
  }

  BoundReport rep;
  rep.kind = BoundKind::LHV;
  rep.value = best;
  DeterministicStrategy sa, sb;
  sa.outcome_for_setting = best_alice;
  sb.outcome_for_setting.resize(n);
  std::uint64_t rest = best_bob;
  for (int y = 0; y < n; ++y) {
    sb.outcome_for_setting[y] = static_cast<int>(rest % k) + 1;
    rest /= k;
  }
  rep.strategies = {sa, sb};
  rep.diag.iterations = static_cast<long>(bob_count);
  return rep;
}

// ---------------------------------------------------------------------------
// NS: linear program over nonnegative P with per-setting normalization and
// both marginal-consistency families.
inline BoundReport ns_bound(const BellGame& game,
                            const Tolerances& tol = default_tolerances()) {
  const int n = game.num_settings;
  const int k = game.num_outcomes;
  LpProblem lp;
  for (size_t i = 0; i < game.coeff.size(); ++i) lp.add_var(game.coeff[i]);
  auto vid = [&](int a, int b, int x, int y) { return static_cast<int>(game.index(a, b, x, y)); };

  for (int x = 1; x <= n; ++x)
    for (int y = 1; y <= n; ++y) {
      const int r = lp.add_row(1.0);
      for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k; ++b) lp.set_coef(vid(a, b, x, y), r, 1.0);
    }
  // Alice marginal of (x, a) equal for every y versus y = 1
  for (int x = 1; x <= n; ++x)
    for (int a = 1; a <= k; ++a)
      for (int y = 2; y <= n; ++y) {
        const int r = lp.add_row(0.0);
        for (int b = 1; b <= k; ++b) {
          lp.set_coef(vid(a, b, x, y), r, 1.0);
          lp.set_coef(vid(a, b, x, 1), r, -1.0);
        }
      }
  // Bob marginal of (y, b) equal for every x versus x = 1
  for (int y = 1; y <= n; ++y)
    for (int b = 1; b <= k; ++b)
      for (int x = 2; x <= n; ++x) {
        const int r = lp.add_row(0.0);
        for (int a = 1; a <= k; ++a) {
          lp.set_coef(vid(a, b, x, y), r, 1.0);
          lp.set_coef(vid(a, b, 1, y), r, -1.0);
        }
      }

  const LpResult res = lp_solve(lp, tol);
  if (res.status != LpResult::Status::Optimal)
    throw SolverError("ns_bound: LP did not reach optimality (status " +
                      std::to_string(static_cast<int>(res.status)) + ")");
  if (res.gap > tol.lp_gap * (1.0 + std::abs(res.value)))
    throw SolverError("ns_bound: LP duality gap " + std::to_string(res.gap) +
                      " above tolerance");

  BoundReport rep;
  rep.kind = BoundKind::NS;
  rep.value = res.value;
  Box box(k, k, n, n);
  box.p.assign(res.x.begin(), res.x.end());
  for (auto& v : box.p) v = std::max(v, 0.0);
  rep.box = std::move(box);
  rep.diag.iterations = res.iterations;
  rep.diag.gap = res.gap;
  return rep;
}

// ---------------------------------------------------------------------------
// ML: moment-matrix SDP upper bound on the quantum value.
inline BoundReport ml_bound(const BellGame& game, MlLevel level = MlLevel::Npa1,
                            const Tolerances& tol = default_tolerances()) {
  const NpaRelaxation rel = build_npa(game, level);
  const SdpResult sol = sdp_solve(rel.sdp, tol);
  BoundReport rep;
  rep.kind = BoundKind::ML;
  rep.value = sol.primal_value;
  rep.moment_matrix = sol.X.mat[0];
  rep.box = npa_box(rel, sol);
  rep.diag.iterations = sol.iterations;
  rep.diag.gap = std::abs(sol.dual_value - sol.primal_value);
  rep.diag.note = level == MlLevel::Npa1 ? "npa1" : "npa1+ab";
  return rep;
}

// ---------------------------------------------------------------------------
// See-saw lower bound on the quantum value.
namespace seesaw_detail {

// maximize sum_a <M_a, K_a> over POVMs {M_a} on dimension d, as a small SDP
// through the real symmetric embedding, followed by an exact projection back
// onto the POVM manifold (clamp eigenvalues, renormalize the sum).
inline std::vector<CMat> povm_step(const std::vector<CMat>& k_ops, int d,
                                   const Tolerances& tol) {
  const int kk = static_cast<int>(k_ops.size());
  SdpProblem sp;
  for (int a = 0; a < kk; ++a) sp.blocks.push_back({2 * d, false});
  sp.objective = SdpBlockData::zeros(sp.blocks);
  for (int a = 0; a < kk; ++a) {
    const RMat e = embed_hermitian(k_ops[a]);
    sp.objective.mat[a] = e;
    sp.objective.mat[a] *= 0.5;  // <X, embed(K)/2> = Re<M, K>
  }
  for (int i = 0; i < 2 * d; ++i)
    for (int j = i; j < 2 * d; ++j) {
      SdpConstraint c;
      for (int a = 0; a < kk; ++a) c.terms.push_back({a, i, j, i == j ? 1.0 : 0.5});
      c.rhs = i == j ? 1.0 : 0.0;
      sp.constraints.push_back(c);
    }
  Tolerances sdp_tol = tol;
  sdp_tol.sdp_max_iter = 100;
  const SdpResult sol = sdp_solve(sp, sdp_tol);

  std::vector<CMat> povm(kk);
  CMat sum(d, d);
  for (int a = 0; a < kk; ++a) {
    CMat m = unembed_hermitian(sol.X.mat[a]);
    // clamp tiny negative eigenvalues
    const auto e = hermitian_eig(m);
    CMat clamped(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cplx acc{};
        for (int t = 0; t < d; ++t) {
          const double lam = std::max(e.values[t], 0.0);
          if (lam == 0.0) continue;
          acc += e.vectors(i, t) * lam * std::conj(e.vectors(j, t));
        }
        clamped(i, j) = acc;
      }
    clamped.hermitize();
    povm[a] = clamped;
    sum += clamped;
  }
  // renormalize: M_a <- T^{-1/2} M_a T^{-1/2} with T = sum M_a (close to I)
  const auto es = hermitian_eig(sum);
  if (es.values.front() <= 1e-8) throw SolverError("povm_step: degenerate POVM sum");
  CMat tinv(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx acc{};
      for (int t = 0; t < d; ++t)
        acc += es.vectors(i, t) * (1.0 / std::sqrt(es.values[t])) * std::conj(es.vectors(j, t));
      tinv(i, j) = acc;
    }
  for (int a = 0; a < kk; ++a) {
    povm[a] = matmul(matmul(tinv, povm[a]), tinv);
    povm[a].hermitize();
  }
  return povm;
}

inline double povm_objective(const std::vector<CMat>& povm, const std::vector<CMat>& k_ops) {
  double v = 0.0;
  for (size_t a = 0; a < povm.size(); ++a) v += matmul(povm[a], k_ops[a]).trace().real();
  return v;
}

// deterministic strategy embedded with flat projectors: the chosen outcome
// gets the identity, every other outcome the zero operator
inline std::vector<std::vector<CMat>> embed_strategy(const DeterministicStrategy& s, int k,
                                                     int d) {
  std::vector<std::vector<CMat>> povms(s.settings());
  for (int x = 1; x <= s.settings(); ++x) {
    povms[x - 1].assign(k, CMat(d, d));
    povms[x - 1][s(x) - 1] = CMat::identity(d);
  }
  return povms;
}

// random projective measurements: orthogonalize a standard-normal complex
// matrix and hand the columns out to the outcomes in near-equal shares
inline std::vector<std::vector<CMat>> random_povms(int settings, int k, int d, Rng& rng) {
  std::vector<std::vector<CMat>> povms(settings);
  for (int x = 0; x < settings; ++x) {
    CMat gauss(d, d);
    for (auto& v : gauss.a) v = cplx(rng.gaussian(), rng.gaussian());
    // modified Gram-Schmidt on columns
    for (int c = 0; c < d; ++c) {
      for (int prev = 0; prev < c; ++prev) {
        cplx dot{};
        for (int i = 0; i < d; ++i) dot += std::conj(gauss(i, prev)) * gauss(i, c);
        for (int i = 0; i < d; ++i) gauss(i, c) -= dot * gauss(i, prev);
      }
      double nrm = 0.0;
      for (int i = 0; i < d; ++i) nrm += std::norm(gauss(i, c));
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12) {  // essentially impossible; restart the column basis-aligned
        gauss(c, c) = 1.0;
        nrm = 1.0;
      }
      for (int i = 0; i < d; ++i) gauss(i, c) /= nrm;
    }
    povms[x].assign(k, CMat(d, d));
    const int base = d / k, rem = d % k;
    int col = 0;
    for (int a = 0; a < k; ++a) {
      const int take = base + (a < rem ? 1 : 0);
      for (int t = 0; t < take; ++t, ++col)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            povms[x][a](i, j) += gauss(i, col) * std::conj(gauss(j, col));
    }
  }
  return povms;
}

}  // namespace seesaw_detail

inline BoundReport seesaw(const BellGame& game, int d_a, int d_b, int restarts,
                          std::uint64_t seed, const Tolerances& tol = default_tolerances(),
                          const BoundReport* lhv_hint = nullptr, int threads = 1) {
  using namespace seesaw_detail;
  if (d_a < 2 || d_b < 2) throw ValidationError("seesaw requires local dimensions >= 2");
  const int n = game.num_settings;
  const int k = game.num_outcomes;

  BoundReport lhv_local;
  if (!lhv_hint) {
    lhv_local = lhv_bound(game, tol);
    lhv_hint = &lhv_local;
  }

  struct RunResult {
    QuantumStrategy qs;
    RestartTrace trace;
  };
  const int total_runs = restarts + 1;  // run 0 is the LHV-seeded one
  std::vector<RunResult> runs(total_runs);
  Rng base_rng(seed);

  auto one_run = [&](int run_idx) {
    RunResult out;
    out.trace.index = run_idx;
    QuantumStrategy qs;
    qs.d_a = d_a;
    qs.d_b = d_b;
    try {
      Rng rng = base_rng.split(static_cast<std::uint64_t>(run_idx));
      if (run_idx == 0) {
        qs.povms_a = embed_strategy(lhv_hint->strategies->first, k, d_a);
        qs.povms_b = embed_strategy(lhv_hint->strategies->second, k, d_b);
      } else {
        qs.povms_a = random_povms(n, k, d_a, rng);
        qs.povms_b = random_povms(n, k, d_b, rng);
      }
      std::vector<cplx> psi(static_cast<size_t>(d_a) * d_b);
      psi[0] = 1.0;
      qs.set_pure(psi);

      double value = -1.0;
      for (int iter = 0; iter < tol.seesaw_max_iter; ++iter) {
        ++out.trace.iterations;
        // state step: top eigenvector of the Bell operator
        {
          const CMat g = bell_operator(game, qs);
          const auto e = hermitian_eig(g);
          qs.set_pure(eig_column(e, g.rows - 1));
        }
        // Alice step
        {
          std::vector<CMat> tb(static_cast<size_t>(k) * n);
          const CMat id_a = CMat::identity(d_a);
          for (int y = 1; y <= n; ++y)
            for (int b = 1; b <= k; ++b)
              tb[static_cast<size_t>(b - 1) * n + (y - 1)] = partial_trace_B(
                  matmul(qs.rho, kron(id_a, qs.povms_b[y - 1][b - 1])), d_a, d_b);
          for (int x = 1; x <= n; ++x) {
            std::vector<CMat> k_ops(k, CMat(d_a, d_a));
            for (int a = 1; a <= k; ++a)
              for (int b = 1; b <= k; ++b)
                for (int y = 1; y <= n; ++y) {
                  const double c = game.at(a, b, x, y);
                  if (c == 0.0) continue;
                  const CMat& t = tb[static_cast<size_t>(b - 1) * n + (y - 1)];
                  for (size_t i = 0; i < k_ops[a - 1].a.size(); ++i)
                    k_ops[a - 1].a[i] += c * t.a[i];
                }
            for (auto& op : k_ops) op.hermitize();
            const double before = povm_objective(qs.povms_a[x - 1], k_ops);
            try {
              auto cand = povm_step(k_ops, d_a, tol);
              if (povm_objective(cand, k_ops) > before) qs.povms_a[x - 1] = std::move(cand);
            } catch (const SolverError&) {
              // keep the previous POVM for this setting
            }
          }
        }
        // Bob step (mirror)
        {
          std::vector<CMat> ta(static_cast<size_t>(k) * n);
          const CMat id_b = CMat::identity(d_b);
          for (int x = 1; x <= n; ++x)
            for (int a = 1; a <= k; ++a)
              ta[static_cast<size_t>(a - 1) * n + (x - 1)] = partial_trace_A(
                  matmul(qs.rho, kron(qs.povms_a[x - 1][a - 1], id_b)), d_a, d_b);
          for (int y = 1; y <= n; ++y) {
            std::vector<CMat> k_ops(k, CMat(d_b, d_b));
            for (int b = 1; b <= k; ++b)
              for (int a = 1; a <= k; ++a)
                for (int x = 1; x <= n; ++x) {
                  const double c = game.at(a, b, x, y);
                  if (c == 0.0) continue;
                  const CMat& t = ta[static_cast<size_t>(a - 1) * n + (x - 1)];
                  for (size_t i = 0; i < k_ops[b - 1].a.size(); ++i)
                    k_ops[b - 1].a[i] += c * t.a[i];
                }
            for (auto& op : k_ops) op.hermitize();
            const double before = povm_objective(qs.povms_b[y - 1], k_ops);
            try {
              auto cand = povm_step(k_ops, d_b, tol);
              if (povm_objective(cand, k_ops) > before) qs.povms_b[y - 1] = std::move(cand);
            } catch (const SolverError&) {
            }
          }
        }
        // value after the full sweep, with the state about to be refreshed
        const CMat g = bell_operator(game, qs);
        const auto gp = matvec(g, *qs.pure);
        double v = 0.0;
        for (size_t i = 0; i < gp.size(); ++i) v += (std::conj((*qs.pure)[i]) * gp[i]).real();
        out.trace.value_history.push_back(v);
        if (v - value < tol.seesaw_improve) {
          value = std::max(value, v);
          out.trace.converged = true;
          break;
        }
        value = v;
      }
      out.trace.value = value;
      out.qs = std::move(qs);
    } catch (const std::exception&) {
      out.trace.failed = true;
      out.trace.value = -1.0;
    }
    runs[run_idx] = std::move(out);
  };

  parallel_for(total_runs, threads, one_run);

  int best = -1;
  for (int i = 0; i < total_runs; ++i) {
    if (runs[i].trace.failed) continue;
    if (best < 0 || runs[i].trace.value > runs[best].trace.value + 1e-12) best = i;
  }

  BoundReport rep;
  rep.kind = BoundKind::SEESAW;
  rep.diag.seed = seed;
  rep.diag.restarts_used = restarts;
  for (const auto& r : runs) rep.diag.restarts.push_back(r.trace);
  if (best < 0) {
    // even the LHV-seeded run failed; fall back to the embedded strategy
    rep.diag.reliable = false;
    rep.diag.note = "all restarts failed; returning the embedded LHV strategy";
    QuantumStrategy qs;
    qs.d_a = d_a;
    qs.d_b = d_b;
    qs.povms_a = embed_strategy(lhv_hint->strategies->first, k, d_a);
    qs.povms_b = embed_strategy(lhv_hint->strategies->second, k, d_b);
    std::vector<cplx> psi(static_cast<size_t>(d_a) * d_b);
    psi[0] = 1.0;
    qs.set_pure(psi);
    rep.quantum = qs;
    rep.value = game_value(game, quantum_box(qs));
    return rep;
  }
  rep.quantum = runs[best].qs;
  rep.value = game_value(game, quantum_box(runs[best].qs));
  rep.diag.iterations = runs[best].trace.iterations;
  bool any_converged = false;
  for (const auto& r : runs) any_converged = any_converged || (r.trace.converged && !r.trace.failed);
  rep.diag.reliable = any_converged;
  return rep;
}

// ---------------------------------------------------------------------------
// Critical white-noise weight at which the strategy stops beating the LHV
// bound: nu_crit = (lhv - v0) / (v1 - v0).
struct NuCritResult {
  double nu = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  bool degenerate = false;  // v0 == lhv: advantage survives any noise level
};

inline NuCritResult nu_crit(const QuantumStrategy& qs, const BellGame& game, double lhv) {
  NuCritResult r;
  r.v0 = noise_value(qs, game, 0.0);
  r.v1 = noise_value(qs, game, 1.0);
  if (r.v1 <= lhv + 1e-12)
    throw ValidationError("no finite nu_crit: strategy value " + std::to_string(r.v1) +
                          " does not exceed the LHV bound " + std::to_string(lhv));
  if (std::abs(lhv - r.v0) < 1e-12) {
    r.degenerate = true;
    r.nu = 0.0;
    return r;
  }
  r.nu = (lhv - r.v0) / (r.v1 - r.v0);
  return r;
}

}  // namespace bellmeet
