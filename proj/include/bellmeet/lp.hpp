#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bellmeet/errors.hpp"
#include "bellmeet/linalg.hpp"
#include "bellmeet/tolerances.hpp"

namespace bellmeet {

// maximize c.x  subject to  A x = b  and  x_j >= 0 where nonneg[j]
// (free variables are split internally).  Columns are sparse.
struct LpProblem {
  int num_vars = 0;
  int num_rows = 0;
  std::vector<double> objective;
  std::vector<std::vector<std::pair<int, double>>> cols;  // per var: (row, coef)
  std::vector<double> rhs;
  std::vector<bool> nonneg;

  int add_var(double obj, bool nn = true) {
    objective.push_back(obj);
    cols.emplace_back();
    nonneg.push_back(nn);
    return num_vars++;
  }
  int add_row(double b) {
    rhs.push_back(b);
    return num_rows++;
  }
  void set_coef(int var, int row, double v) {
    if (v != 0.0) cols[var].emplace_back(row, v);
  }
};

struct LpOptions {
  bool trace = false;
  std::ostream* trace_out = nullptr;  // line-delimited JSON per pivot
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Optimal;
  double value = 0.0;
  std::vector<double> x;       // primal, original variable order
  std::vector<double> y;       // duals per row
  double gap = 0.0;            // |c.x - b.y|
  double dual_infeas = 0.0;    // max_j max(0, c_j - y.a_j) over nonbasic
  std::vector<double> farkas;  // infeasible: y with y.A >= 0, y.b < 0
  std::vector<double> ray;     // unbounded: improving ray over internal vars
  long iterations = 0;
};

namespace lp_detail {

struct Tableau {
  int m, n;                 // rows, structural columns (after splitting)
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> rhs;  // scaled so rhs >= 0
  std::vector<double> cost; // phase-2 costs
  std::vector<int> basis;   // size m; values in [0, n + m), >= n means artificial
  RMat binv;
  std::vector<double> xb;   // basic values

  std::vector<double> col_dense(int j) const {
    std::vector<double> d(m, 0.0);
    if (j >= n) {
      d[j - n] = 1.0;  // artificial
    } else {
      for (const auto& [r, v] : cols[j]) d[r] = v;
    }
    return d;
  }

  void refactorize() {
    // invert the basis matrix by Gauss-Jordan with partial pivoting
    RMat b(m, m);
    for (int k = 0; k < m; ++k) {
      const auto col = col_dense(basis[k]);
      for (int i = 0; i < m; ++i) b(i, k) = col[i];
    }
    RMat inv = RMat::identity(m);
    for (int c = 0; c < m; ++c) {
      int piv = c;
      for (int r = c + 1; r < m; ++r)
        if (std::abs(b(r, c)) > std::abs(b(piv, c))) piv = r;
      if (std::abs(b(piv, c)) < 1e-13)
        throw SolverError("lp: singular basis during refactorization");
      if (piv != c)
        for (int k = 0; k < m; ++k) {
          std::swap(b(c, k), b(piv, k));
          std::swap(inv(c, k), inv(piv, k));
        }
      const double d = b(c, c);
      for (int k = 0; k < m; ++k) {
        b(c, k) /= d;
        inv(c, k) /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == c) continue;
        const double f = b(r, c);
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) {
          b(r, k) -= f * b(c, k);
          inv(r, k) -= f * inv(c, k);
        }
      }
    }
    binv = std::move(inv);
    recompute_xb();
  }

  void recompute_xb() {
    xb.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += binv(i, k) * rhs[k];
      xb[i] = s;
    }
  }

  std::vector<double> dual(const std::vector<double>& costs) const {
    std::vector<double> y(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double cb = costs[basis[i]];
      if (cb == 0.0) continue;
      for (int k = 0; k < m; ++k) y[k] += cb * binv(i, k);
    }
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& costs,
                      const std::vector<double>& y) const {
    double s = costs[j];
    if (j >= n) return s - y[j - n];
    for (const auto& [r, v] : cols[j]) s -= y[r] * v;
    return s;
  }
};

}  // namespace lp_detail

// Revised two-phase simplex.  Dantzig pricing with a permanent switch to
// Bland's rule if the objective stalls; artificials that linger basic at
// zero are ejected through the ratio test so they can never come back
// positive.
inline LpResult lp_solve(const LpProblem& prob, const Tolerances& tol = default_tolerances(),
                         const LpOptions& opts = {}) {
  using lp_detail::Tableau;
  const int m = prob.num_rows;

  // split free variables: internal j -> (orig, sign)
  std::vector<std::pair<int, double>> var_map;
  Tableau t;
  t.m = m;
  t.cols.clear();
  t.cost.clear();
  for (int j = 0; j < prob.num_vars; ++j) {
    var_map.emplace_back(j, 1.0);
    t.cols.push_back(prob.cols[j]);
    t.cost.push_back(prob.objective[j]);
    if (!prob.nonneg[j]) {
      var_map.emplace_back(j, -1.0);
      auto neg = prob.cols[j];
      for (auto& [r, v] : neg) v = -v;
      t.cols.push_back(std::move(neg));
      t.cost.push_back(-prob.objective[j]);
    }
  }
  t.n = static_cast<int>(t.cols.size());
  t.rhs = prob.rhs;
  // scale rows to rhs >= 0
  std::vector<double> row_sign(m, 1.0);
  for (int r = 0; r < m; ++r)
    if (t.rhs[r] < 0) {
      row_sign[r] = -1.0;
      t.rhs[r] = -t.rhs[r];
    }
  for (auto& col : t.cols)
    for (auto& [r, v] : col) v *= row_sign[r];

  t.basis.resize(m);
  for (int i = 0; i < m; ++i) t.basis[i] = t.n + i;
  t.binv = RMat::identity(m);
  t.xb = t.rhs;

  LpResult res;
  const double eps = tol.lp_pivot;

  auto run_phase = [&](const std::vector<double>& costs, bool phase1) -> int {
    // returns 0 optimal, 1 unbounded
    long stall = 0;
    double last_obj = -1e300;
    bool bland = false;
    const long stall_limit = 4L * (t.n + m) + 200;
    int since_refactor = 0;
    std::vector<char> is_basic(t.n + m, 0);
    for (int i = 0; i < m; ++i) is_basic[t.basis[i]] = 1;
    for (;;) {
      const auto y = t.dual(costs);
      int enter = -1;
      double best = eps;
      for (int j = 0; j < t.n; ++j) {  // artificials never (re-)enter
        if (is_basic[j]) continue;
        const double rc = t.reduced_cost(j, costs, y);
        if (bland) {
          if (rc > eps) {
            enter = j;
            break;
          }
        } else if (rc > best) {
          best = rc;
          enter = j;
        }
      }
      if (enter < 0) return 0;  // optimal

      const auto acol = t.col_dense(enter);
      std::vector<double> d(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += t.binv(i, k) * acol[k];
        d[i] = s;
      }

      // ratio test; artificial basics blocked from growing are ejected at 0
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        const bool artificial = t.basis[i] >= t.n;
        if (d[i] > eps) {
          const double ratio = std::max(t.xb[i], 0.0) / d[i];
          if (leave < 0 || ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 &&
               (bland ? t.basis[i] < t.basis[leave] : std::abs(d[i]) > std::abs(d[leave])))) {
            leave = i;
            best_ratio = ratio;
          }
        } else if (!phase1 && artificial && d[i] < -eps && t.xb[i] <= 1e-9) {
          leave = i;
          best_ratio = 0.0;
          break;
        }
      }
      if (leave < 0) {
        res.ray.assign(t.n, 0.0);
        res.ray[enter] = 1.0;
        for (int i = 0; i < m; ++i)
          if (t.basis[i] < t.n) res.ray[t.basis[i]] = -d[i];
        return 1;
      }

      // pivot: update basis inverse with the eta transform
      ++res.iterations;
      const double piv = d[leave];
      const int leaving_var = t.basis[leave];
      is_basic[leaving_var] = 0;
      is_basic[enter] = 1;
      t.basis[leave] = enter;
      for (int k = 0; k < m; ++k) t.binv(leave, k) /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        const double f = d[i];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) t.binv(i, k) -= f * t.binv(leave, k);
      }
      t.recompute_xb();
      if (++since_refactor >= 256) {
        t.refactorize();
        since_refactor = 0;
      }

      double obj = 0.0;
      for (int i = 0; i < m; ++i) obj += costs[t.basis[i]] * t.xb[i];
      if (opts.trace && opts.trace_out)
        *opts.trace_out << "{\"iter\":" << res.iterations << ",\"phase\":" << (phase1 ? 1 : 2)
                        << ",\"enter\":" << enter << ",\"leave\":" << leaving_var
                        << ",\"objective\":" << obj << "}\n";
      if (obj > last_obj + 1e-12) {
        last_obj = obj;
        stall = 0;
      } else if (++stall > stall_limit && !bland) {
        bland = true;  // anti-cycling fallback
        stall = 0;
      }
      if (res.iterations > 2000000)
        throw SolverError("lp: iteration limit exceeded");
    }
  };

  // phase 1: drive artificials to zero
  std::vector<double> phase1_cost(t.n + m, 0.0);
  for (int i = 0; i < m; ++i) phase1_cost[t.n + i] = -1.0;
  run_phase(phase1_cost, true);
  double art_sum = 0.0;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= t.n) art_sum += std::max(t.xb[i], 0.0);
  if (art_sum > 1e-8) {
    res.status = LpResult::Status::Infeasible;
    const auto y = t.dual(phase1_cost);
    res.farkas.resize(m);
    for (int r = 0; r < m; ++r) res.farkas[r] = -y[r] * row_sign[r];
    return res;
  }

  // phase 2
  std::vector<double> phase2_cost = t.cost;
  phase2_cost.resize(t.n + m, 0.0);
  if (run_phase(phase2_cost, false) == 1) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }

  res.status = LpResult::Status::Optimal;
  res.x.assign(prob.num_vars, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] >= t.n) continue;
    const auto [orig, sign] = var_map[t.basis[i]];
    res.x[orig] += sign * std::max(t.xb[i], 0.0);
  }
  double value = 0.0;
  for (int j = 0; j < prob.num_vars; ++j) value += prob.objective[j] * res.x[j];
  res.value = value;
  const auto y = t.dual(phase2_cost);
  res.y.resize(m);
  for (int r = 0; r < m; ++r) res.y[r] = y[r] * row_sign[r];
  double by = 0.0;
  for (int r = 0; r < m; ++r) by += res.y[r] * prob.rhs[r];
  res.gap = std::abs(by - value);
  double dinf = 0.0;
  for (int j = 0; j < t.n; ++j) dinf = std::max(dinf, t.reduced_cost(j, phase2_cost, y));
  res.dual_infeas = std::max(0.0, dinf);
  return res;
}

}  // namespace bellmeet
