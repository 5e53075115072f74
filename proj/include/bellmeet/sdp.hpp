#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bellmeet/errors.hpp"
#include "bellmeet/linalg.hpp"
#include "bellmeet/tolerances.hpp"

namespace bellmeet {

// Block-diagonal real symmetric SDP in standard form:
//   maximize  <C, X>   s.t.  <A_k, X> = b_k,  X >= 0 (PSD per block)
// with the dual  minimize b.y  s.t.  Z = sum_k y_k A_k - C >= 0.
// Hermitian problems enter through the real symmetric embedding
// (see linalg.hpp); 1x1 and Diag blocks make LPs a special case.
struct SdpBlockSpec {
  int dim = 0;
  bool diag = false;
};

// Values aligned with the block structure: dense blocks in `mat`,
// diagonal blocks in `vec` (the unused holder stays empty-sized).
struct SdpBlockData {
  std::vector<RMat> mat;
  std::vector<std::vector<double>> vec;

  static SdpBlockData zeros(const std::vector<SdpBlockSpec>& blocks) {
    SdpBlockData d;
    d.mat.resize(blocks.size());
    d.vec.resize(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].diag)
        d.vec[b].assign(blocks[b].dim, 0.0);
      else
        d.mat[b] = RMat(blocks[b].dim, blocks[b].dim);
    }
    return d;
  }
  static SdpBlockData identity(const std::vector<SdpBlockSpec>& blocks, double scale) {
    SdpBlockData d = zeros(blocks);
    for (size_t b = 0; b < blocks.size(); ++b) {
      if (!d.vec[b].empty())
        for (auto& v : d.vec[b]) v = scale;
      else
        for (int i = 0; i < d.mat[b].rows; ++i) d.mat[b](i, i) = scale;
    }
    return d;
  }
};

struct SdpConstraint {
  struct Term {
    int block;
    int i, j;   // i <= j; symmetric value v at (i,j) and (j,i)
    double v;
  };
  std::vector<Term> terms;
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<SdpBlockSpec> blocks;
  SdpBlockData objective;  // C
  std::vector<SdpConstraint> constraints;

  void validate() const {
    for (const auto& c : constraints)
      for (const auto& t : c.terms) {
        if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
          throw ValidationError("sdp: constraint references unknown block");
        const auto& bs = blocks[t.block];
        if (t.i > t.j || t.j >= bs.dim) throw ValidationError("sdp: bad constraint entry");
        if (bs.diag && t.i != t.j)
          throw ValidationError("sdp: off-diagonal entry in a diagonal block");
      }
  }
};

struct SdpResult {
  bool converged = false;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double rel_gap = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  int iterations = 0;
  SdpBlockData X;
  std::vector<double> y;
  SdpBlockData Z;

  std::string residual_report() const {
    std::ostringstream os;
    os << "iterations=" << iterations << " primal_infeas=" << primal_infeas
       << " dual_infeas=" << dual_infeas << " rel_gap=" << rel_gap;
    return os.str();
  }
};

struct SdpOptions {
  bool trace = false;
  std::ostream* trace_out = nullptr;  // line-delimited JSON per iteration
};

namespace sdp_detail {

inline double inner(const SdpBlockData& a, const SdpBlockData& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.mat.size(); ++k) {
    if (!a.vec[k].empty()) {
      for (size_t i = 0; i < a.vec[k].size(); ++i) s += a.vec[k][i] * b.vec[k][i];
    } else {
      s += inner_real(a.mat[k], b.mat[k]);
    }
  }
  return s;
}

inline void axpy(SdpBlockData& y, double alpha, const SdpBlockData& x) {
  for (size_t k = 0; k < y.mat.size(); ++k) {
    if (!y.vec[k].empty()) {
      for (size_t i = 0; i < y.vec[k].size(); ++i) y.vec[k][i] += alpha * x.vec[k][i];
    } else {
      for (size_t i = 0; i < y.mat[k].a.size(); ++i) y.mat[k].a[i] += alpha * x.mat[k].a[i];
    }
  }
}

inline double frob(const SdpBlockData& a) {
  double s = 0.0;
  for (size_t k = 0; k < a.mat.size(); ++k) {
    if (!a.vec[k].empty())
      for (double v : a.vec[k]) s += v * v;
    else
      for (double v : a.mat[k].a) s += v * v;
  }
  return std::sqrt(s);
}

inline double apply_constraint(const SdpConstraint& c, const SdpBlockData& x) {
  double s = 0.0;
  for (const auto& t : c.terms) {
    if (!x.vec[t.block].empty())
      s += t.v * x.vec[t.block][t.i];
    else
      s += (t.i == t.j ? t.v * x.mat[t.block](t.i, t.i)
                       : 2.0 * t.v * x.mat[t.block](t.i, t.j));
  }
  return s;
}

inline void add_adjoint(SdpBlockData& acc, const SdpConstraint& c, double yk) {
  if (yk == 0.0) return;
  for (const auto& t : c.terms) {
    if (!acc.vec[t.block].empty()) {
      acc.vec[t.block][t.i] += yk * t.v;
    } else {
      acc.mat[t.block](t.i, t.j) += yk * t.v;
      if (t.i != t.j) acc.mat[t.block](t.j, t.i) += yk * t.v;
    }
  }
}

// R^{-T} M R^{-1} for lower-triangular R
inline RMat congruence_inv(const RMat& r, const RMat& m) {
  const int n = r.rows;
  // Y = R^{-T} M: back-substitute R^T Y = M across whole rows
  RMat y = m;
  for (int i = n - 1; i >= 0; --i) {
    double* yi = &y.a[static_cast<size_t>(i) * n];
    for (int k = i + 1; k < n; ++k) {
      const double rki = r(k, i);
      if (rki == 0.0) continue;
      const double* yk = &y.a[static_cast<size_t>(k) * n];
      for (int j = 0; j < n; ++j) yi[j] -= rki * yk[j];
    }
    const double inv = 1.0 / r(i, i);
    for (int j = 0; j < n; ++j) yi[j] *= inv;
  }
  // W = Y R^{-1}: per-row back-substitution in W R = Y
  RMat w(n, n);
  for (int i = 0; i < n; ++i) {
    double* wi = &w.a[static_cast<size_t>(i) * n];
    const double* yi = &y.a[static_cast<size_t>(i) * n];
    for (int j = n - 1; j >= 0; --j) {
      double s = yi[j];
      for (int k = j + 1; k < n; ++k) s -= wi[k] * r(k, j);
      wi[j] = s / r(j, j);
    }
  }
  // symmetrize against roundoff
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (w(i, j) + w(j, i));
      w(i, j) = w(j, i) = v;
    }
  return w;
}

// largest step alpha with M + alpha D still PSD (dense blocks), by
// positive-definiteness bisection; every returned alpha is certified by a
// successful factorization, so callers may take any fraction of it
inline double max_step_dense(const RMat& m, const RMat& d, RMat& scratch) {
  const size_t len = m.a.size();
  scratch.rows = m.rows;
  scratch.cols = m.cols;
  scratch.a.resize(len);
  auto pd_at = [&](double alpha) {
    for (size_t i = 0; i < len; ++i) scratch.a[i] = m.a[i] + alpha * d.a[i];
    return cholesky_in_place(scratch);
  };
  const double cap = 1.25;  // anything past a full unit step is "unbounded"
  if (pd_at(cap)) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pd_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace sdp_detail

inline SdpResult sdp_solve(const SdpProblem& prob, const Tolerances& tol = default_tolerances(),
                           const SdpOptions& opts = {}) {
  using namespace sdp_detail;
  prob.validate();
  const int m = static_cast<int>(prob.constraints.size());
  const auto& blocks = prob.blocks;
  int n_total = 0;
  for (const auto& b : blocks) n_total += b.dim;
  if (n_total == 0 || m == 0) throw ValidationError("sdp: empty problem");

  double max_rhs = 0.0, max_a = 0.0;
  for (const auto& c : prob.constraints) {
    max_rhs = std::max(max_rhs, std::abs(c.rhs));
    for (const auto& t : c.terms) max_a = std::max(max_a, std::abs(t.v));
  }
  const double norm_c = frob(prob.objective);
  const double tau_p = std::max({10.0, std::sqrt(double(n_total)),
                                 double(n_total) * max_rhs / (1.0 + max_a)});
  const double tau_d = std::max({10.0, std::sqrt(double(n_total)), max_a + norm_c});

  SdpResult res;
  res.X = SdpBlockData::identity(blocks, tau_p);
  res.Z = SdpBlockData::identity(blocks, tau_d);
  res.y.assign(m, 0.0);

  std::vector<double> bvec(m);
  for (int k = 0; k < m; ++k) bvec[k] = prob.constraints[k].rhs;
  double norm_b = 0.0;
  for (double v : bvec) norm_b += v * v;
  norm_b = std::sqrt(norm_b);

  double mu_prev = 1e300;
  int stall = 0;

  for (int iter = 0; iter < tol.sdp_max_iter; ++iter) {
    res.iterations = iter;

    // residuals
    std::vector<double> rp(m);
    for (int k = 0; k < m; ++k) rp[k] = bvec[k] - apply_constraint(prob.constraints[k], res.X);
    SdpBlockData rd = prob.objective;  // Rd = A^T(y) - Z - C, stored negated later
    axpy(rd, 1.0, res.Z);
    for (int k = 0; k < m; ++k) add_adjoint(rd, prob.constraints[k], -res.y[k]);
    // rd now holds C + Z - A^T(y) = -Rd
    const double gap_inner = inner(res.X, res.Z);
    const double mu = gap_inner / n_total;
    const double pobj = inner(prob.objective, res.X);
    double dobj = 0.0;
    for (int k = 0; k < m; ++k) dobj += bvec[k] * res.y[k];
    double rp_norm = 0.0;
    for (double v : rp) rp_norm += v * v;
    rp_norm = std::sqrt(rp_norm);
    res.primal_infeas = rp_norm / (1.0 + norm_b);
    res.dual_infeas = frob(rd) / (1.0 + norm_c);
    res.rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    res.primal_value = pobj;
    res.dual_value = dobj;

    if (opts.trace && opts.trace_out)
      *opts.trace_out << "{\"iter\":" << iter << ",\"mu\":" << mu << ",\"pobj\":" << pobj
                      << ",\"dobj\":" << dobj << ",\"pinf\":" << res.primal_infeas
                      << ",\"dinf\":" << res.dual_infeas << "}\n";

    if (res.primal_infeas <= tol.sdp_primal_feas && res.dual_infeas <= tol.sdp_dual_feas &&
        res.rel_gap <= tol.sdp_rel_gap) {
      res.converged = true;
      return res;
    }
    if (mu > 0.995 * mu_prev && res.rel_gap > tol.sdp_rel_gap) {
      if (++stall > 12)
        throw SolverError("sdp: slow progress, " + res.residual_report());
    } else {
      stall = 0;
    }
    mu_prev = mu;
    if (std::abs(dobj) > 1e14 || frob(res.Z) > 1e14)
      throw SolverError("sdp: dual diverging (likely primal infeasible), " +
                        res.residual_report());

    // NT scaling W per block; also Z^{-1}
    std::vector<RMat> w(blocks.size()), zinv_m(blocks.size());
    std::vector<std::vector<double>> wd(blocks.size()), zinv_d(blocks.size());
    for (size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].diag) {
        const auto& xv = res.X.vec[b];
        const auto& zv = res.Z.vec[b];
        wd[b].resize(xv.size());
        zinv_d[b].resize(xv.size());
        for (size_t i = 0; i < xv.size(); ++i) {
          wd[b][i] = std::sqrt(xv[i] / zv[i]);
          zinv_d[b][i] = 1.0 / zv[i];
        }
      } else {
        RMat r;
        if (!cholesky(res.Z.mat[b], r)) throw SolverError("sdp: Z lost definiteness");
        RMat s = matmul(matmul(r.adjoint(), res.X.mat[b]), r);
        for (int i = 0; i < s.rows; ++i)
          for (int j = i + 1; j < s.cols; ++j) {
            const double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = s(j, i) = v;
          }
        const auto e = hermitian_eig(s);
        if (e.values.front() <= 0.0) throw SolverError("sdp: X lost definiteness");
        RMat shalf(s.rows, s.cols);
        for (int i = 0; i < s.rows; ++i)
          for (int j = 0; j < s.cols; ++j) {
            double acc = 0.0;
            for (int k = 0; k < s.rows; ++k)
              acc += e.vectors(i, k) * std::sqrt(e.values[k]) * e.vectors(j, k);
            shalf(i, j) = acc;
          }
        w[b] = congruence_inv(r, shalf);
        zinv_m[b] = congruence_inv(r, RMat::identity(s.rows));
      }
    }

    // helper: V = W A_k W per constraint (dense blocks), diag handled inline
    auto schur_row = [&](const SdpConstraint& ck, SdpBlockData& v) {
      for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diag) {
          std::fill(v.vec[b].begin(), v.vec[b].end(), 0.0);
        } else {
          std::fill(v.mat[b].a.begin(), v.mat[b].a.end(), 0.0);
        }
      }
      for (const auto& t : ck.terms) {
        if (!v.vec[t.block].empty()) {
          v.vec[t.block][t.i] += t.v * wd[t.block][t.i] * wd[t.block][t.i];
        } else {
          const RMat& wb = w[t.block];
          RMat& vb = v.mat[t.block];
          const int d = wb.rows;
          const double* wi = &wb.a[static_cast<size_t>(t.i) * d];
          const double* wj = &wb.a[static_cast<size_t>(t.j) * d];
          if (t.i == t.j) {
            for (int p = 0; p < d; ++p) {
              const double f = t.v * wi[p];
              double* row = &vb.a[static_cast<size_t>(p) * d];
              for (int q = 0; q < d; ++q) row[q] += f * wi[q];
            }
          } else {
            for (int p = 0; p < d; ++p) {
              const double fi = t.v * wi[p];
              const double fj = t.v * wj[p];
              double* row = &vb.a[static_cast<size_t>(p) * d];
              for (int q = 0; q < d; ++q) row[q] += fi * wj[q] + fj * wi[q];
            }
          }
        }
      }
    };

    // Schur complement
    RMat schur(m, m);
    SdpBlockData vk = SdpBlockData::zeros(blocks);
    for (int l = 0; l < m; ++l) {
      schur_row(prob.constraints[l], vk);
      for (int k = l; k < m; ++k) {
        const double v = apply_constraint(prob.constraints[k], vk);
        schur(k, l) = v;
        schur(l, k) = v;
      }
    }
    // tiny ridge keeps the factorization alive near the boundary
    for (int k = 0; k < m; ++k) schur(k, k) += 1e-13 * (1.0 + schur(k, k));
    RMat schur_l;
    if (!cholesky(schur, schur_l))
      throw SolverError("sdp: Schur complement not positive definite, " + res.residual_report());

    // W Rd W with rd = -(Rd); we need A(W Rd W) = -A(W rd W)
    SdpBlockData wrdw = SdpBlockData::zeros(blocks);
    for (size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].diag) {
        for (size_t i = 0; i < wrdw.vec[b].size(); ++i)
          wrdw.vec[b][i] = wd[b][i] * wd[b][i] * rd.vec[b][i];  // rd = -Rd
      } else {
        wrdw.mat[b] = matmul(matmul(w[b], rd.mat[b]), w[b]);
      }
    }

    auto solve_direction = [&](double sigma_mu, std::vector<double>& dy, SdpBlockData& dxo,
                               SdpBlockData& dzo) {
      // Rc = sigma_mu * Z^{-1} - X
      SdpBlockData rc = SdpBlockData::zeros(blocks);
      for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diag) {
          for (size_t i = 0; i < rc.vec[b].size(); ++i)
            rc.vec[b][i] = sigma_mu * zinv_d[b][i] - res.X.vec[b][i];
        } else {
          rc.mat[b] = zinv_m[b];
          rc.mat[b] *= sigma_mu;
          rc.mat[b] -= res.X.mat[b];
        }
      }

      // Newton system with Rd = A^T(y) - Z - C = -rd:
      //   M dy = A(Rc) - A(W Rd W) - rp = A(Rc) + A(W rd W) - rp
      std::vector<double> rhs(m);
      for (int k = 0; k < m; ++k)
        rhs[k] = apply_constraint(prob.constraints[k], rc) +
                 apply_constraint(prob.constraints[k], wrdw) - rp[k];

      dy = solve_lower_t(schur_l, solve_lower(schur_l, rhs));

      // dZ = A^T(dy) + Rd = A^T(dy) - rd
      dzo = SdpBlockData::zeros(blocks);
      for (int k = 0; k < m; ++k) add_adjoint(dzo, prob.constraints[k], dy[k]);
      axpy(dzo, -1.0, rd);
      // dX = Rc - W dZ W
      dxo = rc;
      for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diag) {
          for (size_t i = 0; i < dxo.vec[b].size(); ++i)
            dxo.vec[b][i] -= wd[b][i] * wd[b][i] * dzo.vec[b][i];
        } else {
          RMat wdw = matmul(matmul(w[b], dzo.mat[b]), w[b]);
          for (int i = 0; i < wdw.rows; ++i)
            for (int j = i + 1; j < wdw.cols; ++j) {
              const double v = 0.5 * (wdw(i, j) + wdw(j, i));
              wdw(i, j) = wdw(j, i) = v;
            }
          dxo.mat[b] -= wdw;
        }
      }
    };

    RMat step_scratch;
    auto max_step = [&](const SdpBlockData& base, const SdpBlockData& dir) {
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].diag) {
          for (size_t i = 0; i < base.vec[b].size(); ++i)
            if (dir.vec[b][i] < 0.0)
              alpha = std::min(alpha, -base.vec[b][i] / dir.vec[b][i]);
        } else {
          alpha = std::min(alpha, max_step_dense(base.mat[b], dir.mat[b], step_scratch));
        }
      }
      return alpha;
    };

    // predictor
    std::vector<double> dy;
    SdpBlockData dx, dz;
    solve_direction(0.0, dy, dx, dz);
    const double ap_aff = std::min(1.0, 0.98 * max_step(res.X, dx));
    const double ad_aff = std::min(1.0, 0.98 * max_step(res.Z, dz));
    // estimated gap after the affine step
    SdpBlockData xa = res.X, za = res.Z;
    axpy(xa, ap_aff, dx);
    axpy(za, ad_aff, dz);
    const double gap_aff = inner(xa, za);
    double sigma = std::pow(gap_aff / gap_inner, 3.0);
    sigma = std::min(0.99, std::max(1e-4, sigma));

    // corrector (recentering with the same factorization)
    solve_direction(sigma * mu, dy, dx, dz);
    const double ap = std::min(1.0, 0.98 * max_step(res.X, dx));
    const double ad = std::min(1.0, 0.98 * max_step(res.Z, dz));
    axpy(res.X, ap, dx);
    axpy(res.Z, ad, dz);
    for (int k = 0; k < m; ++k) res.y[k] += ad * dy[k];
  }

  throw SolverError("sdp: iteration cap reached, " + res.residual_report());
}

}  // namespace bellmeet
