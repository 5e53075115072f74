#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "bellmeet/errors.hpp"
#include "bellmeet/tolerances.hpp"

namespace bellmeet {

using cplx = std::complex<double>;

namespace detail {
inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const cplx& x) { return x.real(); }
}  // namespace detail

// Dense square-or-rectangular matrix, row-major. S is double or complex.
template <class S>
struct DenseMat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  DenseMat() = default;
  DenseMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, S{}) {}

  static DenseMat identity(int n) {
    DenseMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S{1};
    return m;
  }

  S& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  DenseMat& operator+=(const DenseMat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  DenseMat& operator-=(const DenseMat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  DenseMat& operator*=(S s) {
    for (auto& v : a) v *= s;
    return *this;
  }
  friend DenseMat operator+(DenseMat x, const DenseMat& y) { return x += y; }
  friend DenseMat operator-(DenseMat x, const DenseMat& y) { return x -= y; }
  friend DenseMat operator*(S s, DenseMat x) { return x *= s; }

  DenseMat adjoint() const {
    DenseMat m(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(j, i) = detail::conj_of((*this)(i, j));
    return m;
  }

  S trace() const {
    S t{};
    for (int i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
  }

  double frob_norm() const {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(std::complex<double>(v));
    return std::sqrt(s);
  }

  double herm_defect() const {  // max |M - M^dagger| entry, square only
    double m = 0.0;
    for (int i = 0; i < rows; ++i)
      for (int j = i; j < cols; ++j)
        m = std::max(m, std::abs((*this)(i, j) - detail::conj_of((*this)(j, i))));
    return m;
  }

  void hermitize() {
    for (int i = 0; i < rows; ++i)
      for (int j = i; j < cols; ++j) {
        S v = S{0.5} * ((*this)(i, j) + detail::conj_of((*this)(j, i)));
        (*this)(i, j) = v;
        (*this)(j, i) = detail::conj_of(v);
      }
  }
};

using RMat = DenseMat<double>;
using CMat = DenseMat<cplx>;

template <class S>
DenseMat<S> matmul(const DenseMat<S>& x, const DenseMat<S>& y) {
  DenseMat<S> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const S xik = x(i, k);
      if (xik == S{}) continue;
      const S* yrow = &y.a[static_cast<size_t>(k) * y.cols];
      S* zrow = &z.a[static_cast<size_t>(i) * z.cols];
      for (int j = 0; j < y.cols; ++j) zrow[j] += xik * yrow[j];
    }
  }
  return z;
}

template <class S>
std::vector<S> matvec(const DenseMat<S>& m, const std::vector<S>& v) {
  std::vector<S> r(m.rows, S{});
  for (int i = 0; i < m.rows; ++i) {
    S acc{};
    const S* row = &m.a[static_cast<size_t>(i) * m.cols];
    for (int j = 0; j < m.cols; ++j) acc += row[j] * v[j];
    r[i] = acc;
  }
  return r;
}

// Frobenius inner product Re tr(X^dagger Y); for Hermitian args this is tr(XY).
template <class S>
double inner_real(const DenseMat<S>& x, const DenseMat<S>& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.a.size(); ++i)
    s += detail::real_of(detail::conj_of(x.a[i]) * y.a[i]);
  return s;
}

template <class S>
DenseMat<S> kron(const DenseMat<S>& x, const DenseMat<S>& y) {
  DenseMat<S> z(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      const S v = x(i, j);
      if (v == S{}) continue;
      for (int p = 0; p < y.rows; ++p)
        for (int q = 0; q < y.cols; ++q)
          z(i * y.rows + p, j * y.cols + q) += v * y(p, q);
    }
  return z;
}

// |v><v|
template <class S>
DenseMat<S> outer(const std::vector<S>& v) {
  DenseMat<S> m(static_cast<int>(v.size()), static_cast<int>(v.size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = v[i] * detail::conj_of(v[j]);
  return m;
}

// Partial traces over the B (resp. A) factor of an operator on C^dA (x) C^dB.
// Index convention: row = iA*dB + iB.
template <class S>
DenseMat<S> partial_trace_B(const DenseMat<S>& m, int dA, int dB) {
  if (m.rows != dA * dB || m.cols != dA * dB)
    throw ValidationError("partial_trace_B: dimensions do not factorize");
  DenseMat<S> r(dA, dA);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) {
      S acc{};
      for (int b = 0; b < dB; ++b) acc += m(i * dB + b, j * dB + b);
      r(i, j) = acc;
    }
  return r;
}

template <class S>
DenseMat<S> partial_trace_A(const DenseMat<S>& m, int dA, int dB) {
  if (m.rows != dA * dB || m.cols != dA * dB)
    throw ValidationError("partial_trace_A: dimensions do not factorize");
  DenseMat<S> r(dB, dB);
  for (int p = 0; p < dB; ++p)
    for (int q = 0; q < dB; ++q) {
      S acc{};
      for (int a = 0; a < dA; ++a) acc += m(a * dB + p, a * dB + q);
      r(p, q) = acc;
    }
  return r;
}

template <class S>
struct EigResult {
  std::vector<double> values;  // ascending
  DenseMat<S> vectors;         // columns, orthonormal, matching order
};

// Cyclic Jacobi for Hermitian (or real symmetric) matrices.  Unconditionally
// convergent; the sweep cap is a hard error because hitting it means the
// input was not Hermitian to begin with.
template <class S>
EigResult<S> hermitian_eig(DenseMat<S> m, const Tolerances& tol = default_tolerances()) {
  const int n = m.rows;
  if (n != m.cols) throw ValidationError("hermitian_eig: matrix not square");
  if (m.herm_defect() > 1e-12 * std::max(1.0, m.max_abs()) + 1e-13)
    throw ValidationError("hermitian_eig: matrix not Hermitian");
  DenseMat<S> v = DenseMat<S>::identity(n);
  if (n == 1) return {{detail::real_of(m(0, 0))}, v};

  const double scale = std::max(m.max_abs(), 1e-300);
  const double stop = 1e-14 * scale;
  for (int sweep = 0; sweep < tol.eig_max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
    if (off <= stop) break;
    if (sweep == tol.eig_max_sweeps - 1)
      throw SolverError("hermitian_eig: sweep cap reached, off-diagonal " + std::to_string(off));

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const S apq = m(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq <= stop * 1e-2) continue;
        const double app = detail::real_of(m(p, p));
        const double aqq = detail::real_of(m(q, q));
        // phase of the off-diagonal entry; real case gives +-1
        const S phase = apq / S{abs_apq};
        const double tau = (aqq - app) / (2.0 * abs_apq);
        // small-magnitude root of t^2 - 2 tau t - 1 = 0 for this J convention
        const double t = (tau >= 0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // plane rotation J = [[c, -sp], [spc, c]] with sp = s e^{i phi},
        // spc = s e^{-i phi}; new m = J^dagger m J zeroes m(p,q)
        const S sp = S{s} * phase;
        const S spc = detail::conj_of(sp);

        for (int k = 0; k < n; ++k) {  // m <- m J (columns)
          const S mkp = m(k, p), mkq = m(k, q);
          m(k, p) = S{c} * mkp + spc * mkq;
          m(k, q) = S{c} * mkq - sp * mkp;
        }
        for (int k = 0; k < n; ++k) {  // m <- J^dagger m (rows)
          const S mpk = m(p, k), mqk = m(q, k);
          m(p, k) = S{c} * mpk + sp * mqk;
          m(q, k) = S{c} * mqk - spc * mpk;
        }
        m(p, q) = S{};
        m(q, p) = S{};
        for (int k = 0; k < n; ++k) {  // v <- v J
          const S vkp = v(k, p), vkq = v(k, q);
          v(k, p) = S{c} * vkp + spc * vkq;
          v(k, q) = S{c} * vkq - sp * vkp;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = detail::real_of(m(i, i));
  // insertion sort: stable, allocation-free, and n stays small here
  for (int i = 1; i < n; ++i) {
    const int oi = order[i];
    const double v = diag[oi];
    int j = i - 1;
    while (j >= 0 && diag[order[j]] > v) {
      order[j + 1] = order[j];
      --j;
    }
    order[j + 1] = oi;
  }

  EigResult<S> res;
  res.values.resize(n);
  res.vectors = DenseMat<S>(n, n);
  for (int j = 0; j < n; ++j) {
    res.values[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

template <class S>
std::vector<S> eig_column(const EigResult<S>& e, int j) {
  std::vector<S> v(e.vectors.rows);
  for (int i = 0; i < e.vectors.rows; ++i) v[i] = e.vectors(i, j);
  return v;
}

// In-place Cholesky: overwrites the lower triangle of a with L (upper
// triangle left untouched); returns false if not positive definite.
inline bool cholesky_in_place(RMat& a) {
  const int n = a.rows;
  double* p = a.a.data();
  for (int j = 0; j < n; ++j) {
    double d = p[static_cast<size_t>(j) * n + j];
    const double* rj = p + static_cast<size_t>(j) * n;
    for (int k = 0; k < j; ++k) d -= rj[k] * rj[k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    p[static_cast<size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double* ri = p + static_cast<size_t>(i) * n;
      double s = ri[j];
      for (int k = 0; k < j; ++k) s -= ri[k] * rj[k];
      ri[j] = s / ljj;
    }
  }
  return true;
}

// Cholesky of a real symmetric matrix; returns false if not positive
// definite (used both as factorization and as a PD test).
inline bool cholesky(const RMat& m, RMat& l) {
  const int n = m.rows;
  l = RMat(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    const double* lrow_j = &l.a[static_cast<size_t>(j) * n];
    for (int k = 0; k < j; ++k) d -= lrow_j[k] * lrow_j[k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      const double* lrow_i = &l.a[static_cast<size_t>(i) * n];
      for (int k = 0; k < j; ++k) s -= lrow_i[k] * lrow_j[k];
      l(i, j) = s / ljj;
    }
  }
  return true;
}

// solve L x = b (lower triangular)
inline std::vector<double> solve_lower(const RMat& l, std::vector<double> b) {
  const int n = l.rows;
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    const double* row = &l.a[static_cast<size_t>(i) * n];
    for (int k = 0; k < i; ++k) s -= row[k] * b[k];
    b[i] = s / row[i];
  }
  return b;
}

// solve L^T x = b
inline std::vector<double> solve_lower_t(const RMat& l, std::vector<double> b) {
  const int n = l.rows;
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
  return b;
}

// X = L^{-1} B where L lower triangular, B full matrix (column-wise solves)
inline RMat solve_lower_mat(const RMat& l, const RMat& b) {
  RMat x = b;
  const int n = l.rows;
  for (int col = 0; col < b.cols; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = x(i, col);
      const double* row = &l.a[static_cast<size_t>(i) * n];
      for (int k = 0; k < i; ++k) s -= row[k] * x(k, col);
      x(i, col) = s / row[i];
    }
  }
  return x;
}

// Hermitian -> real symmetric embedding  M = S + iT  |->  [[S, -T], [T, S]].
// Inner products double: <embed(X), embed(Y)> = 2 Re<X, Y>.
inline RMat embed_hermitian(const CMat& m) {
  const int d = m.rows;
  RMat r(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      r(i, j) = re;
      r(i + d, j + d) = re;
      r(i, j + d) = -im;
      r(i + d, j) = im;
    }
  return r;
}

// Inverse of embed_hermitian, averaging over the symplectic symmetry so the
// result is exactly Hermitian even for an unstructured argument.
inline CMat unembed_hermitian(const RMat& r) {
  const int d = r.rows / 2;
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = 0.5 * (r(i, j) + r(i + d, j + d));
      const double im = 0.5 * (r(i + d, j) - r(i, j + d));
      m(i, j) = cplx(re, im);
    }
  m.hermitize();
  return m;
}

}  // namespace bellmeet
