#include <catch2/catch_amalgamated.hpp>

#include "bellmeet/linalg.hpp"
#include "bellmeet/rng.hpp"

using namespace bellmeet;

namespace {

CMat random_hermitian(int d, Rng& rng) {
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(rng.gaussian(), rng.gaussian());
  CMat h = m + m.adjoint();
  h.hermitize();
  return h;
}

RMat random_symmetric(int d, Rng& rng) {
  RMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) m(i, j) = m(j, i) = rng.gaussian();
  return m;
}

template <class S>
void check_eig(const DenseMat<S>& m) {
  const auto e = hermitian_eig(m);
  const int n = m.rows;
  // reconstruction: V diag(L) V^dagger == M
  DenseMat<S> vl = e.vectors;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) vl(i, j) *= S{e.values[j]};
  const DenseMat<S> rec = matmul(vl, e.vectors.adjoint());
  REQUIRE((rec - m).max_abs() <= 1e-10 * std::max(1.0, m.max_abs()));
  // orthonormality
  const DenseMat<S> gram = matmul(e.vectors.adjoint(), e.vectors);
  REQUIRE((gram - DenseMat<S>::identity(n)).max_abs() <= 1e-11);
  // ascending
  for (int i = 1; i < n; ++i) REQUIRE(e.values[i] >= e.values[i - 1]);
}

}  // namespace

TEST_CASE("eig of identity") {
  const auto e = hermitian_eig(CMat::identity(3));
  for (double v : e.values) REQUIRE(v == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("eig of Pauli X") {
  CMat x(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const auto e = hermitian_eig(x);
  REQUIRE(e.values[0] == Catch::Approx(-1.0).margin(1e-13));
  REQUIRE(e.values[1] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("eig residual oracles, complex d=16 and real d=24") {
  Rng rng(2024);
  check_eig(random_hermitian(16, rng));
  check_eig(random_symmetric(24, rng));
  check_eig(random_hermitian(1, rng));
}

TEST_CASE("eig rejects non-Hermitian input") {
  CMat m(2, 2);
  m(0, 1) = cplx(1.0, 0.0);
  m(1, 0) = cplx(0.5, 0.0);
  REQUIRE_THROWS_AS(hermitian_eig(m), ValidationError);
}

TEST_CASE("partial trace: product rule and identity") {
  Rng rng(7);
  const CMat x = random_hermitian(3, rng);
  const CMat y = random_hermitian(4, rng);
  const CMat xy = kron(x, y);
  CMat want = x;
  want *= y.trace();
  REQUIRE((partial_trace_B(xy, 3, 4) - want).max_abs() < 1e-12);
  CMat wantA = y;
  wantA *= x.trace();
  REQUIRE((partial_trace_A(xy, 3, 4) - wantA).max_abs() < 1e-12);

  const CMat id4 = CMat::identity(4);
  CMat two_id2 = CMat::identity(2);
  two_id2 *= cplx(2.0);
  REQUIRE((partial_trace_B(id4, 2, 2) - two_id2).max_abs() == 0.0);
}

TEST_CASE("partial trace adjoint identity: Tr[(A ox 1)M] = Tr[A TrB(M)]") {
  Rng rng(11);
  const int dA = 3, dB = 2;
  CMat m(dA * dB, dA * dB);
  for (auto& v : m.a) v = cplx(rng.gaussian(), rng.gaussian());
  const CMat a = random_hermitian(dA, rng);
  const cplx lhs = matmul(kron(a, CMat::identity(dB)), m).trace();
  const cplx rhs = matmul(a, partial_trace_B(m, dA, dB)).trace();
  REQUIRE(std::abs(lhs - rhs) < 1e-12);
  // trace preservation
  REQUIRE(std::abs(partial_trace_B(m, dA, dB).trace() - m.trace()) < 1e-12);
}

TEST_CASE("cholesky factors and solves") {
  Rng rng(3);
  const int n = 12;
  RMat g = random_symmetric(n, rng);
  RMat m = matmul(g, g.adjoint());
  for (int i = 0; i < n; ++i) m(i, i) += n;  // make it solidly PD
  RMat l;
  REQUIRE(cholesky(m, l));
  REQUIRE((matmul(l, l.adjoint()) - m).max_abs() < 1e-9 * m.max_abs());

  std::vector<double> b(n);
  for (auto& v : b) v = rng.gaussian();
  const auto x = solve_lower_t(l, solve_lower(l, b));
  const auto back = matvec(m, x);
  for (int i = 0; i < n; ++i) REQUIRE(back[i] == Catch::Approx(b[i]).margin(1e-9));

  RMat notpd(2, 2);
  notpd(0, 0) = 1.0;
  notpd(1, 1) = -1.0;
  REQUIRE_FALSE(cholesky(notpd, l));
}

TEST_CASE("hermitian embedding round-trips and doubles inner products") {
  Rng rng(5);
  const CMat m = random_hermitian(4, rng);
  const CMat k = random_hermitian(4, rng);
  const RMat em = embed_hermitian(m);
  const RMat ek = embed_hermitian(k);
  REQUIRE((unembed_hermitian(em) - m).max_abs() < 1e-14);
  REQUIRE(inner_real(em, ek) == Catch::Approx(2.0 * inner_real(m, k)).margin(1e-10));
  // PSD is preserved both ways: compare smallest eigenvalues
  const double lm = hermitian_eig(m).values.front();
  const double le = hermitian_eig(em).values.front();
  REQUIRE(lm == Catch::Approx(le).margin(1e-10));
}
