#pragma once

#include <optional>
#include <vector>

#include "bellmeet/game.hpp"
#include "bellmeet/linalg.hpp"
#include "bellmeet/rng.hpp"

namespace bellmeet {

// Shared state plus per-setting POVMs for both parties.  The state is kept
// as a density operator, with the pure vector retained when known (see-saw
// output is always pure).
struct QuantumStrategy {
  int d_a = 0, d_b = 0;
  CMat rho;                          // on d_a * d_b
  std::optional<std::vector<cplx>> pure;
  std::vector<std::vector<CMat>> povms_a;  // [setting][outcome], on d_a
  std::vector<std::vector<CMat>> povms_b;  // on d_b

  int settings_a() const { return static_cast<int>(povms_a.size()); }
  int settings_b() const { return static_cast<int>(povms_b.size()); }
  int outcomes_a() const { return povms_a.empty() ? 0 : static_cast<int>(povms_a[0].size()); }
  int outcomes_b() const { return povms_b.empty() ? 0 : static_cast<int>(povms_b[0].size()); }

  void set_pure(const std::vector<cplx>& psi) {
    pure = psi;
    rho = outer(psi);
  }

  void validate(const Tolerances& tol = default_tolerances()) const {
    if (rho.rows != d_a * d_b) throw ValidationError("state dimension mismatch");
    if (std::abs(rho.trace().real() - 1.0) > tol.state_trace || std::abs(rho.trace().imag()) > tol.state_trace)
      throw ValidationError("state trace differs from 1");
    if (rho.herm_defect() > 1e-12) throw ValidationError("state not Hermitian");
    auto check_party = [&](const std::vector<std::vector<CMat>>& povms, int d, const char* who) {
      for (const auto& povm : povms) {
        CMat sum(d, d);
        for (const auto& el : povm) {
          if (el.rows != d || el.cols != d)
            throw ValidationError(std::string(who) + " POVM element dimension mismatch");
          if (el.herm_defect() > 1e-12)
            throw ValidationError(std::string(who) + " POVM element not Hermitian");
          if (hermitian_eig(el).values.front() < -tol.povm_psd)
            throw ValidationError(std::string(who) + " POVM element not PSD");
          sum += el;
        }
        if ((sum - CMat::identity(d)).max_abs() > tol.povm_sum)
          throw ValidationError(std::string(who) + " POVM does not sum to identity");
      }
    };
    check_party(povms_a, d_a, "Alice");
    check_party(povms_b, d_b, "Bob");
  }
};

// P(a,b|x,y) = Tr[rho (M^a_x ox N^b_y)]
inline Box quantum_box(const QuantumStrategy& qs) {
  const int nx = qs.settings_a(), ny = qs.settings_b();
  const int na = qs.outcomes_a(), nb = qs.outcomes_b();
  Box box(na, nb, nx, ny);
  // Tr[rho (M ox N)] = Tr_A[M^T_A ...]; computed via the B-side partial
  // contraction T^b_y = Tr_B[rho (1 ox N^b_y)] so each (a,b,x,y) is a small
  // inner product
  for (int y = 1; y <= ny; ++y)
    for (int b = 1; b <= nb; ++b) {
      const CMat t = partial_trace_B(
          matmul(qs.rho, kron(CMat::identity(qs.d_a), qs.povms_b[y - 1][b - 1])), qs.d_a, qs.d_b);
      for (int x = 1; x <= nx; ++x)
        for (int a = 1; a <= na; ++a)
          box.at(a, b, x, y) = matmul(t, qs.povms_a[x - 1][a - 1]).trace().real();
    }
  return box;
}

// Bell operator G = sum coeff(a,b,x,y) M^a_x ox N^b_y for fixed POVMs.
inline CMat bell_operator(const BellGame& game, const QuantumStrategy& qs) {
  const int d = qs.d_a * qs.d_b;
  CMat g(d, d);
  for (int x = 1; x <= game.num_settings; ++x)
    for (int y = 1; y <= game.num_settings; ++y)
      for (int a = 1; a <= game.num_outcomes; ++a)
        for (int b = 1; b <= game.num_outcomes; ++b) {
          const double c = game.at(a, b, x, y);
          if (c == 0.0) continue;
          const CMat term = kron(qs.povms_a[x - 1][a - 1], qs.povms_b[y - 1][b - 1]);
          for (size_t i = 0; i < g.a.size(); ++i) g.a[i] += c * term.a[i];
        }
  g.hermitize();
  return g;
}

// Game value when the pure state is mixed with white noise:
//   rho(nu) = nu |psi><psi| + (1 - nu) I / (d_a d_b),
// measurements unchanged.  Exactly linear in nu.
inline double noise_value(const QuantumStrategy& qs, const BellGame& game, double nu) {
  if (nu < 0.0 || nu > 1.0) throw ValidationError("noise weight nu must lie in [0,1]");
  if (!qs.pure) throw ValidationError("noise_value requires a pure state");
  const CMat g = bell_operator(game, qs);
  const auto& psi = *qs.pure;
  const auto gpsi = matvec(g, psi);
  double v1 = 0.0;
  for (size_t i = 0; i < psi.size(); ++i) v1 += (std::conj(psi[i]) * gpsi[i]).real();
  const double v0 = g.trace().real() / (qs.d_a * qs.d_b);
  return nu * v1 + (1.0 - nu) * v0;
}

}  // namespace bellmeet
