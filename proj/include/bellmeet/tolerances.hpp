#pragma once

#include <cstdint>

namespace bellmeet {

// Every numerical tolerance and cap used across the library, in one record.
// Functions take this by const reference so a run can tighten or relax
// uniformly; the defaults below are the contract the test suite checks.
struct Tolerances {
  // constructed boxes
  double box_norm = 1e-12;          // |sum P(.,.|x,y) - 1| for exact constructions
  double box_sample_norm = 1e-9;    // simulator refuses boxes worse than this
  double ns_membership = 1e-9;      // marginal consistency check

  // quantum strategy invariants
  double povm_psd = 1e-10;          // eigenvalues allowed down to -povm_psd
  double povm_sum = 1e-10;          // max-norm deviation of sum from identity
  double state_trace = 1e-12;

  // eigensolver
  double eig_reconstruction = 1e-10;  // relative to max entry
  double eig_orthonormality = 1e-11;
  int eig_max_sweeps = 64;

  // linear programming
  double lp_feas = 1e-9;
  double lp_gap = 1e-9;
  double lp_pivot = 1e-10;

  // semidefinite programming
  double sdp_primal_feas = 1e-8;
  double sdp_dual_feas = 1e-8;
  double sdp_rel_gap = 1e-7;
  int sdp_max_iter = 200;

  // see-saw
  double seesaw_improve = 1e-9;
  int seesaw_max_iter = 500;

  // LHV enumeration cap on per-party strategy count R^(N*N_max)
  std::uint64_t lhv_enum_cap = (1ull << 24);

  // reproduction tolerances per bound kind
  double rep_lhv = 5e-6;
  double rep_ns = 1e-6;
  double rep_ml = 2e-3;
  double rep_seesaw = 5e-3;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace bellmeet
