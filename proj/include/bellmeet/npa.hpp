#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "bellmeet/game.hpp"
#include "bellmeet/sdp.hpp"

namespace bellmeet {

enum class MlLevel { Npa1, Npa1AB };

// Moment-matrix relaxation of the quantum set.  Monomials are products of
// measurement projectors with the last outcome of every setting omitted;
// level 1 uses {1} u {A_xa} u {B_yb}, level 1+AB adds the A_xa B_yb
// products.  Entries that reduce to the same operator word (up to adjoint)
// are tied by equality constraints, words that vanish by same-setting
// orthogonality are pinned to zero, and the joint distribution entries are
// required to be nonnegative through a diagonal slack block, which keeps
// every certificate inside the no-signaling polytope.
struct NpaRelaxation {
  int settings = 0;
  int outcomes = 0;
  int moment_dim = 0;
  SdpProblem sdp;  // block 0: moment matrix; block 1: distribution slacks
  std::vector<std::vector<std::pair<int, int>>> classes;  // tied cells per class
  std::vector<std::pair<int, int>> zero_cells;

  int slack_index(int a, int b, int x, int y) const {
    return ((a - 1) * outcomes + (b - 1)) * settings * settings + (x - 1) * settings + (y - 1);
  }
};

namespace npa_detail {

struct Letter {
  int party;    // 0 = first party, 1 = second
  int setting;  // 1..N
  int outcome;  // 1..K-1

  friend bool operator<(const Letter& a, const Letter& b) {
    return std::tie(a.party, a.setting, a.outcome) < std::tie(b.party, b.setting, b.outcome);
  }
  friend bool operator==(const Letter& a, const Letter& b) {
    return std::tie(a.party, a.setting, a.outcome) == std::tie(b.party, b.setting, b.outcome);
  }
};

using Word = std::vector<Letter>;  // product, parties kept separated by caller

// projector algebra within one party: adjacent same-setting letters either
// merge (same outcome) or annihilate the word
inline bool reduce_party(Word& w) {
  for (size_t i = 0; i + 1 < w.size();) {
    if (w[i].setting == w[i + 1].setting) {
      if (w[i].outcome != w[i + 1].outcome) return false;  // orthogonal
      w.erase(w.begin() + static_cast<long>(i) + 1);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }
  return true;
}

struct Monomial {
  Word a, b;  // per-party factors in order
};

// canonical encoding of adjoint(u) * v, or empty optional-like flag for zero
struct CanonWord {
  bool zero = false;
  std::vector<int> code;
};

inline CanonWord canonical_product(const Monomial& u, const Monomial& v) {
  Word wa(u.a.rbegin(), u.a.rend());
  wa.insert(wa.end(), v.a.begin(), v.a.end());
  Word wb(u.b.rbegin(), u.b.rend());
  wb.insert(wb.end(), v.b.begin(), v.b.end());
  CanonWord out;
  if (!reduce_party(wa) || !reduce_party(wb)) {
    out.zero = true;
    return out;
  }
  auto encode = [](const Word& a, const Word& b) {
    std::vector<int> c;
    for (const auto& l : a) c.insert(c.end(), {0, l.setting, l.outcome});
    for (const auto& l : b) c.insert(c.end(), {1, l.setting, l.outcome});
    return c;
  };
  // identify a word with its adjoint (both have the same real moment)
  const std::vector<int> fwd = encode(wa, wb);
  const std::vector<int> rev = encode(Word(wa.rbegin(), wa.rend()), Word(wb.rbegin(), wb.rend()));
  out.code = std::min(fwd, rev);
  return out;
}

}  // namespace npa_detail

inline NpaRelaxation build_npa(const BellGame& game, MlLevel level) {
  using namespace npa_detail;
  const int n = game.num_settings;
  const int k = game.num_outcomes;
  const int kk = k - 1;  // omitted outcome per setting

  NpaRelaxation rel;
  rel.settings = n;
  rel.outcomes = k;

  std::vector<Monomial> mono;
  mono.push_back({});  // identity
  for (int x = 1; x <= n; ++x)
    for (int a = 1; a <= kk; ++a) mono.push_back({{{0, x, a}}, {}});
  for (int y = 1; y <= n; ++y)
    for (int b = 1; b <= kk; ++b) mono.push_back({{}, {{1, y, b}}});
  if (level == MlLevel::Npa1AB) {
    for (int x = 1; x <= n; ++x)
      for (int a = 1; a <= kk; ++a)
        for (int y = 1; y <= n; ++y)
          for (int b = 1; b <= kk; ++b) mono.push_back({{{0, x, a}}, {{1, y, b}}});
  }
  const int m = static_cast<int>(mono.size());
  rel.moment_dim = m;

  auto a_row = [&](int x, int a) { return 1 + (x - 1) * kk + (a - 1); };
  auto b_col = [&](int y, int b) { return 1 + n * kk + (y - 1) * kk + (b - 1); };

  // group cells of the upper triangle by canonical word
  std::map<std::vector<int>, int> class_of;
  std::vector<std::vector<std::pair<int, int>>> classes;
  std::vector<std::pair<int, int>> zero_cells;
  for (int r = 0; r < m; ++r)
    for (int c = r; c < m; ++c) {
      const CanonWord w = canonical_product(mono[r], mono[c]);
      if (w.zero) {
        zero_cells.emplace_back(r, c);
        continue;
      }
      auto [it, fresh] = class_of.try_emplace(w.code, static_cast<int>(classes.size()));
      if (fresh) classes.emplace_back();
      classes[it->second].emplace_back(r, c);
    }
  rel.classes = classes;
  rel.zero_cells = zero_cells;

  SdpProblem& sdp = rel.sdp;
  sdp.blocks.push_back({m, false});
  const int num_slack = k * k * n * n;
  sdp.blocks.push_back({num_slack, true});
  sdp.objective = SdpBlockData::zeros(sdp.blocks);

  auto gamma_term = [](int r, int c, double v) {
    return SdpConstraint::Term{0, std::min(r, c), std::max(r, c), r == c ? v : 0.5 * v};
  };
  // note: <A,X> counts off-diagonal entries twice, so weight 0.5 encodes a
  // unit coefficient on Gamma(r,c)

  // unit top-left entry
  {
    SdpConstraint c0;
    c0.terms.push_back(gamma_term(0, 0, 1.0));
    c0.rhs = 1.0;
    sdp.constraints.push_back(c0);
  }
  // vanishing words
  for (const auto& [r, c] : zero_cells) {
    SdpConstraint cz;
    cz.terms.push_back(gamma_term(r, c, 1.0));
    cz.rhs = 0.0;
    sdp.constraints.push_back(cz);
  }
  // equal-moment ties within each class
  for (const auto& cells : classes) {
    for (size_t i = 1; i < cells.size(); ++i) {
      SdpConstraint ct;
      ct.terms.push_back(gamma_term(cells[0].first, cells[0].second, 1.0));
      ct.terms.push_back(gamma_term(cells[i].first, cells[i].second, -1.0));
      ct.rhs = 0.0;
      sdp.constraints.push_back(ct);
    }
  }

  // slack ties: P(a,b|x,y) (linear in Gamma) equals the slack entry, and the
  // game objective lives on the slacks
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b)
      for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
          SdpConstraint ct;
          double constant = 0.0;
          auto add_gamma = [&](int r, int c, double v) { ct.terms.push_back(gamma_term(r, c, v)); };
          if (a <= kk && b <= kk) {
            add_gamma(a_row(x, a), b_col(y, b), 1.0);
          } else if (a > kk && b <= kk) {
            add_gamma(0, b_col(y, b), 1.0);
            for (int a2 = 1; a2 <= kk; ++a2) add_gamma(a_row(x, a2), b_col(y, b), -1.0);
          } else if (a <= kk && b > kk) {
            add_gamma(0, a_row(x, a), 1.0);
            for (int b2 = 1; b2 <= kk; ++b2) add_gamma(a_row(x, a), b_col(y, b2), -1.0);
          } else {
            constant = 1.0;
            for (int a2 = 1; a2 <= kk; ++a2) add_gamma(0, a_row(x, a2), -1.0);
            for (int b2 = 1; b2 <= kk; ++b2) add_gamma(0, b_col(y, b2), -1.0);
            for (int a2 = 1; a2 <= kk; ++a2)
              for (int b2 = 1; b2 <= kk; ++b2) add_gamma(a_row(x, a2), b_col(y, b2), 1.0);
          }
          const int s = rel.slack_index(a, b, x, y);
          ct.terms.push_back({1, s, s, -1.0});
          ct.rhs = -constant;
          sdp.constraints.push_back(ct);
          sdp.objective.vec[1][s] = game.at(a, b, x, y);
        }

  return rel;
}

// The distribution carried by a solved relaxation (read off the slacks).
inline Box npa_box(const NpaRelaxation& rel, const SdpResult& sol) {
  Box box(rel.outcomes, rel.outcomes, rel.settings, rel.settings);
  for (int a = 1; a <= rel.outcomes; ++a)
    for (int b = 1; b <= rel.outcomes; ++b)
      for (int x = 1; x <= rel.settings; ++x)
        for (int y = 1; y <= rel.settings; ++y)
          box.at(a, b, x, y) = sol.X.vec[1][rel.slack_index(a, b, x, y)];
  return box;
}

// Residuals of the structural identities on a solved moment matrix (used by
// the verification suites).
struct NpaResiduals {
  double unit = 0.0;
  double identification = 0.0;
  double min_eigenvalue = 0.0;
};

inline NpaResiduals npa_residuals(const NpaRelaxation& rel, const SdpResult& sol) {
  NpaResiduals r;
  const RMat& g = sol.X.mat[0];
  r.unit = std::abs(g(0, 0) - 1.0);
  for (const auto& cells : rel.classes)
    for (size_t i = 1; i < cells.size(); ++i)
      r.identification =
          std::max(r.identification, std::abs(g(cells[i].first, cells[i].second) -
                                              g(cells[0].first, cells[0].second)));
  for (const auto& [rr, cc] : rel.zero_cells)
    r.identification = std::max(r.identification, std::abs(g(rr, cc)));
  r.min_eigenvalue = hermitian_eig(g).values.front();
  return r;
}

}  // namespace bellmeet
