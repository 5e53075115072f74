#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "bellmeet/bounds.hpp"
#include "bellmeet/game.hpp"
#include "bellmeet/graph.hpp"
#include "bellmeet/mcverify.hpp"
#include "bellmeet/version.hpp"

namespace bellmeet {

using json = nlohmann::json;

// ---- graphs ---------------------------------------------------------------

inline json graph_to_json(const Graph& g) {
  return json{{"n", g.n},
              {"reflexive", g.reflexive},
              {"directed", g.directed},
              {"adjacency", g.out}};
}

inline Graph graph_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("adjacency"))
    throw ValidationError("graph json needs fields n and adjacency");
  const Graph g = from_adjacency_list(j.at("adjacency").get<std::vector<std::vector<int>>>());
  if (g.n != j.at("n").get<int>()) throw ValidationError("graph json: n does not match adjacency");
  if (j.contains("reflexive") && j.at("reflexive").get<bool>() != g.reflexive)
    throw ValidationError("graph json: reflexive flag does not match adjacency");
  if (j.contains("directed") && j.at("directed").get<bool>() != g.directed)
    throw ValidationError("graph json: directed flag does not match adjacency");
  return g;
}

// ---- scenarios and game dumps ---------------------------------------------

inline json scenario_to_json(const Scenario& sc) {
  return json{{"graph", graph_to_json(sc.graph)},
              {"n_max", sc.n_max},
              {"edge_meeting", sc.edge_meeting},
              {"same_start", sc.same_start}};
}

inline Scenario scenario_from_json(const json& j) {
  return Scenario(graph_from_json(j.at("graph")), j.at("n_max").get<int>(),
                  j.at("edge_meeting").get<bool>(), j.at("same_start").get<bool>());
}

// Dump format: scenario metadata plus the nonzero coefficient quadruples.
inline json game_to_json(const BellGame& game) {
  json nz = json::array();
  for (int a = 1; a <= game.num_outcomes; ++a)
    for (int b = 1; b <= game.num_outcomes; ++b)
      for (int x = 1; x <= game.num_settings; ++x)
        for (int y = 1; y <= game.num_settings; ++y)
          if (game.at(a, b, x, y) != 0.0) nz.push_back({a, b, x, y});
  return json{{"format", "bellmeet-game/1"},
              {"scenario", scenario_to_json(game.scenario)},
              {"outcomes", game.num_outcomes},
              {"settings", game.num_settings},
              {"p", game.p},
              {"nonzero", nz}};
}

inline BellGame game_from_json(const json& j) {
  BellGame game = compile_game(scenario_from_json(j.at("scenario")));
  // sanity: the dump must agree with the recompiled tensor
  if (game.num_outcomes != j.at("outcomes").get<int>() ||
      game.num_settings != j.at("settings").get<int>())
    throw ValidationError("game dump does not match its scenario");
  return game;
}

// ---- boxes ------------------------------------------------------------------

inline json box_to_json(const Box& box) {
  return json{{"format", "bellmeet-box/1"},
              {"dims", {box.na, box.nb, box.nx, box.ny}},
              {"data", box.p}};
}

inline Box box_from_json(const json& j) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  if (dims.size() != 4) throw ValidationError("box json: dims must have 4 entries");
  Box box(dims[0], dims[1], dims[2], dims[3]);
  box.p = j.at("data").get<std::vector<double>>();
  if (box.p.size() != static_cast<size_t>(dims[0]) * dims[1] * dims[2] * dims[3])
    throw ValidationError("box json: data length does not match dims");
  return box;
}

// ---- complex matrices / quantum strategies ----------------------------------

inline json cmat_to_json(const CMat& m) {
  std::vector<std::vector<double>> re(m.rows, std::vector<double>(m.cols));
  std::vector<std::vector<double>> im(m.rows, std::vector<double>(m.cols));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      re[i][j] = m(i, j).real();
      im[i][j] = m(i, j).imag();
    }
  return json{{"re", re}, {"im", im}};
}

inline CMat cmat_from_json(const json& j) {
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  const auto im = j.at("im").get<std::vector<std::vector<double>>>();
  const int rows = static_cast<int>(re.size());
  const int cols = rows ? static_cast<int>(re[0].size()) : 0;
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j2 = 0; j2 < cols; ++j2) m(i, j2) = cplx(re[i][j2], im[i][j2]);
  return m;
}

inline json quantum_strategy_to_json(const QuantumStrategy& qs) {
  json j{{"d_a", qs.d_a}, {"d_b", qs.d_b}, {"rho", cmat_to_json(qs.rho)}};
  if (qs.pure) {
    std::vector<double> re, im;
    for (const auto& v : *qs.pure) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    j["pure_re"] = re;
    j["pure_im"] = im;
  }
  auto povms = [&](const std::vector<std::vector<CMat>>& p) {
    json arr = json::array();
    for (const auto& setting : p) {
      json row = json::array();
      for (const auto& el : setting) row.push_back(cmat_to_json(el));
      arr.push_back(row);
    }
    return arr;
  };
  j["povms_a"] = povms(qs.povms_a);
  j["povms_b"] = povms(qs.povms_b);
  return j;
}

inline QuantumStrategy quantum_strategy_from_json(const json& j) {
  QuantumStrategy qs;
  qs.d_a = j.at("d_a").get<int>();
  qs.d_b = j.at("d_b").get<int>();
  qs.rho = cmat_from_json(j.at("rho"));
  if (j.contains("pure_re")) {
    const auto re = j.at("pure_re").get<std::vector<double>>();
    const auto im = j.at("pure_im").get<std::vector<double>>();
    std::vector<cplx> psi(re.size());
    for (size_t i = 0; i < re.size(); ++i) psi[i] = cplx(re[i], im[i]);
    qs.pure = psi;
  }
  auto povms = [&](const json& arr) {
    std::vector<std::vector<CMat>> p;
    for (const auto& setting : arr) {
      std::vector<CMat> row;
      for (const auto& el : setting) row.push_back(cmat_from_json(el));
      p.push_back(std::move(row));
    }
    return p;
  };
  qs.povms_a = povms(j.at("povms_a"));
  qs.povms_b = povms(j.at("povms_b"));
  return qs;
}

// ---- strategies, reports ------------------------------------------------------

inline json strategy_to_json(const DeterministicStrategy& s) {
  return json{{"outcome_for_setting", s.outcome_for_setting}};
}

inline DeterministicStrategy strategy_from_json(const json& j) {
  DeterministicStrategy s;
  s.outcome_for_setting = j.at("outcome_for_setting").get<std::vector<int>>();
  return s;
}

inline json rmat_to_json(const RMat& m) {
  std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) rows[i][j] = m(i, j);
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", rows}};
}

inline json bound_report_to_json(const BoundReport& rep, const std::string& certificate_ref) {
  json diag{{"iterations", rep.diag.iterations},
            {"gap", rep.diag.gap},
            {"restarts_used", rep.diag.restarts_used},
            {"seed", rep.diag.seed},
            {"reliable", rep.diag.reliable}};
  if (!rep.diag.note.empty()) diag["note"] = rep.diag.note;
  if (!rep.diag.restarts.empty()) {
    json arr = json::array();
    for (const auto& r : rep.diag.restarts)
      arr.push_back({{"index", r.index},
                     {"value", r.value},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"failed", r.failed}});
    diag["restarts"] = arr;
  }
  return json{{"format", "bellmeet-bound/1"},
              {"kind", bound_kind_name(rep.kind)},
              {"value", rep.value},
              {"certificate_ref", certificate_ref},
              {"diagnostics", diag}};
}

inline json sim_report_to_json(const SimReport& rep) {
  return json{{"format", "bellmeet-sim/1"}, {"trials", rep.trials},
              {"successes", rep.successes}, {"estimate", rep.estimate},
              {"ci95", {rep.ci_low, rep.ci_high}},  {"seed", rep.seed}};
}

inline json tolerances_to_json(const Tolerances& t) {
  return json{{"box_norm", t.box_norm},
              {"box_sample_norm", t.box_sample_norm},
              {"ns_membership", t.ns_membership},
              {"povm_psd", t.povm_psd},
              {"povm_sum", t.povm_sum},
              {"state_trace", t.state_trace},
              {"eig_reconstruction", t.eig_reconstruction},
              {"eig_orthonormality", t.eig_orthonormality},
              {"lp_feas", t.lp_feas},
              {"lp_gap", t.lp_gap},
              {"sdp_primal_feas", t.sdp_primal_feas},
              {"sdp_dual_feas", t.sdp_dual_feas},
              {"sdp_rel_gap", t.sdp_rel_gap},
              {"sdp_max_iter", t.sdp_max_iter},
              {"seesaw_improve", t.seesaw_improve},
              {"seesaw_max_iter", t.seesaw_max_iter},
              {"lhv_enum_cap", t.lhv_enum_cap},
              {"rep_lhv", t.rep_lhv},
              {"rep_ns", t.rep_ns},
              {"rep_ml", t.rep_ml},
              {"rep_seesaw", t.rep_seesaw}};
}

// ---- file helpers ---------------------------------------------------------

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace bellmeet
