// bellmeet command line: compile rendezvous games, compute resource bounds,
// reproduce the built-in reference tables, and run Monte-Carlo checks.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bellmeet/bounds.hpp"
#include "bellmeet/io.hpp"
#include "bellmeet/mcverify.hpp"
#include "bellmeet/reproduce.hpp"

namespace fs = std::filesystem;
using namespace bellmeet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMismatch = 4;

struct ScenarioArgs {
  std::string graph = "cycle-4";
  bool reflexive = false;
  int steps = 1;
  bool edge_meet = false;
  bool same_start = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", graph,
                    "catalog name (cubic-2..cubic-9, cycle-<n>, dircycle-<n>) or a graph JSON file");
    cmd->add_flag("--reflexive,!--no-reflexive", reflexive, "insert a self-loop at every node");
    cmd->add_option("--steps", steps, "step budget per party")->check(CLI::PositiveNumber);
    cmd->add_flag("--edge-meet,!--no-edge-meet", edge_meet, "count meetings in transit");
    cmd->add_flag("--same-start,!--no-same-start", same_start,
                  "allow both parties to start at the same node");
  }

  Scenario build() const {
    Graph g;
    const bool is_file = graph.find('/') != std::string::npos ||
                         (graph.size() > 5 && graph.compare(graph.size() - 5, 5, ".json") == 0);
    if (is_file) {
      g = graph_from_json(read_json_file(graph));
    } else {
      g = catalog_graph(graph);
    }
    if (reflexive) g = make_reflexive(g);
    return Scenario(g, steps, edge_meet, same_start);
  }

  json to_json() const {
    return json{{"graph", graph},
                {"reflexive", reflexive},
                {"steps", steps},
                {"edge_meet", edge_meet},
                {"same_start", same_start}};
  }
};

void write_manifest(const std::string& path, const std::string& command, const json& config,
                    std::uint64_t seed, int threads) {
  json m{{"tool", "bellmeet"},
         {"version", kVersion},
         {"command", command},
         {"config", config},
         {"seed", seed},
         {"threads", threads},
         {"tolerances", tolerances_to_json(default_tolerances())}};
  write_json_file(path, m);
}

std::vector<std::string> split_kinds(const std::string& kinds) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : kinds) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rendezvous games on graphs: compile, bound, simulate, reproduce"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  int threads = default_thread_count();
  app.add_option("--threads", threads, "worker thread count (or env BELLMEET_THREADS)");

  // ---- compile ----
  auto* cmd_compile = app.add_subcommand("compile", "compile a rendezvous game tensor");
  ScenarioArgs compile_args;
  compile_args.attach(cmd_compile);
  std::string compile_out = "game.json";
  cmd_compile->add_option("--out", compile_out, "output game dump path");

  // ---- bound ----
  auto* cmd_bound = app.add_subcommand("bound", "compute resource-set optima");
  ScenarioArgs bound_args;
  bound_args.attach(cmd_bound);
  std::string kinds = "lhv";
  int dims = 0;
  int restarts = 50;
  std::uint64_t seed = 20240716;
  std::string ml_level = "1";
  std::string out_dir = ".";
  cmd_bound->add_option("--kinds", kinds, "comma list from lhv,ns,ml,seesaw");
  cmd_bound->add_option("--dims", dims, "see-saw local dimension (default min(outcomes, 4))");
  cmd_bound->add_option("--restarts", restarts, "see-saw random restarts");
  cmd_bound->add_option("--seed", seed, "see-saw RNG seed");
  cmd_bound->add_option("--ml-level", ml_level, "moment relaxation level: 1 or 1ab");
  cmd_bound->add_option("--out-dir", out_dir, "directory for reports and certificates");

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand("simulate", "Monte-Carlo rendezvous estimate for a box");
  ScenarioArgs sim_args;
  sim_args.attach(cmd_sim);
  std::string box_spec = "uniform";
  std::uint64_t trials = 1000000;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "sim.json";
  std::string trace_path;
  cmd_sim->add_option("--box", box_spec, "uniform | lhv | path to a box JSON file");
  cmd_sim->add_option("--trials", trials, "number of trials");
  cmd_sim->add_option("--seed", sim_seed, "RNG seed");
  cmd_sim->add_option("--out", sim_out, "output report path");
  cmd_sim->add_option("--trace", trace_path, "optional per-trial CSV trace");

  // ---- reproduce ----
  auto* cmd_rep = app.add_subcommand("reproduce", "recompute reference tables and compare");
  std::string table_id = "all";
  std::string rep_out_dir = ".";
  int rep_restarts = 50;
  std::uint64_t rep_seed = 20240716;
  bool no_seesaw = false;
  cmd_rep->add_option("table", table_id, "table id I..VII or 'all'");
  cmd_rep->add_option("--out-dir", rep_out_dir, "directory for the CSV and summary");
  cmd_rep->add_option("--restarts", rep_restarts, "see-saw restarts per cell");
  cmd_rep->add_option("--seed", rep_seed, "see-saw RNG seed");
  cmd_rep->add_flag("--no-seesaw", no_seesaw, "skip see-saw cells (quick exactness check)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_compile) {
      const Scenario sc = compile_args.build();
      const BellGame game = compile_game(sc);
      const json dump = game_to_json(game);
      write_json_file(compile_out, dump);
      write_manifest(compile_out + ".manifest.json", "compile", compile_args.to_json(), 0,
                     threads);
      std::cout << "wrote " << compile_out << " with " << dump.at("nonzero").size()
                << " nonzero coefficients (p = " << game.p << ")\n";
      return kExitOk;
    }

    if (*cmd_bound) {
      for (const std::string& kind : split_kinds(kinds))
        if (kind != "lhv" && kind != "ns" && kind != "ml" && kind != "seesaw")
          throw ValidationError("unknown bound kind: " + kind);
      if (ml_level != "1" && ml_level != "1ab")
        throw ValidationError("unknown ml level: " + ml_level);
      const Scenario sc = bound_args.build();
      const BellGame game = compile_game(sc);
      fs::create_directories(out_dir);
      json config = bound_args.to_json();
      config["kinds"] = kinds;
      config["dims"] = dims;
      config["restarts"] = restarts;
      config["ml_level"] = ml_level;
      write_manifest((fs::path(out_dir) / "manifest.json").string(), "bound", config, seed,
                     threads);

      std::optional<BoundReport> lhv_cache;
      auto get_lhv = [&]() -> const BoundReport& {
        if (!lhv_cache) lhv_cache = lhv_bound(game);
        return *lhv_cache;
      };

      for (const std::string& kind : split_kinds(kinds)) {
        BoundReport rep;
        std::string cert_path;
        if (kind == "lhv") {
          rep = get_lhv();
          cert_path = (fs::path(out_dir) / "lhv_certificate.json").string();
          write_json_file(cert_path,
                          json{{"alice", strategy_to_json(rep.strategies->first)},
                               {"bob", strategy_to_json(rep.strategies->second)}});
        } else if (kind == "ns") {
          rep = ns_bound(game);
          cert_path = (fs::path(out_dir) / "ns_certificate.json").string();
          write_json_file(cert_path, box_to_json(*rep.box));
        } else if (kind == "ml") {
          rep = ml_bound(game, ml_level == "1ab" ? MlLevel::Npa1AB : MlLevel::Npa1);
          cert_path = (fs::path(out_dir) / "ml_certificate.json").string();
          write_json_file(cert_path, json{{"moment_matrix", rmat_to_json(*rep.moment_matrix)},
                                          {"box", box_to_json(*rep.box)}});
        } else if (kind == "seesaw") {
          const int d = dims > 0 ? dims : std::min(game.num_outcomes, 4);
          rep = seesaw(game, d, d, restarts, seed, default_tolerances(), &get_lhv(), threads);
          cert_path = (fs::path(out_dir) / "seesaw_certificate.json").string();
          write_json_file(cert_path, quantum_strategy_to_json(*rep.quantum));
        } else {
          throw ValidationError("unknown bound kind: " + kind);
        }
        const std::string rep_path =
            (fs::path(out_dir) / (kind + "_report.json")).string();
        write_json_file(rep_path, bound_report_to_json(rep, cert_path));
        std::cout << kind << " " << std::setprecision(10) << rep.value << "  -> " << rep_path
                  << "\n";
      }
      return kExitOk;
    }

    if (*cmd_sim) {
      const Scenario sc = sim_args.build();
      const BellGame game = compile_game(sc);
      Box box;
      if (box_spec == "uniform") {
        box = uniform_box(game.num_outcomes, game.num_outcomes, game.num_settings,
                          game.num_settings);
      } else if (box_spec == "lhv") {
        const auto lhv = lhv_bound(game);
        box = deterministic_box(lhv.strategies->first, lhv.strategies->second,
                                game.num_outcomes);
      } else {
        box = box_from_json(read_json_file(box_spec));
      }
      std::vector<SimTraceRow> trace;
      const auto rep = simulate(sc, box, trials, sim_seed, default_tolerances(), threads,
                                trace_path.empty() ? nullptr : &trace);
      if (!trace_path.empty()) {
        std::ofstream tout(trace_path);
        write_trace_csv(trace, tout);
      }
      write_json_file(sim_out, sim_report_to_json(rep));
      json config = sim_args.to_json();
      config["box"] = box_spec;
      config["trials"] = trials;
      write_manifest(sim_out + ".manifest.json", "simulate", config, sim_seed, threads);
      std::cout << "estimate " << rep.estimate << "  ci95 [" << rep.ci_low << ", " << rep.ci_high
                << "]  -> " << sim_out << "\n";
      return kExitOk;
    }

    if (*cmd_rep) {
      std::vector<std::string> ids;
      if (table_id == "all")
        ids = reference_table_ids();
      else
        ids.push_back(table_id);
      ReproduceOptions opts;
      opts.restarts = rep_restarts;
      opts.seed = rep_seed;
      opts.threads = threads;
      opts.run_seesaw = !no_seesaw;

      fs::create_directories(rep_out_dir);
      json config{{"tables", ids}, {"restarts", rep_restarts}, {"seesaw", !no_seesaw}};
      write_manifest((fs::path(rep_out_dir) / "manifest.json").string(), "reproduce", config,
                     rep_seed, threads);

      std::vector<CellResult> all;
      for (const auto& id : ids) {
        const auto results = reproduce_table(id, opts);  // validates id first
        all.insert(all.end(), results.begin(), results.end());
        int pass = 0, fail = 0, skip = 0;
        for (const auto& r : results) {
          pass += r.status == "pass";
          fail += r.status == "fail";
          skip += r.status == "skip";
        }
        std::cout << "table " << id << ": " << pass << " pass, " << fail << " fail, " << skip
                  << " skip\n";
        for (const auto& r : results)
          if (r.status == "fail")
            std::cout << "  FAIL " << r.cell.graph << " E=" << r.cell.e_flag
                      << " S=" << r.cell.s_flag << " kind=" << r.cell.kind << " expected "
                      << r.expected << " computed " << r.computed << " " << r.note << "\n";
      }
      const std::string csv_path = (fs::path(rep_out_dir) / "reproduce.csv").string();
      std::ofstream csv(csv_path);
      write_results_csv(all, csv);
      std::cout << "wrote " << csv_path << "\n";
      return count_failures(all) == 0 ? kExitOk : kExitMismatch;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
