#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "segstab/bench.hpp"
#include "segstab/combine.hpp"
#include "segstab/dp.hpp"
#include "segstab/exact.hpp"
#include "segstab/geometry.hpp"
#include "segstab/io.hpp"
#include "segstab/local_search.hpp"
#include "segstab/lp_round.hpp"
#include "segstab/sat.hpp"

namespace {

using nlohmann::json;
using namespace segstab;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json solution_json(const Solution& sol) {
  json j;
  j["objective"] = sol.objective();
  j["chosen"] = sol.chosen;
  json w = json::object();
  for (const auto& [t, s] : sol.witness) w[std::to_string(t)] = s;
  j["witness"] = w;
  return j;
}

int cmd_solve(const std::string& file, const std::string& algo, int k,
              std::uint64_t seed, long budget, const std::string& out_path,
              const std::string& report_path) {
  const Instance inst = parse_instance(read_file(file));
  if (auto mismatch = algo_variant_mismatch(inst, algo)) {
    std::cerr << "error: " << *mismatch << "\n";
    return kExitUsage;
  }
  LsConfig ls_cfg;
  ls_cfg.k = k;
  ls_cfg.seed = seed;

  const auto t0 = std::chrono::steady_clock::now();
  AlgoRun run;
  try {
    run = run_algo(inst, algo, ls_cfg, budget);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  json rep;
  rep["file"] = file;
  rep["algo"] = algo;
  rep["variant"] = variant_tag(inst.variant);
  rep["status"] = solve_status_name(run.status);

  std::cout << "algo: " << algo << "\n"
            << "status: " << solve_status_name(run.status) << "\n";
  if (run.status == SolveStatus::solved) {
    const Solution& sol = *run.solution;
    std::cout << "objective: " << sol.objective() << "\n";
    rep["solution"] = solution_json(sol);
  }
  std::cout << "wall_time_us: " << elapsed << "\n";

  if (run.nodes) {
    std::cout << "nodes: " << run.nodes << "\n";
    rep["nodes"] = run.nodes;
  }
  if (run.lp5) {
    std::cout << "lp_objective: " << rat_to_string(run.lp5->lp_objective)
              << "\n"
              << "partition: left=" << run.lp5->partition.left.size()
              << " right=" << run.lp5->partition.right.size()
              << " horiz=" << run.lp5->partition.horiz.size() << "\n"
              << "subproblems: left=" << run.lp5->left_objective
              << " right=" << run.lp5->right_objective
              << " clusters=" << run.lp5->cluster_objective << "\n";
    rep["lp_objective"] = rat_to_string(run.lp5->lp_objective);
    rep["partition"] = {{"left", run.lp5->partition.left.size()},
                        {"right", run.lp5->partition.right.size()},
                        {"horiz", run.lp5->partition.horiz.size()}};
    rep["subobjectives"] = {{"left", run.lp5->left_objective},
                            {"right", run.lp5->right_objective},
                            {"clusters", run.lp5->cluster_objective}};
  }
  if (run.ls) {
    std::cout << "iterations: " << run.ls->iterations
              << (run.ls->hit_iteration_cap ? " (hit cap)" : "") << "\n"
              << "objective_trace:";
    for (int o : run.ls->objective_trace) std::cout << ' ' << o;
    std::cout << "\nswaps:";
    for (const auto& [rm, add] : run.ls->swaps)
      std::cout << " -" << rm << "+" << add;
    std::cout << "\n";
    rep["iterations"] = run.ls->iterations;
    rep["hit_iteration_cap"] = run.ls->hit_iteration_cap;
    rep["objective_trace"] = run.ls->objective_trace;
    json sw = json::array();
    for (const auto& [rm, add] : run.ls->swaps)
      sw.push_back({{"removed", rm}, {"added", add}});
    rep["swaps"] = sw;
  }
  if (run.dp) {
    std::cout << "dp_table_size: " << run.dp->table_size << "\n"
              << "dp_lookups: " << run.dp->lookups << "\n"
              << "dp_hits: " << run.dp->hits << "\n";
    rep["dp"] = {{"table_size", run.dp->table_size},
                 {"lookups", run.dp->lookups},
                 {"hits", run.dp->hits}};
    if (run.dp->lookups) {
      const Rat rate =
          Rat(static_cast<long>(run.dp->hits), static_cast<long>(run.dp->lookups));
      std::cout << "dp_hit_rate: " << rat_to_string(rate) << "\n";
      rep["dp"]["hit_rate"] = rat_to_string(rate);
    }
  }
  if (run.two) {
    std::cout << "sides: left=" << run.two->left_objective
              << " right=" << run.two->right_objective << "\n";
    rep["sides"] = {{"left", run.two->left_objective},
                    {"right", run.two->right_objective}};
  }
  if (run.combine) {
    std::cout << "parts: horizontal=" << run.combine->horizontal_part
              << " vertical=" << run.combine->vertical_part << "\n";
    rep["parts"] = {{"horizontal", run.combine->horizontal_part},
                    {"vertical", run.combine->vertical_part}};
  }

  if (!report_path.empty()) write_file(report_path, rep.dump(2) + "\n");
  if (run.status != SolveStatus::solved) {
    std::cerr << "error: " << solve_status_name(run.status) << "\n";
    return kExitInfeasible;
  }
  if (!out_path.empty()) write_file(out_path, render_solution(*run.solution));
  return kExitOk;
}

int cmd_verify(const std::string& inst_path, const std::string& sol_path) {
  const Instance inst = parse_instance(read_file(inst_path));
  const Solution sol = parse_solution(read_file(sol_path));
  const std::vector<Violation> bad = verify_solution(inst, sol);
  if (bad.empty()) {
    std::cout << "ok\n";
    return kExitOk;
  }
  for (const auto& v : bad)
    std::cout << "violation (id " << v.id << "): " << v.message << "\n";
  return kExitInfeasible;
}

int cmd_generate(const GeneratorConfig& cfg, const std::string& out_path) {
  const Instance inst = generate(cfg);
  const std::string text = render_instance(inst);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_reduce(const std::string& kind, const std::string& cnf_path,
               const std::string& out_path) {
  const ParsedCnf cnf = parse_cnf(read_file(cnf_path));
  Instance inst;
  if (kind == "monotone") {
    if (cnf.is_cycle) throw std::invalid_argument("cnf file is a cycle cnf");
    inst = reduce_monotone(cnf.monotone);
  } else if (kind == "vgadget") {
    if (cnf.is_cycle) throw std::invalid_argument("cnf file is a cycle cnf");
    inst = reduce_monotone_vertical_gadget(cnf.monotone);
  } else if (kind == "cycle") {
    if (!cnf.is_cycle) throw std::invalid_argument("cnf file is a monotone cnf");
    inst = reduce_cycle(cnf.cycle);
  } else {
    throw std::invalid_argument("unknown reduction kind '" + kind + "'");
  }
  const std::string text = render_instance(inst);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

int cmd_bench(const std::vector<std::string>& algos, int count,
              const GeneratorConfig& base, int k, long budget,
              const std::string& json_path) {
  std::vector<BenchRow> rows;
  LsConfig ls_cfg;
  ls_cfg.k = k;
  for (const auto& algo : algos)
    rows.push_back(bench_algo(algo, base, count, ls_cfg, budget));
  std::cout << render_bench_table(rows);
  if (!json_path.empty()) {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"algo", r.algo},
                   {"variant", r.variant},
                   {"evaluated", r.evaluated},
                   {"budget_skipped", r.budget_skipped},
                   {"infeasible_skipped", r.infeasible_skipped},
                   {"max_ratio", rat_to_string(r.max_ratio)},
                   {"mean_ratio", rat_to_string(r.mean_ratio)}});
    write_file(json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solvers for stabbing axis-parallel segments that share a "
               "common vertical line"};
  app.require_subcommand(1);

  std::string file, algo = "exact", out_path, report_path;
  int k = 2;
  std::uint64_t seed = 0;
  long budget = segstab::kDefaultNodeBudget;

  auto* solve = app.add_subcommand("solve", "run one algorithm on an instance");
  solve->add_option("file", file, "instance file")->required();
  solve->add_option("--algo", algo, "one of exact,lp5,ls,dp,merge2,merge7,merge3e");
  solve->add_option("--k", k, "swap size for ls / merge3e");
  solve->add_option("--seed", seed, "candidate shuffle seed for ls");
  solve->add_option("--budget", budget, "node budget for the exact oracle");
  solve->add_option("--out", out_path, "solution file to write");
  solve->add_option("--report", report_path, "machine-readable report file");

  std::string sol_path;
  auto* verify = app.add_subcommand("verify", "check a solution file");
  verify->add_option("instance", file, "instance file")->required();
  verify->add_option("solution", sol_path, "solution file")->required();

  segstab::GeneratorConfig gen_cfg;
  std::string variant_name = "HV_HV", left_ratio = "1/2";
  long coord_lo = -5, coord_hi = 5;
  auto* gen = app.add_subcommand("generate", "write a random instance");
  gen->add_option("--seed", gen_cfg.seed, "rng seed");
  gen->add_option("--nh", gen_cfg.n_h, "horizontal count");
  gen->add_option("--nv", gen_cfg.n_v, "vertical count");
  gen->add_option("--variant", variant_name, "variant tag");
  gen->add_option("--coord-lo", coord_lo, "coordinate range low");
  gen->add_option("--coord-hi", coord_hi, "coordinate range high");
  gen->add_option("--left", left_ratio, "fraction of verticals left of the line");
  gen->add_option("--out", out_path, "output file (stdout if omitted)");

  std::string kind, cnf_path;
  auto* reduce = app.add_subcommand("reduce", "build a hardness instance from a cnf");
  reduce->add_option("--kind", kind, "monotone | vgadget | cycle")->required();
  reduce->add_option("cnf", cnf_path, "cnf file")->required();
  reduce->add_option("--out", out_path, "output file (stdout if omitted)");

  std::string algos_csv = "exact,lp5,ls,dp,merge2,merge7,merge3e";
  int count = 20;
  std::string bench_json;
  auto* bench = app.add_subcommand("bench", "ratio table against the exact oracle");
  bench->add_option("--algos", algos_csv, "comma-separated algorithm list");
  bench->add_option("--count", count, "instances per algorithm");
  bench->add_option("--seed", gen_cfg.seed, "base seed");
  bench->add_option("--nh", gen_cfg.n_h, "horizontal count");
  bench->add_option("--nv", gen_cfg.n_v, "vertical count");
  bench->add_option("--k", k, "swap size for ls / merge3e");
  bench->add_option("--budget", budget, "oracle node budget");
  bench->add_option("--json", bench_json, "machine-readable table file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(file, algo, k, seed, budget, out_path, report_path);
    if (verify->parsed()) return cmd_verify(file, sol_path);
    if (gen->parsed()) {
      auto v = segstab::variant_from_tag(variant_name);
      if (!v) {
        std::cerr << "error: unknown variant tag '" << variant_name << "'\n";
        return kExitUsage;
      }
      gen_cfg.variant = *v;
      gen_cfg.coord_lo = coord_lo;
      gen_cfg.coord_hi = coord_hi;
      const auto slash = left_ratio.find('/');
      if (slash == std::string::npos) {
        gen_cfg.left_num = std::stoi(left_ratio);
        gen_cfg.left_den = 1;
      } else {
        gen_cfg.left_num = std::stoi(left_ratio.substr(0, slash));
        gen_cfg.left_den = std::stoi(left_ratio.substr(slash + 1));
      }
      return cmd_generate(gen_cfg, out_path);
    }
    if (reduce->parsed()) return cmd_reduce(kind, cnf_path, out_path);
    if (bench->parsed()) {
      std::vector<std::string> algos;
      std::istringstream ss(algos_csv);
      std::string a;
      while (std::getline(ss, a, ',')) algos.push_back(a);
      return cmd_bench(algos, count, gen_cfg, k, budget, bench_json);
    }
  } catch (const segstab::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return kExitUsage;
}
