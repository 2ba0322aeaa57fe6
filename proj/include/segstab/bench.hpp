#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "segstab/combine.hpp"
#include "segstab/dp.hpp"
#include "segstab/exact.hpp"
#include "segstab/geometry.hpp"
#include "segstab/io.hpp"
#include "segstab/local_search.hpp"
#include "segstab/lp_round.hpp"

namespace segstab {

inline const std::vector<std::string>& algo_names() {
  static const std::vector<std::string> names = {
      "exact", "lp5", "ls", "dp", "merge2", "merge7", "merge3e"};
  return names;
}

// Which instance variant each algorithm contract covers. The exact oracle
// handles everything except the exactly-once variant, whose feasibility
// notion differs from plain covering.
inline std::optional<std::string> algo_variant_mismatch(const Instance& inst,
                                                        const std::string& algo) {
  const std::string tag = variant_tag(inst.variant);
  const auto want = [&](Variant v) -> std::optional<std::string> {
    if (inst.variant == v) return std::nullopt;
    return "algorithm '" + algo + "' requires variant " + variant_tag(v) +
           ", instance has " + tag;
  };
  if (algo == "exact") {
    if (inst.variant == Variant::v_h_exactly_once)
      return "variant " + tag +
             " demands exactly-once stabbing, which no solve algorithm "
             "covers";
    return std::nullopt;
  }
  if (algo == "lp5" || algo == "ls") return want(Variant::hv_h);
  if (algo == "dp" || algo == "merge2") return want(Variant::hv_v);
  if (algo == "merge7" || algo == "merge3e") return want(Variant::hv_hv);
  return "unknown algorithm '" + algo + "'";
}

struct AlgoRun {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  std::optional<FiveApproxReport> lp5;
  std::optional<LsReport> ls;
  std::optional<DpReport> dp;
  std::optional<TwoApproxReport> two;
  std::optional<CombineReport> combine;
  std::size_t nodes = 0;
};

inline AlgoRun run_algo(const Instance& inst, const std::string& algo,
                        const LsConfig& ls_cfg = {},
                        long budget = kDefaultNodeBudget) {
  AlgoRun run;
  if (algo == "exact") {
    ExactResult r = solve_exact(inst, budget);
    run.status = r.status;
    run.solution = std::move(r.solution);
    run.nodes = r.nodes;
  } else if (algo == "lp5") {
    FiveApproxReport r = five_approx(inst);
    run.status = r.status;
    run.solution = r.solution;
    run.lp5 = std::move(r);
  } else if (algo == "ls") {
    LsReport r = local_search(inst, ls_cfg);
    run.status = r.status;
    run.solution = r.solution;
    run.ls = std::move(r);
  } else if (algo == "dp") {
    DpReport r = dp_solve(inst);
    run.status = r.status;
    run.solution = r.solution;
    run.dp = std::move(r);
  } else if (algo == "merge2") {
    TwoApproxReport r = two_approx_hv_v(inst);
    run.status = r.status;
    run.solution = r.solution;
    run.two = std::move(r);
  } else if (algo == "merge7") {
    CombineReport r = seven_approx(inst);
    run.status = r.status;
    run.solution = r.solution;
    run.combine = std::move(r);
  } else if (algo == "merge3e") {
    CombineReport r = three_eps_approx(inst, ls_cfg);
    run.status = r.status;
    run.solution = r.solution;
    run.combine = std::move(r);
  } else {
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }
  return run;
}

// Generator settings that satisfy each algorithm's variant and side
// preconditions; dp additionally needs all targets on one side.
inline GeneratorConfig bench_config_for(const std::string& algo,
                                        GeneratorConfig base) {
  if (algo == "lp5" || algo == "ls") base.variant = Variant::hv_h;
  if (algo == "dp" || algo == "merge2") base.variant = Variant::hv_v;
  if (algo == "merge7" || algo == "merge3e" || algo == "exact")
    base.variant = Variant::hv_hv;
  if (algo == "dp") base.left_num = 0;  // keep every vertical on one side
  return base;
}

struct BenchRow {
  std::string algo;
  std::string variant;
  int evaluated = 0;
  int budget_skipped = 0;
  int infeasible_skipped = 0;
  Rat max_ratio = 0;
  Rat mean_ratio = 0;
};

// Ratio of an algorithm's objective to the exact optimum over a seeded
// batch. Instances whose oracle run exceeds the budget or is infeasible
// are excluded and counted. A zero optimum (no targets) scores ratio 1.
inline BenchRow bench_algo(const std::string& algo, const GeneratorConfig& base,
                           int count, const LsConfig& ls_cfg = {},
                           long budget = kDefaultNodeBudget) {
  BenchRow row;
  row.algo = algo;
  const GeneratorConfig cfg0 = bench_config_for(algo, base);
  row.variant = variant_tag(cfg0.variant);
  Rat sum = 0;
  for (int i = 0; i < count; ++i) {
    GeneratorConfig cfg = cfg0;
    cfg.seed = base.seed + static_cast<std::uint64_t>(i);
    const Instance inst = generate(cfg);
    const ExactResult oracle = solve_exact(inst, budget);
    if (oracle.status == SolveStatus::budget_exceeded) {
      ++row.budget_skipped;
      continue;
    }
    if (oracle.status == SolveStatus::infeasible) {
      ++row.infeasible_skipped;
      continue;
    }
    const AlgoRun run = run_algo(inst, algo, ls_cfg, budget);
    if (run.status != SolveStatus::solved)
      throw std::logic_error("bench: algorithm failed on a feasible instance");
    const int opt = oracle.solution->objective();
    const Rat ratio = opt == 0 ? Rat(1)
                               : Rat(run.solution->objective()) / Rat(opt);
    sum += ratio;
    if (ratio > row.max_ratio) row.max_ratio = ratio;
    ++row.evaluated;
  }
  if (row.evaluated > 0) row.mean_ratio = sum / row.evaluated;
  return row;
}

inline std::string render_bench_table(const std::vector<BenchRow>& rows) {
  const auto pad = [](std::string s, std::size_t w) {
    while (s.size() < w) s.push_back(' ');
    return s;
  };
  std::ostringstream out;
  out << pad("algo", 9) << pad("variant", 9) << pad("evaluated", 11)
      << pad("budget_skipped", 16) << pad("infeasible", 12)
      << pad("max_ratio", 11) << "mean_ratio\n";
  for (const auto& r : rows)
    out << pad(r.algo, 9) << pad(r.variant, 9)
        << pad(std::to_string(r.evaluated), 11)
        << pad(std::to_string(r.budget_skipped), 16)
        << pad(std::to_string(r.infeasible_skipped), 12)
        << pad(rat_to_string(r.max_ratio), 11) << rat_to_string(r.mean_ratio)
        << "\n";
  return out.str();
}

}  // namespace segstab
