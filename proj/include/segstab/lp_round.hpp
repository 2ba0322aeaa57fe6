#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "segstab/exact.hpp"
#include "segstab/geometry.hpp"
#include "segstab/lp.hpp"
#include "segstab/rational.hpp"

namespace segstab {

// Membership of each target horizontal by fractional stabbing mass: left
// vertical mass >= 2/5, right vertical mass >= 2/5, horizontal mass >= 1/5.
// The thresholds are tested independently and non-strictly, so the three
// sets may overlap; together they always cover all targets (if both vertical
// masses fall below 2/5, the horizontal mass exceeds 1/5 because each row
// sums to at least 1).
struct ThresholdPartition {
  std::vector<int> left, right, horiz;
};

inline ThresholdPartition partition_by_mass(const Instance& inst,
                                            const std::vector<int>& targets,
                                            const std::vector<Rat>& value_of_id) {
  const Rat two_fifths(2, 5), one_fifth(1, 5);
  ThresholdPartition part;
  for (int t : targets) {
    const Segment& target = inst.segment(t);
    Rat mass_l = 0, mass_r = 0, mass_h = 0;
    for (const auto& s : inst.segments) {
      if (!s.in_s || !stabs(target, s)) continue;
      if (s.is_horizontal())
        mass_h += value_of_id[s.id];
      else if (s.x() < inst.lv_x)
        mass_l += value_of_id[s.id];
      else
        mass_r += value_of_id[s.id];
    }
    bool member = false;
    if (mass_l >= two_fifths) { part.left.push_back(t); member = true; }
    if (mass_r >= two_fifths) { part.right.push_back(t); member = true; }
    if (mass_h >= one_fifth) { part.horiz.push_back(t); member = true; }
    if (!member)
      throw std::logic_error(
          "partition_by_mass: target escaped all three classes; its row "
          "cannot sum to 1");
  }
  return part;
}

// Minimum number of one-side vertical stabbers hitting all given horizontal
// targets. Because each target crosses the common line, a left-side vertical
// at x hits target i exactly when x_lo(i) <= x and y(i) is inside the
// vertical's span: the targets behave as rays. Solved exactly by memoized
// branching on the target whose ray demands the closest candidate; any
// candidate covering it covers its whole y-band of remaining targets, so
// states (sets of remaining targets) collapse quickly. Falls back to the
// generic branch-and-bound when there are more than 64 targets.
inline ExactResult solve_ray_stabbing_exact(const Instance& inst, bool left,
                                            const std::vector<int>& targets) {
  std::vector<int> cands;
  for (const auto& s : inst.segments)
    if (s.in_s && s.is_vertical() &&
        (left ? s.x() < inst.lv_x : s.x() > inst.lv_x))
      cands.push_back(s.id);

  ExactResult res;
  const int nt = static_cast<int>(targets.size());
  const int nc = static_cast<int>(cands.size());
  if (nt == 0) {
    res.status = SolveStatus::solved;
    res.solution = Solution{};
    return res;
  }
  for (int t : targets)
    if (!inst.segment(t).is_horizontal())
      throw std::invalid_argument("ray stabbing: targets must be horizontal");

  if (nt > 64) {
    // Same optimum, generic search.
    Instance sub = inst;
    for (auto& s : sub.segments)
      s.in_s = s.in_s && s.is_vertical() &&
               (left ? s.x() < inst.lv_x : s.x() > inst.lv_x);
    return solve_exact_targets(sub, targets);
  }

  // Demand key: how close to the common line a candidate must be. Larger
  // key = more demanding target; a candidate covers target t iff its own key
  // is >= t's key and t's y lies in its span.
  const auto target_key = [&](int id) -> Rat {
    const Segment& s = inst.segment(id);
    return left ? s.x_lo() : -s.x_hi();
  };
  const auto cand_key = [&](int id) -> Rat {
    const Segment& s = inst.segment(id);
    return left ? s.x() : -s.x();
  };

  std::vector<std::uint64_t> cover(nc, 0);
  for (int ci = 0; ci < nc; ++ci)
    for (int ti = 0; ti < nt; ++ti)
      if (stabs(inst.segment(targets[ti]), inst.segment(cands[ci])))
        cover[ci] |= std::uint64_t{1} << ti;

  // Candidate order: closest to the line first, then smallest id.
  std::vector<int> cand_order(nc);
  for (int i = 0; i < nc; ++i) cand_order[i] = i;
  std::stable_sort(cand_order.begin(), cand_order.end(), [&](int a, int b) {
    return cand_key(cands[a]) > cand_key(cands[b]);
  });

  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::unordered_map<std::uint64_t, std::pair<int, int>> memo;  // cost, choice

  const std::uint64_t all = nt == 64 ? ~std::uint64_t{0}
                                     : (std::uint64_t{1} << nt) - 1;

  const std::function<int(std::uint64_t)> f = [&](std::uint64_t mask) -> int {
    if (mask == 0) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second.first;

    // Most demanding remaining target (max key, then smallest id).
    int pick = -1;
    for (int ti = 0; ti < nt; ++ti) {
      if (!((mask >> ti) & 1)) continue;
      if (pick == -1 || target_key(targets[ti]) > target_key(targets[pick]))
        pick = ti;
    }
    int best = kInf, best_choice = -1;
    for (int ci : cand_order) {
      if (!((cover[ci] >> pick) & 1)) continue;
      const int rest = f(mask & ~cover[ci]);
      if (rest + 1 < best) {
        best = rest + 1;
        best_choice = ci;
      }
    }
    memo.emplace(mask, std::make_pair(best, best_choice));
    return best;
  };

  const int opt = f(all);
  res.nodes = memo.size();
  if (opt >= kInf) {
    res.status = SolveStatus::infeasible;
    return res;
  }

  Solution sol;
  std::uint64_t mask = all;
  while (mask) {
    const auto& [cost, choice] = memo.at(mask);
    if (cost == 0) break;
    sol.chosen.push_back(cands[choice]);
    mask &= ~cover[choice];
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  if (static_cast<int>(sol.chosen.size()) != opt)
    throw std::logic_error("ray stabbing: reconstruction size != optimum");
  rebuild_witness(inst, sol, targets);
  res.status = SolveStatus::solved;
  res.solution = std::move(sol);
  return res;
}

// Minimum number of stabber horizontals hitting all given horizontal
// targets. A horizontal stabs exactly the co-row horizontals (all cross the
// common line), so the optimum picks one candidate per distinct target y;
// we take the smallest-id candidate of each row.
inline ExactResult solve_horizontal_clusters(const Instance& inst,
                                             const std::vector<int>& targets) {
  ExactResult res;
  std::map<Rat, int> rep;  // y -> smallest stabber-horizontal id
  for (const auto& s : inst.segments)
    if (s.in_s && s.is_horizontal() && !rep.count(s.y())) rep[s.y()] = s.id;

  Solution sol;
  std::vector<int> used;
  for (int t : targets) {
    const Segment& target = inst.segment(t);
    if (!target.is_horizontal())
      throw std::invalid_argument("cluster stabbing: targets must be horizontal");
    auto it = rep.find(target.y());
    if (it == rep.end()) {
      res.status = SolveStatus::infeasible;
      return res;
    }
    used.push_back(it->second);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  sol.chosen = std::move(used);
  rebuild_witness(inst, sol, targets);
  res.status = SolveStatus::solved;
  res.solution = std::move(sol);
  return res;
}

struct FiveApproxReport {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  Rat lp_objective;
  ThresholdPartition partition;
  int left_objective = 0, right_objective = 0, cluster_objective = 0;
  std::vector<int> uncoverable;  // set when status == infeasible
};

// The LP-rounding pipeline: solve the fractional relaxation, split the
// targets by where their fractional mass sits, solve the two one-side ray
// problems and the co-row cluster problem exactly, and return the union.
// The union's objective is at most 5x the integral optimum.
inline FiveApproxReport five_approx_targets(const Instance& inst,
                                            const std::vector<int>& targets) {
  for (int t : targets)
    if (!inst.segment(t).is_horizontal())
      throw std::invalid_argument("five_approx: targets must be horizontal");
  for (const auto& s : inst.segments)
    if (s.in_s && s.is_vertical() && s.x() == inst.lv_x)
      throw std::invalid_argument(
          "five_approx: stabber verticals must not lie on the common line");

  FiveApproxReport rep;
  LpBuild build = build_lp1(inst, targets);
  if (!build.ok()) {
    rep.status = SolveStatus::infeasible;
    rep.uncoverable = build.uncoverable;
    return rep;
  }
  const FractionalSolution frac = solve_lp(*build.lp);
  rep.lp_objective = frac.objective;

  std::vector<Rat> value_of_id(inst.size(), Rat(0));
  for (int j = 0; j < build.lp->num_vars; ++j)
    value_of_id[build.lp->var_labels[j]] = frac.values[j];

  rep.partition = partition_by_mass(inst, targets, value_of_id);

  ExactResult s1 = solve_ray_stabbing_exact(inst, true, rep.partition.left);
  ExactResult s2 = solve_ray_stabbing_exact(inst, false, rep.partition.right);
  ExactResult s3 = solve_horizontal_clusters(inst, rep.partition.horiz);
  if (s1.status != SolveStatus::solved || s2.status != SolveStatus::solved ||
      s3.status != SolveStatus::solved)
    throw std::logic_error(
        "five_approx: a partition class lost its stabbers; masses guarantee "
        "each class is feasible");
  rep.left_objective = s1.solution->objective();
  rep.right_objective = s2.solution->objective();
  rep.cluster_objective = s3.solution->objective();

  Solution sol;
  sol.chosen = s1.solution->chosen;
  sol.chosen.insert(sol.chosen.end(), s2.solution->chosen.begin(),
                    s2.solution->chosen.end());
  sol.chosen.insert(sol.chosen.end(), s3.solution->chosen.begin(),
                    s3.solution->chosen.end());
  std::sort(sol.chosen.begin(), sol.chosen.end());
  sol.chosen.erase(std::unique(sol.chosen.begin(), sol.chosen.end()),
                   sol.chosen.end());
  rebuild_witness(inst, sol, targets);
  rep.status = SolveStatus::solved;
  rep.solution = std::move(sol);
  return rep;
}

inline FiveApproxReport five_approx(const Instance& inst) {
  return five_approx_targets(inst, inst.target_ids());
}

// Executable form of the analysis behind the 5x bound, evaluated on one
// instance: the three restricted LPs, their exact integral optima, the
// integrality-gap inequalities, and the feasibility of the scaled
// fractional vectors. Everything is computed from one LP1 optimum.
struct RoundingAudit {
  bool feasible = false;            // LP1 had no empty row
  Rat lp1_objective;
  Rat lp2_objective, lp3_objective, lp4_objective;
  int ilp2 = 0, ilp3 = 0, ilp4 = 0;  // exact optima of the three subproblems
  bool ray_gap_left = false;         // ilp2 <= 2 * lp2
  bool ray_gap_right = false;        // ilp3 <= 2 * lp3
  bool cluster_gap = false;          // ilp4 <= lp4
  bool scaled_left_feasible = false;   // min(1, 5/2 y*) covers left rows
  bool scaled_right_feasible = false;  // min(1, 5/2 y*) covers right rows
  bool scaled_horiz_feasible = false;  // min(1, 5 y*) covers horiz rows
  bool bound_left = false;   // lp2 <= 5/2 * (left vertical mass of y*)
  bool bound_right = false;  // lp3 <= 5/2 * (right vertical mass of y*)
  bool bound_horiz = false;  // lp4 <= 5 * (horizontal mass of y*)
};

inline RoundingAudit audit_rounding(const Instance& inst,
                                    const std::vector<int>& targets) {
  RoundingAudit audit;
  LpBuild build = build_lp1(inst, targets);
  if (!build.ok()) return audit;
  audit.feasible = true;
  const FractionalSolution frac = solve_lp(*build.lp);
  audit.lp1_objective = frac.objective;

  std::vector<Rat> value_of_id(inst.size(), Rat(0));
  for (int j = 0; j < build.lp->num_vars; ++j)
    value_of_id[build.lp->var_labels[j]] = frac.values[j];
  const ThresholdPartition part = partition_by_mass(inst, targets, value_of_id);

  const auto scaled_covers = [&](const std::vector<int>& class_targets,
                                 auto admit, const Rat& factor) {
    for (int t : class_targets) {
      Rat sum = 0;
      for (const auto& s : inst.segments)
        if (s.in_s && admit(s) && stabs(inst.segment(t), s))
          sum += std::min(Rat(1), Rat(factor * value_of_id[s.id]));
      if (sum < 1) return false;
    }
    return true;
  };
  const auto mass_of = [&](auto admit) {
    Rat sum = 0;
    for (const auto& s : inst.segments)
      if (s.in_s && admit(s)) sum += value_of_id[s.id];
    return sum;
  };
  const auto is_left = [&](const Segment& s) {
    return s.is_vertical() && s.x() < inst.lv_x;
  };
  const auto is_right = [&](const Segment& s) {
    return s.is_vertical() && s.x() > inst.lv_x;
  };
  const auto is_horiz = [&](const Segment& s) { return s.is_horizontal(); };
  const Rat five_halves(5, 2), five(5);

  const auto solve_class_lp = [&](LpBuild b) -> Rat {
    if (!b.ok())
      throw std::logic_error("audit: partition class has an uncoverable row");
    return b.lp->rows.empty() ? Rat(0) : solve_lp(*b.lp).objective;
  };
  audit.lp2_objective = solve_class_lp(build_side_lp(inst, part.left, true));
  audit.lp3_objective = solve_class_lp(build_side_lp(inst, part.right, false));
  audit.lp4_objective = solve_class_lp(build_horizontal_lp(inst, part.horiz));

  const auto expect_solved = [](const ExactResult& r) -> int {
    if (r.status != SolveStatus::solved)
      throw std::logic_error("audit: subproblem unexpectedly unsolved");
    return r.solution->objective();
  };
  audit.ilp2 = expect_solved(solve_ray_stabbing_exact(inst, true, part.left));
  audit.ilp3 = expect_solved(solve_ray_stabbing_exact(inst, false, part.right));
  audit.ilp4 = expect_solved(solve_horizontal_clusters(inst, part.horiz));

  audit.ray_gap_left = Rat(audit.ilp2) <= 2 * audit.lp2_objective ||
                       part.left.empty();
  audit.ray_gap_right = Rat(audit.ilp3) <= 2 * audit.lp3_objective ||
                        part.right.empty();
  audit.cluster_gap = Rat(audit.ilp4) <= audit.lp4_objective ||
                      part.horiz.empty();
  audit.scaled_left_feasible = scaled_covers(part.left, is_left, five_halves);
  audit.scaled_right_feasible =
      scaled_covers(part.right, is_right, five_halves);
  audit.scaled_horiz_feasible = scaled_covers(part.horiz, is_horiz, five);
  audit.bound_left = audit.lp2_objective <= five_halves * mass_of(is_left);
  audit.bound_right = audit.lp3_objective <= five_halves * mass_of(is_right);
  audit.bound_horiz = audit.lp4_objective <= five * mass_of(is_horiz);
  return audit;
}

inline RoundingAudit audit_rounding(const Instance& inst) {
  return audit_rounding(inst, inst.target_ids());
}

}  // namespace segstab
