#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "segstab/dp.hpp"
#include "segstab/geometry.hpp"
#include "segstab/local_search.hpp"
#include "segstab/lp_round.hpp"

namespace segstab {

// Union of two solutions for disjoint target sets. The disjointness is the
// whole argument (each target keeps the witness of the sub-solution that
// owned it), so it is validated rather than assumed.
inline Solution merge(const Solution& a, const Solution& b) {
  for (const auto& [t, w] : a.witness)
    if (b.witness.count(t))
      throw std::invalid_argument(
          "merge: target sets overlap; witnessed twice: id " +
          std::to_string(t));
  Solution out;
  out.chosen = a.chosen;
  out.chosen.insert(out.chosen.end(), b.chosen.begin(), b.chosen.end());
  std::sort(out.chosen.begin(), out.chosen.end());
  out.chosen.erase(std::unique(out.chosen.begin(), out.chosen.end()),
                   out.chosen.end());
  out.witness = a.witness;
  out.witness.insert(b.witness.begin(), b.witness.end());
  return out;
}

struct CombineReport {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  int horizontal_part = 0;  // objective of the sub-solve on D-horizontals
  int vertical_part = 0;    // objective of the sub-solve on D-verticals
};

namespace detail {

inline void split_targets(const Instance& inst, std::vector<int>& horiz,
                          std::vector<int>& vert) {
  for (int t : inst.target_ids())
    (inst.segment(t).is_horizontal() ? horiz : vert).push_back(t);
}

}  // namespace detail

// 5-approximation on the horizontal targets plus 2-approximation on the
// vertical targets; their union is a 7-approximation for the whole target
// set, since each sub-optimum is at most the overall optimum.
inline CombineReport seven_approx(const Instance& inst) {
  std::vector<int> horiz, vert;
  detail::split_targets(inst, horiz, vert);

  CombineReport rep;
  const FiveApproxReport five = five_approx_targets(inst, horiz);
  if (five.status != SolveStatus::solved) return rep;

  Instance vert_only = inst;
  for (auto& s : vert_only.segments) s.in_d = s.in_d && s.is_vertical();
  const TwoApproxReport two = two_approx_hv_v(vert_only);
  if (two.status != SolveStatus::solved) return rep;

  rep.horizontal_part = five.solution->objective();
  rep.vertical_part = two.solution->objective();
  rep.solution = merge(*five.solution, *two.solution);
  rep.status = SolveStatus::solved;
  return rep;
}

// Local search on the horizontal targets (ratio 3+eps for swap size k)
// plus the exact split on the vertical targets.
inline CombineReport three_eps_approx(const Instance& inst,
                                      const LsConfig& cfg = {}) {
  std::vector<int> horiz, vert;
  detail::split_targets(inst, horiz, vert);

  CombineReport rep;
  const LsReport ls = local_search_targets(inst, horiz, cfg);
  if (ls.status != SolveStatus::solved) return rep;

  Instance vert_only = inst;
  for (auto& s : vert_only.segments) s.in_d = s.in_d && s.is_vertical();
  const TwoApproxReport two = two_approx_hv_v(vert_only);
  if (two.status != SolveStatus::solved) return rep;

  rep.horizontal_part = ls.solution->objective();
  rep.vertical_part = two.solution->objective();
  rep.solution = merge(*ls.solution, *two.solution);
  rep.status = SolveStatus::solved;
  return rep;
}

}  // namespace segstab
