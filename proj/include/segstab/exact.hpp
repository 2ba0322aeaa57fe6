#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "segstab/bits.hpp"
#include "segstab/geometry.hpp"

namespace segstab {

enum class SolveStatus { solved, infeasible, budget_exceeded };

inline const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

struct ExactResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  std::uint64_t nodes = 0;
};

constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

namespace detail {

constexpr int kInfCover = std::numeric_limits<int>::max() / 2;

// Branch and bound for minimum set cover over precomputed stab masks.
// Branches on the uncovered target with the fewest remaining stabbers; the
// i-th branch commits to its i-th stabber and bans the earlier ones, so the
// subtrees partition the search space. Lower bound: a greedily built set of
// targets no remaining candidate can serve two of.
class CoverSearch {
 public:
  CoverSearch(const std::vector<Bits>& target_masks,
              const std::vector<Bits>& cover, std::uint64_t budget)
      : target_masks_(target_masks),
        cover_(cover),
        budget_(budget),
        nt_(static_cast<int>(target_masks.size())),
        nc_(static_cast<int>(cover.size())) {}

  std::uint64_t nodes() const { return nodes_; }
  bool exceeded() const { return exceeded_; }

  // Minimum cover of `targets` from candidates outside `banned`, or
  // kInfCover; `cap` bounds the sizes considered (pass kInfCover for none).
  int minimize(const Bits& targets, const Bits& banned, int cap,
               std::vector<int>* out_set) {
    best_ = cap >= kInfCover ? kInfCover : cap + 1;
    best_set_.clear();
    found_ = false;
    cur_.clear();
    dfs(targets, banned);
    if (exceeded_ || !found_) return kInfCover;
    if (out_set) *out_set = best_set_;
    return best_;
  }

 private:
  void dfs(const Bits& uncovered, const Bits& banned) {
    if (exceeded_) return;
    if (++nodes_ > budget_) {
      exceeded_ = true;
      return;
    }
    if (!uncovered.any()) {
      best_ = static_cast<int>(cur_.size());
      best_set_ = cur_;
      found_ = true;
      return;
    }
    const int lb = lower_bound(uncovered, banned);
    if (lb >= kInfCover) return;
    if (static_cast<int>(cur_.size()) + lb >= best_) return;

    // Branch target: fewest allowed stabbers, then smallest index.
    int pick = -1, pick_n = kInfCover;
    for (int t = uncovered.first(); t != -1; t = uncovered.next(t)) {
      Bits opts = target_masks_[t];
      opts.subtract(banned);
      const int c = opts.count();
      if (c < pick_n) {
        pick_n = c;
        pick = t;
        if (c <= 1) break;
      }
    }
    Bits options = target_masks_[pick];
    options.subtract(banned);
    Bits newban = banned;
    for (int c = options.first(); c != -1; c = options.next(c)) {
      cur_.push_back(c);
      Bits rest = uncovered;
      rest.subtract(cover_[c]);
      dfs(rest, newban);
      cur_.pop_back();
      if (exceeded_) return;
      newban.set(c);
    }
  }

  // Greedy antichain of targets whose allowed stabber sets are pairwise
  // disjoint; each needs its own chosen candidate. Returns kInfCover when a
  // target has no allowed stabber at all.
  int lower_bound(const Bits& uncovered, const Bits& banned) {
    int lb = 0;
    Bits used(nc_);
    for (int t = uncovered.first(); t != -1; t = uncovered.next(t)) {
      Bits opts = target_masks_[t];
      opts.subtract(banned);
      if (!opts.any()) return kInfCover;
      if (!opts.intersects(used)) {
        ++lb;
        used |= opts;
      }
    }
    return lb;
  }

  const std::vector<Bits>& target_masks_;
  const std::vector<Bits>& cover_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
  int nt_, nc_;
  int best_ = kInfCover;
  bool found_ = false;
  std::vector<int> cur_, best_set_;
};

}  // namespace detail

// Minimum-cardinality subset of the stabber segments hitting every id in
// `targets`. Returns the lexicographically smallest optimal chosen set (as a
// sorted id sequence), found by fixing the optimum size first and then
// growing the smallest completable prefix. `budget` caps search nodes across
// both phases.
inline ExactResult solve_exact_targets(const Instance& inst,
                                       const std::vector<int>& targets,
                                       std::uint64_t budget = kDefaultNodeBudget) {
  std::vector<int> cands = inst.stabber_ids();
  const int nc = static_cast<int>(cands.size());
  const int nt = static_cast<int>(targets.size());

  ExactResult res;
  if (nt == 0) {
    res.status = SolveStatus::solved;
    res.solution = Solution{};
    return res;
  }

  std::vector<Bits> target_masks(nt, Bits(nc));
  std::vector<Bits> cover(nc, Bits(nt));
  for (int ti = 0; ti < nt; ++ti) {
    const Segment& t = inst.segment(targets[ti]);
    for (int ci = 0; ci < nc; ++ci)
      if (stabs(t, inst.segment(cands[ci]))) {
        target_masks[ti].set(ci);
        cover[ci].set(ti);
      }
    if (!target_masks[ti].any()) {
      res.status = SolveStatus::infeasible;
      return res;
    }
  }

  detail::CoverSearch search(target_masks, cover, budget);
  Bits all_targets(nt);
  for (int i = 0; i < nt; ++i) all_targets.set(i);
  Bits no_ban(nc);

  std::vector<int> opt_set;
  const int opt = search.minimize(all_targets, no_ban, detail::kInfCover,
                                  &opt_set);
  res.nodes = search.nodes();
  if (search.exceeded()) {
    res.status = SolveStatus::budget_exceeded;
    return res;
  }
  if (opt >= detail::kInfCover)
    throw std::logic_error("cover search failed despite nonempty stab masks");

  // Lexicographic minimization over candidate ids: extend the prefix with
  // the smallest candidate that still completes to `opt` using only larger
  // candidate indices (candidate ids ascend with indices).
  std::vector<int> prefix;
  Bits uncovered = all_targets;
  Bits banned(nc);
  for (int ci = 0; ci < nc && uncovered.any(); ++ci) {
    const int need = opt - static_cast<int>(prefix.size()) - 1;
    Bits rest = uncovered;
    rest.subtract(cover[ci]);
    Bits ban_after = banned;
    ban_after.set(ci);
    const int completion = rest.any()
                               ? search.minimize(rest, ban_after, need, nullptr)
                               : 0;
    res.nodes = search.nodes();
    if (search.exceeded()) {
      res.status = SolveStatus::budget_exceeded;
      return res;
    }
    if (completion <= need) {
      prefix.push_back(ci);
      uncovered = rest;
    }
    banned.set(ci);
  }
  if (uncovered.any() || static_cast<int>(prefix.size()) != opt)
    throw std::logic_error("lexicographic reconstruction lost the optimum");

  Solution sol;
  for (int ci : prefix) sol.chosen.push_back(cands[ci]);
  std::sort(sol.chosen.begin(), sol.chosen.end());
  rebuild_witness(inst, sol, targets);
  res.status = SolveStatus::solved;
  res.solution = std::move(sol);
  return res;
}

inline ExactResult solve_exact(const Instance& inst,
                               std::uint64_t budget = kDefaultNodeBudget) {
  return solve_exact_targets(inst, inst.target_ids(), budget);
}

// Decision procedure for the exactly-once variant: is there a set of at most
// k stabbers hitting every target exactly once? Searched by include/exclude
// over candidates in id order, pruning double-stabs, size overruns, and
// targets no remaining candidate can reach.
inline bool exists_exactly_one_cover(const Instance& inst, int k) {
  std::vector<int> cands, targets;
  for (const auto& s : inst.segments) {
    if (s.in_s) {
      if (!s.is_vertical())
        throw std::invalid_argument(
            "exists_exactly_one_cover: stabbers must all be vertical");
      cands.push_back(s.id);
    }
    if (s.in_d) {
      if (!s.is_horizontal())
        throw std::invalid_argument(
            "exists_exactly_one_cover: targets must all be horizontal");
      targets.push_back(s.id);
    }
  }
  const int nc = static_cast<int>(cands.size());
  const int nt = static_cast<int>(targets.size());
  if (nt == 0) return true;
  if (k <= 0) return false;

  std::vector<Bits> cover(nc, Bits(nt));
  for (int ci = 0; ci < nc; ++ci)
    for (int ti = 0; ti < nt; ++ti)
      if (stabs(inst.segment(targets[ti]), inst.segment(cands[ci])))
        cover[ci].set(ti);

  // reachable[i] = targets some candidate with index >= i can still hit.
  std::vector<Bits> reachable(nc + 1, Bits(nt));
  for (int i = nc - 1; i >= 0; --i) {
    reachable[i] = reachable[i + 1];
    reachable[i] |= cover[i];
  }

  std::vector<int> hits(nt, 0);
  int uncovered = nt;

  const auto feasible_here = [&](int idx) {
    for (int t = 0; t < nt; ++t)
      if (hits[t] == 0 && !reachable[idx].test(t)) return false;
    return true;
  };

  std::function<bool(int, int)> dfs = [&](int idx, int used) -> bool {
    if (uncovered == 0) return true;
    if (idx == nc || used == k) return false;
    if (!feasible_here(idx)) return false;

    // Include cands[idx] unless it would stab a target twice.
    bool double_stab = false;
    for (int t = cover[idx].first(); t != -1; t = cover[idx].next(t))
      if (hits[t] == 1) {
        double_stab = true;
        break;
      }
    if (!double_stab && cover[idx].any()) {
      for (int t = cover[idx].first(); t != -1; t = cover[idx].next(t))
        if (++hits[t] == 1) --uncovered;
      if (dfs(idx + 1, used + 1)) return true;
      for (int t = cover[idx].first(); t != -1; t = cover[idx].next(t))
        if (--hits[t] == 0) ++uncovered;
    }
    return dfs(idx + 1, used);
  };

  return dfs(0, 0);
}

}  // namespace segstab
