#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "segstab/bits.hpp"
#include "segstab/exact.hpp"
#include "segstab/geometry.hpp"
#include "segstab/io.hpp"

namespace segstab {

struct LsConfig {
  int k = 2;                 // swap size: remove up to k, add fewer
  long max_iterations = 0;   // 0 = 10 * n^2
  std::uint64_t seed = 0;    // 0 = candidates in id order, else shuffled
};

struct LsReport {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  std::vector<int> objective_trace;          // objective after init and each swap
  std::vector<std::pair<int, int>> swaps;    // (removed, added) sizes
  long iterations = 0;                       // improvement scans performed
  bool hit_iteration_cap = false;
};

// Candidate pool: stabber horizontals sharing a y stab exactly the same
// horizontal targets (every horizontal crosses the common line), so one
// representative per row suffices; all stabber verticals are kept.
inline std::vector<int> preprocess_candidates(const Instance& inst) {
  std::map<Rat, int> row_rep;
  std::vector<int> cands;
  for (const auto& s : inst.segments) {
    if (!s.in_s) continue;
    if (s.is_vertical()) {
      cands.push_back(s.id);
    } else {
      auto it = row_rep.find(s.y());
      if (it == row_rep.end()) row_rep[s.y()] = s.id;
    }
  }
  for (const auto& [y, id] : row_rep) cands.push_back(id);
  std::sort(cands.begin(), cands.end());
  return cands;
}

namespace detail {

// Enumerates index combinations of size r from 0..n-1 in lexicographic
// order, invoking fn(const std::vector<int>&) until fn returns true.
template <typename Fn>
bool for_each_combination(int n, int r, Fn&& fn) {
  if (r > n) return false;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    if (fn(static_cast<const std::vector<int>&>(idx))) return true;
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// Swap-based local search for horizontal targets. Starts from a greedy
// cover, then repeatedly removes up to k chosen candidates and re-adds
// strictly fewer, taking the lexicographically first improving swap over
// the (possibly seed-shuffled) candidate order. Every accepted swap lowers
// the objective, so the loop terminates; the iteration cap is a guard rail
// and hitting it is reported.
inline LsReport local_search_targets(const Instance& inst,
                                     const std::vector<int>& targets,
                                     const LsConfig& cfg = {}) {
  if (cfg.k < 1) throw std::invalid_argument("local_search: k must be >= 1");
  for (int t : targets)
    if (!inst.segment(t).is_horizontal())
      throw std::invalid_argument("local_search: targets must be horizontal");

  LsReport rep;
  const int nt = static_cast<int>(targets.size());
  std::vector<int> cands = preprocess_candidates(inst);
  if (cfg.seed != 0) {
    SplitMix64 rng{cfg.seed};
    for (std::size_t i = cands.size(); i > 1; --i)
      std::swap(cands[i - 1], cands[rng.bounded(i)]);
  }
  const int nc = static_cast<int>(cands.size());

  std::vector<Bits> cover(nc, Bits(nt));
  for (int ci = 0; ci < nc; ++ci)
    for (int ti = 0; ti < nt; ++ti)
      if (stabs(inst.segment(targets[ti]), inst.segment(cands[ci])))
        cover[ci].set(ti);

  // Greedy start: repeatedly take the candidate covering the most
  // still-uncovered targets, breaking ties by smallest id.
  Bits uncovered(nt);
  for (int ti = 0; ti < nt; ++ti) uncovered.set(ti);
  std::vector<int> chosen;  // candidate indices
  while (uncovered.any()) {
    int best = -1;
    std::size_t best_gain = 0;
    for (int ci = 0; ci < nc; ++ci) {
      if (std::find(chosen.begin(), chosen.end(), ci) != chosen.end()) continue;
      const std::size_t gain = uncovered.count_and(cover[ci]);
      if (gain > best_gain ||
          (gain == best_gain && gain > 0 && best != -1 &&
           cands[ci] < cands[best])) {
        best = ci;
        best_gain = gain;
      }
    }
    if (best == -1) {
      rep.status = SolveStatus::infeasible;
      return rep;
    }
    chosen.push_back(best);
    uncovered.subtract(cover[best]);
  }
  std::sort(chosen.begin(), chosen.end());
  rep.objective_trace.push_back(static_cast<int>(chosen.size()));

  const long cap = cfg.max_iterations > 0
                       ? cfg.max_iterations
                       : 10L * inst.size() * inst.size();

  while (true) {
    if (rep.iterations >= cap) {
      rep.hit_iteration_cap = true;
      break;
    }
    ++rep.iterations;

    // Coverage multiplicity lets us find the targets a removal set exposes.
    std::vector<int> count(nt, 0);
    for (int ci : chosen)
      for (int t = cover[ci].first(); t != -1; t = cover[ci].next(t))
        ++count[t];

    std::vector<int> outside;
    for (int ci = 0; ci < nc; ++ci)
      if (!std::binary_search(chosen.begin(), chosen.end(), ci))
        outside.push_back(ci);

    bool improved = false;
    const int cs = static_cast<int>(chosen.size());
    for (int a = 1; a <= cfg.k && !improved; ++a) {
      detail::for_each_combination(cs, a, [&](const std::vector<int>& rem) {
        // A target is exposed when every chosen candidate covering it is
        // being removed.
        Bits exposed(nt);
        for (int ri : rem)
          for (int t = cover[chosen[ri]].first(); t != -1;
               t = cover[chosen[ri]].next(t)) {
            int within = 0;
            for (int rj : rem)
              if (cover[chosen[rj]].test(t)) ++within;
            if (count[t] == within) exposed.set(t);
          }
        for (int m = 0; m < a && !improved; ++m) {
          detail::for_each_combination(
              static_cast<int>(outside.size()), m,
              [&](const std::vector<int>& add) {
                Bits patched = exposed;
                for (int ai : add) patched.subtract(cover[outside[ai]]);
                if (patched.any()) return false;
                std::vector<int> next;
                for (int i = 0; i < cs; ++i)
                  if (std::find(rem.begin(), rem.end(), i) == rem.end())
                    next.push_back(chosen[i]);
                for (int ai : add) next.push_back(outside[ai]);
                std::sort(next.begin(), next.end());
                chosen = std::move(next);
                rep.swaps.emplace_back(a, m);
                improved = true;
                return true;
              });
        }
        return improved;
      });
    }
    if (!improved) break;
    rep.objective_trace.push_back(static_cast<int>(chosen.size()));
  }

  Solution sol;
  for (int ci : chosen) sol.chosen.push_back(cands[ci]);
  std::sort(sol.chosen.begin(), sol.chosen.end());
  rebuild_witness(inst, sol, targets);
  rep.status = SolveStatus::solved;
  rep.solution = std::move(sol);
  return rep;
}

inline LsReport local_search(const Instance& inst, const LsConfig& cfg = {}) {
  return local_search_targets(inst, inst.target_ids(), cfg);
}

// Independent certificate: no swap removing up to k chosen candidates and
// adding strictly fewer from the candidate pool keeps all targets covered.
// Written as a direct subset walk so it shares no machinery with the
// search itself.
inline bool is_locally_optimal(const Instance& inst,
                               const std::vector<int>& targets,
                               const Solution& sol, int k) {
  const std::vector<int> cands = preprocess_candidates(inst);
  std::vector<int> inside, outside;
  for (int id : cands) {
    if (std::binary_search(sol.chosen.begin(), sol.chosen.end(), id))
      inside.push_back(id);
    else
      outside.push_back(id);
  }
  // Chosen ids outside the pool still count as removable.
  for (int id : sol.chosen)
    if (std::find(inside.begin(), inside.end(), id) == inside.end())
      inside.push_back(id);

  const auto covers_all = [&](const std::vector<int>& picked) {
    for (int t : targets) {
      bool hit = false;
      for (int id : picked)
        if (stabs(inst.segment(t), inst.segment(id))) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  };

  const int ni = static_cast<int>(inside.size());
  const int no = static_cast<int>(outside.size());
  for (int a = 1; a <= k && a <= ni; ++a) {
    bool found = detail::for_each_combination(ni, a, [&](const std::vector<int>& rem) {
      for (int m = 0; m < a; ++m) {
        bool ok = detail::for_each_combination(
            no, m, [&](const std::vector<int>& add) {
              std::vector<int> picked;
              for (int i = 0; i < ni; ++i)
                if (std::find(rem.begin(), rem.end(), i) == rem.end())
                  picked.push_back(inside[i]);
              for (int ai : add) picked.push_back(outside[ai]);
              return covers_all(picked);
            });
        if (ok) return true;
      }
      return false;
    });
    if (found) return false;
  }
  return true;
}

}  // namespace segstab
