#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "segstab/exact.hpp"
#include "segstab/geometry.hpp"

namespace segstab {

struct DpReport {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  std::size_t table_size = 0;
  std::size_t lookups = 0;
  std::size_t hits = 0;
};

// Band dynamic program for vertical targets that all lie strictly on one
// side of the common line. Rows are the stabber horizontals in increasing
// y; verticals are the same-side stabber verticals ordered by distance of
// their column from the common line, nearest first, ties by decreasing
// bottom endpoint, remaining ties by id. A subproblem (i, j, k, k') covers
// the targets among v_1..v_k' that touch some row of the band h_j..h_i and
// avoid both neighbouring rows, using rows of the band and verticals
// v_1..v_k.
//
// The band recursion requires every target to touch at least one row: a
// band either hits its largest-index target with a row and splits, or buys
// a vertical in that target's column and shrinks the prefixes. It is exact
// whenever the minimum solution buys no vertical that serves targets both
// strictly above and strictly below one of its rows; dp_solve_targets
// closes that gap (and covers row-untouched targets) by enumerating
// vertical purchases outside the recursion, so the engine itself rejects
// targets no row touches.
class DpEngine {
 public:
  DpEngine(const Instance& inst, std::vector<int> targets)
      : inst_(inst), target_ids_(std::move(targets)) {
    bool left = false, right = false;
    for (int t : target_ids_) {
      const Segment& s = inst_.segment(t);
      if (!s.is_vertical())
        throw std::invalid_argument("dp: targets must be vertical");
      if (!s.in_s)
        throw std::invalid_argument(
            "dp: every target vertical must also be a stabber; the band "
            "recursion relies on targets being able to cover themselves");
      if (s.x() == inst_.lv_x)
        throw std::invalid_argument("dp: target on the common line");
      (s.x() < inst_.lv_x ? left : right) = true;
    }
    if (left && right)
      throw std::invalid_argument("dp: targets must lie on one side");
    left_ = left;

    // Vertical order v_1..v_m; other-side stabber verticals cannot touch
    // any same-side vertical, so only this side participates.
    for (const auto& s : inst_.segments)
      if (s.in_s && s.is_vertical() &&
          (left_ ? s.x() < inst_.lv_x : s.x() > inst_.lv_x))
        verts_.push_back(s.id);
    std::sort(verts_.begin(), verts_.end(), [&](int a, int b) {
      const Segment& sa = inst_.segment(a);
      const Segment& sb = inst_.segment(b);
      // Order columns by distance from the common line, nearest first, so
      // the largest index is always the farthest column on either side. A
      // row hitting the farthest demanded column therefore spans every
      // demanded column, which is what makes the row guess split cleanly.
      if (sa.x() != sb.x())
        return left_ ? sa.x() > sb.x() : sa.x() < sb.x();
      if (sa.y_lo() != sb.y_lo()) return sa.y_lo() > sb.y_lo();
      return a < b;
    });
    demanded_.assign(verts_.size(), false);
    for (std::size_t vi = 0; vi < verts_.size(); ++vi)
      demanded_[vi] = std::find(target_ids_.begin(), target_ids_.end(),
                                verts_[vi]) != target_ids_.end();
    for (int t : target_ids_)
      if (std::find(verts_.begin(), verts_.end(), t) == verts_.end())
        throw std::logic_error("dp: target missing from vertical order");

    for (const auto& s : inst_.segments)
      if (s.in_s && s.is_horizontal()) row_id_.push_back(s.id);
    std::sort(row_id_.begin(), row_id_.end(), [&](int a, int b) {
      const Segment& sa = inst_.segment(a);
      const Segment& sb = inst_.segment(b);
      if (sa.y() != sb.y()) return sa.y() < sb.y();
      return a < b;
    });

    const int t = row_count();
    const int m = vert_count();
    row_hits_.assign(t + 1, std::vector<char>(m + 1, 0));
    for (int r = 1; r <= t; ++r)
      for (int v = 1; v <= m; ++v)
        row_hits_[r][v] =
            stabs(inst_.segment(verts_[v - 1]), inst_.segment(row_id_[r - 1]));
    vert_hits_.assign(m + 1, std::vector<char>(m + 1, 0));
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b)
        vert_hits_[a][b] =
            stabs(inst_.segment(verts_[a - 1]), inst_.segment(verts_[b - 1]));
    for (int v = 1; v <= m; ++v) {
      if (!demanded_[v - 1]) continue;
      bool touched = false;
      for (int r = 1; r <= t && !touched; ++r) touched = row_hits_[r][v];
      if (!touched)
        throw std::invalid_argument(
            "dp: target vertical touched by no stabber horizontal");
    }
  }

  int row_count() const { return static_cast<int>(row_id_.size()); }
  int vert_count() const { return static_cast<int>(verts_.size()); }

  // V(i, j, l): the demanded verticals among v_1..v_l that touch one of the
  // rows h_j..h_i and avoid the neighbouring rows h_{i+1} and h_{j-1} where
  // those exist. Indices are 1-based; j may exceed i for a band with no
  // rows.
  std::vector<int> targets_of(int i, int j, int l) const {
    std::vector<int> out;
    for (int v = 1; v <= std::min(l, vert_count()); ++v) {
      if (!demanded_[v - 1]) continue;
      if (!in_band(v, i, j)) continue;
      if (i + 1 <= row_count() && hit_by_row(v, i + 1)) continue;
      if (j - 1 >= 1 && hit_by_row(v, j - 1)) continue;
      out.push_back(v);
    }
    return out;
  }

  // Segment id of the 1-based vertical index (test hook).
  int vertical_id(int v) const { return verts_[v - 1]; }
  int row_segment_id(int r) const { return row_id_[r - 1]; }

  long f(int i, int j, int k, int kp) {
    const std::vector<int> T = targets_of(i, j, kp);
    if (T.empty()) return 0;
    return solve_band(i, j, k, T);
  }

  // Optimum and reconstruction for the full problem f(t, 1, m, m).
  DpReport run() {
    DpReport rep;
    const long opt = f(row_count(), 1, vert_count(), vert_count());
    rep.table_size = memo_.size();
    rep.lookups = lookups_;
    rep.hits = hits_;
    if (opt >= kInf) {
      rep.status = SolveStatus::infeasible;
      return rep;
    }
    Solution sol;
    std::vector<int> ids;
    reconstruct(row_count(), 1, vert_count(), vert_count(), ids);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end() ||
        static_cast<long>(ids.size()) != opt)
      throw std::logic_error(
          "dp: reconstruction does not match the computed optimum");
    sol.chosen = std::move(ids);
    rebuild_witness(inst_, sol, target_ids_);
    rep.status = SolveStatus::solved;
    rep.solution = std::move(sol);
    return rep;
  }

 private:
  static constexpr long kInf = std::numeric_limits<long>::max() / 4;

  bool hit_by_row(int v, int r) const { return row_hits_[r][v]; }

  bool in_band(int v, int i, int j) const {
    for (int r = std::max(j, 1); r <= std::min(i, row_count()); ++r)
      if (row_hits_[r][v]) return true;
    return false;
  }

  std::uint64_t key_of(int i, int j, int k, int kpn) const {
    // j runs one past i for row-less bands, so digits need base t + 3.
    const std::uint64_t t3 = row_count() + 3, m1 = vert_count() + 1;
    return ((static_cast<std::uint64_t>(i + 1) * t3 + (j + 1)) * m1 + k) * m1 +
           kpn;
  }

  struct Choice {
    bool case_a;
    int guess;  // row index i' or vertical index l
  };

  long solve_band(int i, int j, int k, const std::vector<int>& T) {
    const int kpn = T.back();  // memo key uses the largest present index
    const std::uint64_t key = key_of(i, j, k, kpn);
    ++lookups_;
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second.first;
    }

    const int v = T.back();
    long best = kInf;
    Choice best_choice{true, -1};

    // Case A: v is hit by a row of the band. The guessed row reaches every
    // demanded column (v has the largest index, hence the farthest column),
    // so any target spanning the guessed row's y is hit by it; the rest
    // split strictly above or below.
    for (int ip = std::max(j, 1); ip <= std::min(i, row_count()); ++ip) {
      if (!row_hits_[ip][v]) continue;
      long val = 1;
      if (const int k1 = scan_up(T, i, ip); k1 != 0) val += f(i, ip + 1, k, k1);
      if (val < best) {
        if (const int k2 = scan_down(T, j, ip); k2 != 0)
          val += f(ip - 1, j, k, k2);
      }
      if (val < best) {
        best = val;
        best_choice = {true, ip};
      }
    }

    // Case B: v is hit only by verticals; guess the largest-index one,
    // which shares v's column. Guessing v itself pays for targets that no
    // row and no other chosen vertical reaches.
    for (int l = 1; l <= k; ++l) {
      if (!vert_hits_[l][v]) continue;
      long val = 1;
      if (const int k3 = scan_avoiding(T, l); k3 != 0) val += f(i, j, l - 1, k3);
      if (val < best) {
        best = val;
        best_choice = {false, l};
      }
    }

    memo_.emplace(key, std::make_pair(best, best_choice));
    return best;
  }

  // Largest index in T that the upper sub-band (i, ip+1) keeps after
  // guessing row ip; 0 when none qualifies.
  int scan_up(const std::vector<int>& T, int i, int ip) const {
    for (auto it = T.rbegin(); it != T.rend(); ++it)
      if (!hit_by_row(*it, ip) && in_band(*it, i, ip + 1)) return *it;
    return 0;
  }

  int scan_down(const std::vector<int>& T, int j, int ip) const {
    for (auto it = T.rbegin(); it != T.rend(); ++it)
      if (!hit_by_row(*it, ip) && in_band(*it, ip - 1, j)) return *it;
    return 0;
  }

  int scan_avoiding(const std::vector<int>& T, int l) const {
    for (auto it = T.rbegin(); it != T.rend(); ++it)
      if (!vert_hits_[l][*it]) return *it;
    return 0;
  }

  void reconstruct(int i, int j, int k, int kp, std::vector<int>& ids) {
    const std::vector<int> T = targets_of(i, j, kp);
    if (T.empty()) return;
    const auto it = memo_.find(key_of(i, j, k, T.back()));
    if (it == memo_.end() || it->second.first >= kInf)
      throw std::logic_error("dp: reconstruction reached an unsolved band");
    const Choice c = it->second.second;
    if (c.case_a) {
      ids.push_back(row_id_[c.guess - 1]);
      if (const int k1 = scan_up(T, i, c.guess); k1 != 0)
        reconstruct(i, c.guess + 1, k, k1, ids);
      if (const int k2 = scan_down(T, j, c.guess); k2 != 0)
        reconstruct(c.guess - 1, j, k, k2, ids);
    } else {
      ids.push_back(verts_[c.guess - 1]);
      if (const int k3 = scan_avoiding(T, c.guess); k3 != 0)
        reconstruct(i, j, c.guess - 1, k3, ids);
    }
  }

  const Instance& inst_;
  std::vector<int> target_ids_;
  bool left_ = false;
  std::vector<int> verts_;  // 1-based via verts_[v-1]
  std::vector<char> demanded_;
  std::vector<int> row_id_;  // 1-based via row_id_[r-1]
  std::vector<std::vector<char>> row_hits_;   // [row][vert]
  std::vector<std::vector<char>> vert_hits_;  // [vert][vert]
  std::unordered_map<std::uint64_t, std::pair<long, Choice>> memo_;
  std::size_t lookups_ = 0, hits_ = 0;
};

// Exact one-sided solve. The band recursion alone can overpay: a row guess
// splits the remaining targets into independent halves, so a vertical that
// the minimum solution buys once to serve targets strictly above and
// strictly below that row would be paid by both halves, and a target no row
// touches never enters any band at all. Both gaps involve only vertical
// purchases, so we enumerate candidate purchase sets W, run the band
// recursion on the targets W leaves uncovered, and keep the smallest union.
// For the W that equals the vertical part of a minimum solution the
// leftover targets are coverable by rows alone, and on such inputs the
// recursion is exact (every guessed row reaches all remaining columns, so
// its split loses nothing); every other W still yields a feasible cover,
// hence the minimum over all W is the true optimum. Masks that leave a
// row-untouched target uncovered are skipped — no solution of that shape
// exists without further purchases, and the recursion cannot demand such a
// target.
inline DpReport dp_solve_targets(const Instance& inst,
                                 const std::vector<int>& targets) {
  DpReport rep;
  if (targets.empty()) {
    rep.status = SolveStatus::solved;
    rep.solution = Solution{};
    return rep;
  }

  bool left = false, right = false;
  for (int t : targets) {
    const Segment& s = inst.segment(t);
    if (!s.is_vertical())
      throw std::invalid_argument("dp: targets must be vertical");
    if (!s.in_s)
      throw std::invalid_argument(
          "dp: every target vertical must also be a stabber; the band "
          "recursion relies on targets being able to cover themselves");
    if (s.x() == inst.lv_x)
      throw std::invalid_argument("dp: target on the common line");
    (s.x() < inst.lv_x ? left : right) = true;
  }
  if (left && right)
    throw std::invalid_argument("dp: targets must lie on one side");

  // Purchase candidates: same-side stabber verticals touching a target.
  // The vertical part of any minimum solution is such a set, because every
  // member of a minimum solution covers at least one target.
  std::vector<int> cand;
  for (const auto& s : inst.segments) {
    if (!s.in_s || !s.is_vertical()) continue;
    if (left ? !(s.x() < inst.lv_x) : !(s.x() > inst.lv_x)) continue;
    for (int t : targets)
      if (stabs(inst.segment(t), s)) {
        cand.push_back(s.id);
        break;
      }
  }
  std::sort(cand.begin(), cand.end());
  if (cand.size() > 62)
    throw std::invalid_argument(
        "dp: too many candidate verticals to enumerate purchase sets");

  std::vector<std::vector<char>> cand_hits(
      cand.size(), std::vector<char>(targets.size(), 0));
  for (std::size_t c = 0; c < cand.size(); ++c)
    for (std::size_t ti = 0; ti < targets.size(); ++ti)
      cand_hits[c][ti] =
          stabs(inst.segment(targets[ti]), inst.segment(cand[c]));
  std::vector<char> row_touched(targets.size(), 0);
  for (const auto& s : inst.segments) {
    if (!s.in_s || !s.is_horizontal()) continue;
    for (std::size_t ti = 0; ti < targets.size(); ++ti)
      if (!row_touched[ti] && stabs(inst.segment(targets[ti]), s))
        row_touched[ti] = 1;
  }

  long best = std::numeric_limits<long>::max();
  std::optional<Solution> best_sol;
  const std::uint64_t masks = std::uint64_t{1} << cand.size();
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    if (static_cast<long>(std::popcount(mask)) >= best) continue;

    std::vector<int> residual;
    bool engine_ok = true;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      bool covered = false;
      for (std::size_t c = 0; c < cand.size() && !covered; ++c)
        covered = (mask >> c & 1) && cand_hits[c][ti];
      if (covered) continue;
      if (!row_touched[ti]) {
        engine_ok = false;
        break;
      }
      residual.push_back(targets[ti]);
    }
    if (!engine_ok) continue;

    std::vector<int> chosen;
    if (!residual.empty()) {
      DpEngine engine(inst, residual);
      DpReport run = engine.run();
      rep.table_size += run.table_size;
      rep.lookups += run.lookups;
      rep.hits += run.hits;
      if (run.status != SolveStatus::solved) continue;
      chosen = std::move(run.solution->chosen);
    }
    for (std::size_t c = 0; c < cand.size(); ++c)
      if (mask >> c & 1) chosen.push_back(cand[c]);
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    if (static_cast<long>(chosen.size()) < best) {
      best = static_cast<long>(chosen.size());
      Solution sol;
      sol.chosen = std::move(chosen);
      rebuild_witness(inst, sol, targets);
      best_sol = std::move(sol);
    }
  }

  if (!best_sol) {
    rep.status = SolveStatus::infeasible;
    return rep;
  }
  rep.status = SolveStatus::solved;
  rep.solution = std::move(best_sol);
  return rep;
}

inline DpReport dp_solve(const Instance& inst) {
  return dp_solve_targets(inst, inst.target_ids());
}

struct TwoApproxReport {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Solution> solution;
  int left_objective = 0, right_objective = 0;
};

// Split the vertical targets by side of the common line, solve each side
// exactly, and take the union: at most twice the optimum because each
// side's exact solution is no larger than the whole optimum.
inline TwoApproxReport two_approx_hv_v(const Instance& inst) {
  std::vector<int> left, right;
  for (int t : inst.target_ids()) {
    const Segment& s = inst.segment(t);
    if (!s.is_vertical())
      throw std::invalid_argument("two_approx: targets must be vertical");
    if (s.x() == inst.lv_x)
      throw std::invalid_argument("two_approx: target on the common line");
    (s.x() < inst.lv_x ? left : right).push_back(t);
  }
  TwoApproxReport rep;
  const DpReport lr = dp_solve_targets(inst, left);
  const DpReport rr = dp_solve_targets(inst, right);
  if (lr.status != SolveStatus::solved || rr.status != SolveStatus::solved)
    return rep;
  rep.left_objective = lr.solution->objective();
  rep.right_objective = rr.solution->objective();

  Solution sol;
  sol.chosen = lr.solution->chosen;
  sol.chosen.insert(sol.chosen.end(), rr.solution->chosen.begin(),
                    rr.solution->chosen.end());
  std::sort(sol.chosen.begin(), sol.chosen.end());
  sol.chosen.erase(std::unique(sol.chosen.begin(), sol.chosen.end()),
                   sol.chosen.end());
  sol.witness = lr.solution->witness;
  for (const auto& [t, w] : rr.solution->witness) sol.witness[t] = w;
  rep.status = SolveStatus::solved;
  rep.solution = std::move(sol);
  return rep;
}

}  // namespace segstab
