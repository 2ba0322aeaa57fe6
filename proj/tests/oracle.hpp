#pragma once

// Reference implementations used only by the tests. Everything here is
// written independently of the library: intersection is decided by
// bounding-box overlap instead of orientation case analysis, and minimum
// covers come from plain combination enumeration in increasing size order.

#include <optional>
#include <vector>

#include "segstab/geometry.hpp"

namespace oracle {

using segstab::Instance;
using segstab::Rat;
using segstab::Segment;

inline void seg_box(const Segment& s, Rat& xl, Rat& xh, Rat& yl, Rat& yh) {
  if (s.is_horizontal()) {
    xl = s.lo; xh = s.hi; yl = s.at; yh = s.at;
  } else {
    xl = s.at; xh = s.at; yl = s.lo; yh = s.hi;
  }
}

// Axis-parallel closed segments intersect exactly when their bounding boxes
// do, because each segment is its own (degenerate) bounding box.
inline bool hits(const Segment& a, const Segment& b) {
  Rat axl, axh, ayl, ayh, bxl, bxh, byl, byh;
  seg_box(a, axl, axh, ayl, ayh);
  seg_box(b, bxl, bxh, byl, byh);
  return axl <= bxh && bxl <= axh && ayl <= byh && byl <= ayh;
}

namespace detail {

template <typename Fn>
bool combos(int n, int r, int start, std::vector<int>& cur, Fn&& fn) {
  if (static_cast<int>(cur.size()) == r) return fn(cur);
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    if (combos(n, r, i + 1, cur, fn)) return true;
    cur.pop_back();
  }
  return false;
}

}  // namespace detail

// Smallest set of stabbers covering every target; nullopt when even the full
// stabber set leaves a target unhit. Ids in the result are sorted ascending.
inline std::optional<std::vector<int>> min_cover(
    const Instance& inst, const std::vector<int>& targets) {
  const std::vector<int> stab = inst.stabber_ids();
  const int n = static_cast<int>(stab.size());
  for (int t : targets) {
    bool any = false;
    for (int s : stab)
      if (hits(inst.segment(t), inst.segment(s))) { any = true; break; }
    if (!any) return std::nullopt;
  }
  for (int r = 0; r <= n; ++r) {
    std::vector<int> cur, found;
    const bool ok = detail::combos(n, r, 0, cur, [&](const std::vector<int>& pick) {
      for (int t : targets) {
        bool covered = false;
        for (int i : pick)
          if (hits(inst.segment(t), inst.segment(stab[i]))) { covered = true; break; }
        if (!covered) return false;
      }
      found.clear();
      for (int i : pick) found.push_back(stab[i]);
      return true;
    });
    if (ok) return found;
  }
  return std::nullopt;
}

inline std::optional<int> min_cover_size(const Instance& inst,
                                         const std::vector<int>& targets) {
  auto c = min_cover(inst, targets);
  if (!c) return std::nullopt;
  return static_cast<int>(c->size());
}

inline std::optional<int> min_cover_size(const Instance& inst) {
  return min_cover_size(inst, inst.target_ids());
}

// Is there a stabber subset of size at most k hitting every target exactly
// once?
inline bool exists_exactly_one(const Instance& inst, int k) {
  const std::vector<int> stab = inst.stabber_ids();
  const std::vector<int> targets = inst.target_ids();
  const int n = static_cast<int>(stab.size());
  for (int r = 0; r <= std::min(k, n); ++r) {
    std::vector<int> cur;
    const bool ok = detail::combos(n, r, 0, cur, [&](const std::vector<int>& pick) {
      for (int t : targets) {
        int cnt = 0;
        for (int i : pick)
          if (hits(inst.segment(t), inst.segment(stab[i]))) ++cnt;
        if (cnt != 1) return false;
      }
      return true;
    });
    if (ok) return true;
  }
  return false;
}

// Shorthand builders for hand-made test instances.
inline Segment h(int id, long x_lo, long x_hi, long y, bool in_s, bool in_d) {
  return Segment::horizontal(id, Rat(x_lo), Rat(x_hi), Rat(y), in_s, in_d);
}

inline Segment v(int id, long x, long y_lo, long y_hi, bool in_s, bool in_d) {
  return Segment::vertical(id, Rat(x), Rat(y_lo), Rat(y_hi), in_s, in_d);
}

inline Instance make(segstab::Variant variant, std::vector<Segment> segs,
                     long lv_x = 0) {
  Instance inst;
  inst.variant = variant;
  inst.lv_x = Rat(lv_x);
  inst.segments = std::move(segs);
  return inst;
}

}  // namespace oracle
