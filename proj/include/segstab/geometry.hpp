#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "segstab/rational.hpp"

namespace segstab {

// The model: axis-parallel closed segments in the plane, each carrying a
// stabber role (eligible to be chosen) and/or a target role (must be hit),
// plus a common vertical line x = lv_x that every horizontal segment crosses.
// Degenerate (point) segments are permitted.

enum class Orientation { horizontal, vertical };

// Which orientation class may appear on the stabber side / target side.
enum class SegClass { horizontal_only, vertical_only, both };

// The supported problem variants. Tags match the instance file format.
enum class Variant {
  h_v,                // stab verticals with horizontals
  h_hv,               // stab everything with horizontals
  v_h,                // stab horizontals with verticals
  v_h_exactly_once,   // as v_h, but each target must be hit exactly once
  hv_h,               // stab horizontals with anything
  hv_v,               // stab verticals with anything
  hv_hv,              // stab everything with anything
};

inline const char* variant_tag(Variant v) {
  switch (v) {
    case Variant::h_v: return "H_V";
    case Variant::h_hv: return "H_HV";
    case Variant::v_h: return "V_H";
    case Variant::v_h_exactly_once: return "V_H_X1";
    case Variant::hv_h: return "HV_H";
    case Variant::hv_v: return "HV_V";
    case Variant::hv_hv: return "HV_HV";
  }
  throw std::logic_error("variant_tag: bad enum value");
}

inline std::optional<Variant> variant_from_tag(std::string_view tag) {
  if (tag == "H_V") return Variant::h_v;
  if (tag == "H_HV") return Variant::h_hv;
  if (tag == "V_H") return Variant::v_h;
  if (tag == "V_H_X1") return Variant::v_h_exactly_once;
  if (tag == "HV_H") return Variant::hv_h;
  if (tag == "HV_V") return Variant::hv_v;
  if (tag == "HV_HV") return Variant::hv_hv;
  return std::nullopt;
}

inline SegClass stabber_class(Variant v) {
  switch (v) {
    case Variant::h_v:
    case Variant::h_hv: return SegClass::horizontal_only;
    case Variant::v_h:
    case Variant::v_h_exactly_once: return SegClass::vertical_only;
    default: return SegClass::both;
  }
}

inline SegClass target_class(Variant v) {
  switch (v) {
    case Variant::h_v:
    case Variant::hv_v: return SegClass::vertical_only;
    case Variant::v_h:
    case Variant::v_h_exactly_once:
    case Variant::hv_h: return SegClass::horizontal_only;
    default: return SegClass::both;
  }
}

inline bool class_admits(SegClass c, Orientation o) {
  switch (c) {
    case SegClass::horizontal_only: return o == Orientation::horizontal;
    case SegClass::vertical_only: return o == Orientation::vertical;
    case SegClass::both: return true;
  }
  return false;
}

// A horizontal segment is [lo, hi] x {at}; a vertical one is {at} x [lo, hi].
struct Segment {
  int id = -1;
  Orientation orient = Orientation::horizontal;
  Rat lo, hi, at;
  bool in_s = false;  // may be chosen as a stabber
  bool in_d = false;  // must be stabbed

  static Segment horizontal(int id, const Rat& x_lo, const Rat& x_hi,
                            const Rat& y, bool in_s, bool in_d) {
    return Segment{id, Orientation::horizontal, x_lo, x_hi, y, in_s, in_d};
  }

  static Segment vertical(int id, const Rat& x, const Rat& y_lo,
                          const Rat& y_hi, bool in_s, bool in_d) {
    return Segment{id, Orientation::vertical, y_lo, y_hi, x, in_s, in_d};
  }

  bool is_horizontal() const { return orient == Orientation::horizontal; }
  bool is_vertical() const { return orient == Orientation::vertical; }

  const Rat& x_lo() const { require(Orientation::horizontal); return lo; }
  const Rat& x_hi() const { require(Orientation::horizontal); return hi; }
  const Rat& y() const { require(Orientation::horizontal); return at; }

  const Rat& x() const { require(Orientation::vertical); return at; }
  const Rat& y_lo() const { require(Orientation::vertical); return lo; }
  const Rat& y_hi() const { require(Orientation::vertical); return hi; }

  bool operator==(const Segment& o) const {
    return id == o.id && orient == o.orient && lo == o.lo && hi == o.hi &&
           at == o.at && in_s == o.in_s && in_d == o.in_d;
  }

 private:
  void require(Orientation o) const {
    if (orient != o)
      throw std::logic_error("segment accessor used on wrong orientation");
  }
};

// Closed-set intersection of two axis-parallel segments. Two horizontals
// intersect only when co-linear with overlapping x-ranges; a horizontal and
// a vertical intersect when each one's fixed coordinate lies in the other's
// range; endpoint contact counts.
inline bool stabs(const Segment& a, const Segment& b) {
  if (a.orient == b.orient) {
    if (a.at != b.at) return false;
    return a.lo <= b.hi && b.lo <= a.hi;
  }
  const Segment& h = a.is_horizontal() ? a : b;
  const Segment& v = a.is_horizontal() ? b : a;
  return h.lo <= v.at && v.at <= h.hi && v.lo <= h.at && h.at <= v.hi;
}

struct Instance {
  std::vector<Segment> segments;  // ids are dense 0..n-1 and index this vector
  Rat lv_x;
  Variant variant = Variant::hv_hv;

  const Segment& segment(int id) const { return segments.at(id); }
  int size() const { return static_cast<int>(segments.size()); }

  std::vector<int> stabber_ids() const {
    std::vector<int> out;
    for (const auto& s : segments)
      if (s.in_s) out.push_back(s.id);
    return out;
  }

  std::vector<int> target_ids() const {
    std::vector<int> out;
    for (const auto& s : segments)
      if (s.in_d) out.push_back(s.id);
    return out;
  }

  bool operator==(const Instance& o) const {
    return segments == o.segments && lv_x == o.lv_x && variant == o.variant;
  }
};

struct Violation {
  int id;  // offending segment id, or -1 for instance-level problems
  std::string message;
};

// Structural checks on an instance: well-formed ranges, at least one role per
// segment, roles consistent with the variant, every horizontal crossing the
// common vertical line, and ids dense in [0, n).
inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  const int n = inst.size();
  for (int i = 0; i < n; ++i) {
    const Segment& s = inst.segments[i];
    if (s.id != i) {
      out.push_back({i, "segment ids must be dense and in order; slot " +
                            std::to_string(i) + " holds id " +
                            std::to_string(s.id)});
      continue;
    }
    if (s.lo > s.hi)
      out.push_back({s.id, "empty extent: lo > hi"});
    if (!s.in_s && !s.in_d)
      out.push_back({s.id, "segment has neither stabber nor target role"});
    if (s.is_horizontal() && !(s.x_lo() <= inst.lv_x && inst.lv_x <= s.x_hi()))
      out.push_back({s.id, "horizontal segment does not cross the common "
                           "vertical line"});
    if (s.in_s && !class_admits(stabber_class(inst.variant), s.orient))
      out.push_back({s.id, "stabber role not allowed by variant"});
    if (s.in_d && !class_admits(target_class(inst.variant), s.orient))
      out.push_back({s.id, "target role not allowed by variant"});
  }
  return out;
}

// All horizontal segments grouped by their y coordinate. Groups are ordered
// by increasing y, ids ascending within a group. Horizontals sharing a y
// always stab each other because each one's x-range contains lv_x.
inline std::vector<std::vector<int>> y_clusters(const Instance& inst) {
  std::map<Rat, std::vector<int>> by_y;
  for (const auto& s : inst.segments)
    if (s.is_horizontal()) by_y[s.y()].push_back(s.id);
  std::vector<std::vector<int>> out;
  out.reserve(by_y.size());
  for (auto& [y, ids] : by_y) out.push_back(std::move(ids));
  return out;
}

struct Solution {
  std::vector<int> chosen;         // sorted ascending
  std::map<int, int> witness;      // target id -> chosen id that stabs it

  int objective() const { return static_cast<int>(chosen.size()); }
};

// Feasibility check used by every test and by the verify command. Solvers
// never certify their own output; this is the arbiter. Checks membership and
// roles of chosen ids, full coverage of the given targets, and witness
// consistency. For the exactly-once variant, also that no target is stabbed
// twice by the chosen set.
inline std::vector<Violation> verify_solution(const Instance& inst,
                                              const Solution& sol,
                                              const std::vector<int>& targets) {
  std::vector<Violation> out;
  for (std::size_t i = 1; i < sol.chosen.size(); ++i)
    if (sol.chosen[i - 1] >= sol.chosen[i]) {
      out.push_back({-1, "chosen ids not sorted strictly ascending"});
      break;
    }
  for (int c : sol.chosen) {
    if (c < 0 || c >= inst.size()) {
      out.push_back({c, "chosen id out of range"});
      return out;
    }
    if (!inst.segment(c).in_s)
      out.push_back({c, "chosen segment lacks the stabber role"});
  }
  for (int t : targets) {
    if (t < 0 || t >= inst.size()) {
      out.push_back({t, "target id out of range"});
      continue;
    }
    int hits = 0;
    for (int c : sol.chosen)
      if (stabs(inst.segment(t), inst.segment(c))) ++hits;
    if (hits == 0)
      out.push_back({t, "target not stabbed by any chosen segment"});
    if (inst.variant == Variant::v_h_exactly_once && hits > 1)
      out.push_back({t, "target stabbed more than once under the "
                        "exactly-once variant"});
    const auto w = sol.witness.find(t);
    if (w == sol.witness.end()) {
      out.push_back({t, "target missing from witness map"});
    } else {
      const int c = w->second;
      if (!std::binary_search(sol.chosen.begin(), sol.chosen.end(), c))
        out.push_back({t, "witness references an unchosen segment"});
      else if (!stabs(inst.segment(t), inst.segment(c)))
        out.push_back({t, "witness segment does not stab the target"});
    }
  }
  for (const auto& [t, c] : sol.witness)
    if (std::find(targets.begin(), targets.end(), t) == targets.end())
      out.push_back({t, "witness entry for a non-target id"});
  return out;
}

inline std::vector<Violation> verify_solution(const Instance& inst,
                                              const Solution& sol) {
  return verify_solution(inst, sol, inst.target_ids());
}

// Fills the witness map of `sol` deterministically: each target is mapped to
// the smallest chosen id that stabs it. Call only with a feasible chosen set.
inline void rebuild_witness(const Instance& inst, Solution& sol,
                            const std::vector<int>& targets) {
  sol.witness.clear();
  for (int t : targets)
    for (int c : sol.chosen)
      if (stabs(inst.segment(t), inst.segment(c))) {
        sol.witness[t] = c;
        break;
      }
}

}  // namespace segstab
