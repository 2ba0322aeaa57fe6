#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "segstab/exact.hpp"
#include "segstab/geometry.hpp"
#include "segstab/io.hpp"
#include "segstab/rational.hpp"

namespace segstab {

// Planar monotone 3-cnf with its rectilinear embedding: variables sit on
// the spine line at y = variable index; each clause is a vertical leg at
// x = -offset (positive clauses) or x = +offset (negative clauses). Offsets
// come with the input; whether legs avoid foreign variable rows is checked
// at reduction time, not here.
struct MonotoneClause {
  bool positive;
  int offset;  // distance of the leg from the spine, >= 1
  std::array<int, 3> vars;
};

struct MonotoneCnf {
  int num_vars = 0;
  std::vector<MonotoneClause> clauses;
};

// Positive cycle 1-in-3 cnf: clause j sits on the spine at level j
// (top to bottom); variable v gets a vertical spine at x = var_offset[v].
struct CycleClause {
  std::array<int, 3> vars;
};

struct CycleCnf {
  int num_vars = 0;
  std::vector<int> var_offset;  // distinct, nonzero
  std::vector<CycleClause> clauses;
};

namespace detail {

inline void check_triple(const std::array<int, 3>& vars, int n) {
  for (int v : vars)
    if (v < 0 || v >= n)
      throw std::invalid_argument("clause variable out of range");
  if (vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2])
    throw std::invalid_argument("clause variables must be distinct");
}

inline void validate_monotone(const MonotoneCnf& cnf) {
  std::set<std::pair<bool, int>> seen;
  for (const auto& c : cnf.clauses) {
    check_triple(c.vars, cnf.num_vars);
    if (c.offset < 1)
      throw std::invalid_argument("clause leg offset must be >= 1");
    if (!seen.insert({c.positive, c.offset}).second)
      throw std::invalid_argument("duplicate leg offset on one side");
  }
}

inline void validate_cycle(const CycleCnf& cnf) {
  if (static_cast<int>(cnf.var_offset.size()) != cnf.num_vars)
    throw std::invalid_argument("cycle cnf: one offset per variable required");
  std::set<int> seen;
  for (int off : cnf.var_offset) {
    if (off == 0) throw std::invalid_argument("variable offset must be nonzero");
    if (!seen.insert(off).second)
      throw std::invalid_argument("variable offsets must be distinct");
  }
  for (const auto& c : cnf.clauses) check_triple(c.vars, cnf.num_vars);
}

}  // namespace detail

// Text form. First line names the kind, then VAR, then VOFF (cycle only,
// one per variable), then CLAUSE lines. Monotone clause signs are +/-;
// cycle clauses are all positive and carry offset 0.
inline std::string render_cnf(const MonotoneCnf& cnf) {
  std::ostringstream out;
  out << "CNF MONOTONE\n" << "VAR " << cnf.num_vars << "\n";
  for (const auto& c : cnf.clauses)
    out << "CLAUSE " << (c.positive ? '+' : '-') << ' ' << c.offset << ' '
        << c.vars[0] << ' ' << c.vars[1] << ' ' << c.vars[2] << "\n";
  return out.str();
}

inline std::string render_cnf(const CycleCnf& cnf) {
  std::ostringstream out;
  out << "CNF CYCLE\n" << "VAR " << cnf.num_vars << "\n";
  for (int v = 0; v < cnf.num_vars; ++v)
    out << "VOFF " << v << ' ' << cnf.var_offset[v] << "\n";
  for (const auto& c : cnf.clauses)
    out << "CLAUSE + 0 " << c.vars[0] << ' ' << c.vars[1] << ' ' << c.vars[2]
        << "\n";
  return out.str();
}

struct ParsedCnf {
  bool is_cycle = false;
  MonotoneCnf monotone;
  CycleCnf cycle;
};

inline ParsedCnf parse_cnf(const std::string& text) {
  ParsedCnf out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool kind_seen = false, var_seen = false;
  const auto fail = [&](const std::string& msg) -> void {
    throw parse_error(lineno, msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "CNF") {
      std::string kind;
      if (kind_seen || !(ls >> kind)) fail("malformed CNF line");
      if (kind == "MONOTONE") out.is_cycle = false;
      else if (kind == "CYCLE") out.is_cycle = true;
      else fail("unknown cnf kind: " + kind);
      kind_seen = true;
    } else if (tok == "VAR") {
      int n;
      if (!kind_seen || var_seen || !(ls >> n) || n < 0) fail("malformed VAR");
      (out.is_cycle ? out.cycle.num_vars : out.monotone.num_vars) = n;
      if (out.is_cycle) out.cycle.var_offset.assign(n, 0);
      var_seen = true;
    } else if (tok == "VOFF") {
      int v, off;
      if (!var_seen || !out.is_cycle || !(ls >> v >> off)) fail("malformed VOFF");
      if (v < 0 || v >= out.cycle.num_vars) fail("VOFF variable out of range");
      out.cycle.var_offset[v] = off;
    } else if (tok == "CLAUSE") {
      char sign;
      int off, a, b, c;
      if (!var_seen || !(ls >> sign >> off >> a >> b >> c))
        fail("malformed CLAUSE");
      try {
        if (out.is_cycle) {
          if (sign != '+' || off != 0)
            fail("cycle clauses are positive, offset 0");
          out.cycle.clauses.push_back({{a, b, c}});
          detail::check_triple(out.cycle.clauses.back().vars,
                               out.cycle.num_vars);
        } else {
          if (sign != '+' && sign != '-') fail("clause sign must be + or -");
          out.monotone.clauses.push_back({sign == '+', off, {a, b, c}});
          detail::check_triple(out.monotone.clauses.back().vars,
                               out.monotone.num_vars);
        }
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    } else {
      fail("unknown record: " + tok);
    }
  }
  if (!kind_seen) throw parse_error(lineno, "missing CNF kind line");
  if (!var_seen) throw parse_error(lineno, "missing VAR line");
  try {
    if (out.is_cycle)
      detail::validate_cycle(out.cycle);
    else
      detail::validate_monotone(out.monotone);
  } catch (const std::invalid_argument& e) {
    throw parse_error(lineno, e.what());
  }
  return out;
}

namespace detail {

inline Rat monotone_epsilon(const MonotoneCnf& cnf) {
  int max_off = 0;
  for (const auto& c : cnf.clauses) max_off = std::max(max_off, c.offset);
  return Rat(1, 2 * max_off + 2);
}

// Leg geometry shared by both monotone reductions: the clause's vertical
// segment at x = +-offset spanning its three variable rows.
inline Segment clause_leg(const MonotoneClause& c, int id, bool in_s,
                          bool in_d) {
  const auto [lo, hi] =
      std::minmax({c.vars[0], c.vars[1], c.vars[2]});
  const Rat x = c.positive ? Rat(-c.offset) : Rat(c.offset);
  return Segment::vertical(id, x, Rat(lo), Rat(hi), in_s, in_d);
}

// Hard requirement of the embedding: each leg meets exactly its three
// member rows among the horizontals.
inline void audit_legs(const Instance& inst, int first_leg,
                       const std::vector<MonotoneClause>& clauses,
                       const std::vector<std::vector<int>>& member_rows) {
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    const Segment& leg = inst.segment(first_leg + static_cast<int>(j));
    std::vector<int> hit;
    for (const auto& s : inst.segments)
      if (s.is_horizontal() && stabs(s, leg)) hit.push_back(s.id);
    std::vector<int> want = member_rows[j];
    std::sort(want.begin(), want.end());
    if (hit != want)
      throw std::invalid_argument(
          "invalid embedding: clause leg " + std::to_string(j) +
          " crosses a foreign variable row");
  }
}

}  // namespace detail

// Variable v becomes rows v_l, v_r and s(v) at y = v; clause j becomes its
// leg. All segments are both stabbers and targets. Ids: 3v, 3v+1, 3v+2 for
// the rows, then 3n+j for the legs.
inline Instance reduce_monotone(const MonotoneCnf& cnf) {
  detail::validate_monotone(cnf);
  const Rat eps = detail::monotone_epsilon(cnf);
  const int n = cnf.num_vars;

  std::vector<int> left_reach(n, 0), right_reach(n, 0);
  for (const auto& c : cnf.clauses)
    for (int v : c.vars) {
      auto& reach = c.positive ? left_reach[v] : right_reach[v];
      reach = std::max(reach, c.offset);
    }

  Instance inst;
  inst.variant = Variant::hv_hv;
  inst.lv_x = 0;
  for (int v = 0; v < n; ++v) {
    const Rat y(v);
    const Rat l = left_reach[v] ? Rat(-left_reach[v]) : -eps;
    const Rat r = right_reach[v] ? Rat(right_reach[v]) : eps;
    inst.segments.push_back(Segment::horizontal(3 * v, l, 0, y, true, true));
    inst.segments.push_back(Segment::horizontal(3 * v + 1, 0, r, y, true, true));
    inst.segments.push_back(
        Segment::horizontal(3 * v + 2, -eps, eps, y, true, true));
  }
  std::vector<std::vector<int>> member_rows(cnf.clauses.size());
  for (std::size_t j = 0; j < cnf.clauses.size(); ++j) {
    const auto& c = cnf.clauses[j];
    inst.segments.push_back(
        detail::clause_leg(c, 3 * n + static_cast<int>(j), true, true));
    for (int v : c.vars)
      member_rows[j].push_back(c.positive ? 3 * v : 3 * v + 1);
  }
  if (auto bad = validate(inst); !bad.empty())
    throw std::logic_error("reduce_monotone built an invalid instance: " +
                           bad.front().message);
  detail::audit_legs(inst, 3 * n, cnf.clauses, member_rows);
  return inst;
}

// The (H,V) form: s(v) is replaced by a short vertical s'(v) just left of
// the spine, v_r is stretched slightly across the spine so s'(v) touches
// both of v's rows and nothing else. Rows are stabbers only, verticals
// targets only. Ids: 2v, 2v+1 rows, 2n+j legs, 2n+m+v for s'(v).
inline Instance reduce_monotone_vertical_gadget(const MonotoneCnf& cnf) {
  detail::validate_monotone(cnf);
  const Rat eps = detail::monotone_epsilon(cnf);
  const Rat nudge = eps / 2;  // how far v_r and s'(v) cross the spine
  const int n = cnf.num_vars;
  const int m = static_cast<int>(cnf.clauses.size());

  std::vector<int> left_reach(n, 0), right_reach(n, 0);
  for (const auto& c : cnf.clauses)
    for (int v : c.vars) {
      auto& reach = c.positive ? left_reach[v] : right_reach[v];
      reach = std::max(reach, c.offset);
    }

  Instance inst;
  inst.variant = Variant::h_v;
  inst.lv_x = 0;
  for (int v = 0; v < n; ++v) {
    const Rat y(v);
    const Rat l = left_reach[v] ? Rat(-left_reach[v]) : -eps;
    const Rat r = right_reach[v] ? Rat(right_reach[v]) : eps;
    inst.segments.push_back(Segment::horizontal(2 * v, l, 0, y, true, false));
    inst.segments.push_back(
        Segment::horizontal(2 * v + 1, -nudge, r, y, true, false));
  }
  std::vector<std::vector<int>> member_rows(m);
  for (int j = 0; j < m; ++j) {
    const auto& c = cnf.clauses[j];
    inst.segments.push_back(detail::clause_leg(c, 2 * n + j, false, true));
    for (int v : c.vars)
      member_rows[j].push_back(c.positive ? 2 * v : 2 * v + 1);
  }
  for (int v = 0; v < n; ++v)
    inst.segments.push_back(Segment::vertical(
        2 * n + m + v, -nudge, Rat(v) - Rat(1, 4), Rat(v) + Rat(1, 4), false,
        true));
  if (auto bad = validate(inst); !bad.empty())
    throw std::logic_error("vertical gadget built an invalid instance: " +
                           bad.front().message);
  detail::audit_legs(inst, 2 * n, cnf.clauses, member_rows);
  for (int v = 0; v < n; ++v) {
    const Segment& sv = inst.segment(2 * n + m + v);
    std::vector<int> hit;
    for (const auto& s : inst.segments)
      if (s.is_horizontal() && stabs(s, sv)) hit.push_back(s.id);
    if (hit != std::vector<int>{2 * v, 2 * v + 1})
      throw std::logic_error(
          "vertical gadget: s'(v) must touch exactly its two rows");
  }
  return inst;
}

// Clause j becomes a row at y = -(j+1) through the spine line; variable v
// becomes a vertical at its offset spanning the levels of its clauses.
// Verticals are the stabbers, rows the targets, and the variant demands
// each row be stabbed exactly once.
inline Instance reduce_cycle(const CycleCnf& cnf) {
  detail::validate_cycle(cnf);
  const int n = cnf.num_vars;
  const int m = static_cast<int>(cnf.clauses.size());

  std::vector<int> top(n, -1), bottom(n, -1);
  for (int j = 0; j < m; ++j)
    for (int v : cnf.clauses[j].vars) {
      if (top[v] == -1) top[v] = j;
      bottom[v] = j;
    }
  for (int v = 0; v < n; ++v)
    if (top[v] == -1)
      throw std::invalid_argument(
          "cycle cnf: variable " + std::to_string(v) + " appears in no clause");

  Instance inst;
  inst.variant = Variant::v_h_exactly_once;
  inst.lv_x = 0;
  const auto level = [](int j) { return Rat(-(j + 1)); };
  for (int v = 0; v < n; ++v)
    inst.segments.push_back(Segment::vertical(v, Rat(cnf.var_offset[v]),
                                              level(bottom[v]), level(top[v]),
                                              true, false));
  for (int j = 0; j < m; ++j) {
    Rat lo = 0, hi = 0;
    for (int v : cnf.clauses[j].vars) {
      lo = std::min(lo, Rat(cnf.var_offset[v]));
      hi = std::max(hi, Rat(cnf.var_offset[v]));
    }
    inst.segments.push_back(
        Segment::horizontal(n + j, lo, hi, level(j), false, true));
  }
  if (auto bad = validate(inst); !bad.empty())
    throw std::logic_error("reduce_cycle built an invalid instance: " +
                           bad.front().message);
  for (int j = 0; j < m; ++j) {
    std::vector<int> hit;
    for (int v = 0; v < n; ++v)
      if (stabs(inst.segment(n + j), inst.segment(v))) hit.push_back(v);
    std::vector<int> want(cnf.clauses[j].vars.begin(),
                          cnf.clauses[j].vars.end());
    std::sort(want.begin(), want.end());
    if (hit != want)
      throw std::invalid_argument(
          "invalid embedding: clause row " + std::to_string(j) +
          " does not meet exactly its three variables");
  }
  return inst;
}

// Brute-force sides of the two reduction equivalences, for small formulas.
inline bool brute_sat_monotone(const MonotoneCnf& cnf) {
  if (cnf.num_vars > 20)
    throw std::invalid_argument("brute_sat_monotone: too many variables");
  for (std::uint32_t mask = 0; mask < (1u << cnf.num_vars); ++mask) {
    bool ok = true;
    for (const auto& c : cnf.clauses) {
      bool sat = false;
      for (int v : c.vars) {
        const bool val = (mask >> v) & 1;
        if (c.positive ? val : !val) sat = true;
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

inline bool brute_one_in_three(const CycleCnf& cnf, int max_true) {
  if (cnf.num_vars > 20)
    throw std::invalid_argument("brute_one_in_three: too many variables");
  for (std::uint32_t mask = 0; mask < (1u << cnf.num_vars); ++mask) {
    if (static_cast<int>(__builtin_popcount(mask)) > max_true) continue;
    bool ok = true;
    for (const auto& c : cnf.clauses) {
      int on = 0;
      for (int v : c.vars) on += (mask >> v) & 1;
      if (on != 1) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Satisfiability must coincide with "the reduced instance has optimum
// exactly n" (it can never be below n: each s(v) needs its own stabber).
inline bool monotone_equivalence_holds(const MonotoneCnf& cnf) {
  const Instance inst = reduce_monotone(cnf);
  const ExactResult r = solve_exact(inst);
  if (r.status == SolveStatus::budget_exceeded)
    throw std::runtime_error(
        "monotone_equivalence_holds: oracle budget exceeded");
  const bool opt_is_n = r.status == SolveStatus::solved &&
                        r.solution->objective() == cnf.num_vars;
  return brute_sat_monotone(cnf) == opt_is_n;
}

// A 1-in-3 assignment with at most k true variables must coincide with an
// exactly-once cover of size at most k.
inline bool cycle_equivalence_holds(const CycleCnf& cnf, int k) {
  const Instance inst = reduce_cycle(cnf);
  return brute_one_in_three(cnf, k) == exists_exactly_one_cover(inst, k);
}

// Seeded generators used by the equivalence batteries. Formulas are redrawn
// until the embedding audit accepts, so every returned cnf reduces cleanly.
inline MonotoneCnf random_monotone_cnf(std::uint64_t seed, int n, int m) {
  if (n < 3) throw std::invalid_argument("need at least 3 variables");
  SplitMix64 rng{seed};
  for (int attempt = 0; attempt < 2000; ++attempt) {
    MonotoneCnf cnf;
    cnf.num_vars = n;
    int side_count[2] = {0, 0};
    for (int j = 0; j < m; ++j) {
      MonotoneClause c;
      c.positive = rng.bounded(2) == 0;
      c.offset = ++side_count[c.positive ? 0 : 1];
      int a = static_cast<int>(rng.bounded(n));
      int b, cc;
      do b = static_cast<int>(rng.bounded(n)); while (b == a);
      do cc = static_cast<int>(rng.bounded(n)); while (cc == a || cc == b);
      c.vars = {a, b, cc};
      cnf.clauses.push_back(c);
    }
    // Try offset permutations per side until the legs embed without
    // crossing a foreign row. A side's validity only depends on its own
    // offsets (left legs can only cross left rows), so each side is
    // settled against a sub-formula holding just its clauses.
    std::vector<int> pos, neg;
    for (int j = 0; j < m; ++j)
      (cnf.clauses[j].positive ? pos : neg).push_back(j);
    const auto try_side = [&](const std::vector<int>& side) {
      std::vector<int> perm(side.size());
      for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = 1 + static_cast<int>(i);
      do {
        MonotoneCnf sub;
        sub.num_vars = n;
        for (std::size_t i = 0; i < side.size(); ++i) {
          sub.clauses.push_back(cnf.clauses[side[i]]);
          sub.clauses.back().offset = perm[i];
        }
        bool ok = true;
        try {
          reduce_monotone(sub);
        } catch (const std::invalid_argument&) {
          ok = false;
        }
        if (ok) {
          for (std::size_t i = 0; i < side.size(); ++i)
            cnf.clauses[side[i]].offset = perm[i];
          return true;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return false;
    };
    if (try_side(pos) && try_side(neg)) return cnf;
  }
  throw std::runtime_error("random_monotone_cnf: no embeddable formula found");
}

inline CycleCnf random_cycle_cnf(std::uint64_t seed, int n, int m) {
  if (n < 3) throw std::invalid_argument("need at least 3 variables");
  SplitMix64 rng{seed};
  for (int attempt = 0; attempt < 4000; ++attempt) {
    CycleCnf cnf;
    cnf.num_vars = n;
    for (int j = 0; j < m; ++j) {
      int a = static_cast<int>(rng.bounded(n));
      int b, c;
      do b = static_cast<int>(rng.bounded(n)); while (b == a);
      do c = static_cast<int>(rng.bounded(n)); while (c == a || c == b);
      cnf.clauses.push_back({{a, b, c}});
    }
    bool covered = true;
    for (int v = 0; v < n && covered; ++v) {
      bool seen = false;
      for (const auto& c : cnf.clauses)
        for (int u : c.vars) seen = seen || u == v;
      covered = seen;
    }
    if (!covered) continue;
    // Offsets: a shuffled signed arrangement; reject until the comb audit
    // accepts.
    std::vector<int> offs;
    for (int v = 0; v < n; ++v)
      offs.push_back((v % 2 == 0 ? 1 : -1) * (v / 2 + 1));
    for (std::size_t i = offs.size(); i > 1; --i)
      std::swap(offs[i - 1], offs[rng.bounded(i)]);
    cnf.var_offset = offs;
    try {
      reduce_cycle(cnf);
      return cnf;
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw std::runtime_error("random_cycle_cnf: no embeddable formula found");
}

}  // namespace segstab
