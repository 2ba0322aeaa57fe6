#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "segstab/geometry.hpp"
#include "segstab/rational.hpp"

namespace segstab {

class parse_error : public std::runtime_error {
 public:
  parse_error(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline Rat parse_rat_or_throw(const std::string& tok, int line) {
  auto r = rat_from_string(tok);
  if (!r) throw parse_error(line, "malformed rational '" + tok + "'");
  return *r;
}

inline int parse_int_or_throw(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(line, "malformed integer '" + tok + "'");
  }
}

}  // namespace detail

// Instance text format, one record per line:
//   STAB 1
//   LV <x>
//   VARIANT <tag>            (optional; defaults to HV_HV)
//   H <id> <S|D|SD> <x_lo> <x_hi> <y>
//   V <id> <S|D|SD> <x> <y_lo> <y_hi>
// Rationals are written p/q (or a plain integer). Blank lines and lines
// starting with '#' are ignored. Segment ids must be dense; the canonical
// rendering lists segments in id order.
inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_magic = false, saw_lv = false, saw_variant = false;
  Instance inst;
  std::vector<std::pair<int, Segment>> rows;  // (line, segment)

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& kind = tok[0];
    if (kind == "STAB") {
      if (saw_magic) throw parse_error(lineno, "duplicate STAB header");
      if (tok.size() != 2 || tok[1] != "1")
        throw parse_error(lineno, "expected 'STAB 1'");
      saw_magic = true;
    } else if (kind == "LV") {
      if (!saw_magic) throw parse_error(lineno, "LV before STAB header");
      if (saw_lv) throw parse_error(lineno, "duplicate LV line");
      if (tok.size() != 2) throw parse_error(lineno, "expected 'LV <x>'");
      inst.lv_x = detail::parse_rat_or_throw(tok[1], lineno);
      saw_lv = true;
    } else if (kind == "VARIANT") {
      if (saw_variant) throw parse_error(lineno, "duplicate VARIANT line");
      if (tok.size() != 2)
        throw parse_error(lineno, "expected 'VARIANT <tag>'");
      auto v = variant_from_tag(tok[1]);
      if (!v) throw parse_error(lineno, "unknown variant tag '" + tok[1] + "'");
      inst.variant = *v;
      saw_variant = true;
    } else if (kind == "H" || kind == "V") {
      if (!saw_magic || !saw_lv)
        throw parse_error(lineno, "segment line before STAB/LV header");
      if (tok.size() != 6)
        throw parse_error(lineno, "expected 6 fields on a segment line");
      const int id = detail::parse_int_or_throw(tok[1], lineno);
      bool in_s, in_d;
      if (tok[2] == "S") {
        in_s = true; in_d = false;
      } else if (tok[2] == "D") {
        in_s = false; in_d = true;
      } else if (tok[2] == "SD") {
        in_s = true; in_d = true;
      } else {
        throw parse_error(lineno, "roles must be S, D, or SD");
      }
      const Rat a = detail::parse_rat_or_throw(tok[3], lineno);
      const Rat b = detail::parse_rat_or_throw(tok[4], lineno);
      const Rat c = detail::parse_rat_or_throw(tok[5], lineno);
      Segment seg = (kind == "H")
                        ? Segment::horizontal(id, a, b, c, in_s, in_d)
                        : Segment::vertical(id, a, b, c, in_s, in_d);
      rows.emplace_back(lineno, seg);
    } else {
      throw parse_error(lineno, "unknown record '" + kind + "'");
    }
  }
  if (!saw_magic) throw parse_error(lineno, "missing STAB header");
  if (!saw_lv) throw parse_error(lineno, "missing LV line");

  inst.segments.resize(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [ln, seg] : rows) {
    if (seg.id < 0 || seg.id >= static_cast<int>(rows.size()))
      throw parse_error(ln, "segment id " + std::to_string(seg.id) +
                                " outside dense range [0, " +
                                std::to_string(rows.size()) + ")");
    if (seen[seg.id])
      throw parse_error(ln, "duplicate segment id " + std::to_string(seg.id));
    seen[seg.id] = true;
    inst.segments[seg.id] = seg;
  }

  auto violations = validate(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : violations)
      msg += " [id " + std::to_string(v.id) + "] " + v.message + ";";
    throw parse_error(lineno, msg);
  }
  return inst;
}

inline std::string render_instance(const Instance& inst) {
  std::ostringstream out;
  out << "STAB 1\n";
  out << "LV " << rat_to_string(inst.lv_x) << "\n";
  out << "VARIANT " << variant_tag(inst.variant) << "\n";
  for (const auto& s : inst.segments) {
    const char* roles = s.in_s ? (s.in_d ? "SD" : "S") : "D";
    if (s.is_horizontal())
      out << "H " << s.id << " " << roles << " " << rat_to_string(s.x_lo())
          << " " << rat_to_string(s.x_hi()) << " " << rat_to_string(s.y())
          << "\n";
    else
      out << "V " << s.id << " " << roles << " " << rat_to_string(s.x()) << " "
          << rat_to_string(s.y_lo()) << " " << rat_to_string(s.y_hi()) << "\n";
  }
  return out.str();
}

// Solution text format: `CHOSEN <id>` lines (ascending) followed by
// `WITNESS <target_id> <chosen_id>` lines (ascending by target).
inline std::string render_solution(const Solution& sol) {
  std::ostringstream out;
  for (int c : sol.chosen) out << "CHOSEN " << c << "\n";
  for (const auto& [t, c] : sol.witness)
    out << "WITNESS " << t << " " << c << "\n";
  return out.str();
}

inline Solution parse_solution(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Solution sol;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "CHOSEN" && tok.size() == 2) {
      sol.chosen.push_back(detail::parse_int_or_throw(tok[1], lineno));
    } else if (tok[0] == "WITNESS" && tok.size() == 3) {
      sol.witness[detail::parse_int_or_throw(tok[1], lineno)] =
          detail::parse_int_or_throw(tok[2], lineno);
    } else {
      throw parse_error(lineno, "expected CHOSEN or WITNESS record");
    }
  }
  return sol;
}

// splitmix64; fixed algorithm so that identical seeds give identical
// instances on every platform (the standard library distributions make no
// such promise).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform-ish draw in [0, n); modulo bias is irrelevant here.
  std::uint64_t bounded(std::uint64_t n) { return n ? next() % n : 0; }

  // Inclusive integer range draw.
  long range(long lo, long hi) {
    return lo + static_cast<long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int n_h = 0;
  int n_v = 0;
  long coord_lo = -5;     // y coordinates and extent draws use this range
  long coord_hi = 5;
  Rat lv_x = 0;
  Variant variant = Variant::hv_hv;
  // Fraction of verticals placed left of the common line, as left_num/left_den.
  int left_num = 1;
  int left_den = 2;
};

// Deterministic random instance generator. Horizontal x-ranges are drawn as
// [lv_x - a, lv_x + b] with a,b >= 0, so every horizontal crosses the common
// line by construction. Verticals are never placed exactly on the line.
// Roles are maximal for the variant: every segment takes every role its
// orientation admits.
inline Instance generate(const GeneratorConfig& cfg) {
  if (cfg.n_h < 0 || cfg.n_v < 0)
    throw std::invalid_argument("generate: negative segment count");
  if (cfg.coord_lo > cfg.coord_hi)
    throw std::invalid_argument("generate: empty coordinate range");
  if (cfg.left_num < 0 || cfg.left_den <= 0 || cfg.left_num > cfg.left_den)
    throw std::invalid_argument("generate: left fraction not in [0, 1]");

  SplitMix64 rng(cfg.seed);
  const long reach = cfg.coord_hi - cfg.coord_lo;  // >= 0
  Instance inst;
  inst.lv_x = cfg.lv_x;
  inst.variant = cfg.variant;
  const bool h_in_s =
      class_admits(stabber_class(cfg.variant), Orientation::horizontal);
  const bool h_in_d =
      class_admits(target_class(cfg.variant), Orientation::horizontal);
  const bool v_in_s =
      class_admits(stabber_class(cfg.variant), Orientation::vertical);
  const bool v_in_d =
      class_admits(target_class(cfg.variant), Orientation::vertical);

  int id = 0;
  for (int i = 0; i < cfg.n_h; ++i, ++id) {
    const Rat y = rng.range(cfg.coord_lo, cfg.coord_hi);
    const Rat a = rng.range(0, reach);
    const Rat b = rng.range(0, reach);
    inst.segments.push_back(
        Segment::horizontal(id, cfg.lv_x - a, cfg.lv_x + b, y, h_in_s, h_in_d));
  }
  for (int i = 0; i < cfg.n_v; ++i, ++id) {
    const bool left =
        rng.bounded(static_cast<std::uint64_t>(cfg.left_den)) <
        static_cast<std::uint64_t>(cfg.left_num);
    const Rat dist = 1 + rng.range(0, reach);
    const Rat x = left ? Rat(cfg.lv_x - dist) : Rat(cfg.lv_x + dist);
    const Rat y_lo = rng.range(cfg.coord_lo, cfg.coord_hi);
    const Rat y_hi = y_lo + rng.range(0, reach);
    inst.segments.push_back(
        Segment::vertical(id, x, y_lo, y_hi, v_in_s, v_in_d));
  }
  return inst;
}

}  // namespace segstab
