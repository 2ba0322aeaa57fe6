#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "segstab/geometry.hpp"
#include "segstab/rational.hpp"

namespace segstab {

// Fractional covering relaxation: minimize sum of y_j subject to
// sum_{j in row} y_j >= 1 for every row and 0 <= y_j <= 1.
struct CoveringLp {
  int num_vars = 0;
  std::vector<std::vector<int>> rows;  // sets of variable indices
  std::vector<int> var_labels;         // variable index -> segment id
};

struct FractionalSolution {
  std::vector<Rat> values;
  Rat objective;
};

// Result of building a covering LP from an instance: either the LP, or the
// target ids whose rows would be empty (no stabber hits them), which makes
// the instance infeasible.
struct LpBuild {
  std::optional<CoveringLp> lp;
  std::vector<int> uncoverable;

  bool ok() const { return lp.has_value(); }
};

namespace detail {

// Candidate filters for the four LP flavors.
struct AnyStabber {
  bool operator()(const Segment&) const { return true; }
};

struct SideVerticals {
  Rat lv_x;
  bool left;
  bool operator()(const Segment& s) const {
    if (!s.is_vertical()) return false;
    return left ? s.x() < lv_x : s.x() > lv_x;
  }
};

struct HorizontalsOnly {
  bool operator()(const Segment& s) const { return s.is_horizontal(); }
};

template <typename Filter>
LpBuild build_covering_lp(const Instance& inst, const std::vector<int>& targets,
                          Filter admit) {
  CoveringLp lp;
  std::vector<int> var_of(inst.size(), -1);
  for (const auto& s : inst.segments)
    if (s.in_s && admit(s)) {
      var_of[s.id] = lp.num_vars++;
      lp.var_labels.push_back(s.id);
    }
  LpBuild out;
  for (int t : targets) {
    std::vector<int> row;
    const Segment& target = inst.segment(t);
    for (int id : lp.var_labels)
      if (stabs(target, inst.segment(id))) row.push_back(var_of[id]);
    if (row.empty()) out.uncoverable.push_back(t);
    lp.rows.push_back(std::move(row));
  }
  if (out.uncoverable.empty()) out.lp = std::move(lp);
  return out;
}

}  // namespace detail

// LP1: every stabber is a variable; one row per target listing all its
// stabbers. Targets must be the instance's D-segments (or a subset).
inline LpBuild build_lp1(const Instance& inst, const std::vector<int>& targets) {
  return detail::build_covering_lp(inst, targets, detail::AnyStabber{});
}

inline LpBuild build_lp1(const Instance& inst) {
  return build_lp1(inst, inst.target_ids());
}

// LP2/LP3: variables are the stabber verticals strictly on one side of the
// common line; one row per given target.
inline LpBuild build_side_lp(const Instance& inst,
                             const std::vector<int>& targets, bool left) {
  return detail::build_covering_lp(inst, targets,
                                   detail::SideVerticals{inst.lv_x, left});
}

// LP4: variables are the stabber horizontals; one row per given target.
inline LpBuild build_horizontal_lp(const Instance& inst,
                                   const std::vector<int>& targets) {
  return detail::build_covering_lp(inst, targets, detail::HorizontalsOnly{});
}

// Debug rendering of a covering LP.
inline std::string lp_to_text(const CoveringLp& lp) {
  std::ostringstream out;
  out << "min";
  for (int j = 0; j < lp.num_vars; ++j)
    out << (j ? " + y" : " y") << j << "(seg " << lp.var_labels[j] << ")";
  out << "\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    out << "row " << i << ":";
    for (int j : lp.rows[i]) out << " y" << j;
    out << " >= 1\n";
  }
  out << "0 <= y <= 1\n";
  return out.str();
}

namespace detail {

// Dense-tableau primal simplex over exact rationals, specialized to the
// covering structure above. Standard form:
//   covering row r:  sum_{j in row} y_j - s_r = 1
//   bound row j:     y_j + t_j = 1
// The all-ones point is a basic feasible solution (basis: every y_j on its
// bound row, every s_r on its covering row), so no artificial phase is
// needed. Bland's rule (smallest eligible index enters; ties on the ratio
// test leave by smallest basis variable) guarantees termination.
class CoveringSimplex {
 public:
  explicit CoveringSimplex(const CoveringLp& lp)
      : n_(lp.num_vars),
        m_(static_cast<int>(lp.rows.size())),
        rows_(m_ + n_),
        cols_(n_ + m_ + n_),
        a_(rows_, std::vector<Rat>(cols_ + 1, Rat(0))),
        obj_(cols_ + 1, Rat(0)),
        basis_(rows_, -1) {
    // Layout: y_j -> j, s_r -> n_ + r, t_j -> n_ + m_ + j.
    for (int r = 0; r < m_; ++r) {
      for (int j : lp.rows[r]) a_[r][j] = 1;
      a_[r][n_ + r] = -1;
      a_[r][cols_] = 1;
    }
    for (int j = 0; j < n_; ++j) {
      a_[m_ + j][j] = 1;
      a_[m_ + j][n_ + m_ + j] = 1;
      a_[m_ + j][cols_] = 1;
    }
    for (int j = 0; j < n_; ++j) obj_[j] = 1;

    for (int j = 0; j < n_; ++j) pivot(m_ + j, j);
    for (int r = 0; r < m_; ++r) pivot(r, n_ + r);
  }

  FractionalSolution solve() {
    while (true) {
      int enter = -1;
      for (int c = 0; c < cols_; ++c)
        if (obj_[c] < 0) {
          enter = c;
          break;
        }
      if (enter == -1) break;

      int leave = -1;
      Rat best_ratio;
      for (int r = 0; r < rows_; ++r) {
        if (a_[r][enter] <= 0) continue;
        Rat ratio = a_[r][cols_] / a_[r][enter];
        if (leave == -1 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == -1)
        throw std::logic_error("covering LP cannot be unbounded");
      pivot(leave, enter);
    }

    FractionalSolution out;
    out.values.assign(n_, Rat(0));
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < n_) out.values[basis_[r]] = a_[r][cols_];
    out.objective = 0;
    for (const Rat& v : out.values) out.objective += v;
    return out;
  }

 private:
  void pivot(int r, int c) {
    const Rat p = a_[r][c];
    if (p == 0) throw std::logic_error("zero pivot");
    for (Rat& x : a_[r]) x /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      const Rat f = a_[i][c];
      for (int j = 0; j <= cols_; ++j) a_[i][j] -= f * a_[r][j];
    }
    if (obj_[c] != 0) {
      const Rat f = obj_[c];
      for (int j = 0; j <= cols_; ++j) obj_[j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  int n_, m_, rows_, cols_;
  std::vector<std::vector<Rat>> a_;
  std::vector<Rat> obj_;
  std::vector<int> basis_;
};

}  // namespace detail

// Exact optimum of a covering LP. Postconditions are checked, not assumed:
// the returned point is within the box, satisfies every row, and the
// objective equals the sum of values.
inline FractionalSolution solve_lp(const CoveringLp& lp) {
  for (const auto& row : lp.rows) {
    if (row.empty())
      throw std::invalid_argument("solve_lp: empty covering row");
    for (int j : row)
      if (j < 0 || j >= lp.num_vars)
        throw std::invalid_argument("solve_lp: variable index out of range");
  }

  FractionalSolution out;
  if (lp.rows.empty()) {
    out.values.assign(lp.num_vars, Rat(0));
    out.objective = 0;
    return out;
  }

  detail::CoveringSimplex simplex(lp);
  out = simplex.solve();

  for (const Rat& v : out.values)
    if (v < 0 || v > 1)
      throw std::logic_error("solve_lp: value escaped the unit box");
  for (const auto& row : lp.rows) {
    Rat sum = 0;
    for (int j : row) sum += out.values[j];
    if (sum < 1)
      throw std::logic_error("solve_lp: covering row violated at optimum");
  }
  Rat total = 0;
  for (const Rat& v : out.values) total += v;
  if (total != out.objective)
    throw std::logic_error("solve_lp: objective out of sync with values");
  return out;
}

}  // namespace segstab
