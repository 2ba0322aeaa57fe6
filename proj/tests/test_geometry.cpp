#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "segstab/geometry.hpp"
#include "segstab/io.hpp"

using namespace segstab;

TEST_CASE("stabs: crossing, touching, and missing pairs") {
  const Segment h = Segment::horizontal(0, Rat(-2), Rat(3), Rat(1), true, false);

  CHECK(stabs(h, Segment::vertical(1, Rat(1), Rat(0), Rat(2), true, false)));
  CHECK_FALSE(stabs(h, Segment::vertical(1, Rat(1), Rat(2), Rat(5), true, false)));
  // Endpoint contact counts: segments are closed sets.
  CHECK(stabs(h, Segment::vertical(1, Rat(3), Rat(1), Rat(4), true, false)));
  CHECK(stabs(h, Segment::vertical(1, Rat(-2), Rat(-1), Rat(1), true, false)));
  // Vertical strictly outside the x-range.
  CHECK_FALSE(stabs(h, Segment::vertical(1, Rat(4), Rat(0), Rat(2), true, false)));
}

TEST_CASE("stabs: collinear and degenerate segments") {
  const auto h1 = Segment::horizontal(0, Rat(0), Rat(2), Rat(1), true, false);
  const auto h2 = Segment::horizontal(1, Rat(2), Rat(5), Rat(1), true, false);
  const auto h3 = Segment::horizontal(2, Rat(3), Rat(5), Rat(1), true, false);
  const auto h4 = Segment::horizontal(3, Rat(0), Rat(5), Rat(2), true, false);
  CHECK(stabs(h1, h2));        // share the point (2, 1)
  CHECK_FALSE(stabs(h1, h3));  // disjoint x-ranges
  CHECK_FALSE(stabs(h1, h4));  // parallel, different y

  const auto v1 = Segment::vertical(4, Rat(0), Rat(0), Rat(1), true, false);
  const auto v2 = Segment::vertical(5, Rat(0), Rat(1), Rat(2), true, false);
  CHECK(stabs(v1, v2));

  // A point segment on a vertical.
  const auto pt = Segment::horizontal(6, Rat(1), Rat(1), Rat(1), true, false);
  CHECK(stabs(pt, Segment::vertical(7, Rat(1), Rat(0), Rat(2), true, false)));
}

TEST_CASE("stabs agrees with the bounding-box reference on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n_h = 6;
    cfg.n_v = 6;
    const Instance inst = generate(cfg);
    for (const auto& a : inst.segments)
      for (const auto& b : inst.segments) {
        CHECK(stabs(a, b) == oracle::hits(a, b));
        CHECK(stabs(a, b) == stabs(b, a));
      }
  }
}

TEST_CASE("validate flags structural problems") {
  SECTION("clean instance") {
    const auto inst = oracle::make(
        Variant::hv_hv,
        {oracle::h(0, -1, 1, 0, true, true), oracle::v(1, 1, -1, 1, true, true)});
    CHECK(validate(inst).empty());
  }
  SECTION("horizontal missing the common line") {
    const auto inst =
        oracle::make(Variant::hv_hv, {oracle::h(0, 1, 3, 0, true, true)});
    REQUIRE(validate(inst).size() == 1);
    CHECK(validate(inst)[0].id == 0);
  }
  SECTION("empty extent") {
    auto inst = oracle::make(Variant::hv_hv, {oracle::h(0, -1, 1, 0, true, true)});
    inst.segments[0].lo = Rat(2);
    CHECK_FALSE(validate(inst).empty());
  }
  SECTION("segment with no role") {
    const auto inst =
        oracle::make(Variant::hv_hv, {oracle::h(0, -1, 1, 0, false, false)});
    CHECK_FALSE(validate(inst).empty());
  }
  SECTION("role not admitted by the variant") {
    // h_v stabs verticals with horizontals; a vertical stabber is illegal.
    const auto inst = oracle::make(
        Variant::h_v,
        {oracle::h(0, -1, 1, 0, true, false), oracle::v(1, 1, -1, 1, true, true)});
    REQUIRE(validate(inst).size() == 1);
    CHECK(validate(inst)[0].id == 1);
  }
  SECTION("ids out of order") {
    auto inst = oracle::make(Variant::hv_hv, {oracle::h(0, -1, 1, 0, true, true),
                                              oracle::h(1, -1, 1, 1, true, true)});
    std::swap(inst.segments[0], inst.segments[1]);
    CHECK_FALSE(validate(inst).empty());
  }
}

TEST_CASE("y_clusters groups horizontals by row, ascending") {
  const auto inst = oracle::make(
      Variant::hv_hv,
      {oracle::h(0, -1, 1, 1, true, true), oracle::h(1, -2, 2, -3, true, true),
       oracle::h(2, 0, 4, 1, true, true), oracle::v(3, 2, 0, 5, true, true)});
  const auto clusters = y_clusters(inst);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0] == std::vector<int>{1});
  CHECK(clusters[1] == std::vector<int>{0, 2});
}

namespace {

Instance verify_fixture() {
  return oracle::make(Variant::hv_hv, {oracle::h(0, -1, 1, 0, true, true),
                                       oracle::v(1, 0, -2, 2, true, true)});
}

}  // namespace

TEST_CASE("verify_solution accepts a correct solution") {
  const Instance inst = verify_fixture();
  Solution sol;
  sol.chosen = {1};
  sol.witness = {{0, 1}, {1, 1}};
  CHECK(verify_solution(inst, sol).empty());
}

TEST_CASE("verify_solution rejects broken solutions") {
  const Instance inst = verify_fixture();

  SECTION("unsorted chosen list") {
    Solution sol;
    sol.chosen = {1, 0};
    sol.witness = {{0, 1}, {1, 1}};
    CHECK_FALSE(verify_solution(inst, sol).empty());
  }
  SECTION("chosen id without stabber role") {
    auto bad = inst;
    bad.segments[1].in_s = false;
    Solution sol;
    sol.chosen = {1};
    sol.witness = {{0, 1}};
    CHECK_FALSE(verify_solution(bad, sol, {0}).empty());
  }
  SECTION("uncovered target") {
    auto far_inst = inst;
    far_inst.segments.push_back(oracle::h(2, -1, 0, 9, true, true));
    Solution sol;
    sol.chosen = {0};
    sol.witness = {{2, 0}};
    // id 2 sits at y = 9, which the chosen horizontal at y = 0 cannot reach
    CHECK_FALSE(verify_solution(far_inst, sol, {2}).empty());
  }
  SECTION("witness missing") {
    Solution sol;
    sol.chosen = {1};
    sol.witness = {{1, 1}};
    CHECK_FALSE(verify_solution(inst, sol).empty());
  }
  SECTION("witness points at unchosen segment") {
    Solution sol;
    sol.chosen = {1};
    sol.witness = {{0, 0}, {1, 1}};
    CHECK_FALSE(verify_solution(inst, sol).empty());
  }
  SECTION("witness entry for a non-target") {
    auto inst2 = verify_fixture();
    inst2.segments[1].in_d = false;
    Solution sol;
    sol.chosen = {1};
    sol.witness = {{0, 1}, {1, 1}};
    CHECK_FALSE(verify_solution(inst2, sol).empty());
  }
}

TEST_CASE("verify_solution enforces exactly-once for V_H_X1") {
  // Two vertical stabbers both crossing the target row.
  const auto inst = oracle::make(
      Variant::v_h_exactly_once,
      {oracle::h(0, -2, 2, 0, false, true), oracle::v(1, -1, -1, 1, true, false),
       oracle::v(2, 1, -1, 1, true, false)});

  Solution once;
  once.chosen = {1};
  once.witness = {{0, 1}};
  CHECK(verify_solution(inst, once).empty());

  Solution twice;
  twice.chosen = {1, 2};
  twice.witness = {{0, 1}};
  CHECK_FALSE(verify_solution(inst, twice).empty());

  // The same double-stab is fine under plain v_h.
  auto plain = inst;
  plain.variant = Variant::v_h;
  CHECK(verify_solution(plain, twice).empty());
}

TEST_CASE("rebuild_witness picks the smallest stabbing chosen id") {
  const auto inst = oracle::make(
      Variant::v_h,
      {oracle::h(0, -2, 2, 0, false, true), oracle::v(1, -1, -1, 1, true, false),
       oracle::v(2, 1, -1, 1, true, false)});
  Solution sol;
  sol.chosen = {1, 2};
  rebuild_witness(inst, sol, {0});
  REQUIRE(sol.witness.count(0) == 1);
  CHECK(sol.witness.at(0) == 1);
}
