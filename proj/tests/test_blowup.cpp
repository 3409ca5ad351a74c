#include <doctest.h>

#include <cmath>

#include "foliate/blowup.hpp"
#include "foliate/families.hpp"
#include "foliate/scenario.hpp"

using namespace foliate;

namespace {

const BaseDomain kBase = BaseDomain::rectangle(17, 17);

InsertedPacket packets(std::size_t count, const PacketSpec& spec = {}) {
  InsertedPacket p;
  for (std::size_t i = 0; i < count; ++i) p.leaves.push_back(packet_family(spec, kBase, {}));
  return p;
}

}  // namespace

TEST_CASE("empty schedule is the identity") {
  const auto h = horizontal_family(kBase, 17);
  const auto b = blowup_box(h, InsertionSchedule(), packets(0));
  CHECK(b.family.values() == h.values());
  for (std::size_t node = 0; node < kBase.nodes(); node += 13)
    for (double z : {0.0, 0.3, 1.0}) CHECK(b.collapse.pi(node, z) == z);
  CHECK(verify_blowup(h, b).all_pass());
}

TEST_CASE("single blown leaf with a horizontal packet") {
  const auto h = horizontal_family(kBase, 17);
  const auto b = blowup_box(h, InsertionSchedule({{0.5, 1.0}}), packets(1));
  REQUIRE(b.collapse.gap_count() == 1);
  const auto& gap = b.collapse.fibers[0].gaps()[0];
  CHECK(gap.lo == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(gap.hi == doctest::Approx(0.75).epsilon(1e-15));
  // The fiber map is the kernel collapse map on every fiber.
  const CollapseMap p(InsertionSchedule({{0.5, 1.0}}));
  for (std::size_t node = 0; node < kBase.nodes(); node += 7)
    for (int q = 0; q <= 64; ++q) CHECK(std::abs(b.collapse.pi(node, q / 64.0) - p(q / 64.0)) <= 1e-12);
  // Every packet leaf is horizontal inside the gap and collapses to 1/2.
  for (std::size_t k = 0; k < b.origin.size(); ++k) {
    const double z = b.family.value(k, 0);
    if (b.origin[k].packet == 0) {
      CHECK(z >= 0.25);
      CHECK(z <= 0.75);
      CHECK(b.collapse.pi(0, z) == 0.5);
    }
    for (std::size_t node = 0; node < kBase.nodes(); ++node) CHECK(b.family.value(k, node) == z);
  }
  const auto report = verify_blowup(h, b);
  CHECK(report.all_pass());
  CHECK(report.max_leaf_defect < 1e-9);
}

TEST_CASE("sheared packet is scaled into the gap") {
  const auto h = horizontal_family(kBase, 17);
  const PacketSpec spec{"sheared", 0.5, 9};
  const auto b = blowup_box(h, InsertionSchedule({{0.5, 1.0}}), packets(1, spec));
  // Packet leaf slope is a s (1 - s) <= a/4 before the factor w/(1+w) = 1/2.
  const double exact = std::atan(0.5 * 0.5 / 4.0);
  const double d = c0_distance(h, b.family);
  CHECK(d <= std::atan(0.5 * 1.0 / 2.0));
  CHECK(d == doctest::Approx(exact).epsilon(1e-9));
  CHECK(verify_blowup(h, b).all_pass());
}

TEST_CASE("blowup_box rejects bad input") {
  CHECK_THROWS_AS(blowup_box(sheared_family(kBase, 9, 0.2), InsertionSchedule({{0.5, 0.1}}), packets(1)), Error);
  CHECK_THROWS_AS(blowup_box(horizontal_family(kBase, 9), InsertionSchedule({{0.5, 0.1}}), packets(2)), Error);
  CHECK_THROWS_AS(blowup_box(horizontal_family(kBase, 9), InsertionSchedule({{0.5, 0.1}}), packets(1), {0.5}), Error);
}

TEST_CASE("fixed leaves stay in place") {
  const auto h = horizontal_family(kBase, 17);
  const auto b = blowup_box(h, InsertionSchedule({{0.3, 0.2}, {0.7, 0.1}}), packets(2), {0.5});
  for (std::size_t node = 0; node < kBase.nodes(); node += 11) CHECK(b.collapse.pi(node, 0.5) == 0.5);
  CHECK(verify_blowup(h, b).all_pass());
}

TEST_CASE("shifted collapse intervals break leaf preservation") {
  const auto h = horizontal_family(kBase, 17);
  auto b = blowup_box(h, InsertionSchedule({{0.5, 0.5}}), packets(1));
  // A uniform shift still maps horizontal leaves to horizontal leaves, so
  // only the fibers over the right half move.
  for (std::size_t node = 0; node < kBase.nodes(); ++node)
    if (kBase.point(node).x > 0.5) b.collapse.fibers[node].shift_gaps(0.01);
  const auto report = verify_blowup(h, b);
  CHECK_FALSE(report.all_pass());
  CHECK_FALSE(report.property(6).pass);
  CHECK_FALSE(report.property(6).witness.empty());
  CHECK(report.property(6).defect > 1e-9);
}

TEST_CASE("collapse trace") {
  const auto h = horizontal_family(kBase, 17);
  const auto b = blowup_box(h, InsertionSchedule({{0.5, 0.5}}), packets(1));
  for (double z : {0.1, 0.4, 0.6}) {
    CHECK(b.collapse.pi_t(3, z, 0.0) == z);
    CHECK(b.collapse.pi_t(3, z, 1.0) == b.collapse.pi(3, z));
  }
  CHECK(b.collapse.inject(3, 0, 0.0) == b.collapse.fibers[3].gaps()[0].lo);
  CHECK(b.collapse.inject(3, 0, 1.0) == b.collapse.fibers[3].gaps()[0].hi);
  CHECK(b.collapse.pi(3, b.collapse.inject(3, 0, 0.37)) == 0.5);
}

TEST_CASE("scene blowup matches per-box blowups") {
  const auto scene = horizontal_t3(17, 33);
  const BlowupLocus locus{{{0.5, 0.1}}};
  const PacketSpec spec{"wave", 0.1, 9};
  const auto s = blowup_scene(scene, locus, spec, 0.1);
  CHECK(verify_blowup(scene, s).all_pass());
  CHECK(s.face_defect < 1e-6);
  for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
    const auto& box = scene.boxes[b];
    const auto sched = local_schedule(box, locus);
    InsertedPacket p;
    for (std::size_t i = 0; i < sched.size(); ++i) p.leaves.push_back(packet_family(spec, box.family->base(), box.rect));
    const auto alone = blowup_box(*box.family, sched, p);
    REQUIRE(alone.family.values().size() == s.boxes[b].family.values().size());
    double worst = 0.0;
    for (std::size_t i = 0; i < alone.family.values().size(); ++i)
      worst = std::max(worst, std::abs(alone.family.values()[i] - s.boxes[b].family.values()[i]));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("halving the weight brings the blowup closer") {
  const auto scene = horizontal_t3(17, 33);
  const PacketSpec spec{"wave", 0.1, 9};
  const auto a = blowup_scene(scene, {{{0.5, 0.1}}}, spec, 0.1);
  const auto b = blowup_scene(scene, {{{0.5, 0.05}}}, spec, 0.1);
  CHECK(b.max_c0 < a.max_c0);
  CHECK(a.max_c0 > 0.0);
}

TEST_CASE("scene blowup edge cases") {
  const auto scene = horizontal_t3(17, 17);
  const auto empty = blowup_scene(scene, {}, {}, 0.1);
  for (std::size_t b = 0; b < scene.boxes.size(); ++b)
    CHECK(empty.boxes[b].family.values() == scene.boxes[b].family->values());
  CHECK(empty.max_c0 == 0.0);

  auto split = enforce_condition5(split_t3(17, 17));
  CHECK_THROWS_AS(blowup_scene(split, {{{0.5, 0.1}}}, {}, 0.1), Error);  // 1/2 is a box boundary
  CHECK_NOTHROW(blowup_scene(split, {{{0.25, 0.1}}}, {}, 0.1));
  CHECK_THROWS_AS(blowup_scene(sheared_t3(0.1, 17, 17), {{{0.25, 0.1}}}, {}, 0.1), Error);
  CHECK_THROWS_AS(blowup_scene(scene, {{{0.25, 0.1}}}, {"wave", 0.5, 9}, 0.1), Error);
}

TEST_CASE("local schedules rescale by box height") {
  FlowBoxSpec box;
  box.t_lo = 0.5;
  box.t_hi = 1.0;
  const auto s = local_schedule(box, {{{0.75, 0.1}, {0.25, 0.1}}});
  REQUIRE(s.size() == 1);
  CHECK(s.entries()[0].point == doctest::Approx(0.5));
  CHECK(s.entries()[0].weight == doctest::Approx(0.2));
}
