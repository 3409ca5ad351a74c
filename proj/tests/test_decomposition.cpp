#include <doctest.h>

#include <cmath>

#include "foliate/decomposition.hpp"
#include "foliate/scenario.hpp"

using namespace foliate;

namespace {

DecompositionComplex reorder(const DecompositionComplex& c, const std::vector<std::string>& ids) {
  DecompositionComplex out = c;
  out.boxes.clear();
  for (const auto& id : ids) out.boxes.push_back(c.boxes.at(*c.index_of(id)));
  return out;
}

}  // namespace

TEST_CASE("torus scenes") {
  const auto c = horizontal_t3(9, 9);
  CHECK(c.boxes.size() == 4);
  CHECK(validate(c).valid());
  CHECK(std::abs(c.volume() - 1.0) < 1e-15);

  const auto one = annulus_box(9, 9);
  REQUIRE(one.boxes.size() == 1);
  const auto r = validate(one);
  CHECK(r.valid());
  CHECK(r.annular_faces);

  TorusSceneOptions bad;
  bad.height_splits = {{0.5, 0.4}, {}, {}, {}};
  CHECK_THROWS_AS(build_torus_scene(bad), Error);
}

TEST_CASE("condition 5 depends on the listing order") {
  const auto split = split_t3(9, 9);
  CHECK(split.boxes.size() == 5);
  const auto r = validate(split);
  for (int k = 1; k <= 4; ++k) CHECK(r.condition(k).pass);
  CHECK_FALSE(r.condition(5).pass);
  // The full-height west face of c10 is not inside the half-height east face
  // of c00.0 listed before it.
  CHECK(r.condition(5).witness.find("c10") != std::string::npos);
  CHECK(r.condition(5).witness.find("c00.0") != std::string::npos);

  const auto first = reorder(split, {"c10", "c01", "c11", "c00.0", "c00.1"});
  CHECK(validate(first).valid());
}

TEST_CASE("enforcing condition 5") {
  const auto split = split_t3(9, 9);
  std::size_t sweeps = 0;
  const auto fixed = enforce_condition5(split, &sweeps);
  CHECK(validate(fixed).valid());
  CHECK(std::abs(fixed.volume() - split.volume()) < 1e-12);
  CHECK(fixed.boxes.size() == 6);
  int pieces = 0;
  for (const auto& b : fixed.boxes)
    if (b.id.rfind("c10", 0) == 0) {
      ++pieces;
      CHECK((b.t_lo == 0.5 || b.t_hi == 0.5));
    }
  CHECK(pieces == 2);
  CHECK(sweeps >= 1);

  const auto valid = horizontal_t3(9, 9);
  const auto same = enforce_condition5(valid);
  REQUIRE(same.boxes.size() == valid.boxes.size());
  for (std::size_t i = 0; i < valid.boxes.size(); ++i) {
    CHECK(same.boxes[i].id == valid.boxes[i].id);
    CHECK(same.boxes[i].t_lo == valid.boxes[i].t_lo);
    CHECK(same.boxes[i].t_hi == valid.boxes[i].t_hi);
  }
}

TEST_CASE("nested height splits reach a fixed point") {
  TorusSceneOptions o;
  o.grid = 9;
  o.leaves = 9;
  o.height_splits = {{0.25, 0.5, 0.75}, {0.5}, {0.25}, {}};
  auto c = build_torus_scene(o);
  // The finest cell comes first, so every later cell has to be cut.
  std::size_t sweeps = 0;
  const auto fixed = enforce_condition5(c, &sweeps);
  CHECK(validate(fixed).valid());
  CHECK(std::abs(fixed.volume() - 1.0) < 1e-12);
  CHECK(sweeps <= 3);  // distinct interior heights
}

TEST_CASE("enforcing needs conditions 1 to 4") {
  auto c = horizontal_t3(9, 9);
  auto dup = c.boxes[0];
  dup.id = "copy";
  c.boxes.push_back(dup);
  CHECK_FALSE(validate(c).condition(3).pass);
  CHECK_THROWS_AS(enforce_condition5(c), Error);
}

TEST_CASE("transitivity") {
  const auto c = horizontal_t3(9, 9);
  CHECK(check_transitive(c).transitive);
  const auto far = reorder(c, {"c00", "c11", "c10", "c01"});
  const auto t = check_transitive(far);
  CHECK_FALSE(t.transitive);
  CHECK(t.failed_at == 2);

  auto one = annulus_box(9, 9);
  one.relative = {one.boxes[0].id};
  CHECK(check_transitive(one).transitive);
}

TEST_CASE("face poset") {
  const auto c = horizontal_t3(9, 9);
  const auto p = maximal_faces(c);
  CHECK(p.side_faces == 16);
  // Two vertical lines and two horizontal lines of the 2 x 2 torus grid,
  // each cut into two faces; every face is shared by two boxes.
  CHECK(p.faces.size() == 8);
  CHECK(p.maximal_faces.size() == 8);
  for (const auto& m : p.members) CHECK(m.size() == 2);

  const auto one = maximal_faces(annulus_box(9, 9));
  CHECK(one.maximal_faces.size() == 1);
  CHECK(one.faces.front().axis == 2);

  // After subdivision every face sits below exactly one maximal face, and
  // brute-force sampling agrees with the interval containment.
  const auto fixed = enforce_condition5(split_t3(9, 9));
  const auto q = maximal_faces(fixed);
  REQUIRE(q.top.size() == q.faces.size());
  for (std::size_t a = 0; a < q.faces.size(); ++a) {
    const auto& f = q.faces[a];
    const auto& top = q.faces[q.top[a]];
    CHECK(q.maximal[q.top[a]]);
    for (int s = 1; s < 8; ++s)
      for (int h = 1; h < 8; ++h) {
        const double u = f.s0 + (f.s1 - f.s0) * s / 8.0, v = f.h0 + (f.h1 - f.h0) * h / 8.0;
        CHECK((top.line == f.line && top.s0 <= u && u <= top.s1 && top.h0 <= v && v <= top.h1));
      }
  }
}

TEST_CASE("regular neighborhoods") {
  const auto c = horizontal_t3(9, 9);
  const auto r = regular_neighborhood(c, 0.05);
  CHECK(r.face_strips.size() == r.strip_faces.size());
  CHECK_FALSE(r.edge_squares.empty());
  for (std::size_t i = 0; i < r.strip_faces.size(); ++i) {
    // Each strip properly contains its face.
    const auto& f = r.strip_faces[i];
    const auto& s = r.face_strips[i];
    if (f.axis == 0) CHECK((s.x0 < f.line && f.line < s.x1));
    if (f.axis == 1) CHECK((s.y0 < f.line && f.line < s.y1));
  }
  CHECK_THROWS_AS(regular_neighborhood(c, 0.4), Error);
  CHECK_THROWS_AS(regular_neighborhood(c, 0.0), Error);
  const auto one = regular_neighborhood(annulus_box(9, 9), 0.05);
  CHECK(one.strip_faces.size() == 1);
}

TEST_CASE("box-local coordinates") {
  FlowBoxSpec b;
  b.rect = {0.5, 1.0, 0.0, 0.5};
  const auto p = b.to_local({0.75, 0.25});
  CHECK(p.x == doctest::Approx(0.5));
  CHECK(p.y == doctest::Approx(0.5));
}
