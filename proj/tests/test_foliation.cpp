#include <doctest.h>

#include <cmath>

#include "foliate/families.hpp"
#include "foliate/foliation.hpp"

using namespace foliate;

namespace {

const BaseDomain kBase = BaseDomain::rectangle(17, 17);

// Root in [0,1] of t + s t (1 - t) = z, by the quadratic formula.
double sheared_root(double s, double z) {
  const double a = -s, b = 1.0 + s, c = -z;
  return (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
}

}  // namespace

TEST_CASE("leaf_through on simple families") {
  const auto h = horizontal_family(kBase, 33);
  CHECK(leaf_through(h, {0.7, 0.2}, 0.3) == doctest::Approx(0.3).epsilon(1e-12));

  const auto f = random_family(kBase, 33, 5);
  for (double z : {0.0, 0.13, 0.5, 0.91, 1.0}) CHECK(std::abs(f.leaf_through(f.anchor_node(), z) - z) < 1e-12);

  // The exact leaf is quadratic in t; sampled leaves are linear in t, which
  // costs about h^2/8 with h = 1/256.
  const auto s = sheared_family(kBase, 257, 0.5);
  CHECK(sheared_root(0.5, 0.5) == doctest::Approx(0.3819660112501051).epsilon(1e-14));
  CHECK(std::abs(leaf_through(s, {1.0, 0.3}, 0.5) - sheared_root(0.5, 0.5)) < 1e-5);
}

TEST_CASE("leaf_through inverts evaluation at every node") {
  const auto f = random_family(kBase, 33, 11);
  double worst = 0.0;
  for (std::size_t node = 0; node < kBase.nodes(); ++node)
    for (double z = 0.0; z <= 1.0; z += 1.0 / 37) {
      const double t = f.leaf_through(node, z);
      worst = std::max(worst, std::abs(f.eval(t, node) - z));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("tangent field of simple families") {
  const auto h = horizontal_family(kBase, 9);
  for (const auto& n : tangent_field(h).normals) {
    CHECK(n[0] == 0.0);
    CHECK(n[1] == 0.0);
    CHECK(n[2] == 1.0);
  }
  // Middle leaves of the tilted family are planes of slope 0.1.
  const auto t = tilted_family(kBase, 33, 0.1, 0.25);
  const auto field = tangent_field(t);
  const std::size_t mid = 16 * kBase.nodes() + kBase.node(8, 8);
  const double r = std::hypot(0.1, 1.0);
  CHECK(field.normals[mid][0] == doctest::Approx(-0.1 / r).epsilon(1e-12));
  CHECK(std::abs(field.normals[mid][1]) < 1e-12);
  CHECK(field.normals[mid][2] == doctest::Approx(1.0 / r).epsilon(1e-12));

  // Sheared leaf t = 1/2 has slope 0.5 * 1/4 in x.
  const auto s = sheared_family(kBase, 33, 0.5);
  const auto g = s.sample_gradient(16, kBase.node(5, 5));
  CHECK(g[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(std::abs(g[1]) < 1e-12);
}

TEST_CASE("c0 distance") {
  const auto h = horizontal_family(kBase, 33);
  const auto t = tilted_family(kBase, 33, 0.1, 0.25);
  CHECK(c0_distance(h, h) == 0.0);
  CHECK(c0_distance(h, t) == doctest::Approx(std::atan(0.1)).epsilon(1e-12));
  const auto a = random_family(kBase, 33, 1), b = random_family(kBase, 33, 2);
  CHECK(c0_distance(a, b) == doctest::Approx(c0_distance(b, a)).epsilon(1e-14));
  CHECK_THROWS_AS(c0_distance(h, horizontal_family(BaseDomain::rectangle(9, 9), 33)), Error);
}

TEST_CASE("holonomy of horizontal and sheared families") {
  const auto h = horizontal_family(kBase, 33);
  const auto id = holonomy(h, {0.1, 0.2}, {0.9, 0.7});
  CHECK(id.distance(HolonomyMap::identity()) < 1e-15);

  const auto s = sheared_family(kBase, 257, 0.5);
  const auto rho = holonomy(s, {0.0, 0.4}, {1.0, 0.4});
  CHECK(std::abs(rho(0.5) - sheared_root(0.5, 0.5)) < 1e-5);
  for (double z : {0.1, 0.25, 0.75, 0.9}) CHECK(std::abs(rho(z) - sheared_root(0.5, z)) < 1e-5);
}

TEST_CASE("holonomy is functorial and path independent") {
  const auto f = random_family(kBase, 33, 3);
  const Point2 a{0.1, 0.1}, b{0.8, 0.3}, c{0.4, 0.9};
  const auto ab = BasePath::segment(kBase, a, b), bc = BasePath::segment(kBase, b, c);
  const auto rho_ab = holonomy(f, ab);
  CHECK(rho_ab.compose(holonomy(f, ab.reversed())).distance(HolonomyMap::identity()) < 1e-9);
  CHECK(holonomy(f, ab.then(bc)).distance(rho_ab.compose(holonomy(f, bc))) < 1e-9);
  // Same endpoints, different route.
  const auto direct = BasePath::segment(kBase, a, c);
  CHECK(holonomy(f, direct).distance(holonomy(f, ab.then(bc))) < 1e-9);
}

TEST_CASE("holonomy maps compose and invert exactly on knots") {
  const HolonomyMap f({0.0, 0.3, 1.0}, {0.0, 0.6, 1.0});
  const HolonomyMap g({0.0, 0.5, 1.0}, {0.0, 0.2, 1.0});
  const auto fg = f.compose(g);
  for (double x : {0.0, 0.1, 0.5, 0.8, 1.0}) CHECK(fg(x) == doctest::Approx(f(g(x))).epsilon(1e-14));
  CHECK(f.compose(f.inverse()).distance(HolonomyMap::identity()) < 1e-14);
  CHECK_THROWS_AS(HolonomyMap({0.0, 0.5, 1.0}, {0.0, 0.5, 0.9}), Error);
}

TEST_CASE("x invariance defect") {
  const auto ann = BaseDomain::annulus(17, 16);
  CHECK(x_invariance_defect(horizontal_family(ann, 17)) == 0.0);
  CHECK(x_invariance_defect(wavy_family(ann, 17, 0.3)) < 1e-15);
  // max over t of s t (1 - t) = s / 4 across x in [0,1].
  CHECK(x_invariance_defect(sheared_family(ann, 33, 0.125)) == doctest::Approx(0.03125).epsilon(1e-12));
  CHECK(x_invariance_defect(sheared_family(ann, 33, 0.5)) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(BaseDomain::rectangle(4, 17).validate(), Error);
  std::vector<double> vals(2 * kBase.nodes(), 0.0);
  std::fill(vals.begin() + kBase.nodes(), vals.end(), 1.0);
  CHECK_NOTHROW(LeafFamily(kBase, {0.0, 1.0}, vals, {}));
  vals[kBase.nodes() + 3] = 0.9;
  CHECK_THROWS_AS(LeafFamily(kBase, {0.0, 1.0}, vals, {}), Error);
  CHECK_THROWS_AS(sheared_family(kBase, 9, 1.2), Error);
}

TEST_CASE("restricting leaves rescales fiberwise") {
  const auto f = random_family(kBase, 33, 9);
  const auto r = f.restrict_leaves(0.25, 0.75);
  for (std::size_t node = 0; node < kBase.nodes(); node += 7) {
    CHECK(r.value(0, node) == 0.0);
    CHECK(r.value(r.leaf_count() - 1, node) == 1.0);
  }
}
