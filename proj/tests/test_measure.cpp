#include <doctest.h>

#include <cmath>

#include "foliate/families.hpp"
#include "foliate/measure.hpp"
#include "foliate/scenario.hpp"

using namespace foliate;

namespace {

const BaseDomain kBase = BaseDomain::rectangle(17, 17);

// Leaf-indexed measures are invariant under any holonomy by construction.
TransverseMeasure leaf_measure(const Cumulative& c) { return {MeasureKind::LeafIndexed, c}; }

Cumulative kinked() {
  return Cumulative::piecewise_linear({0.0, 0.2, 0.45, 0.7, 1.0}, {0.0, 0.3, 0.4, 0.75, 1.0});
}

}  // namespace

TEST_CASE("cumulative functions") {
  const Cumulative id;
  CHECK(id(0.37) == 0.37);
  const auto k = kinked();
  CHECK(k(0.2) == 0.3);
  CHECK(k(0.1) == doctest::Approx(0.15));
  CHECK(std::abs(k(k.inverse(0.62)) - 0.62) < 1e-14);
  CHECK_THROWS_AS(Cumulative::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(Cumulative::piecewise_linear({0.0, 1.0}, {0.1, 1.0}), Error);
  CHECK_THROWS_AS(Cumulative::spline({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, 1.0, 1.0), Error);

  const auto s = Cumulative::spline({0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.1, 0.4, 0.8, 1.0}, 0.4, 0.8);
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK(std::isfinite(s(x)));
  CHECK(s(0.5) == doctest::Approx(0.4).epsilon(1e-14));
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = s(i / 1000.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("invariance of transverse measures") {
  const auto paths = standard_paths(kBase);
  const TransverseMeasure lebesgue;
  CHECK(verify_invariance(horizontal_family(kBase, 33), lebesgue, paths).defect < 1e-15);
  // Holonomy of the shear is not the identity, so Lebesgue measure on the
  // fibers is not invariant.
  const auto s = sheared_family(kBase, 65, 0.5);
  CHECK(verify_invariance(s, lebesgue, paths).defect > 0.05);
  // Carried along by the holonomy, any measure is invariant.
  CHECK(verify_invariance(s, leaf_measure(kinked()), paths).defect < 1e-9);
  CHECK(verify_invariance(random_family(kBase, 33, 8), leaf_measure(kinked()), paths).defect < 1e-9);
}

TEST_CASE("transversal smoothing of a smooth cumulative") {
  const auto t = smooth_measure_on_transversal(Cumulative(), 17);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) CHECK(std::abs(t.f[i] - t.nodes[i]) < 1e-12);
  for (int q = 0; q <= 100; ++q) CHECK(std::abs(t.g(q / 100.0) - q / 100.0) < 1e-12);
}

TEST_CASE("transversal smoothing of (t + t^2)/2") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 256; ++i) {
    const double x = i / 256.0;
    xs.push_back(x);
    ys.push_back(0.5 * (x + x * x));
  }
  const auto h = Cumulative::piecewise_linear(xs, ys);
  const auto t = smooth_measure_on_transversal(h, 33);
  CHECK(t.spline_residual <= 1e-12);
  CHECK(t.pushforward_residual <= 1e-12);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    // Oracle: invert h by bisection and push g forward again.
    const double g = t.g(t.nodes[i]);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) < g ? lo : hi) = mid;
    }
    CHECK(std::abs(t.f[i] - 0.5 * (lo + hi)) < 1e-12);
    CHECK(std::abs(g - h(t.nodes[i])) < 1e-12);
    if (i > 0) CHECK(t.f[i] > t.f[i - 1]);
  }
  CHECK_THROWS_AS(smooth_measure_on_transversal(h, 3), Error);
}

TEST_CASE("transversal smoothing keeps extra nodes") {
  const auto t = smooth_measure_on_transversal(kinked(), 9, {0.2, 0.45, 0.7});
  for (double x : {0.2, 0.45, 0.7}) CHECK(std::abs(t.g(x) - kinked()(x)) < 1e-12);
}

TEST_CASE("measured scene smoothing") {
  SUBCASE("Lebesgue measure on the horizontal scene") {
    const MeasuredScene ms{horizontal_t3(17, 17), {}};
    const auto r = smooth_measured_scene(ms);
    CHECK(r.leaf_change == 0.0);
    for (int q = 0; q <= 64; ++q) CHECK(std::abs(r.scene.measure.cumulative(q / 64.0) - q / 64.0) < 1e-12);
  }
  SUBCASE("kinked measure on the horizontal scene") {
    const MeasuredScene ms{horizontal_t3(17, 33), {MeasureKind::FiberCoordinate, kinked()}};
    const auto r = smooth_measured_scene(ms);
    CHECK(r.leaf_change == 0.0);
    CHECK(r.invariance_after < 1e-9);
    CHECK(r.transversal.spline_residual <= 1e-12);
    CHECK(r.scene.measure.cumulative.kind() == Cumulative::Kind::Spline);
    for (double x : r.transversal.nodes) CHECK(std::abs(r.scene.measure.cumulative(x) - kinked()(x)) <= 1e-12);
  }
  SUBCASE("sheared box with an invariant measure") {
    // One box, so the leaf labels never have to agree across a face.
    TorusSceneOptions o;
    o.m = 1;
    o.n = 1;
    o.grid = 17;
    o.leaves = 65;
    o.foliation = {"sheared", 0.3};
    const MeasuredScene ms{build_torus_scene(o), leaf_measure(kinked())};
    const auto r = smooth_measured_scene(ms);
    CHECK(r.leaf_change == 0.0);
    CHECK(r.invariance_after < 1e-9);
    // Holonomy is the conjugate of the identity by the fiber cumulatives:
    // mu'[0, rho(z)] over the start equals mu'[0, z] over the end.
    const auto& box = r.scene.scene.boxes[0];
    const Point2 a{0.0, 0.3}, b{1.0, 0.6};
    const auto rho = holonomy(*box.family, a, b);
    for (int q = 0; q <= 32; ++q) {
      const double z = q / 32.0;
      CHECK(std::abs(scene_measure_below(r.scene, 0, a, rho(z)) - scene_measure_below(r.scene, 0, b, z)) < 1e-9);
    }
  }
  SUBCASE("a measure that is not invariant is rejected") {
    const MeasuredScene ms{sheared_t3(0.3, 17, 33), {MeasureKind::FiberCoordinate, kinked()}};
    CHECK_THROWS_AS(smooth_measured_scene(ms), Error);
    // Leaf labels of neighbouring sheared boxes disagree along shared faces.
    CHECK(verify_invariance(MeasuredScene{sheared_t3(0.3, 17, 33), leaf_measure(kinked())}).defect > 1e-3);
  }
}

TEST_CASE("continued fractions") {
  const auto c = convergents(std::sqrt(2.0), 100);
  const std::vector<std::pair<int, int>> want{{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}, {99, 70}};
  REQUIRE(c.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(c[i].p == want[i].first);
    CHECK(c[i].q == want[i].second);
  }
  const auto r = convergents(0.75);
  CHECK(r.back().p == 3);
  CHECK(r.back().q == 4);
}

TEST_CASE("Tischler approximation on T^2") {
  const double r2 = std::sqrt(2.0);
  SUBCASE("rational input returns itself") {
    const auto t = tischler_fibration({{1.0, 0.0}}, 1e-3);
    CHECK(t.integer_form == std::vector<std::int64_t>{1, 0});
    CHECK(t.denominator == 1);
    CHECK(t.period == 1);
    CHECK(t.angle_defect == 0.0);
  }
  SUBCASE("sqrt 2 at 1e-3") {
    const auto t = tischler_fibration({{1.0, r2}}, 1e-3);
    CHECK(t.integer_form == std::vector<std::int64_t>{12, 17});
    CHECK(t.denominator == 12);
    const double oracle = std::abs(std::atan(r2) - std::atan(17.0 / 12.0));
    CHECK(oracle == doctest::Approx(8.2e-4).epsilon(0.01));
    CHECK(t.angle_defect == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(t.period == 12);
    const auto cert = verify_closed_leaves(t, 24);
    CHECK(cert.closes);
    CHECK(cert.period == 12);
    CHECK(cert.points_checked == 24);
  }
  SUBCASE("sqrt 2 at 1e-4 needs 99/70") {
    // 41/29 misses by |atan(sqrt 2) - atan(41/29)| = 1.40e-4 > 1e-4.
    CHECK(std::abs(std::atan(r2) - std::atan(41.0 / 29.0)) > 1e-4);
    CHECK(std::abs(std::atan(r2) - std::atan(99.0 / 70.0)) < 1e-4);
    const auto t = tischler_fibration({{1.0, r2}}, 1e-4);
    CHECK(t.integer_form == std::vector<std::int64_t>{70, 99});
    CHECK(verify_closed_leaves(t, 10).closes);
  }
  SUBCASE("sign and order of coefficients") {
    const auto t = tischler_fibration({{0.0, -2.0}}, 1e-6);
    CHECK(t.lead == 1);
    CHECK(t.angle_defect == 0.0);
    const auto u = tischler_fibration({{-1.0, r2}}, 1e-3);
    CHECK(u.integer_form == std::vector<std::int64_t>{12, -17});
  }
  CHECK_THROWS_AS(tischler_fibration({{0.0, 0.0}}, 1e-3), Error);
  CHECK_THROWS_AS(tischler_fibration({{1.0}}, 1e-3), Error);
}

TEST_CASE("Tischler approximation on T^3") {
  const auto t = tischler_fibration({{1.0, std::sqrt(2.0), std::sqrt(3.0)}}, 1e-3);
  CHECK(t.angle_defect <= 1e-3);
  // Brute force: no smaller common denominator meets the bound.
  for (std::int64_t q = 1; q < t.denominator; ++q) {
    const std::vector<double> v{1.0, std::llround(std::sqrt(2.0) * q) / double(q), std::llround(std::sqrt(3.0) * q) / double(q)};
    CHECK(kernel_angle({1.0, std::sqrt(2.0), std::sqrt(3.0)}, v) > 1e-3);
  }
  const auto cert = verify_closed_leaves(t, 7);
  CHECK(cert.closes);
  CHECK(cert.period == t.period);
}

TEST_CASE("kernel angle") {
  CHECK(kernel_angle({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(M_PI / 2));
  CHECK(kernel_angle({1.0, 1.0}, {-1.0, -1.0}) == 0.0);
  CHECK_THROWS_AS(kernel_angle({1.0, 0.0}, {1.0, 0.0, 0.0}), Error);
}
