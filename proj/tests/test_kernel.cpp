#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

#include "foliate/families.hpp"
#include "foliate/kernel.hpp"

using namespace foliate;

namespace {

// Hand-rolled c o s: J_i = [z_i + W_<i, z_i + W_<=i] inside [0, 1+w].
double collapse_oracle(const std::vector<InsertionEntry>& e, double x) {
  double w = 0.0;
  for (const auto& v : e) w += v.weight;
  const double u = (1.0 + w) * x;
  double before = 0.0;
  for (const auto& v : e) {
    const double lo = v.point + before, hi = lo + v.weight;
    if (u < lo) return u - before;
    if (u <= hi) return v.point;
    before += v.weight;
  }
  return u - before;
}

std::vector<InsertionEntry> random_entries(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pt(0.01, 0.99), wt(0.001, 0.2);
  std::vector<double> pts;
  while (static_cast<int>(pts.size()) < n) {
    double p = pt(rng);
    bool clash = false;
    for (double q : pts) clash |= std::abs(p - q) < 1e-6;
    if (!clash) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<InsertionEntry> e;
  for (double p : pts) e.push_back({p, wt(rng)});
  return e;
}

}  // namespace

TEST_CASE("smooth step is normalized, symmetric and flat at the ends") {
  const auto d = make_damping(3, 256);
  CHECK(d(0.0) == 0.0);
  CHECK(d(1.0) == 1.0);
  CHECK(d(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double v : d.endpoint_derivatives(false)) CHECK(std::abs(v) < 1e-9);
  for (double v : d.endpoint_derivatives(true)) CHECK(std::abs(v) < 1e-9);
  for (std::size_t k = 1; k < d.values().size(); ++k) CHECK(d.values()[k] >= d.values()[k - 1]);
  CHECK_THROWS_AS(make_damping(3, 15), Error);
  CHECK_THROWS_AS(make_damping(0, 64), Error);
}

TEST_CASE("smooth step derivative and inverse agree with finite differences") {
  for (double x : {0.1, 0.3, 0.5, 0.77, 0.95}) {
    const double h = 1e-6;
    const double fd = (smooth_step(x + h) - smooth_step(x - h)) / (2 * h);
    CHECK(smooth_step_prime(x) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(std::abs(smooth_step(smooth_step_inverse(x)) - x) < 1e-12);
  }
  CHECK(damped_ramp(-1.0, 0.2, 0.4) == 0.0);
  CHECK(damped_ramp(0.3, 0.2, 0.4) == doctest::Approx(0.5));
  CHECK(damped_ramp(0.5, 0.2, 0.4) == 1.0);
}

TEST_CASE("single insertion collapses [1/4, 3/4]") {
  const CollapseMap p(InsertionSchedule({{0.5, 1.0}}));
  REQUIRE(p.intervals().size() == 1);
  CHECK(p.intervals()[0].lo == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p.intervals()[0].hi == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p(0.1) == doctest::Approx(0.2));
  CHECK(p(0.5) == 0.5);
  CHECK(p(0.9) == doctest::Approx(0.8));

  const auto pre = collapse_preimage(p, 0.5);
  REQUIRE(std::holds_alternative<std::pair<double, double>>(pre));
  CHECK(std::get<std::pair<double, double>>(pre).first == doctest::Approx(0.25));
  CHECK(std::get<std::pair<double, double>>(pre).second == doctest::Approx(0.75));
  const auto pt = collapse_preimage(p, 0.1);
  REQUIRE(std::holds_alternative<double>(pt));
  CHECK(std::get<double>(pt) == doctest::Approx(0.05));
}

TEST_CASE("empty schedule gives the identity") {
  const auto p = build_collapse(InsertionSchedule());
  CHECK(p.is_identity());
  for (double x : {0.0, 0.3, 0.7, 1.0}) CHECK(p(x) == x);
  CHECK(std::get<double>(collapse_preimage(p, 0.3)) == 0.3);
}

TEST_CASE("two insertions of weight one") {
  const auto p = build_collapse(InsertionSchedule({{1.0 / 3, 1.0}, {2.0 / 3, 1.0}}));
  REQUIRE(p.intervals().size() == 2);
  CHECK(p.intervals()[0].lo == doctest::Approx(1.0 / 9));
  CHECK(p.intervals()[0].hi == doctest::Approx(4.0 / 9));
  CHECK(p.intervals()[1].lo == doctest::Approx(5.0 / 9));
  CHECK(p.intervals()[1].hi == doctest::Approx(8.0 / 9));
}

TEST_CASE("invalid schedules are rejected") {
  CHECK_THROWS_AS(InsertionSchedule({{0.0, 0.1}}), Error);
  CHECK_THROWS_AS(InsertionSchedule({{0.5, -0.1}}), Error);
  CHECK_THROWS_AS(InsertionSchedule({{0.5, 0.1}, {0.5, 0.2}}), Error);
}

TEST_CASE("random schedules match the hand-rolled collapse") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    const auto e = random_entries(rng, n);
    const InsertionSchedule s(e);
    const CollapseMap p(s);
    const double w = s.total_weight();
    double collapsed = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& iv = p.intervals()[i];
      CHECK(std::abs((iv.hi - iv.lo) - e[i].weight / (1.0 + w)) < 1e-12);
      collapsed += iv.hi - iv.lo;
    }
    CHECK(std::abs(collapsed - w / (1.0 + w)) < 1e-12);
    double prev = -1.0;
    for (int k = 0; k <= 200; ++k) {
      const double x = k / 200.0;
      const double y = p(x);
      CHECK(std::abs(y - collapse_oracle(e, x)) < 1e-12);
      CHECK(y >= prev);
      prev = y;
      CHECK(std::abs(p(p.embed(x)) - x) < 1e-12);
    }
  }
}

TEST_CASE("partition of a horizontal family is trivial") {
  const auto f = horizontal_family(BaseDomain::rectangle(17, 17), 33);
  CHECK(choose_partition(f, 0.01).cells() == 1);
}

TEST_CASE("partition of the sheared family") {
  const auto f = sheared_family(BaseDomain::rectangle(17, 17), 65, 0.5);
  // Largest leaf slope is 0.5/4 at t = 1/2, so everything fits under 0.2.
  CHECK(choose_partition(f, 0.2).cells() == 1);

  const auto p = choose_partition(f, 0.05);
  CHECK(p.cuts().size() >= 5);  // 0, 1 and at least three interior cuts
  // Brute-force pairwise check over every cell, node and pair of samples.
  const auto field = tangent_field(f);
  const auto& t = f.t_samples();
  const std::size_t n = f.base().nodes();
  double worst = 0.0;
  for (std::size_t c = 0; c < p.cells(); ++c) {
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] >= p.cuts()[c] - 1e-15 && t[k] <= p.cuts()[c + 1] + 1e-15) ks.push_back(k);
    for (std::size_t node = 0; node < n; ++node)
      for (auto a : ks)
        for (auto b : ks) worst = std::max(worst, normal_angle(field.normals[a * n + node], field.normals[b * n + node]));
  }
  CHECK(worst <= 0.05);
}

TEST_CASE("partition cells") {
  const Partition p({0.0, 0.25, 0.5, 1.0});
  CHECK(p.cells() == 3);
  CHECK(p.cell_of(0.1) == 0);
  CHECK(p.cell_of(0.25) == 1);
  CHECK(p.cell_of(1.0) == 2);
  CHECK(p.contains_cut(0.5));
  CHECK_THROWS_AS(Partition({0.0, 0.5, 0.4, 1.0}), Error);
}
