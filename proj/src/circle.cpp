#include "foliate/circle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "foliate/kernel.hpp"

namespace foliate {

CircleMapLift::CircleMapLift(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || xs_.size() != ys_.size()) throw Error("circle map needs matching, non-empty knots", "circle");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!(xs_[i] >= 0.0 && xs_[i] < 1.0)) throw Error("circle map knots must lie in [0,1)", "circle");
    if (i > 0 && !(xs_[i - 1] < xs_[i] && ys_[i - 1] < ys_[i]))
      throw Error("circle map lift must be strictly increasing", "circle");
  }
  if (!(ys_.back() < ys_.front() + 1.0)) throw Error("circle map lift must be strictly increasing", "circle");
}

CircleMapLift CircleMapLift::rotation(double alpha) { return CircleMapLift({0.0}, {alpha}); }

double CircleMapLift::operator()(double x) const {
  const double n = std::floor(x);
  const double f = x - n;
  double x0, y0, x1, y1;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), f);
  if (it == xs_.begin()) {
    x0 = xs_.back() - 1.0, y0 = ys_.back() - 1.0, x1 = xs_.front(), y1 = ys_.front();
  } else if (it == xs_.end()) {
    x0 = xs_.back(), y0 = ys_.back(), x1 = xs_.front() + 1.0, y1 = ys_.front() + 1.0;
  } else {
    const std::size_t i = std::size_t(it - xs_.begin());
    x0 = xs_[i - 1], y0 = ys_[i - 1], x1 = xs_[i], y1 = ys_[i];
  }
  const double y = f == x0 ? y0 : y0 + (y1 - y0) * (f - x0) / (x1 - x0);
  return n + y;
}

double CircleMapLift::commutation_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double next = i + 1 < xs_.size() ? xs_[i + 1] : xs_.front() + 1.0;
    for (double x : {xs_[i], 0.5 * (xs_[i] + next)})
      worst = std::max(worst, std::abs((*this)(x + 1.0) - (*this)(x) - 1.0));
  }
  return worst;
}

namespace {

// Orbit point kept as integer part plus fraction so long runs keep full
// precision.
struct LiftedPoint {
  long whole = 0;
  double frac = 0.0;

  void step(const CircleMapLift& h) {
    const double y = h(frac);
    const double m = std::floor(y);
    whole += static_cast<long>(m);
    frac = y - m;
  }
  double minus(double x0) const { return (double(whole) - std::floor(x0)) + (frac - (x0 - std::floor(x0))); }
};

LiftedPoint lifted(double x) {
  const double m = std::floor(x);
  return {static_cast<long>(m), x - m};
}

}  // namespace

RotationEstimate rotation_number(const CircleMapLift& lift, std::size_t iterations, double x0) {
  if (iterations < 1000) throw Error("rotation_number needs at least 1000 iterations", "circle");
  LiftedPoint p = lifted(x0);
  double prev = 0.0;
  for (std::size_t i = 0; i < iterations; ++i) {
    prev = p.minus(x0);
    p.step(lift);
  }
  const double total = p.minus(x0);
  return {total / double(iterations), total - prev, iterations};
}

std::vector<RotationSample> rotation_series(const CircleMapLift& lift, std::size_t iterations, std::size_t stride,
                                            double x0) {
  if (stride == 0) throw Error("stride must be positive", "circle");
  std::vector<RotationSample> out;
  LiftedPoint p = lifted(x0);
  for (std::size_t i = 1; i <= iterations; ++i) {
    p.step(lift);
    if (i % stride == 0 || i == iterations) out.push_back({i, p.frac, p.minus(x0) / double(i)});
  }
  return out;
}

DenjoyCircleMap blowup_circle_map(double alpha, std::size_t orbit_length, const WeightRule& weights) {
  if (orbit_length < 100) throw Error("orbit length must be at least 100", "circle");
  if (!std::isfinite(alpha)) throw Error("alpha must be finite", "circle");
  if (!(weights.total > 0.0) || !std::isfinite(weights.total))
    throw Error("total inserted length must be positive", "circle");
  const long n = static_cast<long>(orbit_length);
  const double a = alpha - std::floor(alpha);
  auto orbit = [&](long k) {
    const double v = std::fmod(double(k) * a, 1.0);
    return v < 0.0 ? v + 1.0 : v;
  };

  struct Entry {
    long k;
    double o;
    double w;
  };
  std::vector<Entry> pts;
  double norm = 0.0;
  for (long k = -n; k <= n; ++k) norm += 1.0 / (double(k) * double(k) + 1.0);
  for (long k = -n; k <= n; ++k) pts.push_back({k, orbit(k), weights.total / (double(k) * double(k) + 1.0) / norm});
  std::sort(pts.begin(), pts.end(), [](const Entry& x, const Entry& y) { return x.o < y.o; });
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].o - pts[i - 1].o < 1e-12) {
      std::ostringstream os;
      os << "orbit points " << pts[i - 1].k << " and " << pts[i].k << " collide; alpha looks rational";
      throw Error(os.str(), "circle");
    }
  if (pts.front().o + 1.0 - pts.back().o < 1e-12) throw Error("orbit points collide; alpha looks rational", "circle");

  double total = 0.0;
  for (const auto& p : pts) total += p.w;
  const double scale = 1.0 + total;

  std::vector<CircleGap> by_index(pts.size());
  std::vector<double> below(pts.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    below[i] = acc;
    by_index[std::size_t(pts[i].k + n)] = {pts[i].k, (pts[i].o + acc) / scale, (pts[i].o + acc + pts[i].w) / scale};
    acc += pts[i].w;
  }
  auto embed = [&](double x) {
    auto it = std::lower_bound(pts.begin(), pts.end(), x, [](const Entry& e, double v) { return e.o < v; });
    const std::size_t i = std::size_t(it - pts.begin());
    const double before = i < pts.size() ? below[i] : total;
    return (x + before) / scale;
  };
  auto gap = [&](long k) -> const CircleGap& { return by_index.at(std::size_t(k + n)); };

  const double image_point = embed(orbit(n + 1));
  const double opener = embed(orbit(-n - 1));

  std::vector<double> marks{image_point, opener};
  for (const auto& g : by_index) marks.insert(marks.end(), {g.lo, g.hi});
  std::sort(marks.begin(), marks.end());
  double spacing = marks.front() + 1.0 - marks.back();
  for (std::size_t i = 1; i < marks.size(); ++i) spacing = std::min(spacing, marks[i] - marks[i - 1]);
  const double r = std::min(0.25 * spacing, 1e-6);
  const double delta = 0.5 * r;

  std::vector<std::pair<double, double>> knots;
  for (long k = -n; k < n; ++k) {
    knots.emplace_back(gap(k).lo, gap(k + 1).lo);
    knots.emplace_back(gap(k).hi, gap(k + 1).hi);
  }
  knots.emplace_back(gap(n).lo, image_point - delta);
  knots.emplace_back(gap(n).hi, image_point + delta);
  knots.emplace_back(opener - r, gap(-n).lo);
  knots.emplace_back(opener + r, gap(-n).hi);

  for (auto& [x, y] : knots) {
    x -= std::floor(x);
    // Lift the image next to x + alpha.
    const double target = x + a;
    y += std::round(target - y);
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> xs, ys;
  for (const auto& [x, y] : knots) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return {CircleMapLift(std::move(xs), std::move(ys)), a, orbit_length, std::move(by_index), r};
}

RevisitAudit audit_wandering(const DenjoyCircleMap& map, std::size_t steps) {
  RevisitAudit audit;
  for (const auto& g : map.gaps) {
    LiftedPoint lo = lifted(g.lo), hi = lifted(g.hi);
    for (std::size_t s = 1; s <= steps; ++s) {
      lo.step(map.lift);
      hi.step(map.lift);
      const double a = lo.frac;
      const double b = a + (double(hi.whole - lo.whole) + hi.frac - lo.frac);
      const bool meets = (std::max(a, g.lo) < std::min(b, g.hi)) || (std::max(a, g.lo + 1.0) < std::min(b, g.hi + 1.0));
      if (meets) {
        audit.wandering = false;
        audit.first_gap = g.index;
        audit.step = s;
        return audit;
      }
    }
    ++audit.gaps_checked;
  }
  return audit;
}

}  // namespace foliate
