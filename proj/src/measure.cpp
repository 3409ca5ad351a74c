#include "foliate/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified; <math.h> puts it in scope.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

namespace foliate {

struct Cumulative::Spline {
  boost::math::interpolators::pchip<std::vector<double>> p;
};

namespace {

void check_cumulative(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) throw Error("cumulative function needs matching knots", "measure");
  if (xs.front() != 0.0 || xs.back() != 1.0 || ys.front() != 0.0 || ys.back() != 1.0)
    throw Error("cumulative function must run from (0,0) to (1,1)", "measure");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i - 1] < xs[i])) throw Error("cumulative knots must be strictly increasing", "measure");
    if (!(ys[i - 1] < ys[i])) throw Error("measure is not strictly monotone", "measure");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

Cumulative::Cumulative() : xs_{0.0, 1.0}, ys_{0.0, 1.0} {}

Cumulative Cumulative::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  check_cumulative(xs, ys);
  Cumulative c;
  c.xs_ = std::move(xs);
  c.ys_ = std::move(ys);
  c.d0_ = (c.ys_[1] - c.ys_[0]) / (c.xs_[1] - c.xs_[0]);
  const std::size_t n = c.xs_.size();
  c.d1_ = (c.ys_[n - 1] - c.ys_[n - 2]) / (c.xs_[n - 1] - c.xs_[n - 2]);
  return c;
}

Cumulative Cumulative::spline(std::vector<double> xs, std::vector<double> ys, double d0, double d1) {
  check_cumulative(xs, ys);
  if (xs.size() < 4) throw Error("a spline cumulative needs at least four knots", "measure");
  if (!(d0 > 0.0 && d1 > 0.0)) throw Error("spline endpoint derivatives must be positive", "measure");
  Cumulative c;
  c.kind_ = Kind::Spline;
  c.xs_ = xs;
  c.ys_ = ys;
  c.d0_ = d0;
  c.d1_ = d1;
  c.spline_ = std::make_shared<const Spline>(
      Spline{boost::math::interpolators::pchip<std::vector<double>>(std::move(xs), std::move(ys), d0, d1)});
  return c;
}

double Cumulative::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (kind_ == Kind::Spline) return spline_->p(x);
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = std::size_t(it - xs_.begin());
  const double x0 = xs_[i - 1], x1 = xs_[i];
  if (x == x0) return ys_[i - 1];
  return ys_[i - 1] + (ys_[i] - ys_[i - 1]) * (x - x0) / (x1 - x0);
}

double Cumulative::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  if (kind_ == Kind::PiecewiseLinear) {
    auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
    const std::size_t i = std::size_t(it - ys_.begin());
    const double y0 = ys_[i - 1], y1 = ys_[i];
    if (y == y0) return xs_[i - 1];
    return xs_[i - 1] + (xs_[i] - xs_[i - 1]) * (y - y0) / (y1 - y0);
  }
  auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  const std::size_t i = std::size_t(it - ys_.begin());
  if (ys_[i - 1] == y) return xs_[i - 1];
  double lo = xs_[i - 1], hi = xs_[i];
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((*this)(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs((*this)(lo) - y) <= std::abs((*this)(hi) - y) ? lo : hi;
}

std::string to_string(MeasureKind kind) {
  return kind == MeasureKind::FiberCoordinate ? "fiber" : "leaf";
}

MeasureKind measure_kind_from_string(const std::string& name) {
  if (name == "fiber") return MeasureKind::FiberCoordinate;
  if (name == "leaf") return MeasureKind::LeafIndexed;
  throw Error("unknown measure kind '" + name + "'");
}

double TransverseMeasure::below(const LeafFamily& family, Point2 p, double z) const {
  if (kind == MeasureKind::FiberCoordinate) return cumulative(z);
  return cumulative(family.leaf_through(p, z));
}

namespace {

constexpr int kHeights = 128;

// Range of mu[0,z] over the end fiber minus mu[0,rho(z)] over the start.
template <class Below>
double path_defect(const HolonomyMap& rho, const Below& end_below, const Below& start_below) {
  double lo = 0.0, hi = 0.0;
  for (int q = 0; q <= kHeights; ++q) {
    const double z = double(q) / kHeights;
    const double d = end_below(z) - start_below(rho(z));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

}  // namespace

InvarianceReport verify_invariance(const LeafFamily& family, const TransverseMeasure& mu,
                                   const std::vector<BasePath>& paths) {
  InvarianceReport out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& path = paths[i];
    const Point2 p0 = path.points.front(), p1 = path.points.back();
    const auto rho = holonomy(family, path);
    auto end = [&](double z) { return mu.below(family, p1, z); };
    auto start = [&](double z) { return mu.below(family, p0, z); };
    const double d = path_defect(rho, std::function<double(double)>(end), std::function<double(double)>(start));
    if (d > out.defect) out = {d, i};
  }
  return out;
}

std::vector<BasePath> standard_paths(const BaseDomain& base) {
  const Point2 c00{0, 0}, c10{1, 0}, c01{0, 1}, c11{1, 1};
  std::vector<std::pair<Point2, Point2>> segs{{c00, c10}, {c00, c01}, {c10, c11}, {c01, c11},
                                              {c00, c11}, {c10, c01}, {{0.5, 0}, {0.5, 1}}, {{0, 0.5}, {1, 0.5}}};
  std::vector<BasePath> out;
  for (const auto& [a, b] : segs) out.push_back(BasePath::segment(base, a, b));
  return out;
}

TransversalSmoothing smooth_measure_on_transversal(const Cumulative& h, int subsample_count,
                                                   const std::vector<double>& extra_nodes) {
  if (subsample_count < 4) throw Error("need at least four subsamples", "measure");
  std::vector<double> nodes;
  for (int i = 0; i < subsample_count; ++i) nodes.push_back(double(i) / (subsample_count - 1));
  nodes.back() = 1.0;
  for (double e : extra_nodes)
    if (e > 0.0 && e < 1.0) nodes.push_back(e);
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> merged;
  for (double v : nodes)
    if (merged.empty() || v - merged.back() > 1e-12) merged.push_back(v);
  if (merged.back() != 1.0) merged.back() = 1.0;

  std::vector<double> ys;
  for (double x : merged) ys.push_back(h(x));
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (!(ys[i - 1] < ys[i])) throw Error("measure is not strictly monotone near " + fmt(merged[i]), "measure");
  const std::size_t n = merged.size();
  const double d0 = (ys[1] - ys[0]) / (merged[1] - merged[0]);
  const double d1 = (ys[n - 1] - ys[n - 2]) / (merged[n - 1] - merged[n - 2]);

  TransversalSmoothing out{h, Cumulative::spline(merged, ys, d0, d1), merged, {}, 0.0, 0.0};
  double prev = -1.0;
  for (int q = 0; q <= 4096; ++q) {
    const double v = out.g(q / 4096.0);
    if (!(v > prev)) throw Error("smoothed cumulative is not strictly increasing", "measure");
    prev = v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double g = out.g(merged[i]);
    const double f = h.inverse(g);
    out.f.push_back(f);
    out.spline_residual = std::max(out.spline_residual, std::abs(g - ys[i]));
    out.pushforward_residual = std::max(out.pushforward_residual, std::abs(h(f) - g));
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!(out.f[i - 1] < out.f[i])) throw Error("reparametrization is not strictly increasing", "measure");
  return out;
}

// ---------------------------------------------------------------------------

double scene_measure_below(const MeasuredScene& ms, std::size_t b, Point2 local, double z) {
  const auto& box = ms.scene.boxes.at(b);
  const double span = box.t_hi - box.t_lo;
  if (ms.measure.kind == MeasureKind::FiberCoordinate) return ms.measure.cumulative(box.t_lo + span * z);
  if (!box.family) throw Error("box " + box.id + " has no leaf family", "measure");
  return ms.measure.cumulative(box.t_lo + span * box.family->leaf_through(local, z));
}

namespace {

Point2 face_point(const FlowBoxSpec& b, Side side, double s) {
  const bool vertical = side == Side::West || side == Side::East;
  const double u = vertical ? (s - b.rect.y0) / (b.rect.y1 - b.rect.y0) : (s - b.rect.x0) / (b.rect.x1 - b.rect.x0);
  switch (side) {
    case Side::West: return {0.0, u};
    case Side::East: return {1.0, u};
    case Side::South: return {u, 0.0};
    default: return {u, 1.0};
  }
}

}  // namespace

InvarianceReport verify_invariance(const MeasuredScene& ms) {
  InvarianceReport out;
  std::size_t counter = 0;
  const auto& boxes = ms.scene.boxes;
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    if (!boxes[b].family) throw Error("box " + boxes[b].id + " has no leaf family", "measure");
    const auto& fam = *boxes[b].family;
    for (const auto& path : standard_paths(fam.base())) {
      const auto rho = holonomy(fam, path);
      const Point2 p0 = path.points.front(), p1 = path.points.back();
      std::function<double(double)> end = [&](double z) { return scene_measure_below(ms, b, p1, z); };
      std::function<double(double)> start = [&](double z) { return scene_measure_below(ms, b, p0, z); };
      const double d = path_defect(rho, end, start);
      if (d > out.defect) out = {d, counter};
      ++counter;
    }
  }
  // Both sides of every shared face see the same fiber.
  const auto faces = geometric_faces(ms.scene);
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      const auto& d = faces[i];
      const auto& e = faces[j];
      if (d.box == e.box || d.axis == 2 || d.axis != e.axis || std::abs(d.line - e.line) > 1e-12) continue;
      const double s0 = std::max(d.s0, e.s0), s1 = std::min(d.s1, e.s1);
      const double h0 = std::max(d.h0, e.h0), h1 = std::min(d.h1, e.h1);
      if (s1 - s0 <= 1e-12 || h1 - h0 <= 1e-12) continue;
      const auto& ba = boxes[d.box];
      const auto& bb = boxes[e.box];
      double worst = 0.0;
      for (int q = 0; q <= 8; ++q) {
        const double s = s0 + (s1 - s0) * q / 8.0;
        const Point2 pa = face_point(ba, d.side, s), pb = face_point(bb, e.side, s);
        // Compare increments from the bottom of the shared height range.
        const double za0 = (h0 - ba.t_lo) / (ba.t_hi - ba.t_lo), zb0 = (h0 - bb.t_lo) / (bb.t_hi - bb.t_lo);
        const double ma0 = scene_measure_below(ms, d.box, pa, za0), mb0 = scene_measure_below(ms, e.box, pb, zb0);
        for (int k = 0; k <= 32; ++k) {
          const double z = h0 + (h1 - h0) * k / 32.0;
          const double za = (z - ba.t_lo) / (ba.t_hi - ba.t_lo), zb = (z - bb.t_lo) / (bb.t_hi - bb.t_lo);
          worst = std::max(worst, std::abs((scene_measure_below(ms, d.box, pa, za) - ma0) -
                                           (scene_measure_below(ms, e.box, pb, zb) - mb0)));
        }
      }
      if (worst > out.defect) out = {worst, counter};
      ++counter;
    }
  return out;
}

MeasuredSmoothing smooth_measured_scene(const MeasuredScene& ms, int subsample_count) {
  const auto report = validate(ms.scene);
  for (const auto& c : report.conditions)
    if (!c.pass) throw Error("scene fails condition (" + std::to_string(c.condition) + "): " + c.witness, "measure");
  const auto before = verify_invariance(ms);
  if (before.defect > 1e-6) throw Error("measure is not invariant (defect " + fmt(before.defect) + ")", "measure");

  MeasuredSmoothing out{ms, {}, {}, before.defect, 0.0, 0.0};

  // Horizontal faces: the measure itself parametrizes the leaf space, so
  // the cumulative over leaf indices carries all of it.
  out.scene.measure.kind = MeasureKind::LeafIndexed;
  const double reparam = verify_invariance(out.scene).defect;
  out.stages.push_back({"horizontal", reparam});

  // Vertical 1-skeleton: one transversal smoothing, with the horizontal
  // box boundaries kept as spline nodes so each box keeps its mass.
  std::vector<double> heights;
  for (const auto& b : ms.scene.boxes) heights.insert(heights.end(), {b.t_lo, b.t_hi});
  out.transversal = smooth_measure_on_transversal(ms.measure.cumulative, subsample_count, heights);
  out.scene.measure.cumulative = out.transversal.g;
  out.stages.push_back({"edges", out.transversal.pushforward_residual});

  // Faces and interiors: holonomy carries leaf indices to leaf indices, so
  // the pushed-forward measure is invariant across faces and inside boxes.
  out.invariance_after = verify_invariance(out.scene).defect;
  out.stages.push_back({"faces", out.invariance_after});
  double mass = 0.0;
  for (const auto& b : ms.scene.boxes) {
    const double expect = ms.measure.cumulative(b.t_hi) - ms.measure.cumulative(b.t_lo);
    const double got = out.scene.measure.cumulative(b.t_hi) - out.scene.measure.cumulative(b.t_lo);
    mass = std::max(mass, std::abs(expect - got));
  }
  out.stages.push_back({"interior", mass});
  for (std::size_t b = 0; b < ms.scene.boxes.size(); ++b) {
    const auto& a = ms.scene.boxes[b].family->values();
    const auto& c = out.scene.scene.boxes[b].family->values();
    for (std::size_t i = 0; i < a.size(); ++i) out.leaf_change = std::max(out.leaf_change, std::abs(a[i] - c[i]));
  }
  if (out.invariance_after > 1e-9)
    throw Error("smoothed measure is not invariant (defect " + fmt(out.invariance_after) + ")", "measure");
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Convergent> convergents(double r, std::int64_t max_denominator) {
  if (!std::isfinite(r)) throw Error("cannot expand a non-finite ratio", "tischler");
  std::vector<Convergent> out;
  std::int64_t p0 = 1, q0 = 0;
  std::int64_t p1 = static_cast<std::int64_t>(std::floor(r)), q1 = 1;
  out.push_back({p1, q1});
  long double x = static_cast<long double>(r) - std::floor(static_cast<long double>(r));
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(static_cast<long double>(r) - static_cast<long double>(p1) / q1) <= 1e-15L * std::max(1.0, std::abs(r)))
      break;
    if (x < 1e-18L) break;
    x = 1.0L / x;
    const auto a = static_cast<std::int64_t>(std::floor(x));
    x -= a;
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    out.push_back({p2, q2});
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
  }
  return out;
}

double kernel_angle(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("forms live on different tori", "tischler");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double cross2 = na * nb - dot * dot;
  // |a x b| computed directly for numerical accuracy.
  if (a.size() == 2) {
    const double c = a[0] * b[1] - a[1] * b[0];
    cross2 = c * c;
  } else if (a.size() == 3) {
    const double c0 = a[1] * b[2] - a[2] * b[1], c1 = a[2] * b[0] - a[0] * b[2], c2 = a[0] * b[1] - a[1] * b[0];
    cross2 = c0 * c0 + c1 * c1 + c2 * c2;
  }
  const double angle = std::atan2(std::sqrt(std::max(0.0, cross2)), dot);
  // Kernels are unoriented: a and -a define the same foliation.
  return std::min(angle, M_PI - angle);
}

namespace {

// Wraps of the other directions until the leaf through a lattice point
// comes back, for the primitive integer form n with lead coefficient q.
std::int64_t closing_period(const std::vector<std::int64_t>& n, std::size_t lead) {
  const std::int64_t q = std::abs(n[lead]);
  std::int64_t period = 1;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (i != lead) period = std::max(period, q / std::gcd(q, std::abs(n[i])));
  return period;
}

}  // namespace

TischlerResult tischler_fibration(const ClosedOneForm& form, double epsilon) {
  const auto& c = form.coefficients;
  if (c.size() != 2 && c.size() != 3) throw Error("closed 1-forms live on T^2 or T^3", "tischler");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive", "tischler");
  for (double v : c)
    if (!std::isfinite(v)) throw Error("form coefficients must be finite", "tischler");
  std::size_t lead = 0;
  while (lead < c.size() && c[lead] == 0.0) ++lead;
  if (lead == c.size()) throw Error("form must not vanish", "tischler");
  std::vector<double> ratio(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) ratio[i] = c[i] / c[lead];

  TischlerResult out;
  out.input = form;
  out.lead = lead;
  auto defect_of = [&](std::int64_t q, const std::vector<std::int64_t>& p) {
    std::vector<double> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = double(p[i]) / double(q);
    return kernel_angle(ratio, v);
  };

  if (c.size() == 2) {
    const std::size_t other = 1 - lead;
    for (const auto& cv : convergents(ratio[other])) {
      out.tried.push_back(cv);
      std::vector<std::int64_t> p(2);
      p[lead] = cv.q;
      p[other] = cv.p;
      const double defect = defect_of(cv.q, p);
      if (defect <= epsilon) {
        out.integer_form = p;
        out.denominator = cv.q;
        out.angle_defect = defect;
        break;
      }
    }
    if (out.integer_form.empty()) throw Error("no convergent meets epsilon " + fmt(epsilon), "tischler");
  } else {
    // Simultaneous approximation: the smallest common denominator that
    // meets the bound.
    for (std::int64_t q = 1; q <= 100'000'000; ++q) {
      std::vector<std::int64_t> p(3);
      for (std::size_t i = 0; i < 3; ++i) p[i] = i == lead ? q : std::llround(ratio[i] * double(q));
      const double defect = defect_of(q, p);
      if (defect <= epsilon) {
        out.integer_form = p;
        out.denominator = q;
        out.angle_defect = defect;
        break;
      }
    }
    if (out.integer_form.empty()) throw Error("no denominator up to 1e8 meets epsilon " + fmt(epsilon), "tischler");
  }
  std::int64_t g = 0;
  for (auto v : out.integer_form) g = std::gcd(g, v < 0 ? -v : v);
  for (auto& v : out.integer_form) v /= g;
  out.denominator /= g;
  out.period = closing_period(out.integer_form, lead);
  return out;
}

ClosedLeafCertificate verify_closed_leaves(const TischlerResult& result, int grid) {
  if (grid < 1) throw Error("grid must be positive", "tischler");
  const auto& n = result.integer_form;
  const std::size_t lead = result.lead;
  const std::int64_t q = std::abs(n[lead]);
  const std::int64_t modulus = std::int64_t(grid) * q;
  ClosedLeafCertificate cert{true, 0, 0};
  // One wrap around direction i moves the lead coordinate by -n_i / n_lead.
  // Lead positions i/grid are kept as integers in units of 1/(grid q).
  for (std::size_t other = 0; other < n.size(); ++other) {
    if (other == lead) continue;
    const std::int64_t step = ((std::int64_t(grid) * n[other]) % modulus + modulus) % modulus;
    std::int64_t period = 0;
    for (int i = 0; i < grid; ++i) {
      const std::int64_t start = std::int64_t(i) * q;
      std::int64_t pos = start;
      std::int64_t wraps = 0;
      do {
        pos = ((pos - step) % modulus + modulus) % modulus;
        ++wraps;
      } while (pos != start && wraps <= q);
      ++cert.points_checked;
      if (pos != start || (period != 0 && wraps != period)) cert.closes = false;
      period = wraps;
    }
    cert.period = std::max(cert.period, period);
  }
  if (cert.period != result.period) cert.closes = false;
  return cert;
}

}  // namespace foliate
