#include "foliate/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace foliate {

namespace {

constexpr double kHolonomyTol = 1e-6;

inline double mix(double a, double b, double w) {
  if (w == 0.0 || a == b) return a;
  if (w == 1.0) return b;
  return (1.0 - w) * a + w * b;
}

double step_slope_max() {
  static const double m = [] {
    double best = 0.0;
    for (int i = 1; i < 4096; ++i) best = std::max(best, smooth_step_prime(i / 4096.0));
    return best;
  }();
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<bool> node_mask(const BaseDomain& base, const std::function<bool(Point2)>& keep) {
  std::vector<bool> mask(base.nodes());
  for (std::size_t n = 0; n < base.nodes(); ++n) mask[n] = keep(base.point(n));
  return mask;
}

void require_square_base(const LeafFamily& f, const char* stage) {
  if (f.base().periodic_x || f.base().periodic_y)
    throw Error("operation needs a non-periodic base", stage);
}

}  // namespace

// ---------------------------------------------------------------------------

RegionMask RegionMask::around(Point2 c, double r, double R) {
  auto clip = [](double v) { return std::clamp(v, 0.0, 1.0); };
  RegionMask m{{clip(c.x - r), clip(c.x + r), clip(c.y - r), clip(c.y + r)},
               {clip(c.x - R), clip(c.x + R), clip(c.y - R), clip(c.y + R)}};
  m.validate();
  return m;
}

void RegionMask::validate() const {
  auto side_ok = [](double inner, double outer, double edge) {
    return (inner != outer) || outer == edge;
  };
  const bool nested = 0.0 <= nbhd.x0 && nbhd.x0 <= core.x0 && core.x0 < core.x1 && core.x1 <= nbhd.x1 &&
                      nbhd.x1 <= 1.0 && 0.0 <= nbhd.y0 && nbhd.y0 <= core.y0 && core.y0 < core.y1 &&
                      core.y1 <= nbhd.y1 && nbhd.y1 <= 1.0;
  if (!nested) throw Error("region core must lie inside its neighborhood", "region");
  if (!side_ok(core.x0, nbhd.x0, 0.0) || !side_ok(core.x1, nbhd.x1, 1.0) ||
      !side_ok(core.y0, nbhd.y0, 0.0) || !side_ok(core.y1, nbhd.y1, 1.0))
    throw Error("region core touches the boundary of its neighborhood inside the domain", "region");
}

namespace {

double rise(double v, double outer, double inner) {
  if (inner > outer) return damped_ramp(v, outer, inner);
  return v >= outer ? 1.0 : 0.0;
}

double fall(double v, double inner, double outer) {
  if (outer > inner) return 1.0 - damped_ramp(v, inner, outer);
  return v <= outer ? 1.0 : 0.0;
}

}  // namespace

double RegionMask::weight(Point2 p) const {
  if (!nbhd.contains(p)) return 0.0;
  const double wx = rise(p.x, nbhd.x0, core.x0) * fall(p.x, core.x1, nbhd.x1);
  const double wy = rise(p.y, nbhd.y0, core.y0) * fall(p.y, core.y1, nbhd.y1);
  return wx * wy;
}

double RegionMask::max_slope() const {
  double width = 1.0;
  for (double w : {core.x0 - nbhd.x0, nbhd.x1 - core.x1, core.y0 - nbhd.y0, nbhd.y1 - core.y1})
    if (w > 0.0) width = std::min(width, w);
  return step_slope_max() / width;
}

void BandMask::validate() const {
  if (!(0.0 < j0 && j0 < j1 && j1 < 1.0))
    throw Error("bands must be neighborhoods of y = 0 and y = 1 with 0 < j0 < j1 < 1", "bands");
}

double BandMask::weight(double y) const {
  if (in_band(y)) return 0.0;
  const double m = margin();
  return damped_ramp(y, j0, j0 + m) * (1.0 - damped_ramp(y, j1 - m, j1));
}

double CollarSpec::weight(Point2 p) const {
  const double d = std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
  return 1.0 - damped_ramp(d, inner, outer);
}

// ---------------------------------------------------------------------------

SmoothInT smooth_in_t(const LeafFamily& family, double epsilon, const std::vector<double>& fixed_leaves) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive", "smooth_in_t");
  const auto& t = family.t_samples();
  std::vector<double> fixed;
  for (double v : fixed_leaves) {
    auto it = std::lower_bound(t.begin(), t.end(), v - 1e-12);
    if (it == t.end() || std::abs(*it - v) > 1e-12)
      throw Error("fixed leaf " + fmt(v) + " is not a sampled leaf", "smooth_in_t");
    fixed.push_back(*it);
  }
  const std::size_t n = family.base().nodes();
  double inner = epsilon;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt, inner *= 0.5) {
    Partition chosen = choose_partition(family, inner);
    std::vector<double> cuts = chosen.cuts();
    cuts.insert(cuts.end(), fixed.begin(), fixed.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Partition part(cuts);

    std::vector<double> values(t.size() * n);
    std::vector<std::size_t> cell(t.size());
    std::vector<double> clock(t.size()), weight(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::size_t i = part.cell_of(t[k]);
      const double ta = cuts[i], tb = cuts[i + 1];
      const std::size_t a = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), ta) - t.begin());
      const std::size_t b = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), tb) - t.begin());
      const double lambda = (t[k] - ta) / (tb - ta);
      const double sigma = lambda <= 0.0 ? 0.0 : lambda >= 1.0 ? 1.0 : smooth_step_inverse(lambda);
      const double w = smooth_step(sigma);
      cell[k] = i;
      clock[k] = ta + sigma * (tb - ta);
      weight[k] = w;
      for (std::size_t node = 0; node < n; ++node)
        values[k * n + node] = mix(family.value(a, node), family.value(b, node), w);
    }
    LeafFamily out = LeafFamily::from_leaves(family.base(), std::move(values), family.anchor());
    const double achieved = c0_distance(family, out);
    if (achieved <= epsilon)
      return {std::move(out), std::move(part), std::move(cell), std::move(clock), std::move(weight), achieved,
              attempt};
  }
  throw Error("smoothing stayed above epsilon " + fmt(epsilon) + " after retries", "smooth_in_t");
}

// ---------------------------------------------------------------------------

IsotopyTrace local_damped_replace(const LeafFamily& family, const std::vector<double>& target,
                                  const RegionMask& region, const DampingProfile& damping, int slices) {
  require_square_base(family, "local_damped_replace");
  region.validate();
  if (slices < 2) throw Error("an isotopy trace needs at least two slices", "local_damped_replace");
  const auto& base = family.base();
  const std::size_t n = base.nodes();
  const std::size_t leaves = family.leaf_count();
  if (target.size() != leaves * n)
    throw Error("target grid does not match the family", "local_damped_replace");

  std::vector<double> w(n);
  for (std::size_t node = 0; node < n; ++node) w[node] = region.weight(base.point(node));
  const auto in_nbhd = node_mask(base, [&](Point2 p) { return region.nbhd.contains(p); });
  const auto in_core = node_mask(base, [&](Point2 p) { return region.core.contains(p); });

  IsotopyTrace trace;
  for (std::size_t node = 0; node < n; ++node) {
    if (!in_nbhd[node]) continue;
    for (std::size_t k = 1; k < leaves; ++k)
      if (!(target[(k - 1) * n + node] < target[k * n + node]))
        throw Error("target is not monotone over N(S) at node " + std::to_string(node), "local_damped_replace");
    if (std::abs(target[node]) > 1e-12 || std::abs(target[(leaves - 1) * n + node] - 1.0) > 1e-12)
      throw Error("target boundary leaves are not 0 and 1 over N(S)", "local_damped_replace");
    for (std::size_t k = 0; k < leaves; ++k)
      trace.max_value_gap = std::max(trace.max_value_gap, std::abs(target[k * n + node] - family.value(k, node)));
  }

  for (int q = 0; q < slices; ++q) {
    const double s = double(q) / (slices - 1);
    std::vector<double> values(leaves * n);
    for (std::size_t k = 0; k < leaves; ++k)
      for (std::size_t node = 0; node < n; ++node)
        values[k * n + node] = mix(family.value(k, node), target[k * n + node], s * w[node]);
    trace.s.push_back(s);
    trace.slices.push_back(LeafFamily::from_leaves(base, std::move(values), family.anchor()));
    trace.max_c0_to_input = std::max(trace.max_c0_to_input, c0_distance(trace.slices.back(), family));
  }
  trace.target_c0 = c0_distance(family, trace.slices.back(), in_core);
  trace.max_weight_slope = damping.max_slope() / step_slope_max() * region.max_slope();
  return trace;
}

IsotopyTrace local_damped_replace(const LeafFamily& family, const LeafFamily& target, const RegionMask& region,
                                  const DampingProfile& damping, int slices) {
  if (!(family.base() == target.base()) || family.leaf_count() != target.leaf_count())
    throw Error("families must share base grid and leaf count", "local_damped_replace");
  return local_damped_replace(family, target.values(), region, damping, slices);
}

// ---------------------------------------------------------------------------

HolonomyMap fiber_correspondence(const LeafFamily& f, const LeafFamily& g, std::size_t node) {
  const auto& base = f.base();
  const Point2 a = base.point(f.anchor_node());
  const Point2 p = base.point(node);
  const auto rf = holonomy(f, a, p);
  const auto rg = holonomy(g, a, p);
  return rg.inverse().compose(rf);
}

Straightening straightening_isotopy(const LeafFamily& f, const LeafFamily& g, const RegionMask& region,
                                    int slices) {
  require_square_base(f, "straightening");
  region.validate();
  if (!(f.base() == g.base()) || f.leaf_count() != g.leaf_count())
    throw Error("families must share base grid and leaf count", "straightening");
  const Rect& c = region.core;
  const Point2 from{c.x0, c.y0};
  double defect = 0.0;
  for (Point2 to : {Point2{c.x1, c.y0}, Point2{c.x0, c.y1}, Point2{c.x1, c.y1}})
    defect = std::max(defect, holonomy(f, from, to).distance(holonomy(g, from, to)));
  if (defect > kHolonomyTol)
    throw HolonomyMismatch("holonomy of the two families disagrees by " + fmt(defect), defect);

  Straightening out{local_damped_replace(f, g, region, make_damping(3, 256), slices), defect, 0.0};
  const auto& base = f.base();
  for (std::size_t node = 0; node < base.nodes(); ++node) {
    if (!c.contains(base.point(node))) continue;
    const auto h = fiber_correspondence(f, g, node);
    for (std::size_t k = 0; k < f.leaf_count(); ++k)
      out.correspondence_residual =
          std::max(out.correspondence_residual, std::abs(h(f.value(k, node)) - g.value(k, node)));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ConstrainedBlend {
  LeafFamily family;
  LeafFamily smoothed;
  HolonomyMap correction;
  std::vector<double> tau;
  double holonomy_defect;
  double formula_residual;
};

// S = (1 - m) P + m R;  G = l S_t + (1 - l) S_{tau(t)} where S_{tau(t)} is the
// S-leaf through the point of P_t over the end of alpha.
ConstrainedBlend constrained_blend(const LeafFamily& p, const LeafFamily& r,
                                   const std::function<double(Point2)>& m,
                                   const std::function<double(Point2)>& l, Point2 a0, Point2 a1) {
  const auto& base = p.base();
  const std::size_t n = base.nodes();
  const std::size_t leaves = p.leaf_count();
  std::vector<double> mw(n), lw(n);
  for (std::size_t node = 0; node < n; ++node) {
    mw[node] = m(base.point(node));
    lw[node] = l(base.point(node));
  }
  std::vector<double> sv(leaves * n);
  for (std::size_t k = 0; k < leaves; ++k)
    for (std::size_t node = 0; node < n; ++node)
      sv[k * n + node] = mix(p.value(k, node), r.value(k, node), mw[node]);
  LeafFamily s = LeafFamily::from_leaves(base, std::move(sv), p.anchor());

  const BasePath alpha = BasePath::segment(base, a0, a1);
  const HolonomyMap rho_p = holonomy(p, alpha);
  const HolonomyMap rho_s = holonomy(s, alpha);
  HolonomyMap h = rho_s.compose(rho_p.inverse());

  std::vector<double> tau(leaves);
  for (std::size_t k = 0; k < leaves; ++k) tau[k] = s.leaf_through(a1, p.sample_at(k, a1));

  auto formula = [&](std::size_t k, std::size_t node) {
    return mix(s.eval(tau[k], node), s.value(k, node), lw[node]);
  };
  std::vector<double> gv(leaves * n);
  for (std::size_t k = 0; k < leaves; ++k)
    for (std::size_t node = 0; node < n; ++node) gv[k * n + node] = formula(k, node);
  LeafFamily g = LeafFamily::from_leaves(base, std::move(gv), p.anchor());

  double residual = 0.0;
  for (std::size_t k = 0; k < leaves; ++k)
    for (std::size_t node = 0; node < n; ++node)
      residual = std::max(residual, std::abs(g.value(k, node) - formula(k, node)));
  const double defect = holonomy(g, alpha).distance(rho_p);
  return {std::move(g), std::move(s), std::move(h), std::move(tau), defect, residual};
}

}  // namespace

HolonomySmoothing smooth_with_holonomy_constraint(const LeafFamily& p, const BandMask& bands, double epsilon) {
  if (p.base().shape != BaseShape::Rectangle)
    throw Error("holonomy-constrained smoothing needs a rectangle base", "holonomy_constraint");
  bands.validate();
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive", "holonomy_constraint");
  const Point2 a0{0.5, 0.0}, a1{0.5, 1.0};
  auto weight = [&](Point2 q) { return bands.weight(q.y); };
  double inner = epsilon;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt, inner *= 0.5) {
    const SmoothInT r = smooth_in_t(p, inner);
    auto blend = constrained_blend(p, r.family, weight, weight, a0, a1);
    const double achieved = c0_distance(p, blend.family);
    if (achieved <= epsilon)
      return {std::move(blend.family), std::move(blend.smoothed), std::move(blend.correction),
              std::move(blend.tau), blend.holonomy_defect, blend.formula_residual, achieved, inner, attempt};
  }
  throw Error("holonomy-constrained smoothing stayed above epsilon " + fmt(epsilon), "holonomy_constraint");
}

// ---------------------------------------------------------------------------

ConeResult damped_cone(const LeafFamily& annular, const LeafFamily& disk, const CollarSpec& collar,
                       double epsilon) {
  require_square_base(disk, "damped_cone");
  if (!(annular.base() == disk.base()) || annular.leaf_count() != disk.leaf_count())
    throw Error("annular and disk families must share the disk grid and leaf count", "damped_cone");
  if (!(0.0 < collar.inner && collar.inner < collar.outer && collar.outer < 0.5))
    throw Error("collar widths must satisfy 0 < inner < outer < 1/2", "damped_cone");

  const double c = 0.5 * collar.inner;
  const Point2 q0{c, c}, q1{1 - c, c}, q2{1 - c, 1 - c}, q3{c, 1 - c};
  const HolonomyMap loop = holonomy(annular, q0, q1)
                               .compose(holonomy(annular, q1, q2))
                               .compose(holonomy(annular, q2, q3))
                               .compose(holonomy(annular, q3, q0));
  const double loop_defect = loop.distance(HolonomyMap::identity());
  if (loop_defect > kHolonomyTol)
    throw HolonomyMismatch("collar holonomy is not trivial (defect " + fmt(loop_defect) + ")", loop_defect,
                           "damped_cone");

  const SmoothInT d = smooth_in_t(disk, epsilon);
  const auto& base = disk.base();
  const std::size_t n = base.nodes();
  std::vector<double> values(disk.leaf_count() * n);
  for (std::size_t node = 0; node < n; ++node) {
    const double w = collar.weight(base.point(node));
    for (std::size_t k = 0; k < disk.leaf_count(); ++k)
      values[k * n + node] = mix(d.family.value(k, node), annular.value(k, node), w);
  }
  LeafFamily out = LeafFamily::from_leaves(base, std::move(values), disk.anchor());
  const double dist = c0_distance(out, disk);
  return {std::move(out), d.achieved, dist, loop_defect};
}

LeafFamily x_invariant_normalize(const LeafFamily& family) {
  const auto& base = family.base();
  if (base.shape != BaseShape::Annulus) throw Error("x-invariant normalization needs the annulus base", "normalize");
  const std::size_t n = base.nodes();
  const int ia = family.anchor().i;
  std::vector<double> values(family.leaf_count() * n);
  for (std::size_t k = 0; k < family.leaf_count(); ++k)
    for (int j = 0; j < base.ny; ++j) {
      const double v = family.value(k, base.node(ia, j));
      for (int i = 0; i < base.nx; ++i) values[k * n + base.node(i, j)] = v;
    }
  return LeafFamily::from_leaves(base, std::move(values), family.anchor());
}

HolonomyMap core_circle_holonomy(const LeafFamily& family, double x) {
  return holonomy(family, Point2{x, 0.0}, Point2{x, 1.0});
}

// ---------------------------------------------------------------------------

namespace {

struct SideFrame {
  Side side;
  // Point on the side at along-coordinate u and distance d into the box.
  Point2 at(double u, double d) const {
    switch (side) {
      case Side::West: return {d, u};
      case Side::East: return {1.0 - d, u};
      case Side::South: return {u, d};
      default: return {u, 1.0 - d};
    }
  }
  double along(Point2 p) const { return side == Side::West || side == Side::East ? p.y : p.x; }
  double depth(Point2 p) const {
    switch (side) {
      case Side::West: return p.x;
      case Side::East: return 1.0 - p.x;
      case Side::South: return p.y;
      default: return 1.0 - p.y;
    }
  }
};

Point2 local_on_face(const FlowBoxSpec& b, Side side, double along_global) {
  const double u = side == Side::West || side == Side::East ? (along_global - b.rect.y0) / (b.rect.y1 - b.rect.y0)
                                                            : (along_global - b.rect.x0) / (b.rect.x1 - b.rect.x0);
  switch (side) {
    case Side::West: return {0.0, u};
    case Side::East: return {1.0, u};
    case Side::South: return {u, 0.0};
    default: return {u, 1.0};
  }
}

double global_map(const FlowBoxSpec& b, const HolonomyMap& h, double z) {
  const double span = b.t_hi - b.t_lo;
  return b.t_lo + span * h((z - b.t_lo) / span);
}

}  // namespace

FaceCompatibility face_compatibility(const DecompositionComplex& scene) {
  FaceCompatibility out;
  const auto faces = geometric_faces(scene);
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      const auto& d = faces[i];
      const auto& e = faces[j];
      if (d.box == e.box || d.axis == 2 || d.axis != e.axis) continue;
      if (std::abs(d.line - e.line) > 1e-12) continue;
      const double s0 = std::max(d.s0, e.s0), s1 = std::min(d.s1, e.s1);
      const double h0 = std::max(d.h0, e.h0), h1 = std::min(d.h1, e.h1);
      if (s1 - s0 <= 1e-12 || h1 - h0 <= 1e-12) continue;
      const auto& ba = scene.boxes[d.box];
      const auto& bb = scene.boxes[e.box];
      if (!ba.family || !bb.family) throw Error("box without a leaf family", "face_compatibility");
      const double z0 = std::max(ba.t_lo, bb.t_lo), z1 = std::min(ba.t_hi, bb.t_hi);
      double worst = 0.0;
      for (int q = 1; q <= 8; ++q) {
        const double s = s0 + (s1 - s0) * q / 8.0;
        const auto ra = holonomy(*ba.family, local_on_face(ba, d.side, s0), local_on_face(ba, d.side, s));
        const auto rb = holonomy(*bb.family, local_on_face(bb, e.side, s0), local_on_face(bb, e.side, s));
        for (int k = 0; k <= 32; ++k) {
          const double z = z0 + (z1 - z0) * k / 32.0;
          worst = std::max(worst, std::abs(global_map(ba, ra, z) - global_map(bb, rb, z)));
        }
      }
      if (worst >= out.defect) {
        out.defect = worst;
        out.witness = d.label(scene) + " / " + e.label(scene);
      }
    }
  return out;
}

namespace {

constexpr double kCornerCore = 0.125;
constexpr double kCornerNbhd = 0.25;
constexpr double kStrip = 0.125;

struct BoxPipeline {
  LeafFamily family;
  std::vector<StageReport> stages;
};

BoxPipeline smooth_box(const FlowBoxSpec& box, double inner) {
  const LeafFamily& p0 = *box.family;
  std::vector<StageReport> stages;
  const SmoothInT r = smooth_in_t(p0, inner);
  const auto damping = make_damping(3, 256);

  LeafFamily p1 = p0;
  for (Point2 c : {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}, Point2{1, 1}}) {
    const auto region = RegionMask::around(c, kCornerCore, kCornerNbhd);
    auto trace = local_damped_replace(p1, r.family, region, damping, 2);
    p1 = trace.output();
    stages.push_back({"edges", box.id + " corner (" + fmt(c.x) + "," + fmt(c.y) + ")", c0_distance(p0, p1), 0.0,
                      r.retries});
  }

  LeafFamily p2 = p1;
  for (Side side : {Side::West, Side::East, Side::South, Side::North}) {
    const SideFrame frame{side};
    auto strip = [&](Point2 q) { return 1.0 - damped_ramp(frame.depth(q), kStrip, 2 * kStrip); };
    const BandMask bands{kCornerCore, 1.0 - kCornerCore};
    auto l = [&](Point2 q) { return strip(q) * bands.weight(frame.along(q)); };
    auto blend = constrained_blend(p2, r.family, strip, l, frame.at(0.0, 0.0), frame.at(1.0, 0.0));
    p2 = std::move(blend.family);
    stages.push_back({"faces", box.id + " " + to_string(side), c0_distance(p0, p2), blend.holonomy_defect, r.retries});
  }

  auto cone = damped_cone(p2, p0, CollarSpec{kStrip, 2 * kStrip}, inner);
  stages.push_back({"interior", box.id, cone.c0_to_input, cone.collar_holonomy_defect, r.retries});
  return {std::move(cone.family), std::move(stages)};
}

}  // namespace

GlobalSmoothing globally_smooth(const DecompositionComplex& scene, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive", "globally_smooth");
  const auto report = validate(scene);
  for (const auto& c : report.conditions)
    if (!c.pass)
      throw Error("scene fails condition (" + std::to_string(c.condition) + "): " + c.witness, "globally_smooth");
  for (const auto& b : scene.boxes)
    if (!b.family) throw Error("box " + b.id + " has no leaf family", "globally_smooth");
  const auto before = face_compatibility(scene);
  if (before.defect > kHolonomyTol)
    throw Error("input faces are incompatible (" + fmt(before.defect) + "): " + before.witness, "globally_smooth");

  double inner = epsilon;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt, inner *= 0.5) {
    GlobalSmoothing out{scene, {}, {}, 0.0, 0.0, inner, attempt};
    for (auto& box : out.scene.boxes) {
      BoxPipeline result = [&] {
        try {
          return smooth_box(box, inner);
        } catch (const Error& e) {
          throw Error("box " + box.id + ": " + e.what(), e.stage().empty() ? "globally_smooth" : e.stage());
        }
      }();
      const double d = c0_distance(*box.family, result.family);
      out.box_c0.push_back(d);
      out.max_c0 = std::max(out.max_c0, d);
      for (auto& s : result.stages) out.stages.push_back(std::move(s));
      box.family = std::move(result.family);
    }
    if (out.max_c0 > epsilon) continue;
    const auto after = face_compatibility(out.scene);
    out.face_defect = after.defect;
    if (after.defect > kHolonomyTol)
      throw Error("output faces are incompatible (" + fmt(after.defect) + "): " + after.witness, "globally_smooth");
    return out;
  }
  throw Error("global smoothing stayed above epsilon " + fmt(epsilon) + " after retries", "globally_smooth");
}

}  // namespace foliate
