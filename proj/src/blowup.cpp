#include "foliate/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "foliate/families.hpp"
#include "foliate/smoothing.hpp"

namespace foliate {

namespace {

constexpr double kPointTol = 1e-12;
constexpr double kDerivativeTol = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

FiberCollapse::FiberCollapse(const InsertionSchedule& schedule, const std::vector<double>& fixed) {
  std::vector<double> cuts{0.0, 1.0};
  for (double f : fixed) {
    if (!(f > 0.0 && f < 1.0)) continue;
    for (const auto& e : schedule.entries())
      if (std::abs(e.point - f) <= kPointTol)
        throw Error("fixed leaf " + fmt(f) + " coincides with a blowup point", "blowup");
    cuts.push_back(f);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts_ = cuts;
  maps_.clear();
  for (std::size_t s = 0; s + 1 < cuts_.size(); ++s) {
    const double a = cuts_[s], b = cuts_[s + 1], len = b - a;
    std::vector<InsertionEntry> local;
    for (const auto& e : schedule.entries())
      if (e.point > a && e.point < b) local.push_back({(e.point - a) / len, e.weight / len});
    CollapseMap map(InsertionSchedule(std::move(local)));
    for (const auto& iv : map.intervals()) {
      const double point = a + len * iv.point;
      const auto it = std::min_element(schedule.entries().begin(), schedule.entries().end(),
                                       [&](const InsertionEntry& x, const InsertionEntry& y) {
                                         return std::abs(x.point - point) < std::abs(y.point - point);
                                       });
      gaps_.push_back({a + len * iv.lo, a + len * iv.hi, it->point, it->weight});
    }
    maps_.push_back(std::move(map));
  }
}

double FiberCollapse::operator()(double z) const {
  z = std::clamp(z - shift_, 0.0, 1.0);
  if (gaps_.empty()) return z;
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), z);
  std::size_t s = it == cuts_.begin() ? 0 : std::size_t(it - cuts_.begin()) - 1;
  s = std::min(s, maps_.size() - 1);
  const double a = cuts_[s], len = cuts_[s + 1] - a;
  if (maps_[s].is_identity()) return z;
  return a + len * maps_[s]((z - a) / len);
}

double FiberCollapse::embed(double y) const {
  if (gaps_.empty()) return y;
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), y);
  std::size_t s = it == cuts_.begin() ? 0 : std::size_t(it - cuts_.begin()) - 1;
  s = std::min(s, maps_.size() - 1);
  const double a = cuts_[s], len = cuts_[s + 1] - a;
  if (maps_[s].is_identity()) return y + shift_;
  const double local = maps_[s].embed((y - a) / len);
  return (local >= 1.0 ? cuts_[s + 1] : a + len * local) + shift_;
}

void FiberCollapse::shift_gaps(double offset) {
  shift_ += offset;
  for (auto& g : gaps_) {
    g.lo += offset;
    g.hi += offset;
  }
}

CollapseData CollapseData::identity(const BaseDomain& base) {
  return {base, std::vector<FiberCollapse>(base.nodes())};
}

double CollapseData::pi_t(std::size_t node, double z, double t) const {
  if (t == 0.0) return z;
  const double p = pi(node, z);
  if (t == 1.0) return p;
  return (1.0 - t) * z + t * p;
}

double CollapseData::inject(std::size_t node, std::size_t gap, double sigma) const {
  const auto& g = fibers.at(node).gaps().at(gap);
  if (sigma == 1.0) return g.hi;
  return g.lo + (g.hi - g.lo) * sigma;
}

bool is_horizontal(const LeafFamily& family, double tol) {
  const std::size_t n = family.base().nodes();
  for (std::size_t k = 0; k < family.leaf_count(); ++k) {
    const auto leaf = family.leaf(k);
    const auto [lo, hi] = std::minmax_element(leaf.begin(), leaf.begin() + n);
    if (*hi - *lo > tol) return false;
  }
  return true;
}

BlownBox blowup_box(const LeafFamily& family, const InsertionSchedule& schedule, const InsertedPacket& packets,
                    const std::vector<double>& fixed_leaves) {
  if (!is_horizontal(family)) throw Error("blowup_box needs a strictly horizontal family", "blowup");
  if (packets.leaves.size() != schedule.size())
    throw Error("packet count " + std::to_string(packets.leaves.size()) + " does not match schedule length " +
                    std::to_string(schedule.size()),
                "blowup");
  const auto& base = family.base();
  const std::size_t n = base.nodes();
  for (const auto& p : packets.leaves) {
    if (!(p.base() == base)) throw Error("packet grid differs from the box grid", "blowup");
    const std::size_t last = p.leaf_count() - 1;
    for (std::size_t node = 0; node < n; ++node)
      if (p.value(0, node) != 0.0 || p.value(last, node) != 1.0)
        throw Error("packet boundary leaves must be the gap boundary", "blowup");
  }

  const FiberCollapse fiber(schedule, fixed_leaves);
  const auto& gaps = fiber.gaps();
  const auto& t = family.t_samples();

  std::vector<double> values;
  std::vector<LeafOrigin> origin;
  auto push_constant = [&](double v, LeafOrigin o) {
    values.insert(values.end(), n, v);
    origin.push_back(o);
  };
  auto push_packet = [&](std::size_t i) {
    const auto& p = packets.leaves[i];
    const double lo = gaps[i].lo, hi = gaps[i].hi;
    for (std::size_t m = 0; m < p.leaf_count(); ++m) {
      for (std::size_t node = 0; node < n; ++node) {
        const double s = p.value(m, node);
        values.push_back(s == 1.0 ? hi : lo + (hi - lo) * s);
      }
      origin.push_back({int(i), m});
    }
  };

  std::size_t next_gap = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    while (next_gap < gaps.size() && gaps[next_gap].point <= t[k] + kPointTol) {
      push_packet(next_gap++);
    }
    bool blown = false;
    for (const auto& g : gaps) blown = blown || std::abs(g.point - t[k]) <= kPointTol;
    if (!blown) push_constant(fiber.embed(t[k]), {-1, k});
  }
  while (next_gap < gaps.size()) push_packet(next_gap++);

  LeafFamily out = LeafFamily::from_leaves(base, std::move(values), family.anchor());
  return {std::move(out), CollapseData{base, std::vector<FiberCollapse>(n, fiber)}, std::move(origin)};
}

// ---------------------------------------------------------------------------

bool BlowupReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyCheck& c) { return c.pass; });
}

namespace {

struct Worst {
  double defect = 0.0;
  std::string witness;
  void note(double d, const std::string& w) {
    if (d > defect) {
      defect = d;
      witness = w;
    }
  }
};

}  // namespace

BlowupReport verify_blowup(const LeafFamily& original, const BlownBox& blown, double tol) {
  const LeafFamily& f = blown.family;
  const CollapseData& data = blown.collapse;
  const auto& base = f.base();
  const std::size_t n = base.nodes();
  BlowupReport report;
  auto record = [&](int p, const Worst& w, double limit) {
    report.properties.push_back({p, w.defect <= limit, w.defect, w.defect <= limit ? "" : w.witness});
  };
  auto at = [](std::size_t node) { return " at node " + std::to_string(node); };

  // (1) transversality
  {
    Worst w;
    for (std::size_t node = 0; node < n; ++node)
      if (!f.strictly_monotone_at(node)) w.note(1.0, "leaves not strictly increasing" + at(node));
    record(1, w, tol);
  }
  // (2) j injective, j(L x (0,1)) = U holds the packet leaves
  {
    Worst w;
    for (std::size_t node = 0; node < n; ++node) {
      const auto& gaps = data.fibers[node].gaps();
      for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (!(gaps[i].lo < gaps[i].hi)) w.note(1.0, "empty gap " + std::to_string(i) + at(node));
        if (i > 0 && !(gaps[i - 1].hi < gaps[i].lo)) w.note(1.0, "gaps overlap" + at(node));
        double prev = -1.0;
        for (int q = 0; q <= 32; ++q) {
          const double v = data.inject(node, i, q / 32.0);
          if (!(v > prev)) w.note(1.0, "j not injective on gap " + std::to_string(i) + at(node));
          prev = v;
        }
      }
      for (std::size_t k = 0; k < f.leaf_count(); ++k) {
        const auto& o = blown.origin[k];
        if (o.packet < 0) continue;
        const auto& g = gaps.at(std::size_t(o.packet));
        const double v = f.value(k, node);
        w.note(std::max(g.lo - v, v - g.hi), "packet leaf " + std::to_string(k) + " leaves its gap" + at(node));
      }
    }
    record(2, w, tol);
  }
  // (3) j({p} x I) lies in the fiber over p
  {
    Worst w;
    for (std::size_t node = 0; node < n; ++node)
      for (std::size_t i = 0; i < data.fibers[node].gaps().size(); ++i) {
        const double a = data.inject(node, i, 0.0), b = data.inject(node, i, 1.0);
        w.note(std::max({-a, b - 1.0, 0.0}), "j leaves the fiber" + at(node));
      }
    record(3, w, tol);
  }
  // (4) boundary graphs of the packets are leaves
  {
    Worst w;
    const std::size_t gaps = data.gap_count();
    for (std::size_t i = 0; i < gaps; ++i)
      for (int end = 0; end < 2; ++end) {
        double lo = 2.0, hi = -1.0;
        for (std::size_t node = 0; node < n; ++node) {
          const double z = data.inject(node, i, end);
          const double leaf = f.leaf_through(node, z);
          lo = std::min(lo, leaf);
          hi = std::max(hi, leaf);
        }
        w.note(hi - lo, std::string(end ? "top" : "bottom") + " of gap " + std::to_string(i) + " is not a leaf");
      }
    record(4, w, tol);
  }
  // (5) point preimages off L, the j-interval over L
  {
    Worst w;
    for (std::size_t node = 0; node < n; ++node) {
      const auto& fc = data.fibers[node];
      for (std::size_t i = 0; i < fc.gaps().size(); ++i) {
        const auto& g = fc.gaps()[i];
        for (int q = 0; q <= 16; ++q)
          w.note(std::abs(fc(data.inject(node, i, q / 16.0)) - g.point),
                 "gap " + std::to_string(i) + " not collapsed to its leaf" + at(node));
        const double eta = 1e-6;
        if (!(fc(g.lo - eta) < g.point && g.point < fc(g.hi + eta)))
          w.note(1.0, "collapse of gap " + std::to_string(i) + " extends past the gap" + at(node));
      }
      for (int q = 0; q <= 256; ++q) {
        const double y = q / 256.0;
        bool on_locus = false;
        for (const auto& g : fc.gaps()) on_locus = on_locus || std::abs(g.point - y) <= kPointTol;
        if (on_locus) continue;
        w.note(std::abs(fc(fc.embed(y)) - y), "preimage of " + fmt(y) + " is not a point" + at(node));
        if (q > 0) {
          const double prev = (q - 1) / 256.0;
          bool straddles = false;
          for (const auto& g : fc.gaps()) straddles = straddles || (g.point >= prev && g.point <= y);
          if (!straddles && !(fc.embed(prev) < fc.embed(y)))
            w.note(1.0, "collapse not injective off the locus" + at(node));
        }
      }
    }
    record(5, w, tol);
  }
  // (6) pi maps leaves to leaves
  std::vector<std::vector<double>> image(f.leaf_count(), std::vector<double>(n));
  {
    Worst w;
    for (std::size_t k = 0; k < f.leaf_count(); ++k) {
      double lo = 2.0, hi = -1.0;
      std::size_t lo_node = 0, hi_node = 0;
      for (std::size_t node = 0; node < n; ++node) {
        image[k][node] = data.pi(node, f.value(k, node));
        const double leaf = original.leaf_through(node, image[k][node]);
        if (leaf < lo) lo = leaf, lo_node = node;
        if (leaf > hi) hi = leaf, hi_node = node;
      }
      w.note(hi - lo, "leaf " + std::to_string(k) + " maps across original leaves between nodes " +
                          std::to_string(lo_node) + " and " + std::to_string(hi_node));
    }
    report.max_leaf_defect = w.defect;
    record(6, w, tol);
  }
  // (7) leafwise derivative of pi stable under halving the spacing
  {
    Worst w;
    const double h = base.dx();
    for (std::size_t k = 0; k < f.leaf_count(); ++k)
      for (int j = 0; j < base.ny; ++j)
        for (int i = 1; i + 1 < base.nx; ++i) {
          if (i < 2 && !base.periodic_x) continue;
          if (i + 2 >= base.nx && !base.periodic_x) continue;
          auto q = [&](int ii) { return image[k][base.node((ii + base.nx) % base.nx, j)]; };
          const double d1 = (q(i + 1) - q(i - 1)) / (2 * h);
          const double d2 = (q(i + 2) - q(i - 2)) / (4 * h);
          w.note(std::abs(d1 - d2), "derivative of pi unstable on leaf " + std::to_string(k) + at(base.node(i, j)));
        }
    record(7, w, kDerivativeTol);
  }
  // (8) pi_t: straight-line isotopy from the identity to pi
  {
    Worst w;
    for (std::size_t node = 0; node < n; ++node) {
      for (int q = 0; q <= 64; ++q) {
        const double z = q / 64.0;
        if (data.pi_t(node, z, 0.0) != z) w.note(1.0, "pi_0 is not the identity" + at(node));
        if (data.pi_t(node, z, 1.0) != data.pi(node, z)) w.note(1.0, "pi_1 differs from pi" + at(node));
      }
      for (int s = 0; s <= 10; ++s) {
        const double t = s / 10.0;
        double prev = -1.0;
        for (int q = 0; q <= 256; ++q) {
          const double v = data.pi_t(node, q / 256.0, t);
          w.note(prev - v, "pi_t not monotone on the fiber" + at(node));
          prev = v;
        }
      }
    }
    record(8, w, tol);
  }
  return report;
}

// ---------------------------------------------------------------------------

double BlowupLocus::total_weight() const {
  double s = 0.0;
  for (const auto& e : leaves) s += e.weight;
  return s;
}

LeafFamily packet_family(const PacketSpec& spec, const BaseDomain& base, const BoxRect& rect) {
  if (spec.leaves < 2) throw Error("packets need at least two leaves", "blowup");
  if (spec.kind == "horizontal") return horizontal_family(base, spec.leaves);
  if (spec.kind == "sheared") return sheared_family(base, spec.leaves, spec.amplitude);
  if (spec.kind == "wave") {
    if (!(std::abs(spec.amplitude) < 1.0 / (2.0 * M_PI)))
      throw Error("wave packet amplitude must stay below 1/(2 pi)", "blowup");
    const double a = spec.amplitude;
    return family_from_function(base, uniform_t(spec.leaves), [=](double s, double x, double) {
      const double gx = rect.x0 + x * (rect.x1 - rect.x0);
      return s + a * s * (1.0 - s) * std::sin(2.0 * M_PI * gx);
    });
  }
  throw Error("unknown packet kind '" + spec.kind + "'", "blowup");
}

InsertionSchedule local_schedule(const FlowBoxSpec& box, const BlowupLocus& locus) {
  const double h = box.t_hi - box.t_lo;
  std::vector<InsertionEntry> local;
  for (const auto& e : locus.leaves) {
    if (std::abs(e.point - box.t_lo) <= kPointTol || std::abs(e.point - box.t_hi) <= kPointTol)
      throw Error("blown leaf " + fmt(e.point) + " lies on a horizontal boundary of box " + box.id, "blowup");
    if (e.point > box.t_lo && e.point < box.t_hi) local.push_back({(e.point - box.t_lo) / h, e.weight / h});
  }
  return InsertionSchedule(std::move(local));
}

namespace {

// Holonomy predicted by gluing: pi^-1 o rho_F o pi off the gaps, the packet
// holonomy carried by j inside them.
double glued_defect(const LeafFamily& original, const BlownBox& blown, const std::vector<LeafFamily>& packets,
                    Point2 a, Point2 b) {
  const auto& base = original.base();
  const auto out = holonomy(blown.family, a, b);
  const auto rho_f = holonomy(original, a, b);
  std::size_t na = 0;
  double best = 1e9;
  for (std::size_t node = 0; node < base.nodes(); ++node) {
    const Point2 p = base.point(node);
    const double d = std::hypot(p.x - a.x, p.y - a.y);
    if (d < best) best = d, na = node;
  }
  const FiberCollapse& fc = blown.collapse.fibers[na];
  double worst = 0.0;
  for (int q = 0; q <= 128; ++q) {
    const double z = q / 128.0;
    double predicted = -1.0;
    for (std::size_t i = 0; i < fc.gaps().size(); ++i) {
      const auto& g = fc.gaps()[i];
      if (z >= g.lo && z <= g.hi) {
        const double sigma = (z - g.lo) / (g.hi - g.lo);
        predicted = g.lo + (g.hi - g.lo) * holonomy(packets[i], a, b)(sigma);
      }
    }
    if (predicted < 0.0) predicted = fc.embed(rho_f(fc(z)));
    worst = std::max(worst, std::abs(out(z) - predicted));
  }
  return worst;
}

}  // namespace

SceneBlowup blowup_scene(const DecompositionComplex& scene, const BlowupLocus& locus, const PacketSpec& packets,
                         double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive", "blowup");
  const auto report = validate(scene);
  for (const auto& c : report.conditions)
    if (!c.pass) throw Error("scene fails condition (" + std::to_string(c.condition) + "): " + c.witness, "blowup");

  SceneBlowup out{scene, {}, {}, {}, {}, 0.0, 0.0};
  std::vector<std::vector<LeafFamily>> box_packets;
  for (const auto& box : scene.boxes) {
    if (!box.family) throw Error("box " + box.id + " has no leaf family", "blowup");
    if (!is_horizontal(*box.family))
      throw Error("box " + box.id + " is not horizontal; normalize it before blowing up", "blowup");
    InsertionSchedule schedule = local_schedule(box, locus);
    InsertedPacket packet;
    for (std::size_t i = 0; i < schedule.size(); ++i)
      packet.leaves.push_back(packet_family(packets, box.family->base(), box.rect));
    BlownBox blown = blowup_box(*box.family, schedule, packet);
    const double c0 = c0_distance(*box.family, blown.family);
    out.stages.push_back({"edges", box.id, c0, 0.0});
    out.schedules.push_back(std::move(schedule));
    out.boxes.push_back(std::move(blown));
    box_packets.push_back(std::move(packet.leaves));
  }

  for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
    const auto& box = scene.boxes[b];
    for (Side side : {Side::West, Side::East, Side::South, Side::North}) {
      const bool vertical = side == Side::West || side == Side::East;
      const double line = side == Side::East || side == Side::North ? 1.0 : 0.0;
      const Point2 a = vertical ? Point2{line, 0.0} : Point2{0.0, line};
      double worst = 0.0;
      for (int q = 1; q <= 8; ++q) {
        const Point2 e = vertical ? Point2{line, q / 8.0} : Point2{q / 8.0, line};
        worst = std::max(worst, glued_defect(*box.family, out.boxes[b], box_packets[b], a, e));
      }
      out.stages.push_back({"faces", box.id + " " + to_string(side), 0.0, worst});
      out.face_defect = std::max(out.face_defect, worst);
      if (worst > 1e-6)
        throw Error("glued holonomy mismatch on " + box.id + " " + to_string(side) + " face (" + fmt(worst) + ")",
                    "blowup");
    }
  }

  for (std::size_t b = 0; b < scene.boxes.size(); ++b) out.scene.boxes[b].family = out.boxes[b].family;
  const auto across = face_compatibility(out.scene);
  out.face_defect = std::max(out.face_defect, across.defect);
  if (across.defect > 1e-6)
    throw Error("blown faces disagree (" + fmt(across.defect) + "): " + across.witness, "blowup");

  for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
    const double c0 = c0_distance(*scene.boxes[b].family, out.boxes[b].family);
    out.box_c0.push_back(c0);
    out.max_c0 = std::max(out.max_c0, c0);
    out.stages.push_back({"interior", scene.boxes[b].id, c0, 0.0});
  }
  if (out.max_c0 > epsilon)
    throw Error("blowup moved leaves by " + fmt(out.max_c0) + " > epsilon " + fmt(epsilon), "blowup");
  return out;
}

bool SceneBlowupReport::all_pass() const {
  return std::all_of(boxes.begin(), boxes.end(), [](const BlowupReport& r) { return r.all_pass(); });
}

std::vector<PropertyCheck> SceneBlowupReport::summary() const {
  std::vector<PropertyCheck> out;
  for (int p = 1; p <= 8; ++p) {
    PropertyCheck c{p, true, 0.0, ""};
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      const auto& bp = boxes[b].property(p);
      c.pass = c.pass && bp.pass;
      if (bp.defect >= c.defect) {
        c.defect = bp.defect;
        if (!bp.pass) c.witness = "box " + std::to_string(b) + ": " + bp.witness;
      }
    }
    out.push_back(c);
  }
  return out;
}

SceneBlowupReport verify_blowup(const DecompositionComplex& original, const SceneBlowup& blown, double tol) {
  if (original.boxes.size() != blown.boxes.size())
    throw Error("blown scene does not match the original box list", "blowup");
  SceneBlowupReport report;
  for (std::size_t b = 0; b < original.boxes.size(); ++b)
    report.boxes.push_back(verify_blowup(*original.boxes[b].family, blown.boxes[b], tol));
  return report;
}

}  // namespace foliate
