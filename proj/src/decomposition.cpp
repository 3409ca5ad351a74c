#include "foliate/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "foliate/families.hpp"

namespace foliate {

namespace {

constexpr double kTol = 1e-12;

bool eq(double a, double b) { return std::abs(a - b) <= kTol; }

double mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0 - kTol) r = 0.0;
  return r;
}

bool same_line(double a, double b) { return eq(mod1(a), mod1(b)); }

struct Iv {
  double lo, hi;
  double length() const { return hi - lo; }
  bool point() const { return hi - lo <= kTol; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string fmt(Iv iv) { return "[" + fmt(iv.lo) + "," + fmt(iv.hi) + "]"; }

// Intersection of two arcs of R/Z given as subintervals of [0,1].  Returns
// the connected components; a component [0,1] is the whole circle.
std::vector<Iv> circle_meet(Iv a, Iv b) {
  std::vector<Iv> out;
  const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo <= hi + kTol) out.push_back({lo, std::max(lo, hi)});
  const bool wraps = (eq(a.hi, 1.0) && eq(b.lo, 0.0)) || (eq(a.lo, 0.0) && eq(b.hi, 1.0));
  if (wraps) {
    bool covered = false;
    for (const auto& c : out)
      if (eq(c.lo, 0.0) || eq(c.hi, 1.0)) covered = true;
    if (!covered) out.push_back({0.0, 0.0});
  }
  return out;
}

std::vector<Iv> line_meet(Iv a, Iv b) {
  const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo <= hi + kTol) return {{lo, std::max(lo, hi)}};
  return {};
}

bool full_circle(const Iv& iv) { return eq(iv.lo, 0.0) && eq(iv.hi, 1.0); }

struct SideGeom {
  int axis;
  double line;
  Iv seg;
};

SideGeom side_geom(const BoxRect& r, Side s) {
  switch (s) {
    case Side::West: return {0, r.x0, {r.y0, r.y1}};
    case Side::East: return {0, r.x1, {r.y0, r.y1}};
    case Side::South: return {1, r.y0, {r.x0, r.x1}};
    case Side::North: return {1, r.y1, {r.x0, r.x1}};
    case Side::Annular: return {2, 0.0, {0.0, 1.0}};
  }
  return {0, 0.0, {0.0, 1.0}};
}

constexpr Side kSides[] = {Side::West, Side::East, Side::South, Side::North};

std::string face_label(const FlowBoxSpec& b, const FaceSpec& f) {
  return b.id + " " + to_string(f.side) + " face " + fmt(Iv{f.lo, f.hi});
}

// True when the faces are collinear and meet in a set of positive area.
bool faces_overlap(const GeoFace& a, const GeoFace& b) {
  if (a.axis != b.axis || a.axis == 2) return a.axis == 2 && b.axis == 2;
  if (!same_line(a.line, b.line)) return false;
  const double s = std::min(a.s1, b.s1) - std::max(a.s0, b.s0);
  const double h = std::min(a.h1, b.h1) - std::max(a.h0, b.h0);
  return s > kTol && h > kTol;
}

bool face_within(const GeoFace& a, const GeoFace& b) {
  if (a.axis != b.axis) return false;
  if (a.axis != 2 && !same_line(a.line, b.line)) return false;
  return b.s0 <= a.s0 + kTol && a.s1 <= b.s1 + kTol && b.h0 <= a.h0 + kTol && a.h1 <= b.h1 + kTol;
}

bool face_equal(const GeoFace& a, const GeoFace& b) {
  return a.axis == b.axis && (a.axis == 2 || same_line(a.line, b.line)) && eq(a.s0, b.s0) &&
         eq(a.s1, b.s1) && eq(a.h0, b.h0) && eq(a.h1, b.h1);
}

std::vector<GeoFace> box_faces(const DecompositionComplex& c, std::size_t bi) {
  std::vector<GeoFace> out;
  const auto& b = c.boxes[bi];
  for (std::size_t fi = 0; fi < b.faces.size(); ++fi) {
    const auto& f = b.faces[fi];
    const auto g = side_geom(b.rect, f.side);
    out.push_back({bi, fi, f.side, g.axis, mod1(g.line), g.seg.lo, g.seg.hi, f.lo, f.hi});
  }
  return out;
}

}  // namespace

std::string to_string(Side side) {
  switch (side) {
    case Side::West: return "W";
    case Side::East: return "E";
    case Side::South: return "S";
    case Side::North: return "N";
    case Side::Annular: return "A";
  }
  return "W";
}

Side side_from_string(const std::string& name) {
  if (name == "W") return Side::West;
  if (name == "E") return Side::East;
  if (name == "S") return Side::South;
  if (name == "N") return Side::North;
  if (name == "A") return Side::Annular;
  throw Error("unknown face side '" + name + "'");
}

Point2 FlowBoxSpec::to_local(Point2 g) const {
  return {(g.x - rect.x0) / (rect.x1 - rect.x0), (g.y - rect.y0) / (rect.y1 - rect.y0)};
}

bool DecompositionComplex::in_relative(const std::string& id) const {
  return std::find(relative.begin(), relative.end(), id) != relative.end();
}

std::optional<std::size_t> DecompositionComplex::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < boxes.size(); ++i)
    if (boxes[i].id == id) return i;
  return std::nullopt;
}

double DecompositionComplex::volume() const {
  double v = 0.0;
  for (const auto& b : boxes) v += b.volume();
  return v;
}

std::vector<FaceSpec> default_faces(const BoxRect& rect, double lo, double hi) {
  if (rect.full()) return {{Side::Annular, lo, hi}};
  std::vector<FaceSpec> faces;
  for (Side s : kSides) faces.push_back({s, lo, hi});
  return faces;
}

namespace {

LeafFamily cell_family(const SceneFoliation& fol, int grid, int leaves) {
  const auto base = BaseDomain::rectangle(grid, grid);
  if (fol.kind == "horizontal") return horizontal_family(base, leaves);
  if (fol.kind == "sheared") return sheared_family(base, leaves, fol.shear);
  throw Error("unknown scene foliation '" + fol.kind + "'");
}

}  // namespace

DecompositionComplex build_torus_scene(const TorusSceneOptions& o) {
  if (o.m < 1 || o.n < 1) throw Error("torus split needs m, n >= 1");
  if (!o.height_splits.empty() && o.height_splits.size() != std::size_t(o.m * o.n))
    throw Error("height splits must be given for every cell or for none");
  DecompositionComplex c;
  c.foliation = o.foliation;
  const LeafFamily family = cell_family(o.foliation, o.grid, o.leaves);
  for (int j = 0; j < o.n; ++j)
    for (int i = 0; i < o.m; ++i) {
      BoxRect r{double(i) / o.m, double(i + 1) / o.m, double(j) / o.n, double(j + 1) / o.n};
      if (i + 1 == o.m) r.x1 = 1.0;
      if (j + 1 == o.n) r.y1 = 1.0;
      std::vector<double> cuts{0.0};
      if (!o.height_splits.empty())
        for (double h : o.height_splits[j * o.m + i]) cuts.push_back(h);
      cuts.push_back(1.0);
      for (std::size_t k = 1; k < cuts.size(); ++k)
        if (!(cuts[k - 1] < cuts[k])) throw Error("height splits do not tile the leaf circle");
      const std::string id = "c" + std::to_string(i) + std::to_string(j);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        FlowBoxSpec b;
        b.id = cuts.size() == 2 ? id : id + "." + std::to_string(k);
        b.rect = r;
        b.t_lo = cuts[k];
        b.t_hi = cuts[k + 1];
        b.faces = default_faces(r, b.t_lo, b.t_hi);
        b.family = cuts.size() == 2 ? family : family.restrict_leaves(b.t_lo, b.t_hi);
        c.boxes.push_back(std::move(b));
      }
    }
  return c;
}

bool ValidationReport::valid() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

std::string GeoFace::label(const DecompositionComplex& complex) const {
  const auto& b = complex.boxes.at(box);
  return face_label(b, b.faces.at(face));
}

std::vector<GeoFace> geometric_faces(const DecompositionComplex& complex) {
  std::vector<GeoFace> out;
  for (std::size_t b = 0; b < complex.boxes.size(); ++b) {
    auto f = box_faces(complex, b);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

namespace {

ConditionCheck check_wellformed(const DecompositionComplex& c) {
  ConditionCheck r{1, true, {}};
  auto fail = [&](const std::string& w) {
    if (r.pass) r = {1, false, w};
  };
  std::set<std::string> ids;
  for (const auto& b : c.boxes) {
    if (!ids.insert(b.id).second) fail("duplicate box id " + b.id);
    const auto& q = b.rect;
    if (!(0.0 <= q.x0 && q.x0 < q.x1 && q.x1 <= 1.0 && 0.0 <= q.y0 && q.y0 < q.y1 && q.y1 <= 1.0))
      fail(b.id + " has a degenerate base rectangle");
    if (!(0.0 <= b.t_lo && b.t_lo < b.t_hi && b.t_hi <= 1.0)) fail(b.id + " has an empty height interval");
    if (b.family && b.family->base().shape != BaseShape::Rectangle)
      fail(b.id + " carries a family over a non-rectangular base");
    std::vector<Side> sides;
    if (b.annular())
      sides = {Side::Annular};
    else
      sides.assign(std::begin(kSides), std::end(kSides));
    for (const auto& f : b.faces)
      if (std::find(sides.begin(), sides.end(), f.side) == sides.end())
        fail(face_label(b, f) + " is not a side of the box");
    for (Side s : sides) {
      std::vector<Iv> fs;
      for (const auto& f : b.faces)
        if (f.side == s) fs.push_back({f.lo, f.hi});
      std::sort(fs.begin(), fs.end(), [](Iv a, Iv b2) { return a.lo < b2.lo; });
      double at = b.t_lo;
      bool ok = !fs.empty();
      for (const auto& f : fs) {
        if (!eq(f.lo, at) || !(f.hi > f.lo)) ok = false;
        at = f.hi;
      }
      if (!ok || !eq(at, b.t_hi)) fail(b.id + " faces do not tile side " + to_string(s));
    }
  }
  for (const auto& id : c.relative)
    if (!ids.count(id)) fail("relative region names unknown box " + id);
  return r;
}

ConditionCheck check_interiors(const DecompositionComplex& c) {
  for (std::size_t i = 0; i < c.boxes.size(); ++i)
    for (std::size_t j = i + 1; j < c.boxes.size(); ++j) {
      const auto& a = c.boxes[i];
      const auto& b = c.boxes[j];
      const double ox = std::min(a.rect.x1, b.rect.x1) - std::max(a.rect.x0, b.rect.x0);
      const double oy = std::min(a.rect.y1, b.rect.y1) - std::max(a.rect.y0, b.rect.y0);
      const double oh = std::min(a.t_hi, b.t_hi) - std::max(a.t_lo, b.t_lo);
      if (ox > kTol && oy > kTol && oh > kTol)
        return {3, false, a.id + " and " + b.id + " have overlapping interiors"};
    }
  return {3, true, {}};
}

// Does the component (cx, cy, ch) of F_b's boundary lie in one face of b?
bool in_single_face(const FlowBoxSpec& b, Iv cx, Iv cy, Iv ch) {
  if (cx.point() || cy.point()) {
    for (const auto& f : b.faces) {
      if (f.side == Side::Annular) continue;
      const auto g = side_geom(b.rect, f.side);
      const Iv across = g.axis == 0 ? cx : cy;
      if (!across.point() || !same_line(across.lo, g.line)) continue;
      if (f.lo <= ch.lo + kTol && ch.hi <= f.hi + kTol) return true;
    }
  }
  return false;
}

bool horizontal_in(const FlowBoxSpec& b, Iv ch) {
  return ch.point() && (eq(ch.lo, b.t_lo) || eq(ch.lo, b.t_hi));
}

ConditionCheck check_intersections(const DecompositionComplex& c) {
  for (std::size_t i = 0; i < c.boxes.size(); ++i)
    for (std::size_t j = i + 1; j < c.boxes.size(); ++j) {
      const auto& a = c.boxes[i];
      const auto& b = c.boxes[j];
      const auto xs = circle_meet({a.rect.x0, a.rect.x1}, {b.rect.x0, b.rect.x1});
      const auto ys = circle_meet({a.rect.y0, a.rect.y1}, {b.rect.y0, b.rect.y1});
      const auto hs = line_meet({a.t_lo, a.t_hi}, {b.t_lo, b.t_hi});
      for (const auto& cx : xs)
        for (const auto& cy : ys)
          for (const auto& ch : hs) {
            const std::string where = a.id + " and " + b.id + " meet in " + fmt(cx) + "x" + fmt(cy) + "x" + fmt(ch);
            if (full_circle(cx) || full_circle(cy))
              return {4, false, where + ", which is not a disk"};
            if (!cx.point() && !cy.point() && !ch.point()) continue;  // reported by (3)
            if (horizontal_in(a, ch) && horizontal_in(b, ch)) continue;
            if (in_single_face(a, cx, cy, ch) && in_single_face(b, cx, cy, ch)) continue;
            return {4, false, where + ", not inside a single face of each"};
          }
    }
  return {4, true, {}};
}

ConditionCheck check_relative(const DecompositionComplex& c) {
  for (std::size_t i = 0; i < c.boxes.size(); ++i) {
    const auto& f = c.boxes[i];
    if (c.in_relative(f.id)) continue;
    for (const auto& v : c.boxes) {
      if (!c.in_relative(v.id)) continue;
      const auto xs = circle_meet({f.rect.x0, f.rect.x1}, {v.rect.x0, v.rect.x1});
      const auto ys = circle_meet({f.rect.y0, f.rect.y1}, {v.rect.y0, v.rect.y1});
      const auto hs = line_meet({f.t_lo, f.t_hi}, {v.t_lo, v.t_hi});
      for (const auto& cx : xs)
        for (const auto& cy : ys)
          for (const auto& ch : hs) {
            const int dims = !cx.point() + !cy.point() + !ch.point();
            if (dims < 2 || ch.point()) continue;  // horizontal pieces and lower cells are fine
            bool whole = false;
            for (Side s : kSides) {
              const auto g = side_geom(f.rect, s);
              const Iv across = g.axis == 0 ? cx : cy;
              const Iv along = g.axis == 0 ? cy : cx;
              if (!across.point() || !same_line(across.lo, g.line)) continue;
              if (!eq(along.lo, g.seg.lo) || !eq(along.hi, g.seg.hi)) continue;
              bool lo_ok = false, hi_ok = false;
              for (const auto& face : f.faces)
                if (face.side == s) {
                  lo_ok = lo_ok || eq(face.lo, ch.lo);
                  hi_ok = hi_ok || eq(face.hi, ch.hi);
                }
              whole = whole || (lo_ok && hi_ok);
            }
            if (!whole)
              return {2, false, v.id + " meets " + f.id + " in " + fmt(cx) + "x" + fmt(cy) + "x" + fmt(ch) +
                                    ", which is not a union of vertical cells of " + f.id};
          }
    }
  }
  return {2, true, {}};
}

ConditionCheck check_nesting(const DecompositionComplex& c) {
  for (std::size_t n = 0; n < c.boxes.size(); ++n) {
    if (c.in_relative(c.boxes[n].id)) continue;
    for (const auto& d : box_faces(c, n)) {
      for (std::size_t i = 0; i < n; ++i) {
        if (c.in_relative(c.boxes[i].id)) continue;
        for (const auto& e : box_faces(c, i)) {
          if (!faces_overlap(d, e) || face_within(d, e)) continue;
          return {5, false, d.label(c) + " vs " + e.label(c)};
        }
      }
    }
  }
  return {5, true, {}};
}

}  // namespace

ValidationReport validate(const DecompositionComplex& complex) {
  ValidationReport r;
  const auto c1 = check_wellformed(complex);
  r.conditions.push_back(c1);
  if (!c1.pass) {
    for (int k = 2; k <= 5; ++k) r.conditions.push_back({k, false, "skipped: condition 1 fails"});
    return r;
  }
  r.conditions.push_back(check_relative(complex));
  r.conditions.push_back(check_interiors(complex));
  r.conditions.push_back(check_intersections(complex));
  r.conditions.push_back(check_nesting(complex));
  for (const auto& b : complex.boxes) r.annular_faces = r.annular_faces || b.annular();
  return r;
}

namespace {

std::vector<FlowBoxSpec> split_box(const FlowBoxSpec& b, const std::vector<double>& heights) {
  std::vector<double> cuts{b.t_lo};
  cuts.insert(cuts.end(), heights.begin(), heights.end());
  cuts.push_back(b.t_hi);
  std::vector<FlowBoxSpec> out;
  const double span = b.t_hi - b.t_lo;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    FlowBoxSpec child;
    child.id = b.id + "." + std::to_string(k);
    child.rect = b.rect;
    child.t_lo = cuts[k];
    child.t_hi = cuts[k + 1];
    for (const auto& f : b.faces) {
      const double lo = std::max(f.lo, child.t_lo), hi = std::min(f.hi, child.t_hi);
      if (hi - lo > kTol) child.faces.push_back({f.side, lo, hi});
    }
    if (b.family)
      child.family = b.family->restrict_leaves((child.t_lo - b.t_lo) / span, (child.t_hi - b.t_lo) / span);
    out.push_back(std::move(child));
  }
  return out;
}

}  // namespace

DecompositionComplex enforce_condition5(const DecompositionComplex& complex, std::size_t* sweeps) {
  const auto report = validate(complex);
  for (int k = 1; k <= 4; ++k)
    if (!report.condition(k).pass)
      throw Error("condition " + std::to_string(k) + " fails: " + report.condition(k).witness,
                  "enforce_condition5");
  DecompositionComplex c = complex;
  std::size_t count = 0;
  for (std::size_t guard = 0; guard <= c.boxes.size() + 1; ++guard) {
    bool changed = false;
    for (std::size_t n = 0; n < c.boxes.size(); ++n) {
      if (c.in_relative(c.boxes[n].id)) continue;
      std::set<double> heights;
      const auto& box = c.boxes[n];
      for (const auto& d : box_faces(c, n))
        for (std::size_t i = 0; i < n; ++i) {
          if (c.in_relative(c.boxes[i].id)) continue;
          for (const auto& e : box_faces(c, i)) {
            if (!faces_overlap(d, e)) continue;
            for (double h : {e.h0, e.h1})
              if (h > box.t_lo + kTol && h < box.t_hi - kTol) heights.insert(h);
          }
        }
      if (heights.empty()) continue;
      auto children = split_box(box, {heights.begin(), heights.end()});
      const std::size_t added = children.size();
      c.boxes.erase(c.boxes.begin() + n);
      c.boxes.insert(c.boxes.begin() + n, children.begin(), children.end());
      n += added - 1;
      changed = true;
    }
    if (!changed) break;
    ++count;
  }
  if (sweeps) *sweeps = count;
  const auto after = validate(c);
  if (!after.valid())
    throw Error("subdivision did not reach condition (5): " + after.condition(5).witness, "enforce_condition5");
  return c;
}

TransitivityReport check_transitive(const DecompositionComplex& c) {
  TransitivityReport r;
  std::vector<std::size_t> earlier;
  for (std::size_t i = 0; i < c.boxes.size(); ++i)
    if (c.in_relative(c.boxes[i].id)) earlier.push_back(i);
  bool first = earlier.empty();
  std::size_t position = 0;
  for (std::size_t i = 0; i < c.boxes.size(); ++i) {
    if (c.in_relative(c.boxes[i].id)) continue;
    ++position;
    if (first) {
      first = false;
      earlier.push_back(i);
      continue;
    }
    bool found = false;
    for (const auto& d : box_faces(c, i)) {
      if (d.axis == 2) continue;
      // Pieces of the face covered by earlier boxes, in (along, height) coordinates.
      std::vector<std::array<double, 4>> pieces;
      for (std::size_t j : earlier) {
        const auto& e = c.boxes[j];
        const Iv across = d.axis == 0 ? Iv{e.rect.x0, e.rect.x1} : Iv{e.rect.y0, e.rect.y1};
        const Iv along = d.axis == 0 ? Iv{e.rect.y0, e.rect.y1} : Iv{e.rect.x0, e.rect.x1};
        if (circle_meet(across, {d.line, d.line}).empty()) continue;
        const double s0 = std::max(d.s0, along.lo), s1 = std::min(d.s1, along.hi);
        const double h0 = std::max(d.h0, e.t_lo), h1 = std::min(d.h1, e.t_hi);
        if (s1 - s0 > kTol && h1 - h0 > kTol) pieces.push_back({s0, s1, h0, h1});
      }
      std::set<double> ss{d.s0, d.s1}, hs{d.h0, d.h1};
      for (const auto& p : pieces) {
        ss.insert(p[0]);
        ss.insert(p[1]);
        hs.insert(p[2]);
        hs.insert(p[3]);
      }
      std::vector<double> sv(ss.begin(), ss.end()), hv(hs.begin(), hs.end());
      bool covered = true;
      for (std::size_t a = 0; a + 1 < sv.size() && covered; ++a)
        for (std::size_t b = 0; b + 1 < hv.size() && covered; ++b) {
          const double sm = 0.5 * (sv[a] + sv[a + 1]), hm = 0.5 * (hv[b] + hv[b + 1]);
          if (sm < d.s0 || sm > d.s1 || hm < d.h0 || hm > d.h1) continue;
          bool in = false;
          for (const auto& p : pieces) in = in || (p[0] <= sm && sm <= p[1] && p[2] <= hm && hm <= p[3]);
          covered = in;
        }
      if (covered && !pieces.empty()) {
        found = true;
        break;
      }
    }
    if (!found) {
      r.transitive = false;
      r.failed_at = position;
      r.witness = c.boxes[i].id + " shares no full vertical face with the boxes before it";
      return r;
    }
    earlier.push_back(i);
  }
  return r;
}

FacePoset maximal_faces(const DecompositionComplex& complex) {
  FacePoset p;
  const auto all = geometric_faces(complex);
  p.side_faces = all.size();
  for (std::size_t k = 0; k < all.size(); ++k) {
    bool merged = false;
    for (std::size_t q = 0; q < p.faces.size() && !merged; ++q)
      if (face_equal(all[k], p.faces[q])) {
        p.members[q].push_back(k);
        merged = true;
      }
    if (!merged) {
      p.faces.push_back(all[k]);
      p.members.push_back({k});
    }
  }
  const std::size_t n = p.faces.size();
  p.above.assign(n, {});
  p.maximal.assign(n, true);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && face_within(p.faces[a], p.faces[b])) {
        p.above[a].push_back(b);
        p.maximal[a] = false;
      }
  for (std::size_t a = 0; a < n; ++a)
    if (p.maximal[a]) p.maximal_faces.push_back(a);
  p.top.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    if (p.maximal[a]) {
      p.top[a] = a;
      continue;
    }
    std::vector<std::size_t> tops;
    for (std::size_t b : p.above[a])
      if (p.maximal[b]) tops.push_back(b);
    if (tops.size() != 1)
      throw Error(all[p.members[a][0]].label(complex) + " lies below " + std::to_string(tops.size()) +
                      " maximal faces",
                  "maximal_faces");
    p.top[a] = tops[0];
  }
  return p;
}

namespace {

std::optional<BoxRect> rect_meet(const BoxRect& a, const BoxRect& b) {
  BoxRect r{std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0), std::min(a.y1, b.y1)};
  if (r.x1 - r.x0 > kTol && r.y1 - r.y0 > kTol) return r;
  return std::nullopt;
}

BoxRect shifted(BoxRect r, int dx, int dy) { return {r.x0 + dx, r.x1 + dx, r.y0 + dy, r.y1 + dy}; }

bool strictly_inside(const BoxRect& in, const BoxRect& out) {
  return out.x0 < in.x0 && in.x1 < out.x1 && out.y0 < in.y0 && in.y1 < out.y1;
}

std::string fmt(const BoxRect& r) { return fmt(Iv{r.x0, r.x1}) + "x" + fmt(Iv{r.y0, r.y1}); }

}  // namespace

RegularNeighborhoodStructure regular_neighborhood(const DecompositionComplex& complex, double width) {
  if (!(width > 0.0)) throw Error("neighborhood width must be positive", "regular_neighborhood");
  const auto poset = maximal_faces(complex);
  RegularNeighborhoodStructure s;
  s.face_width = width;
  s.edge_width = 2.0 * width;
  auto add_edge = [&](Point2 e) {
    e = {mod1(e.x), mod1(e.y)};
    for (const auto& q : s.edges)
      if (same_line(q.x, e.x) && same_line(q.y, e.y)) return;
    s.edges.push_back(e);
  };
  for (std::size_t m : poset.maximal_faces) {
    const auto& f = poset.faces[m];
    s.strip_faces.push_back(f);
    if (f.axis == 2) {
      add_edge({0.0, 0.0});
      s.face_strips.push_back({-width, width, 0.0, 1.0});
    } else if (f.axis == 0) {
      add_edge({f.line, f.s0});
      add_edge({f.line, f.s1});
      s.face_strips.push_back({f.line - width, f.line + width, f.s0 - width, f.s1 + width});
    } else {
      add_edge({f.s0, f.line});
      add_edge({f.s1, f.line});
      s.face_strips.push_back({f.s0 - width, f.s1 + width, f.line - width, f.line + width});
    }
  }
  const double w2 = s.edge_width;
  for (const auto& e : s.edges) s.edge_squares.push_back({e.x - w2, e.x + w2, e.y - w2, e.y + w2});

  for (std::size_t j = 0; j < s.face_strips.size(); ++j)
    for (std::size_t k = j + 1; k < s.face_strips.size(); ++k) {
      const auto& fj = s.strip_faces[j];
      const auto& fk = s.strip_faces[k];
      if (std::min(fj.h1, fk.h1) - std::max(fj.h0, fk.h0) <= kTol) continue;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          const auto r = rect_meet(s.face_strips[j], shifted(s.face_strips[k], dx, dy));
          if (!r) continue;
          bool inside = false;
          for (const auto& sq : s.edge_squares)
            for (int ex = -2; ex <= 2 && !inside; ++ex)
              for (int ey = -2; ey <= 2 && !inside; ++ey) inside = strictly_inside(*r, shifted(sq, ex, ey));
          if (!inside)
            throw Error("N(" + fj.label(complex) + ") and N(" + fk.label(complex) + ") meet in " + fmt(*r) +
                            " outside N_v",
                        "regular_neighborhood");
        }
    }
  double min_cell = 1.0;
  for (const auto& b : complex.boxes)
    min_cell = std::min({min_cell, b.rect.x1 - b.rect.x0, b.rect.y1 - b.rect.y0});
  if (!(width < 0.5 * min_cell))
    throw Error("width " + fmt(width) + " is not below half the smallest cell side " + fmt(min_cell),
                "regular_neighborhood");
  return s;
}

}  // namespace foliate
