#include "foliate/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace foliate {

std::string to_string(BaseShape shape) {
  switch (shape) {
    case BaseShape::Rectangle: return "rectangle";
    case BaseShape::Annulus: return "annulus";
    case BaseShape::Disk: return "disk";
  }
  return "rectangle";
}

BaseShape base_shape_from_string(const std::string& name) {
  if (name == "rectangle") return BaseShape::Rectangle;
  if (name == "annulus") return BaseShape::Annulus;
  if (name == "disk") return BaseShape::Disk;
  throw Error("unknown base shape '" + name + "'");
}

BaseDomain BaseDomain::rectangle(int nx, int ny) {
  BaseDomain b{BaseShape::Rectangle, nx, ny, false, false};
  b.validate();
  return b;
}

BaseDomain BaseDomain::annulus(int nx, int ny) {
  BaseDomain b{BaseShape::Annulus, nx, ny, false, true};
  b.validate();
  return b;
}

BaseDomain BaseDomain::disk(int n) {
  BaseDomain b{BaseShape::Disk, n, n, false, false};
  b.validate();
  return b;
}

void BaseDomain::validate() const {
  if (nx < 8 || ny < 8) throw Error("base grid needs at least 8 nodes per axis");
  if (shape == BaseShape::Annulus && !periodic_y) throw Error("annulus base needs a periodic axis");
  if (shape != BaseShape::Annulus && (periodic_x || periodic_y))
    throw Error("only the annulus base is periodic");
}

// ---------------------------------------------------------------------------

LeafFamily::LeafFamily(BaseDomain base, std::vector<double> t, std::vector<double> values,
                       NodeIndex anchor)
    : base_(base), t_(std::move(t)), values_(std::move(values)), anchor_(anchor) {
  validate();
}

LeafFamily LeafFamily::from_leaves(BaseDomain base, std::vector<double> values, NodeIndex anchor) {
  base.validate();
  const std::size_t n = base.nodes();
  if (values.size() % n != 0 || values.size() / n < 2)
    throw Error("leaf values do not match the base grid");
  const std::size_t leaves = values.size() / n;
  for (std::size_t node = 0; node < n; ++node) {
    double& lo = values[node];
    double& hi = values[(leaves - 1) * n + node];
    if (std::abs(lo) <= 1e-12) lo = 0.0;
    if (std::abs(hi - 1.0) <= 1e-12) hi = 1.0;
  }
  if (anchor.i < 0 || anchor.i >= base.nx || anchor.j < 0 || anchor.j >= base.ny)
    throw Error("anchor outside the base grid");
  const std::size_t a = base.node(anchor.i, anchor.j);
  std::vector<double> t(leaves);
  for (std::size_t k = 0; k < leaves; ++k) t[k] = values[k * n + a];
  return LeafFamily(base, std::move(t), std::move(values), anchor);
}

void LeafFamily::validate() const {
  base_.validate();
  const std::size_t n = base_.nodes();
  if (t_.size() < 2) throw Error("a leaf family needs at least the two boundary leaves");
  if (values_.size() != t_.size() * n) throw Error("leaf values do not match the base grid");
  if (anchor_.i < 0 || anchor_.i >= base_.nx || anchor_.j < 0 || anchor_.j >= base_.ny)
    throw Error("anchor outside the base grid");
  if (t_.front() != 0.0 || t_.back() != 1.0) throw Error("leaf indices must run from 0 to 1");
  for (std::size_t k = 1; k < t_.size(); ++k)
    if (!(t_[k - 1] < t_[k])) throw Error("leaf indices must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("leaf values must be finite");
  for (std::size_t node = 0; node < n; ++node) {
    if (std::abs(value(0, node)) > 1e-12) throw Error("bottom leaf must be f = 0");
    if (std::abs(value(t_.size() - 1, node) - 1.0) > 1e-12) throw Error("top leaf must be f = 1");
    if (!strictly_monotone_at(node))
      throw Error("leaves are not strictly monotone over node " + std::to_string(node));
  }
  const std::size_t a = anchor_node();
  for (std::size_t k = 0; k < t_.size(); ++k)
    if (std::abs(value(k, a) - t_[k]) > 1e-12) throw Error("family is not anchored");
}

bool LeafFamily::strictly_monotone_at(std::size_t node) const {
  for (std::size_t k = 1; k < t_.size(); ++k)
    if (!(value(k - 1, node) < value(k, node))) return false;
  return true;
}

std::pair<std::size_t, double> LeafFamily::locate(double t) const {
  const std::size_t last = t_.size() - 1;
  if (t <= 0.0) return {0, 0.0};
  if (t >= 1.0) return {last - 1, 1.0};
  auto it = std::lower_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin());
  if (*it == t) return k == last ? std::make_pair(last - 1, 1.0) : std::make_pair(k, 0.0);
  return {k - 1, (t - t_[k - 1]) / (t_[k] - t_[k - 1])};
}

namespace {

inline double mix(double a, double b, double w) {
  if (w == 0.0) return a;
  if (w == 1.0) return b;
  return (1.0 - w) * a + w * b;
}

struct Stencil {
  int i0, i1;
  double a;
};

Stencil stencil(double x, int n, bool periodic) {
  if (periodic) {
    double u = x - std::floor(x);
    double f = u * n;
    int i0 = static_cast<int>(std::floor(f));
    double a = f - i0;
    i0 %= n;
    return {i0, (i0 + 1) % n, a};
  }
  double f = std::clamp(x, 0.0, 1.0) * (n - 1);
  int i0 = std::min(static_cast<int>(std::floor(f)), n - 2);
  return {i0, i0 + 1, f - i0};
}

}  // namespace

double LeafFamily::eval(double t, std::size_t node) const {
  auto [k, w] = locate(t);
  return mix(value(k, node), value(k + 1, node), w);
}

double LeafFamily::sample_at(std::size_t k, Point2 p) const {
  const Stencil sx = stencil(p.x, base_.nx, base_.periodic_x);
  const Stencil sy = stencil(p.y, base_.ny, base_.periodic_y);
  const double v00 = value(k, base_.node(sx.i0, sy.i0));
  if (sx.a == 0.0 && sy.a == 0.0) return v00;
  const double v10 = value(k, base_.node(sx.i1, sy.i0));
  const double v01 = value(k, base_.node(sx.i0, sy.i1));
  const double v11 = value(k, base_.node(sx.i1, sy.i1));
  return (1 - sx.a) * (1 - sy.a) * v00 + sx.a * (1 - sy.a) * v10 + (1 - sx.a) * sy.a * v01 +
         sx.a * sy.a * v11;
}

double LeafFamily::eval(double t, Point2 p) const {
  auto [k, w] = locate(t);
  return mix(sample_at(k, p), sample_at(k + 1, p), w);
}

namespace {

template <class Column>
double invert_column(const std::vector<double>& t, Column col, double z) {
  const std::size_t n = t.size();
  if (z <= col(0)) return 0.0;
  if (z >= col(n - 1)) return 1.0;
  std::size_t lo = 0, hi = n - 1;  // col(lo) < z < col(hi)
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const double v = col(mid);
    if (v == z) return t[mid];
    if (v < z)
      lo = mid;
    else
      hi = mid;
  }
  const double a = col(lo), b = col(hi);
  return t[lo] + (z - a) / (b - a) * (t[hi] - t[lo]);
}

}  // namespace

double LeafFamily::leaf_through(std::size_t node, double z) const {
  return invert_column(t_, [&](std::size_t k) { return value(k, node); }, z);
}

double LeafFamily::leaf_through(Point2 p, double z) const {
  std::vector<double> col(t_.size());
  for (std::size_t k = 0; k < t_.size(); ++k) col[k] = sample_at(k, p);
  return invert_column(t_, [&](std::size_t k) { return col[k]; }, z);
}

std::array<double, 2> LeafFamily::sample_gradient(std::size_t k, std::size_t node) const {
  const int i = base_.col(node), j = base_.row(node);
  auto diff = [&](int n, bool periodic, double h, int c, auto at) {
    if (periodic) return (at((c + 1) % n) - at((c - 1 + n) % n)) / (2 * h);
    if (c == 0) return (at(1) - at(0)) / h;
    if (c == n - 1) return (at(n - 1) - at(n - 2)) / h;
    return (at(c + 1) - at(c - 1)) / (2 * h);
  };
  const double gx = diff(base_.nx, base_.periodic_x, base_.dx(), i,
                         [&](int ii) { return value(k, base_.node(ii, j)); });
  const double gy = diff(base_.ny, base_.periodic_y, base_.dy(), j,
                         [&](int jj) { return value(k, base_.node(i, jj)); });
  return {gx, gy};
}

std::array<double, 2> LeafFamily::gradient(double t, std::size_t node) const {
  auto [k, w] = locate(t);
  const auto a = sample_gradient(k, node);
  if (w == 0.0) return a;
  const auto b = sample_gradient(k + 1, node);
  if (w == 1.0) return b;
  return {mix(a[0], b[0], w), mix(a[1], b[1], w)};
}

namespace {

std::array<double, 3> unit_normal(const std::array<double, 2>& g) {
  const double n = std::sqrt(g[0] * g[0] + g[1] * g[1] + 1.0);
  return {-g[0] / n, -g[1] / n, 1.0 / n};
}

}  // namespace

std::array<double, 3> LeafFamily::normal_at(std::size_t node, double z) const {
  return unit_normal(gradient(leaf_through(node, z), node));
}

LeafFamily LeafFamily::restrict_leaves(double a, double b) const {
  if (!(0.0 <= a && a < b && b <= 1.0)) throw Error("restrict_leaves needs 0 <= a < b <= 1");
  const std::size_t n = base_.nodes();
  std::vector<double> lo(n), hi(n);
  for (std::size_t node = 0; node < n; ++node) {
    lo[node] = eval(a, node);
    hi[node] = eval(b, node);
  }
  std::vector<double> ts{a};
  for (double t : t_)
    if (t > a && t < b) ts.push_back(t);
  ts.push_back(b);
  std::vector<double> values(ts.size() * n);
  for (std::size_t k = 0; k < ts.size(); ++k)
    for (std::size_t node = 0; node < n; ++node) {
      const double v = k == 0 ? lo[node] : k + 1 == ts.size() ? hi[node] : eval(ts[k], node);
      values[k * n + node] = (v - lo[node]) / (hi[node] - lo[node]);
    }
  return from_leaves(base_, std::move(values), anchor_);
}

// ---------------------------------------------------------------------------

MonotonePL::MonotonePL(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2) throw Error("piecewise-linear map needs >= 2 knots");
  for (std::size_t k = 1; k < xs_.size(); ++k)
    if (!(xs_[k - 1] < xs_[k]) || !(ys_[k - 1] < ys_[k]))
      throw Error("piecewise-linear map must be strictly increasing");
}

namespace {

double pl_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  if (*it == x) return ys[k];
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

}  // namespace

double MonotonePL::operator()(double x) const { return pl_eval(xs_, ys_, x); }
double MonotonePL::inverse_at(double y) const { return pl_eval(ys_, xs_, y); }

HolonomyMap::HolonomyMap() : MonotonePL({0.0, 1.0}, {0.0, 1.0}) {}

HolonomyMap::HolonomyMap(std::vector<double> xs, std::vector<double> ys)
    : MonotonePL(std::move(xs), std::move(ys)) {
  auto snap = [](double& v, double target) {
    if (std::abs(v - target) > 1e-12) throw Error("holonomy must fix the boundary leaves");
    v = target;
  };
  snap(xs_.front(), 0.0);
  snap(ys_.front(), 0.0);
  snap(xs_.back(), 1.0);
  snap(ys_.back(), 1.0);
}

HolonomyMap HolonomyMap::inverse() const { return HolonomyMap(ys_, xs_); }

HolonomyMap HolonomyMap::compose(const HolonomyMap& inner) const {
  std::vector<double> xs = inner.xs_;
  for (double x : xs_) xs.push_back(inner.inverse_at(x));
  std::sort(xs.begin(), xs.end());
  std::vector<double> kx, ky;
  for (double x : xs) {
    if (!kx.empty() && x - kx.back() <= 1e-15) continue;
    const double y = (*this)(inner(x));
    if (!ky.empty() && !(y > ky.back())) continue;
    kx.push_back(x);
    ky.push_back(y);
  }
  if (kx.back() != 1.0) {
    kx.back() = 1.0;
    ky.back() = 1.0;
  }
  return HolonomyMap(std::move(kx), std::move(ky));
}

double HolonomyMap::distance(const HolonomyMap& other, int samples) const {
  double d = 0.0;
  for (double x : xs_) d = std::max(d, std::abs((*this)(x) - other(x)));
  for (double x : other.xs_) d = std::max(d, std::abs((*this)(x) - other(x)));
  for (int i = 0; i < samples; ++i) {
    const double x = double(i) / (samples - 1);
    d = std::max(d, std::abs((*this)(x) - other(x)));
  }
  return d;
}

// ---------------------------------------------------------------------------

BasePath BasePath::segment(const BaseDomain& base, Point2 from, Point2 to) {
  const double steps_x = std::abs(to.x - from.x) / base.dx();
  const double steps_y = std::abs(to.y - from.y) / base.dy();
  const int n = std::max(1, static_cast<int>(std::ceil(std::max(steps_x, steps_y) - 1e-9)));
  BasePath path;
  path.points.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = double(i) / n;
    path.points.push_back({from.x + s * (to.x - from.x), from.y + s * (to.y - from.y)});
  }
  path.points.back() = to;
  return path;
}

BasePath BasePath::reversed() const {
  BasePath p{points};
  std::reverse(p.points.begin(), p.points.end());
  return p;
}

BasePath BasePath::then(const BasePath& next) const {
  BasePath p{points};
  p.points.insert(p.points.end(), next.points.begin() + (next.points.empty() ? 0 : 1),
                  next.points.end());
  return p;
}

void BasePath::validate(const BaseDomain& base) const {
  if (points.empty()) throw Error("empty base path");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("base path has non-finite point");
    if (!base.periodic_x && (p.x < -1e-12 || p.x > 1 + 1e-12)) throw Error("base path leaves the domain");
    if (!base.periodic_y && (p.y < -1e-12 || p.y > 1 + 1e-12)) throw Error("base path leaves the domain");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (std::abs(points[i].x - points[i - 1].x) > base.dx() * (1 + 1e-9) ||
        std::abs(points[i].y - points[i - 1].y) > base.dy() * (1 + 1e-9))
      throw Error("base path is discontinuous at sample " + std::to_string(i));
  }
}

double leaf_through(const LeafFamily& family, Point2 point, double z) {
  return family.leaf_through(point, z);
}

TangentPlaneField tangent_field(const LeafFamily& family) {
  TangentPlaneField field;
  const std::size_t n = family.base().nodes();
  field.heights = family.values();
  field.normals.resize(family.leaf_count() * n);
  for (std::size_t k = 0; k < family.leaf_count(); ++k)
    for (std::size_t node = 0; node < n; ++node)
      field.normals[k * n + node] = unit_normal(family.sample_gradient(k, node));
  return field;
}

double normal_angle(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double cx = a[1] * b[2] - a[2] * b[1];
  const double cy = a[2] * b[0] - a[0] * b[2];
  const double cz = a[0] * b[1] - a[1] * b[0];
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

double c0_distance(const LeafFamily& a, const LeafFamily& b, const std::vector<bool>& mask) {
  if (!(a.base() == b.base())) throw Error("c0_distance needs families over the same base grid");
  const std::size_t n = a.base().nodes();
  if (mask.size() != n) throw Error("node mask does not match the base grid");
  double worst = 0.0;
  std::vector<double> zs;
  for (std::size_t node = 0; node < n; ++node) {
    if (!mask[node]) continue;
    zs.clear();
    for (std::size_t k = 0; k < a.leaf_count(); ++k) zs.push_back(a.value(k, node));
    for (std::size_t k = 0; k < b.leaf_count(); ++k) zs.push_back(b.value(k, node));
    for (double z : zs) worst = std::max(worst, normal_angle(a.normal_at(node, z), b.normal_at(node, z)));
  }
  return worst;
}

double c0_distance(const LeafFamily& a, const LeafFamily& b) {
  return c0_distance(a, b, std::vector<bool>(a.base().nodes(), true));
}

HolonomyMap holonomy(const LeafFamily& family, const BasePath& path) {
  path.validate(family.base());
  const Point2 start = path.points.front();
  const Point2 end = path.points.back();
  std::vector<double> u(family.leaf_count()), v(family.leaf_count());
  for (std::size_t k = 0; k < family.leaf_count(); ++k) {
    u[k] = family.sample_at(k, end);
    v[k] = family.sample_at(k, start);
  }
  return HolonomyMap(std::move(u), std::move(v));
}

HolonomyMap holonomy(const LeafFamily& family, Point2 start, Point2 end) {
  return holonomy(family, BasePath::segment(family.base(), start, end));
}

double x_invariance_defect(const LeafFamily& family) {
  const auto& base = family.base();
  double worst = 0.0;
  for (std::size_t k = 0; k < family.leaf_count(); ++k)
    for (int j = 0; j < base.ny; ++j) {
      double lo = family.value(k, base.node(0, j)), hi = lo;
      for (int i = 1; i < base.nx; ++i) {
        const double v = family.value(k, base.node(i, j));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      worst = std::max(worst, hi - lo);
    }
  return worst;
}

}  // namespace foliate
