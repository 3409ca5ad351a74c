#include "foliate/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace foliate {

double flat_bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = flat_bump(x);
  const double b = flat_bump(1.0 - x);
  return a / (a + b);
}

double smooth_step_prime(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = flat_bump(x);
  const double b = flat_bump(1.0 - x);
  const double da = a / (x * x);
  const double db = -b / ((1.0 - x) * (1.0 - x));
  const double s = a + b;
  return (da * b - a * db) / (s * s);
}

double smooth_step_inverse(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-16) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (smooth_step(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double damped_ramp(double x, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return smooth_step((x - lo) / (hi - lo));
}

DampingProfile::DampingProfile(int flat_order, int resolution) : flat_order_(flat_order) {
  if (flat_order < 1) throw Error("damping flat_order must be >= 1");
  if (resolution < 16) throw Error("damping resolution must be >= 16");
  args_.resize(resolution + 1);
  values_.resize(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    args_[i] = static_cast<double>(i) / resolution;
    values_[i] = smooth_step(args_[i]);
  }
}

std::vector<double> DampingProfile::endpoint_derivatives(bool at_one) const {
  const int n = resolution();
  const double h = 1.0 / n;
  std::vector<double> out;
  for (int k = 1; k <= flat_order_; ++k) {
    // k-th forward difference at 0, backward difference at 1.
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
      const double v = at_one ? values_[n - (k - j)] : values_[j];
      acc += sign * binom * v;
      binom = binom * (k - j) / (j + 1);
    }
    out.push_back(acc / std::pow(h, k));
  }
  return out;
}

double DampingProfile::max_slope() const {
  double m = 0.0;
  for (double x : args_) m = std::max(m, std::abs(smooth_step_prime(x)));
  return m;
}

DampingProfile make_damping(int flat_order, int resolution) {
  return DampingProfile(flat_order, resolution);
}

// ---------------------------------------------------------------------------

InsertionSchedule::InsertionSchedule(std::vector<InsertionEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const InsertionEntry& a, const InsertionEntry& b) { return a.point < b.point; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!(e.point > 0.0 && e.point < 1.0))
      throw Error("insertion point must lie in (0,1)");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw Error("insertion weight must be positive and finite");
    if (i > 0 && !(entries_[i - 1].point < e.point))
      throw Error("insertion points must be distinct");
  }
  total_ = std::accumulate(entries_.begin(), entries_.end(), 0.0,
                           [](double s, const InsertionEntry& e) { return s + e.weight; });
}

CollapseMap::CollapseMap(const InsertionSchedule& schedule) {
  slope_ = 1.0 + schedule.total_weight();
  double before = 0.0;
  for (const auto& e : schedule.entries()) {
    const double lo = (e.point + before) / slope_;
    const double hi = (e.point + before + e.weight) / slope_;
    if (!intervals_.empty() && !(intervals_.back().hi < lo))
      throw Error("collapsed intervals overlap");
    intervals_.push_back({lo, hi, e.point, e.weight});
    before += e.weight;
  }
}

double CollapseMap::cantor(double u) const {
  // Walk the inserted intervals J_i = [z_i + W_<i, z_i + W_<=i] in [0,1+w].
  double before = 0.0;
  for (const auto& iv : intervals_) {
    const double j_lo = iv.point + before;
    const double j_hi = j_lo + iv.weight;
    if (u < j_lo) return u - before;
    if (u <= j_hi) return iv.point;
    before += iv.weight;
  }
  return std::min(1.0, u - before);
}

double CollapseMap::operator()(double x) const {
  if (intervals_.empty()) return x;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return cantor(scale(x));
}

double CollapseMap::embed(double y) const {
  double before = 0.0;
  for (const auto& iv : intervals_) {
    if (y < iv.point) break;
    before += iv.weight;
  }
  return (y + before) / slope_;
}

Preimage CollapseMap::preimage(double y) const {
  for (const auto& iv : intervals_) {
    if (y == iv.point) return std::make_pair(iv.lo, iv.hi);
  }
  return embed(y);
}

CollapseMap build_collapse(const InsertionSchedule& schedule) { return CollapseMap(schedule); }

Preimage collapse_preimage(const CollapseMap& map, double y) { return map.preimage(y); }

// ---------------------------------------------------------------------------

Partition::Partition(std::vector<double> cuts) : cuts_(std::move(cuts)) {
  if (cuts_.size() < 2 || cuts_.front() != 0.0 || cuts_.back() != 1.0)
    throw Error("partition must start at 0 and end at 1");
  for (std::size_t i = 1; i < cuts_.size(); ++i)
    if (!(cuts_[i - 1] < cuts_[i])) throw Error("partition cuts must be strictly increasing");
}

std::size_t Partition::cell_of(double t) const {
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), t);
  std::size_t idx = it == cuts_.begin() ? 0 : static_cast<std::size_t>(it - cuts_.begin()) - 1;
  return std::min(idx, cells() - 1);
}

bool Partition::contains_cut(double t) const {
  return std::binary_search(cuts_.begin(), cuts_.end(), t);
}

}  // namespace foliate
