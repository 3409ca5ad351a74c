#include "foliate/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace foliate {

std::vector<double> uniform_t(int n) {
  if (n < 2) throw Error("need at least two leaves");
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = double(k) / (n - 1);
  t.back() = 1.0;
  return t;
}

LeafFamily family_from_function(const BaseDomain& base, const std::vector<double>& t,
                                const std::function<double(double, double, double)>& f,
                                NodeIndex anchor) {
  const std::size_t n = base.nodes();
  std::vector<double> values(t.size() * n);
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t node = 0; node < n; ++node) {
      const Point2 p = base.point(node);
      double v = f(t[k], p.x, p.y);
      if (k == 0) v = 0.0;
      if (k + 1 == t.size()) v = 1.0;
      values[k * n + node] = v;
    }
  return LeafFamily::from_leaves(base, std::move(values), anchor);
}

LeafFamily horizontal_family(const BaseDomain& base, int leaves) {
  return family_from_function(base, uniform_t(leaves), [](double t, double, double) { return t; });
}

LeafFamily sheared_family(const BaseDomain& base, int leaves, double shear) {
  if (!(std::abs(shear) < 1.0)) throw Error("shear must satisfy |s| < 1 to stay monotone");
  return family_from_function(base, uniform_t(leaves), [shear](double t, double x, double) {
    return t + shear * t * (1.0 - t) * x;
  });
}

LeafFamily tilted_family(const BaseDomain& base, int leaves, double slope, double margin,
                         NodeIndex anchor) {
  if (!(margin > 0.0 && margin <= 0.5)) throw Error("tilt margin must lie in (0, 1/2]");
  if (!(std::abs(slope) < margin)) throw Error("tilt slope too steep for its margin");
  const double xa = base.x(anchor.i);
  return family_from_function(
      base, uniform_t(leaves),
      [=](double t, double x, double) {
        const double phi = std::min({1.0, t / margin, (1.0 - t) / margin});
        return t + slope * (x - xa) * phi;
      },
      anchor);
}

LeafFamily wavy_family(const BaseDomain& base, int leaves, double amplitude) {
  if (!(std::abs(amplitude) < 1.0)) throw Error("amplitude must satisfy |a| < 1");
  return family_from_function(base, uniform_t(leaves), [amplitude](double t, double, double y) {
    return t + amplitude * t * (1.0 - t) * std::sin(2.0 * M_PI * y);
  });
}

LeafFamily random_family(const BaseDomain& base, int leaves, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-0.1, 0.1);
  const double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng), a4 = coef(rng);
  const double a = base.x(0), b = base.y(0);
  return family_from_function(base, uniform_t(leaves), [=](double t, double x, double y) {
    const double u = x - a, v = y - b;
    const double A = a1 * u + a2 * v + a3 * std::sin(M_PI * u) * std::sin(M_PI * v) +
                     a4 * u * v * std::cos(M_PI * t);
    return t + t * (1.0 - t) * A;
  });
}

}  // namespace foliate
