#include <cmath>

#include "foliate/foliation.hpp"
#include "foliate/kernel.hpp"

namespace foliate {

// A cell [t_a, t_b] is admissible when every pair of sample leaves inside it
// has normals within epsilon at every node.  Interpolated leaves then stay
// within epsilon too: their slopes lie in the convex hull of the sample
// slopes, and {g : angle((-g,1),(-h,1)) <= eps} is convex for eps < pi/2.
Partition choose_partition(const LeafFamily& family, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < M_PI / 2)) throw Error("epsilon must lie in (0, pi/2)", "partition");
  const auto field = tangent_field(family);
  const std::size_t n = family.base().nodes();
  const auto& t = family.t_samples();
  auto close = [&](std::size_t a, std::size_t b) {
    for (std::size_t node = 0; node < n; ++node)
      if (normal_angle(field.normals[a * n + node], field.normals[b * n + node]) > epsilon) return false;
    return true;
  };

  std::vector<double> cuts{0.0};
  std::size_t start = 0;
  for (std::size_t j = 1; j < t.size(); ++j) {
    bool ok = true;
    for (std::size_t m = start; m < j && ok; ++m) ok = close(m, j);
    if (ok) continue;
    if (j == start + 1)
      throw Error("adjacent sample leaves " + std::to_string(start) + " and " + std::to_string(j) +
                      " already differ by more than epsilon",
                  "partition");
    cuts.push_back(t[j - 1]);
    start = j - 1;
    // Re-check j against the new cell.
    for (std::size_t m = start; m < j; ++m)
      if (!close(m, j))
        throw Error("adjacent sample leaves " + std::to_string(start) + " and " + std::to_string(j) +
                        " already differ by more than epsilon",
                    "partition");
  }
  cuts.push_back(1.0);
  return Partition(std::move(cuts));
}

}  // namespace foliate
