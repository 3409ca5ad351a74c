#ifndef FOLIATE_CIRCLE_HPP
#define FOLIATE_CIRCLE_HPP

// Circle shadow of the blowup: Denjoy-type homeomorphisms obtained by
// blowing up a finite orbit segment of an irrational rotation.

#include <cstddef>
#include <vector>

namespace foliate {

/// Monotone lift h : R -> R with h(x + 1) = h(x) + 1, piecewise linear
/// through knots (x_j, y_j) with x_j in [0,1).
class CircleMapLift {
 public:
  CircleMapLift(std::vector<double> xs, std::vector<double> ys);

  static CircleMapLift rotation(double alpha);

  double operator()(double x) const;
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  /// max |h(x + 1) - h(x) - 1| over the knots and their midpoints.
  double commutation_defect() const;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

struct RotationEstimate {
  double value = 0.0;           // (h^n(x0) - x0) / n
  double last_increment = 0.0;  // h^n(x0) - h^{n-1}(x0)
  std::size_t iterations = 0;
};

RotationEstimate rotation_number(const CircleMapLift& lift, std::size_t iterations, double x0 = 0.0);

/// Running estimates (h^n(x0) - x0)/n every `stride` steps.
struct RotationSample {
  std::size_t n;
  double orbit;  // h^n(x0) mod 1
  double estimate;
};
std::vector<RotationSample> rotation_series(const CircleMapLift& lift, std::size_t iterations,
                                            std::size_t stride, double x0 = 0.0);

struct WeightRule {
  double total = 0.5;  // sum of inserted lengths; w_k proportional to 1/(k^2 + 1)
};

struct CircleGap {
  long index;  // orbit index k
  double lo;
  double hi;
};

struct DenjoyCircleMap {
  CircleMapLift lift;
  double alpha;
  std::size_t orbit_length;
  std::vector<CircleGap> gaps;  // ordered by orbit index -N..N
  double repair_radius;         // half-width of the two repair intervals
};

/// Blows up {k alpha mod 1 : |k| <= N}.  Gap k maps affinely onto gap k+1;
/// the last gap maps onto a short interval around the image point and a
/// short interval around the preimage of the first orbit point opens onto
/// the first gap.
DenjoyCircleMap blowup_circle_map(double alpha, std::size_t orbit_length, const WeightRule& weights = {});

struct RevisitAudit {
  bool wandering = true;
  long first_gap = 0;     // orbit index of the offending gap
  std::size_t step = 0;   // iterate at which it came back
  std::size_t gaps_checked = 0;
};

/// Follows every gap for `steps` iterates and reports the first one whose
/// image meets the gap itself again.
RevisitAudit audit_wandering(const DenjoyCircleMap& map, std::size_t steps);

}  // namespace foliate

#endif  // FOLIATE_CIRCLE_HPP
