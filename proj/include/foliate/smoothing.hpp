#ifndef FOLIATE_SMOOTHING_HPP
#define FOLIATE_SMOOTHING_HPP

// Smoothing and extension operators on leaf families, and the scene-level
// pipeline built from them.

#include <functional>
#include <string>
#include <vector>

#include "foliate/decomposition.hpp"
#include "foliate/foliation.hpp"
#include "foliate/kernel.hpp"

namespace foliate {

inline constexpr int kMaxRetries = 5;

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool contains(Point2 p) const { return x0 <= p.x && p.x <= x1 && y0 <= p.y && p.y <= y1; }
};

/// A rectangle S inside a neighborhood N(S) of the unit square.  S may only
/// touch the boundary of N(S) along the boundary of the square.
struct RegionMask {
  Rect core;
  Rect nbhd;

  /// Square of half-width r around c, with neighborhood half-width R,
  /// both clipped to the unit square.
  static RegionMask around(Point2 c, double r, double R);

  void validate() const;
  /// Damping weight: 1 on S, 0 off N(S), smooth_step ramps in between.
  double weight(Point2 p) const;
  /// Largest |d weight| along either axis.
  double max_slope() const;
};

/// Horizontal bands J0 = y in [0, j0] and J1 = y in [j1, 1] of the unit
/// square; the constraint weight vanishes on them and is 1 once a margin
/// of (j1 - j0)/4 away.
struct BandMask {
  double j0 = 0.125;
  double j1 = 0.875;

  void validate() const;
  double margin() const { return 0.25 * (j1 - j0); }
  bool in_band(double y) const { return y <= j0 || y >= j1; }
  double weight(double y) const;
};

struct SmoothInT {
  LeafFamily family;
  Partition partition;
  std::vector<std::size_t> cell;  // per output sample
  std::vector<double> clock;      // parameter s with g = g_s in the cell formula
  std::vector<double> weight;     // l_i(clock)
  double achieved = 0.0;          // c0_distance(input, output)
  int retries = 0;
};

/// Interpolation smoothing on every cell of a partition chosen for
/// epsilon.  The output keeps the input t-samples: sample k in cell
/// [t_a, t_b] is the formula leaf at the clock s_k with
/// l_i(s_k) = (t_k - t_a)/(t_b - t_a), so every value is
/// (1 - l_i(s_k)) f_a + l_i(s_k) f_b.
SmoothInT smooth_in_t(const LeafFamily& family, double epsilon,
                      const std::vector<double>& fixed_leaves = {});

struct IsotopyTrace {
  std::vector<double> s;
  std::vector<LeafFamily> slices;
  double max_c0_to_input = 0.0;
  double target_c0 = 0.0;       // c0 from F to the slice-1 family on S
  double max_value_gap = 0.0;   // sup |g - f| over N(S)
  double max_weight_slope = 0.0;

  const LeafFamily& output() const { return slices.back(); }
};

/// h^s_t = (1 - s l) f_t + s l g_t.  `target` holds G's sample grid in the
/// layout of F; it only needs to be monotone on N(S).
IsotopyTrace local_damped_replace(const LeafFamily& family, const std::vector<double>& target,
                                  const RegionMask& region, const DampingProfile& damping,
                                  int slices = 5);
IsotopyTrace local_damped_replace(const LeafFamily& family, const LeafFamily& target,
                                  const RegionMask& region, const DampingProfile& damping,
                                  int slices = 5);

class HolonomyMismatch : public Error {
 public:
  HolonomyMismatch(const std::string& what, double defect, std::string stage = "straightening")
      : Error(what, std::move(stage)), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

struct Straightening {
  IsotopyTrace trace;
  double holonomy_defect = 0.0;
  double correspondence_residual = 0.0;
};

/// Fiber map at `node`: rho_G(beta)^-1 o rho_F(beta) for beta from the
/// anchor of F to the node.
HolonomyMap fiber_correspondence(const LeafFamily& f, const LeafFamily& g, std::size_t node);

/// Holonomy along paths from the first corner of S to the other three is
/// compared first; a mismatch above 1e-6 throws HolonomyMismatch.
Straightening straightening_isotopy(const LeafFamily& f, const LeafFamily& g, const RegionMask& region,
                                    int slices = 5);

struct HolonomySmoothing {
  LeafFamily family;        // G
  LeafFamily smoothed;      // S
  HolonomyMap correction;   // h = rho_S(alpha) o rho_P(alpha)^-1 on the fiber over (1/2, 0)
  std::vector<double> tau;  // S-index of the leaf s_{h(t_k)}
  double holonomy_defect = 0.0;
  double formula_residual = 0.0;
  double achieved = 0.0;
  double inner_epsilon = 0.0;
  int retries = 0;
};

HolonomySmoothing smooth_with_holonomy_constraint(const LeafFamily& p, const BandMask& bands,
                                                  double epsilon);

/// Collar A = points within `inner` of the boundary of the square, N(A)
/// within `outer`.
struct CollarSpec {
  double inner = 0.1;
  double outer = 0.3;
  double weight(Point2 p) const;  // 1 on A, 0 off N(A)
};

struct ConeResult {
  LeafFamily family;
  double smoothing_c0 = 0.0;     // disk family vs its smoothing
  double c0_to_input = 0.0;      // output vs disk family
  double collar_holonomy_defect = 0.0;
};

/// `annular` is sampled on the same disk grid; only its values over N(A)
/// are used.
ConeResult damped_cone(const LeafFamily& annular, const LeafFamily& disk, const CollarSpec& collar,
                       double epsilon);

LeafFamily x_invariant_normalize(const LeafFamily& family);

/// Holonomy from the fiber over (x, 0) around the core circle y: 0 -> 1.
HolonomyMap core_circle_holonomy(const LeafFamily& family, double x);

struct StageReport {
  std::string stage;
  std::string region;
  double achieved_c0 = 0.0;
  double holonomy_defect = 0.0;
  int retries = 0;
};

struct FaceCompatibility {
  double defect = 0.0;
  std::string witness;  // the worst face pair
};

/// For every pair of boxes sharing a face: holonomy along the face from its
/// first node to each later node, compared in global heights.
FaceCompatibility face_compatibility(const DecompositionComplex& scene);

struct GlobalSmoothing {
  DecompositionComplex scene;
  std::vector<StageReport> stages;
  std::vector<double> box_c0;
  double max_c0 = 0.0;
  double face_defect = 0.0;
  double inner_epsilon = 0.0;
  int retries = 0;
};

GlobalSmoothing globally_smooth(const DecompositionComplex& scene, double epsilon);

}  // namespace foliate

#endif  // FOLIATE_SMOOTHING_HPP
