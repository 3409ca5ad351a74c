#ifndef FOLIATE_BLOWUP_HPP
#define FOLIATE_BLOWUP_HPP

// Denjoy blowup of finitely many leaves: one flow box at a time, then
// glued over a decomposition of T^3.

#include <string>
#include <vector>

#include "foliate/decomposition.hpp"
#include "foliate/foliation.hpp"
#include "foliate/kernel.hpp"

namespace foliate {

/// Collapse of one fiber [0,1].  Fixed heights split the fiber into
/// segments; each segment collapses with the rescaled sub-schedule of the
/// points it contains, so the fixed heights are left in place.
class FiberCollapse {
 public:
  struct Gap {
    double lo;
    double hi;
    double point;   // collapsed to this height
    double weight;  // requested w_i
  };

  FiberCollapse() = default;  // identity
  FiberCollapse(const InsertionSchedule& schedule, const std::vector<double>& fixed);

  double operator()(double z) const;
  /// Re-embedding of the fiber minus the blowup points; (*this)(embed(y)) = y.
  double embed(double y) const;
  const std::vector<Gap>& gaps() const { return gaps_; }
  bool is_identity() const { return gaps_.empty(); }

  /// Moves every gap by `offset` without touching the rest of the map.
  /// Only used to build deliberately broken data.
  void shift_gaps(double offset);

 private:
  std::vector<double> cuts_{0.0, 1.0};
  std::vector<CollapseMap> maps_{CollapseMap()};
  std::vector<Gap> gaps_;
  double shift_ = 0.0;
};

/// One packet family per schedule entry, over the same base grid as the box.
/// Packet leaf heights run from 0 (bottom of the gap) to 1 (top).
struct InsertedPacket {
  std::vector<LeafFamily> leaves;
};

struct CollapseData {
  BaseDomain base;
  std::vector<FiberCollapse> fibers;  // per node

  static CollapseData identity(const BaseDomain& base);

  double pi(std::size_t node, double z) const { return fibers.at(node)(z); }
  /// Straight-line trace (1 - t) z + t pi(z).
  double pi_t(std::size_t node, double z, double t) const;
  /// j(p, sigma) for gap `gap` over node p.
  double inject(std::size_t node, std::size_t gap, double sigma) const;
  std::size_t gap_count() const { return fibers.empty() ? 0 : fibers.front().gaps().size(); }
};

/// Where each output leaf came from.
struct LeafOrigin {
  int packet = -1;         // -1 for an embedded input leaf
  std::size_t index = 0;   // input sample or packet sample
};

struct BlownBox {
  LeafFamily family;
  CollapseData collapse;
  std::vector<LeafOrigin> origin;  // per output sample
};

/// True when every sample leaf is constant over the base within `tol`.
bool is_horizontal(const LeafFamily& family, double tol = 1e-12);

BlownBox blowup_box(const LeafFamily& family, const InsertionSchedule& schedule,
                    const InsertedPacket& packets, const std::vector<double>& fixed_leaves = {});

struct PropertyCheck {
  int property = 0;
  bool pass = true;
  double defect = 0.0;
  std::string witness;
};

struct BlowupReport {
  std::vector<PropertyCheck> properties;  // 1..8
  double max_leaf_defect = 0.0;           // property (6) residual

  bool all_pass() const;
  const PropertyCheck& property(int p) const { return properties.at(p - 1); }
};

/// Checks the eight defining properties of a blowup at grid resolution.
BlowupReport verify_blowup(const LeafFamily& original, const BlownBox& blown, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Scenes

/// Leaves to blow up, as global heights of the leaf circle, with weights.
struct BlowupLocus {
  std::vector<InsertionEntry> leaves;
  double total_weight() const;
};

/// How inserted packets are foliated.  "wave" packets use the global base
/// coordinate, sigma + a sigma (1 - sigma) sin(2 pi X), so they glue
/// across faces; "sheared" is sigma + a sigma (1 - sigma) x in box
/// coordinates and only makes sense for a single box.
struct PacketSpec {
  std::string kind = "horizontal";  // horizontal | wave | sheared
  double amplitude = 0.0;
  int leaves = 9;
};

LeafFamily packet_family(const PacketSpec& spec, const BaseDomain& base, const BoxRect& rect);

struct BoxBlowupStage {
  std::string stage;  // edges | faces | interior
  std::string region;
  double c0 = 0.0;
  double holonomy_defect = 0.0;
};

struct SceneBlowup {
  DecompositionComplex scene;
  std::vector<BlownBox> boxes;
  std::vector<InsertionSchedule> schedules;  // per box, box-local
  std::vector<BoxBlowupStage> stages;
  std::vector<double> box_c0;
  double max_c0 = 0.0;
  double face_defect = 0.0;  // glued holonomy vs output holonomy
};

/// Box-local schedule of a global locus: points and weights divided by the
/// box height.
InsertionSchedule local_schedule(const FlowBoxSpec& box, const BlowupLocus& locus);

SceneBlowup blowup_scene(const DecompositionComplex& scene, const BlowupLocus& locus,
                         const PacketSpec& packets, double epsilon);

struct SceneBlowupReport {
  std::vector<BlowupReport> boxes;
  bool all_pass() const;
  /// Worst defect per property across boxes, with the box id in the witness.
  std::vector<PropertyCheck> summary() const;
};

SceneBlowupReport verify_blowup(const DecompositionComplex& original, const SceneBlowup& blown,
                                double tol = 1e-9);

}  // namespace foliate

#endif  // FOLIATE_BLOWUP_HPP
