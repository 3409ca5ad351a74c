#ifndef FOLIATE_MEASURE_HPP
#define FOLIATE_MEASURE_HPP

// Transverse measures on product foliations, their smoothing along
// transversals, and rational approximation of linear measured foliations
// on tori.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "foliate/decomposition.hpp"
#include "foliate/foliation.hpp"

namespace foliate {

/// Strictly increasing cumulative function C : [0,1] -> [0,1] with C(0) = 0
/// and C(1) = 1, either piecewise linear or a monotone cubic spline.
class Cumulative {
 public:
  enum class Kind { PiecewiseLinear, Spline };

  Cumulative();  // identity
  static Cumulative piecewise_linear(std::vector<double> xs, std::vector<double> ys);
  /// Monotone piecewise cubic Hermite interpolant with the given endpoint
  /// derivatives.  Needs at least four knots.
  static Cumulative spline(std::vector<double> xs, std::vector<double> ys, double d0, double d1);

  double operator()(double x) const;
  /// Solves C(x) = y by bisection to machine precision.
  double inverse(double y) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double left_derivative() const { return d0_; }
  double right_derivative() const { return d1_; }

 private:
  struct Spline;
  Kind kind_ = Kind::PiecewiseLinear;
  std::vector<double> xs_;
  std::vector<double> ys_;
  double d0_ = 1.0;
  double d1_ = 1.0;
  std::shared_ptr<const Spline> spline_;
};

enum class MeasureKind {
  FiberCoordinate,  // mu[0,z] = C(z) on every fiber
  LeafIndexed,      // mu[0,z] = C(index of the leaf through (p, z))
};

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

struct TransverseMeasure {
  MeasureKind kind = MeasureKind::FiberCoordinate;
  Cumulative cumulative;

  /// mu of [0, z] on the fiber over p.
  double below(const LeafFamily& family, Point2 p, double z) const;
  double mass(const LeafFamily& family, Point2 p, double a, double b) const {
    return below(family, p, b) - below(family, p, a);
  }
};

struct InvarianceReport {
  double defect = 0.0;
  std::size_t worst_path = 0;
};

/// sup over paths and fiber intervals [s,t] of |mu[s,t] - mu(rho[s,t])|,
/// sampled at 129 heights per fiber.
InvarianceReport verify_invariance(const LeafFamily& family, const TransverseMeasure& mu,
                                   const std::vector<BasePath>& paths);

/// Box sides from the corner (0,0), the two diagonals and a cross.
std::vector<BasePath> standard_paths(const BaseDomain& base);

struct TransversalSmoothing {
  Cumulative h;               // the input cumulative
  Cumulative g;               // smooth replacement
  std::vector<double> nodes;  // subsample nodes
  std::vector<double> f;      // f = h^-1 o g at the nodes
  double spline_residual = 0.0;  // max |g - h| at the nodes
  double pushforward_residual = 0.0;  // max |h(f) - g| at the nodes

  double reparametrize(double t) const { return h.inverse(g(t)); }
};

/// `extra_nodes` are added to the uniform subsample grid, so that the
/// spline matches h there as well.
TransversalSmoothing smooth_measure_on_transversal(const Cumulative& h, int subsample_count,
                                                   const std::vector<double>& extra_nodes = {});

/// A decomposition carrying one measure in global heights: on box b the
/// fiber height z stands for t_lo + (t_hi - t_lo) z, and a leaf-indexed
/// measure uses the leaf index in the same global scale.
struct MeasuredScene {
  DecompositionComplex scene;
  TransverseMeasure measure;
};

double scene_measure_below(const MeasuredScene& ms, std::size_t box, Point2 local, double z);

/// Paths inside every box plus a comparison of the two sides of every shared
/// face.
InvarianceReport verify_invariance(const MeasuredScene& ms);

struct MeasureStage {
  std::string stage;
  double residual = 0.0;
};

struct MeasuredSmoothing {
  MeasuredScene scene;
  TransversalSmoothing transversal;
  std::vector<MeasureStage> stages;
  double invariance_before = 0.0;
  double invariance_after = 0.0;
  double leaf_change = 0.0;
};

MeasuredSmoothing smooth_measured_scene(const MeasuredScene& ms, int subsample_count = 33);

// ---------------------------------------------------------------------------
// Tischler approximation

struct ClosedOneForm {
  std::vector<double> coefficients;  // (a, b) on T^2 or (a, b, c) on T^3
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

/// Continued-fraction convergents of r, stopping once one is exact (within
/// 1e-15 relative) or the denominator passes `max_denominator`.
std::vector<Convergent> convergents(double r, std::int64_t max_denominator = 1'000'000'000);

/// Angle between the kernels of two forms (equivalently their normals).
double kernel_angle(const std::vector<double>& a, const std::vector<double>& b);

struct TischlerResult {
  ClosedOneForm input;
  std::size_t lead = 0;                  // index of the coefficient scaled to q
  std::vector<std::int64_t> integer_form;  // primitive integer coefficients
  std::int64_t denominator = 1;          // q
  std::vector<Convergent> tried;         // convergents examined (T^2)
  double angle_defect = 0.0;
  std::int64_t period = 1;               // wraps until a leaf closes
};

TischlerResult tischler_fibration(const ClosedOneForm& form, double epsilon);

struct ClosedLeafCertificate {
  bool closes = true;
  std::int64_t period = 0;
  std::size_t points_checked = 0;
};

/// Follows the leaf through every point of a grid x grid lattice in exact
/// integer arithmetic and records after how many wraps it returns.
ClosedLeafCertificate verify_closed_leaves(const TischlerResult& result, int grid);

}  // namespace foliate

#endif  // FOLIATE_MEASURE_HPP
