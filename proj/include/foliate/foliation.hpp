#ifndef FOLIATE_FOLIATION_HPP
#define FOLIATE_FOLIATION_HPP

// Almost horizontal product foliations on flow boxes D x I, stored as
// monotone families of sampled leaf graphs z = f_t(x).

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "foliate/kernel.hpp"

namespace foliate {

enum class BaseShape { Rectangle, Annulus, Disk };

std::string to_string(BaseShape shape);
BaseShape base_shape_from_string(const std::string& name);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Grid over the base D.  Non-periodic axes carry n nodes at i/(n-1);
/// periodic axes carry n nodes at i/n and wrap.  The annulus is
/// [0,1] x S^1 (second axis periodic); the disk is modelled by the closed
/// square, whose boundary collar plays the role of the annulus A.
struct BaseDomain {
  BaseShape shape = BaseShape::Rectangle;
  int nx = 0;
  int ny = 0;
  bool periodic_x = false;
  bool periodic_y = false;

  static BaseDomain rectangle(int nx, int ny);
  static BaseDomain annulus(int nx, int ny);
  static BaseDomain disk(int n);

  void validate() const;
  std::size_t nodes() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  int col(std::size_t node) const { return static_cast<int>(node % nx); }
  int row(std::size_t node) const { return static_cast<int>(node / nx); }
  double x(int i) const { return periodic_x ? double(i) / nx : double(i) / (nx - 1); }
  double y(int j) const { return periodic_y ? double(j) / ny : double(j) / (ny - 1); }
  double dx() const { return periodic_x ? 1.0 / nx : 1.0 / (nx - 1); }
  double dy() const { return periodic_y ? 1.0 / ny : 1.0 / (ny - 1); }
  Point2 point(std::size_t node) const { return {x(col(node)), y(row(node))}; }

  bool operator==(const BaseDomain&) const = default;
};

struct NodeIndex {
  int i = 0;
  int j = 0;
  bool operator==(const NodeIndex&) const = default;
};

/// Sampled product foliation.  Leaves are indexed by their height over the
/// anchor node, values are linear in t between samples and bilinear in the
/// base between nodes.
class LeafFamily {
 public:
  /// `values` is laid out [k][j][i] (leaf-major, then row-major grid).
  LeafFamily(BaseDomain base, std::vector<double> t, std::vector<double> values, NodeIndex anchor);

  /// Builds a family from leaf grids alone; t-samples are read off the
  /// anchor node, which makes the anchoring invariant hold by construction.
  /// Boundary leaves within 1e-12 of 0 and 1 are snapped.
  static LeafFamily from_leaves(BaseDomain base, std::vector<double> values, NodeIndex anchor);

  const BaseDomain& base() const { return base_; }
  const std::vector<double>& t_samples() const { return t_; }
  const std::vector<double>& values() const { return values_; }
  NodeIndex anchor() const { return anchor_; }
  std::size_t anchor_node() const { return base_.node(anchor_.i, anchor_.j); }
  std::size_t leaf_count() const { return t_.size(); }

  std::span<const double> leaf(std::size_t k) const {
    return {values_.data() + k * base_.nodes(), base_.nodes()};
  }
  double value(std::size_t k, std::size_t node) const { return values_[k * base_.nodes() + node]; }

  /// Segment index and weight for leaf index t; exact sample hits give weight 0.
  std::pair<std::size_t, double> locate(double t) const;

  double eval(double t, std::size_t node) const;
  double eval(double t, Point2 p) const;
  /// Bilinear value of sample leaf k at an arbitrary base point.
  double sample_at(std::size_t k, Point2 p) const;

  /// Leaf index of the leaf through (node, z); exact on sample heights.
  double leaf_through(std::size_t node, double z) const;
  double leaf_through(Point2 p, double z) const;

  /// Finite-difference gradient of sample leaf k at a node.
  std::array<double, 2> sample_gradient(std::size_t k, std::size_t node) const;
  std::array<double, 2> gradient(double t, std::size_t node) const;
  /// Unit normal of the leaf through (node, z).
  std::array<double, 3> normal_at(std::size_t node, double z) const;

  /// Sub-family of leaves with index in [a,b], rescaled fiberwise so that
  /// the new boundary leaves are 0 and 1.
  LeafFamily restrict_leaves(double a, double b) const;

  bool strictly_monotone_at(std::size_t node) const;

 private:
  void validate() const;

  BaseDomain base_;
  std::vector<double> t_;
  std::vector<double> values_;
  NodeIndex anchor_;
};

/// Strictly increasing piecewise-linear function given by knots.
class MonotonePL {
 public:
  MonotonePL() = default;
  MonotonePL(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double inverse_at(double y) const;
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 protected:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Monotone self-homeomorphism of [0,1] with fixed endpoints, piecewise
/// linear between knots.  Composition and inversion are exact on knots.
class HolonomyMap : public MonotonePL {
 public:
  HolonomyMap();  // identity
  HolonomyMap(std::vector<double> xs, std::vector<double> ys);

  static HolonomyMap identity() { return HolonomyMap(); }

  HolonomyMap inverse() const;
  /// (*this) o (inner)
  HolonomyMap compose(const HolonomyMap& inner) const;
  /// sup |a - b| over `samples` equally spaced points of [0,1].
  double distance(const HolonomyMap& other, int samples = 101) const;
};

/// Sampled path in the base; consecutive samples lie within one grid cell.
struct BasePath {
  std::vector<Point2> points;

  static BasePath segment(const BaseDomain& base, Point2 from, Point2 to);
  BasePath reversed() const;
  BasePath then(const BasePath& next) const;
  void validate(const BaseDomain& base) const;
};

/// Normals of every sample leaf at every node, laid out [k][node].
struct TangentPlaneField {
  std::vector<double> heights;  // z of (leaf k, node), same layout
  std::vector<std::array<double, 3>> normals;
};

double leaf_through(const LeafFamily& family, Point2 point, double z);
TangentPlaneField tangent_field(const LeafFamily& family);

/// Angle in radians between two unit vectors.
double normal_angle(const std::array<double, 3>& a, const std::array<double, 3>& b);

/// Sup over shared sample points of the angle between leaf normals.
double c0_distance(const LeafFamily& a, const LeafFamily& b);
/// Same, restricted to nodes where `mask[node]` is true.
double c0_distance(const LeafFamily& a, const LeafFamily& b, const std::vector<bool>& mask);

/// Transport from the fiber over path end to the fiber over path start.
HolonomyMap holonomy(const LeafFamily& family, const BasePath& path);
HolonomyMap holonomy(const LeafFamily& family, Point2 start, Point2 end);

double x_invariance_defect(const LeafFamily& family);

}  // namespace foliate

#endif  // FOLIATE_FOLIATION_HPP
