#ifndef FOLIATE_DECOMPOSITION_HPP
#define FOLIATE_DECOMPOSITION_HPP

// Flow box decompositions of T^3 = T^2 x S^1 by axis-aligned boxes.
// Base rectangles live in [0,1]^2 with 0 ~ 1 on both axes; heights are
// leaf-index intervals of the leaf circle cut open at leaf 0.

#include <optional>
#include <string>
#include <vector>

#include "foliate/foliation.hpp"

namespace foliate {

enum class Side { West, East, South, North, Annular };

std::string to_string(Side side);
Side side_from_string(const std::string& name);

struct FaceSpec {
  Side side = Side::West;
  double lo = 0.0;
  double hi = 1.0;
};

struct BoxRect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool full() const { return x0 == 0.0 && x1 == 1.0 && y0 == 0.0 && y1 == 1.0; }
};

struct FlowBoxSpec {
  std::string id;
  BoxRect rect;
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::vector<FaceSpec> faces;
  std::optional<LeafFamily> family;  // over the box-local unit square

  bool annular() const { return rect.full(); }
  double volume() const { return rect.area() * (t_hi - t_lo); }
  /// Box-local base coordinates of a global base point.
  Point2 to_local(Point2 global) const;
};

/// Global foliation the scene was generated from.
struct SceneFoliation {
  std::string kind = "horizontal";  // horizontal | sheared
  double shear = 0.0;
};

struct DecompositionComplex {
  std::vector<FlowBoxSpec> boxes;
  std::vector<std::string> relative;  // ids of boxes forming V
  SceneFoliation foliation;

  bool in_relative(const std::string& id) const;
  std::optional<std::size_t> index_of(const std::string& id) const;
  double volume() const;
};

struct TorusSceneOptions {
  int m = 2;
  int n = 2;
  /// Interior cut heights per cell, row-major (j * m + i); empty = no cuts.
  std::vector<std::vector<double>> height_splits;
  SceneFoliation foliation;
  int grid = 17;
  int leaves = 33;
};

/// Cells are listed row-major; cut cells contribute their pieces bottom-up.
DecompositionComplex build_torus_scene(const TorusSceneOptions& options);

/// Faces covering each side of a box [lo, hi]: one per side, or a single
/// annular face for a box spanning the whole torus.
std::vector<FaceSpec> default_faces(const BoxRect& rect, double lo, double hi);

struct ConditionCheck {
  int condition = 0;
  bool pass = true;
  std::string witness;
};

struct ValidationReport {
  std::vector<ConditionCheck> conditions;  // conditions 1..5 in order
  bool annular_faces = false;

  bool valid() const;
  const ConditionCheck& condition(int c) const { return conditions.at(c - 1); }
};

ValidationReport validate(const DecompositionComplex& complex);

/// Splits offending later boxes along the heights of earlier faces until
/// condition (5) holds.  `sweeps`, if given, receives the number of passes
/// that changed the complex.
DecompositionComplex enforce_condition5(const DecompositionComplex& complex,
                                        std::size_t* sweeps = nullptr);

struct TransitivityReport {
  bool transitive = true;
  std::size_t failed_at = 0;  // 1-based listing position of the first failure
  std::string witness;
};

TransitivityReport check_transitive(const DecompositionComplex& complex);

/// A vertical face placed in global coordinates.  axis 0: the face lies on
/// the line x = line and spans y in [s0,s1]; axis 1: on y = line, spanning
/// x.  Annular faces use axis 2.
struct GeoFace {
  std::size_t box = 0;
  std::size_t face = 0;
  Side side = Side::West;
  int axis = 0;
  double line = 0.0;
  double s0 = 0.0, s1 = 1.0;
  double h0 = 0.0, h1 = 1.0;

  std::string label(const DecompositionComplex& complex) const;
};

std::vector<GeoFace> geometric_faces(const DecompositionComplex& complex);

struct FacePoset {
  std::size_t side_faces = 0;                     // faces counted per box
  std::vector<GeoFace> faces;                     // after identification
  std::vector<std::vector<std::size_t>> members;  // indices into geometric_faces
  std::vector<std::vector<std::size_t>> above;    // proper containments a < b
  std::vector<bool> maximal;
  std::vector<std::size_t> maximal_faces;
  /// The unique maximal face above each face.
  std::vector<std::size_t> top;
};

FacePoset maximal_faces(const DecompositionComplex& complex);

struct RegularNeighborhoodStructure {
  double face_width = 0.0;
  double edge_width = 0.0;
  std::vector<Point2> edges;          // vertical edges of maximal faces
  std::vector<BoxRect> edge_squares;  // N_v pieces, may extend past [0,1]
  std::vector<BoxRect> face_strips;   // N(sigma_j) bases
  std::vector<GeoFace> strip_faces;   // sigma_j
};

/// Edge squares have half-width 2*width, face strips half-width width.
/// Throws when two strips overlap with positive volume outside N_v.
RegularNeighborhoodStructure regular_neighborhood(const DecompositionComplex& complex,
                                                  double width);

}  // namespace foliate

#endif  // FOLIATE_DECOMPOSITION_HPP
