#ifndef FOLIATE_KERNEL_HPP
#define FOLIATE_KERNEL_HPP

// Scalar building blocks: damping profiles, partitions of [0,1] and the
// insertion/collapse maps used by the Denjoy construction.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace foliate {

/// Base class for every error raised by the library.  `stage` names the
/// pipeline step that failed (empty for plain argument errors).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string stage = {})
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline constexpr double kBisectionTol = 1e-12;
inline constexpr double kCompareTol = 1e-9;
inline constexpr double kFlatTol = 1e-9;

// ---------------------------------------------------------------------------
// Damping profiles

/// Flat bump e(x) = exp(-1/x) for x > 0, 0 otherwise.
double flat_bump(double x);

/// The smooth step l(x) = e(x) / (e(x) + e(1-x)), clamped outside [0,1].
double smooth_step(double x);

/// Derivative of smooth_step, closed form.
double smooth_step_prime(double x);

/// Inverse of smooth_step on [0,1] by bisection.
double smooth_step_inverse(double y);

class DampingProfile {
 public:
  DampingProfile(int flat_order, int resolution);

  double operator()(double x) const { return smooth_step(x); }
  double derivative(double x) const { return smooth_step_prime(x); }
  double inverse(double y) const { return smooth_step_inverse(y); }

  int flat_order() const { return flat_order_; }
  int resolution() const { return static_cast<int>(args_.size()) - 1; }
  const std::vector<double>& arguments() const { return args_; }
  const std::vector<double>& values() const { return values_; }
  std::string formula() const { return "exp(-1/x)/(exp(-1/x)+exp(-1/(1-x)))"; }

  /// Forward/backward finite-difference derivatives of orders 1..flat_order
  /// at the endpoints, step 1/resolution.  Index k-1 holds order k.
  std::vector<double> endpoint_derivatives(bool at_one) const;

  /// Largest |d/dx| over the sample grid.
  double max_slope() const;

 private:
  int flat_order_;
  std::vector<double> args_;
  std::vector<double> values_;
};

DampingProfile make_damping(int flat_order, int resolution);

/// Ramp that is 0 for x <= lo, 1 for x >= hi, and smooth_step in between.
double damped_ramp(double x, double lo, double hi);

// ---------------------------------------------------------------------------
// Insertion schedules and collapse maps

struct InsertionEntry {
  double point;   // blowup point z_i in (0,1)
  double weight;  // inserted length w_i > 0
};

class InsertionSchedule {
 public:
  InsertionSchedule() = default;
  explicit InsertionSchedule(std::vector<InsertionEntry> entries);

  const std::vector<InsertionEntry>& entries() const { return entries_; }
  double total_weight() const { return total_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<InsertionEntry> entries_;
  double total_ = 0.0;
};

struct CollapsedInterval {
  double lo;     // z_i^-
  double hi;     // z_i^+
  double point;  // z_i
  double weight; // w_i
};

/// Result of inverting a collapse map: a single point or a closed interval.
using Preimage = std::variant<double, std::pair<double, double>>;

/// p = c o s : [0,1] -> [0,1]; s scales by (1+w), c collapses each inserted
/// interval J_i back to its blowup point.
class CollapseMap {
 public:
  CollapseMap() = default;  // identity
  explicit CollapseMap(const InsertionSchedule& schedule);

  double operator()(double x) const;
  Preimage preimage(double y) const;

  /// Affine re-embedding of [0,1] minus the blowup points into the
  /// complement of the collapsed intervals; p(embed(y)) = y.
  double embed(double y) const;

  /// Linear scaling s : [0,1] -> [0,1+w].
  double scale(double x) const { return slope_ * x; }
  /// Cantor-style left inverse c : [0,1+w] -> [0,1].
  double cantor(double u) const;

  const std::vector<CollapsedInterval>& intervals() const { return intervals_; }
  double slope() const { return slope_; }
  double total_weight() const { return slope_ - 1.0; }
  bool is_identity() const { return intervals_.empty(); }

 private:
  std::vector<CollapsedInterval> intervals_;
  double slope_ = 1.0;
};

CollapseMap build_collapse(const InsertionSchedule& schedule);
Preimage collapse_preimage(const CollapseMap& map, double y);

// ---------------------------------------------------------------------------
// Partitions

class Partition {
 public:
  Partition() : cuts_{0.0, 1.0} {}
  explicit Partition(std::vector<double> cuts);

  const std::vector<double>& cuts() const { return cuts_; }
  std::size_t cells() const { return cuts_.size() - 1; }
  /// Index i of the cell [t_i, t_{i+1}] containing t (last cell is closed).
  std::size_t cell_of(double t) const;
  bool contains_cut(double t) const;

 private:
  std::vector<double> cuts_;
};

class LeafFamily;

/// Greedy left-to-right partition such that on every cell the leaf normals
/// at every base node stay within `epsilon` radians of one another.
Partition choose_partition(const LeafFamily& family, double epsilon);

}  // namespace foliate

#endif  // FOLIATE_KERNEL_HPP
