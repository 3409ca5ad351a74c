#ifndef FOLIATE_FAMILIES_HPP
#define FOLIATE_FAMILIES_HPP

// Standard leaf families used by scenes, examples and tests.

#include <cstdint>
#include <functional>

#include "foliate/foliation.hpp"

namespace foliate {

/// Equally spaced leaf indices k/(n-1).
std::vector<double> uniform_t(int n);

/// Samples f(t, x, y) at every (t, node).  The result is re-anchored at
/// `anchor`, so f must satisfy f(t, anchor) = t for the indices to mean
/// what the caller expects.
LeafFamily family_from_function(const BaseDomain& base, const std::vector<double>& t,
                                const std::function<double(double, double, double)>& f,
                                NodeIndex anchor = {});

/// f_t = t.
LeafFamily horizontal_family(const BaseDomain& base, int leaves);

/// f_t = t + s t (1-t) x, anchored on the column x = 0.
LeafFamily sheared_family(const BaseDomain& base, int leaves, double shear);

/// f_t = t + k (x - x_a) phi(t): planes of slope k in the middle leaves,
/// bent back to 0 and 1 by a linear ramp phi of width `margin`.
LeafFamily tilted_family(const BaseDomain& base, int leaves, double slope, double margin = 0.25,
                         NodeIndex anchor = {});

/// f_t = t + a t (1-t) sin(2 pi y), independent of x.
LeafFamily wavy_family(const BaseDomain& base, int leaves, double amplitude);

/// Seeded family t + t(1-t) A(x,y,t) with random low-frequency A, small
/// enough to stay strictly monotone.
LeafFamily random_family(const BaseDomain& base, int leaves, std::uint64_t seed);

}  // namespace foliate

#endif  // FOLIATE_FAMILIES_HPP
