#pragma once

// Level-set geometry of the trace map used by the quadrature routines:
// preimages of an interval along the first torus coordinate, and the outer
// break points where that preimage changes topology.

#include "satotate/st_group.hpp"

#include <utility>
#include <vector>

namespace satotate::detail {

using Segments = std::vector<std::pair<double, double>>;

/// {t in [0,1] : lo <= T(t, rest...) <= hi}, as disjoint sorted segments.
Segments preimage_on_line(const GroupDescriptor& desc, std::span<const double> rest, double lo,
                          double hi);

/// Sorted list 0 = k_0 < ... < k_n = 1 of second-coordinate values between
/// which the inner preimage keeps the same number of pieces (q = 2 only).
std::vector<double> outer_breaks(const GroupDescriptor& desc, double lo, double hi);

/// Integral over t in [a,b] of sum_k c_k cos(2 pi (k_1 t + k_rest . rest)).
double line_integral(const TrigPoly& poly, double a, double b, std::span<const double> rest);

/// Smoothstep map s(t) = 3t^2 - 2t^3 and its derivative; flattens the
/// square-root behaviour of the inner integral at outer break points.
inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
inline double smoothstep_slope(double t) { return 6.0 * t * (1.0 - t); }

}  // namespace satotate::detail
