#pragma once

// Connected Sato-Tate groups for g <= 2 given by root data plus an integer
// Cartan embedding, the trace map on the maximal torus, and the pushforward
// of Haar measure to [-2g, 2g].
//
// Torus coordinates: theta in [0,1]^q. The semisimple block uses eigen-angle
// coordinates (e-basis for C2), the abelian block the circle angles.

#include "satotate/lie.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace satotate {

struct GroupDescriptor {
  std::string name;
  int g = 1;
  RootSystem root_system;
  int q = 1;
  IntMat A;  // g rows a_1..a_g, each of length q
  bool connected = true;

  int phi() const { return root_system.num_positive_roots(); }
};

const std::vector<std::string>& catalog_names();
GroupDescriptor catalog_lookup(const std::string& name);

/// Closed interval [lo, hi] inside [-2g, 2g].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};
Interval make_interval(const GroupDescriptor& desc, double lo, double hi);

/// Trigonometric polynomial in torus coordinates: frequency -> real coefficient.
/// Kept symmetric under m -> -m so the function is real.
using TrigPoly = std::map<IntVec, double>;

double trace_value(const GroupDescriptor& desc, std::span<const double> theta);
std::vector<double> trace_gradient(const GroupDescriptor& desc, std::span<const double> theta);
double gradient_bound(const GroupDescriptor& desc);
int crossing_bound(const GroupDescriptor& desc);

/// Weyl integration density on [0,1]^q (integrates to 1).
TrigPoly weyl_density(const GroupDescriptor& desc);
double weyl_density_value(const GroupDescriptor& desc, std::span<const double> theta);

double measure_interval(const GroupDescriptor& desc, const Interval& interval, double tol = 1e-9);

struct TailEstimate {
  double approx;
  double error_bound;
};
/// mu_{U(1)}([2 - y^{-1/2}, 2]) ~ 1/(pi y^{1/4}).
TailEstimate measure_tail_u1(double y);

Rational epsilon(const GroupDescriptor& desc);
Rational epsilon_pair(const GroupDescriptor& a, const GroupDescriptor& b);
double nu(const GroupDescriptor& desc, double z);
double nu_pair(const GroupDescriptor& a, const GroupDescriptor& b, double z);
double x0_threshold(const GroupDescriptor& desc, double interval_length, std::int64_t N,
                    double constant);

std::vector<IntVec> hodge_circle_basis(const GroupDescriptor& desc);
/// Bound on |a_{l,j}| implied by a Hodge-circle basis (Hadamard on the sign matrix).
double embedding_entry_bound(const GroupDescriptor& desc);

/// E[T^n] under the trace measure.
double moment(const GroupDescriptor& desc, int n, double tol = 1e-9);

std::string descriptor_to_json(const GroupDescriptor& desc);
GroupDescriptor descriptor_from_json(const std::string& text);

}  // namespace satotate
