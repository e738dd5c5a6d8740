#pragma once

// Smoothed indicator of T^{-1}(I) on the torus: Fourier coefficients of the
// sharp indicator, r-fold box averaging on the Fourier side, Weyl averaging
// and the rewrite of the result as a combination of irreducible characters.

#include "satotate/lie.hpp"
#include "satotate/st_group.hpp"

#include <map>
#include <span>
#include <string>

namespace satotate {

struct FourierSeries {
  int q = 1;
  std::int64_t M = 0;
  std::map<IntVec, double> coeffs;  // frequency (torus coordinates) -> coefficient

  double coefficient(const IntVec& m) const;
};

struct SmoothingParams {
  double Delta = 0.0;
  int r = 1;
  double delta = 0.0;  // box half-width, r sqrt(q) K delta = Delta
  double K = 0.0;
  std::int64_t M = 0;
};

/// Builds consistent parameters from Delta, r and M (delta derived from K).
SmoothingParams make_smoothing_params(const GroupDescriptor& desc, double Delta, int r,
                                      std::int64_t M);
SmoothingParams default_parameters(const GroupDescriptor& desc, double x, std::int64_t N,
                                   const Interval& interval);

FourierSeries indicator_fourier(const GroupDescriptor& desc, const Interval& interval,
                                std::int64_t M);
double box_multiplier(std::int64_t m, double delta);
FourierSeries smooth(const FourierSeries& series, const SmoothingParams& params);
double evaluate_series(const FourierSeries& series, std::span<const double> theta);

/// Reference value of the smoothed function by direct convolution (slow).
double evaluate_direct(const GroupDescriptor& desc, const Interval& interval,
                       const SmoothingParams& params, std::span<const double> theta,
                       double tol = 1e-10);

/// Upper bound for |c_m| of the smoothed series (min over the admissible
/// decay exponents, capped by |c_0|).
double coefficient_bound(const GroupDescriptor& desc, const SmoothingParams& params,
                         const IntVec& m, double c0);
/// Upper bound for the sum of |c_m| over ||m||_inf > M.
double tail_bound(const GroupDescriptor& desc, const SmoothingParams& params);

FourierSeries weyl_average(const GroupDescriptor& desc, const FourierSeries& series);

struct Decomposition {
  double delta = 0.0;
  std::map<Weight, double> coeffs;  // nontrivial characters only
  double virtual_dimension = 0.0;   // sum |p_lambda| dim(lambda)
};
Decomposition character_decomposition(const GroupDescriptor& desc, const FourierSeries& F);

/// Value of a decomposition at a torus point (semisimple torus coordinates
/// first, then abelian angles).
double evaluate_decomposition(const GroupDescriptor& desc, const Decomposition& dec,
                              std::span<const double> theta);

std::string series_to_csv(const FourierSeries& series);

}  // namespace satotate
