#pragma once

// Exact small-rank representation theory: root data for A1, A1xA1 and C2
// (optionally times a torus), Kostant's partition function and multiplicity
// formula, Gupta's inverse of the weight-multiplicity matrix, Weyl's
// dimension formula and character values.
//
// Weights are written in the basis of fundamental weights (semisimple part)
// followed by the character coordinates of the abelian factor.

#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace satotate {

using IntVec = std::vector<std::int64_t>;
using IntMat = std::vector<IntVec>;  // row-major, square
using Rational = boost::rational<std::int64_t>;

enum class CartanType { Abelian, A1, A1xA1, C2 };

std::string to_string(CartanType type);
CartanType cartan_type_from_string(const std::string& label);

struct Weight {
  IntVec semisimple;
  IntVec abelian;

  auto operator<=>(const Weight&) const = default;
  bool operator==(const Weight&) const = default;
};

struct RootSystem {
  CartanType cartan_type = CartanType::Abelian;
  int rank_h = 0;
  int abelian_rank = 0;

  std::vector<IntVec> simple_roots;    // fundamental-weight coordinates
  std::vector<IntVec> positive_roots;  // fundamental-weight coordinates
  std::vector<IntVec> positive_roots_simple;  // simple-root coordinates
  std::vector<IntMat> weyl_elements;   // act on semisimple coordinates
  std::vector<int> weyl_signs;         // det of each element
  IntVec rho;
  std::vector<std::vector<Rational>> pairing;  // (omega_i, omega_j)
  // Column j holds omega_j in the eigen-angle coordinates of the standard
  // maximal torus (e-basis for C2, identity for A1 and A1xA1).
  IntMat torus_from_fund;
  // Inverse transpose of the simple-root matrix: simple coords = this * v.
  std::vector<std::vector<Rational>> fund_to_simple;

  static RootSystem make(CartanType type, int abelian_rank = 0);

  int num_positive_roots() const { return static_cast<int>(positive_roots.size()); }
  int weyl_order() const { return static_cast<int>(weyl_elements.size()); }
  int total_rank() const { return rank_h + abelian_rank; }

  Weight zero_weight() const;
  Weight make_weight(IntVec semisimple, IntVec abelian = {}) const;
};

IntVec act(const IntMat& m, std::span<const std::int64_t> v);
std::vector<Rational> simple_coordinates(const RootSystem& rs, std::span<const std::int64_t> v);

bool is_dominant(const Weight& w);

std::uint64_t kostant_partition(const RootSystem& rs, const Weight& v);
std::int64_t weight_multiplicity(const RootSystem& rs, const Weight& lambda, const Weight& mu);
std::int64_t gupta_f(const RootSystem& rs, const Weight& v);
Rational gupta_inverse_entry(const RootSystem& rs, const Weight& lambda, const Weight& mu);
/// All nonzero entries d_lambda^mu of one row of the inverse multiplicity matrix.
std::map<Weight, Rational> gupta_inverse_row(const RootSystem& rs, const Weight& lambda);
std::int64_t weyl_dimension(const RootSystem& rs, const Weight& lambda);
bool dominance_leq(const RootSystem& rs, const Weight& mu, const Weight& lambda);

struct Orbit {
  std::vector<Weight> weights;  // sorted, no repetition
  int stabilizer_size = 0;
};
Orbit weyl_orbit(const RootSystem& rs, const Weight& mu);

std::int64_t fund_norm(const Weight& lambda);

/// Dominant weights mu with mu <= lambda (same abelian part), sorted.
std::vector<Weight> dominant_weights_below(const RootSystem& rs, const Weight& lambda);

/// Character of the irreducible representation with highest weight lambda at
/// the torus element whose pairing with the fundamental weights is given by
/// `angles` (semisimple part first, then abelian). Angles are in turns.
std::complex<double> character_value_complex(const RootSystem& rs, const Weight& lambda,
                                             std::span<const double> angles);
double character_value(const RootSystem& rs, const Weight& lambda,
                       std::span<const double> angles);

/// Converts eigen-angle (torus) coordinates of the semisimple part into the
/// angles paired against fundamental weights.
std::vector<double> fund_angles_from_torus(const RootSystem& rs, std::span<const double> torus);

/// Maps a frequency vector in torus coordinates to fundamental-weight
/// coordinates; throws invalid-input if it is not an integral weight.
IntVec fund_from_torus(const RootSystem& rs, std::span<const std::int64_t> torus);
IntVec torus_from_fund(const RootSystem& rs, std::span<const std::int64_t> fund);

}  // namespace satotate
