#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "satotate/error.hpp"
#include "satotate/st_group.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace satotate;
using std::numbers::pi;

namespace {

// Semicircle (SU2) mass of [a,b] in closed form.
double su2_mass(double a, double b) {
  a = std::clamp(a, -2.0, 2.0);
  b = std::clamp(b, -2.0, 2.0);
  if (b <= a) return 0.0;
  auto G = [](double u) { return (u - std::sin(u) * std::cos(u)) / pi; };
  return G(std::acos(a / 2)) - G(std::acos(b / 2));
}

// Arcsine (U1) mass of [a,b] in closed form.
double u1_mass(double a, double b) {
  a = std::clamp(a, -2.0, 2.0);
  b = std::clamp(b, -2.0, 2.0);
  if (b <= a) return 0.0;
  return (std::acos(a / 2) - std::acos(b / 2)) / pi;
}

// Mass of [a,b] for an independent sum T1 + T2 by 1-D quadrature over T1.
template <class Outer, class Inner>
double product_mass(Outer outer_density, Inner inner_mass, double a, double b) {
  auto f = [&](double t) {
    const double x = 2 * std::cos(2 * pi * t);
    return outer_density(t) * inner_mass(a - x, b - x);
  };
  // split at the kinks where a - x or b - x hits +-2
  std::vector<double> cuts{0.0, 0.5};
  for (double c : {a - 2, a + 2, b - 2, b + 2})
    if (std::abs(c) < 2) cuts.push_back(std::acos(c / 2) / (2 * pi));
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[k], cuts[k + 1], 12, 1e-12);
  return 2 * total;  // symmetric about t = 1/2
}

// Brute-force USp4 mass on a midpoint grid using the explicit Weyl density.
double usp4_grid_mass(double a, double b, int n) {
  double total = 0;
  for (int i = 0; i < n; ++i) {
    const double t1 = (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double t2 = (j + 0.5) / n;
      const double tr = 2 * std::cos(2 * pi * t1) + 2 * std::cos(2 * pi * t2);
      if (tr < a || tr > b) continue;
      const double s1 = std::sin(pi * (t1 - t2)), s2 = std::sin(pi * (t1 + t2));
      const double s3 = std::sin(2 * pi * t1), s4 = std::sin(2 * pi * t2);
      total += 256.0 / 8.0 * s1 * s1 * s2 * s2 * s3 * s3 * s4 * s4;
    }
  }
  return total / (double(n) * n);
}

// Trivial multiplicity in V^{\otimes n} for the standard representation, by
// peeling highest weights off the tensor-power character (lie_core only).
std::int64_t trivial_in_tensor_power(const RootSystem& rs, const Weight& v, int n) {
  std::map<IntVec, std::int64_t> single;
  for (const Weight& mu : dominant_weights_below(rs, v)) {
    const auto m = weight_multiplicity(rs, v, mu);
    for (const Weight& w : weyl_orbit(rs, mu).weights) single[w.semisimple] += m;
  }
  std::map<IntVec, std::int64_t> ch{{IntVec(rs.rank_h, 0), 1}};
  for (int k = 0; k < n; ++k) {
    std::map<IntVec, std::int64_t> next;
    for (const auto& [a, ca] : ch)
      for (const auto& [b, cb] : single) {
        IntVec s(a.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] + b[i];
        next[s] += ca * cb;
      }
    ch = next;
  }
  std::int64_t trivial = 0;
  auto height = [&](const IntVec& w) {
    double h = 0;
    for (const Rational& c : simple_coordinates(rs, w)) h += boost::rational_cast<double>(c);
    return h;
  };
  while (true) {
    std::erase_if(ch, [](const auto& kv) { return kv.second == 0; });
    if (ch.empty()) break;
    const IntVec* top = nullptr;
    for (const auto& [w, c] : ch)
      if (!top || height(w) > height(*top)) top = &w;
    const Weight lambda = rs.make_weight(*top);
    REQUIRE(is_dominant(lambda));
    const std::int64_t c = ch[*top];
    if (fund_norm(lambda) == 0) trivial += c;
    for (const Weight& mu : dominant_weights_below(rs, lambda)) {
      const auto m = weight_multiplicity(rs, lambda, mu);
      for (const Weight& w : weyl_orbit(rs, mu).weights) ch[w.semisimple] -= c * m;
    }
  }
  return trivial;
}

}  // namespace

TEST_CASE("catalog") {
  for (const auto& name : catalog_names()) {
    auto d = catalog_lookup(name);
    CHECK(d.name == name);
    CHECK(d.q <= d.g);
    CHECK(static_cast<int>(d.A.size()) == d.g);
    for (int l = 0; l < d.q; ++l)
      for (int j = 0; j < d.q; ++j) CHECK(d.A[l][j] == (l == j ? 1 : 0));
    if (d.connected) {
      const auto basis = hodge_circle_basis(d);
      CHECK(static_cast<int>(basis.size()) == d.q);
      for (const auto& row : d.A)
        for (auto v : row) CHECK(std::abs(double(v)) <= embedding_entry_bound(d));
    }
  }
  auto su2 = catalog_lookup("SU2");
  CHECK(su2.g == 1);
  CHECK(su2.q == 1);
  CHECK(su2.A == IntMat{{1}});
  auto usp4 = catalog_lookup("USp4");
  CHECK(usp4.g == 2);
  CHECK(usp4.q == 2);
  auto diag = catalog_lookup("U1_diag");
  CHECK(diag.q == 1);
  CHECK(diag.A == IntMat{{1}, {1}});
  CHECK_FALSE(catalog_lookup("N(U1)").connected);
  try {
    catalog_lookup("G2");
    FAIL("expected not-found");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFound);
  }
}

TEST_CASE("trace values and constants") {
  auto su2 = catalog_lookup("SU2");
  const double z[] = {0.0}, h[] = {0.5}, q[] = {0.25};
  CHECK(trace_value(su2, z) == doctest::Approx(2.0));
  CHECK(trace_value(su2, h) == doctest::Approx(-2.0));
  CHECK(trace_value(catalog_lookup("U1_diag"), q) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(gradient_bound(su2) == doctest::Approx(4 * pi));
  CHECK(crossing_bound(su2) == 4);
  CHECK(gradient_bound(catalog_lookup("U1_diag")) == doctest::Approx(8 * pi));

  for (const auto& name : catalog_names()) {
    auto d = catalog_lookup(name);
    double sup = 0;
    if (d.q == 1) {
      for (int i = 0; i < 1000000; ++i) {
        const double t[] = {i / 1e6};
        sup = std::max(sup, std::abs(trace_gradient(d, t)[0]));
      }
    } else {
      for (int i = 0; i < 1000; ++i)
        for (int j = 0; j < 1000; ++j) {
          const double t[] = {i / 1e3, j / 1e3};
          const auto gr = trace_gradient(d, t);
          sup = std::max(sup, std::hypot(gr[0], gr[1]));
        }
    }
    CHECK(gradient_bound(d) >= sup);
  }
}

TEST_CASE("weyl density integrates to one") {
  for (const auto& name : catalog_names()) {
    auto d = catalog_lookup(name);
    const auto dens = weyl_density(d);
    const IntVec zero(static_cast<std::size_t>(d.q), 0);
    CHECK(dens.at(zero) == doctest::Approx(1.0));
  }
  auto su2 = catalog_lookup("SU2");
  const double t[] = {0.1};
  CHECK(weyl_density_value(su2, t) == doctest::Approx(2 * std::pow(std::sin(2 * pi * 0.1), 2)));
}

TEST_CASE("one-dimensional measures") {
  auto su2 = catalog_lookup("SU2");
  CHECK(measure_interval(su2, {-2, 2}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(measure_interval(su2, {1, 2}, 1e-9) - (1.0 / 3 - std::sqrt(3.0) / (4 * pi))) < 1e-9);
  CHECK(measure_interval(catalog_lookup("N(U1)"), {-1, 1}) == doctest::Approx(2.0 / 3).epsilon(1e-12));

  auto u1 = catalog_lookup("U1");
  auto diag = catalog_lookup("U1_diag");
  for (double a = -2.0; a < 2.0; a += 0.37) {
    for (double b = a + 0.05; b <= 2.0; b += 0.41) {
      CHECK(std::abs(measure_interval(su2, {a, b}) - su2_mass(a, b)) < 1e-11);
      CHECK(std::abs(measure_interval(u1, {a, b}) - u1_mass(a, b)) < 1e-11);
      // U1_diag trace is 4 cos, i.e. twice the U1 trace.
      CHECK(std::abs(measure_interval(diag, {2 * a, 2 * b}) - u1_mass(a, b)) < 1e-11);
    }
  }
  CHECK_THROWS_AS(measure_interval(su2, {1, 3}), Error);
  CHECK_THROWS_AS(measure_interval(su2, {1, 1}), Error);
}

TEST_CASE("two-dimensional measures against product oracles") {
  auto sxs = catalog_lookup("SU2xSU2");
  auto sxu = catalog_lookup("SU2xU1");
  auto uxu = catalog_lookup("U1xU1");
  auto semicircle = [](double t) { return 2 * std::pow(std::sin(2 * pi * t), 2); };
  auto flat = [](double) { return 1.0; };
  const std::pair<double, double> intervals[] = {{-4, 4}, {-1, 1}, {0, 2}, {1, 3.5}, {-3.9, -2.5}, {0.3, 0.4}};
  for (auto [a, b] : intervals) {
    CAPTURE(a);
    CAPTURE(b);
    CHECK(std::abs(measure_interval(sxs, {a, b}, 1e-8) - product_mass(semicircle, su2_mass, a, b)) < 1e-7);
    CHECK(std::abs(measure_interval(sxu, {a, b}, 1e-8) - product_mass(semicircle, u1_mass, a, b)) < 1e-7);
    CHECK(std::abs(measure_interval(uxu, {a, b}, 1e-8) - product_mass(flat, u1_mass, a, b)) < 1e-7);
  }
}

TEST_CASE("USp4 measure") {
  auto usp4 = catalog_lookup("USp4");
  CHECK(measure_interval(usp4, {-4, 4}, 1e-8) == doctest::Approx(1.0).epsilon(1e-7));
  for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{0.0, 2.0}, std::pair{1.5, 4.0}}) {
    const double m = measure_interval(usp4, {a, b}, 1e-8);
    CHECK(std::abs(m - usp4_grid_mass(a, b, 1500)) < 5e-4);
    // symmetry
    CHECK(std::abs(m - measure_interval(usp4, {-b, -a}, 1e-8)) < 1e-7);
  }
  // additivity
  const double left = measure_interval(usp4, {-1, 0.5}, 1e-8);
  const double right = measure_interval(usp4, {0.5, 2}, 1e-8);
  CHECK(std::abs(left + right - measure_interval(usp4, {-1, 2}, 1e-8)) < 2e-8);
}

TEST_CASE("symmetry and additivity on the catalog") {
  for (const char* name : {"SU2", "SU2xSU2", "U1", "U1_diag", "SU2xU1"}) {
    auto d = catalog_lookup(name);
    const double g2 = 2.0 * d.g;
    const double a = -0.6 * g2, b = 0.1 * g2, c = 0.7 * g2;
    const double tol = 1e-8;
    CHECK(std::abs(measure_interval(d, {a, b}, tol) + measure_interval(d, {b, c}, tol) -
                   measure_interval(d, {a, c}, tol)) <= 2 * tol);
    CHECK(std::abs(measure_interval(d, {a, b}, tol) - measure_interval(d, {-b, -a}, tol)) <= tol);
    CHECK(measure_interval(d, {-g2, g2}, tol) == doctest::Approx(1.0).epsilon(tol));
  }
}

TEST_CASE("U1 tail") {
  auto t4 = measure_tail_u1(1e4);
  CHECK(t4.approx == doctest::Approx(1 / (10 * pi)));
  CHECK(measure_tail_u1(1e8).approx == doctest::Approx(1 / (100 * pi)));
  auto u1 = catalog_lookup("U1");
  for (double y : {100.0, 1e4, 1e6}) {
    const auto t = measure_tail_u1(y);
    const double m = measure_interval(u1, {2 - 1 / std::sqrt(y), 2}, 1e-12);
    CHECK(std::abs(m - u1_mass(2 - 1 / std::sqrt(y), 2)) < 1e-12);
    CHECK(std::abs(m - t.approx) <= t.error_bound);
  }
  CHECK_THROWS_AS(measure_tail_u1(1.0), Error);
}

TEST_CASE("exponents") {
  auto su2 = catalog_lookup("SU2"), u1 = catalog_lookup("U1"), usp4 = catalog_lookup("USp4");
  CHECK(epsilon(su2) == Rational(1, 4));
  CHECK(epsilon(u1) == Rational(1, 2));
  CHECK(epsilon(usp4) == Rational(1, 12));
  CHECK(epsilon_pair(su2, su2) == Rational(1, 6));
  CHECK(epsilon_pair(u1, u1) == Rational(1, 2));
  CHECK(epsilon_pair(usp4, su2) == Rational(1, 14));
  CHECK_THROWS_AS(epsilon(catalog_lookup("N(U1)")), Error);

  CHECK(nu(su2, 1.0) == 1.0);
  CHECK(nu(su2, std::exp(1.0)) == 1.0);
  CHECK(nu(su2, 0.1) == doctest::Approx(std::pow(std::log(0.1), 6) / 1e-4));
  CHECK(nu(su2, 0.1) == doctest::Approx(1.49e6).epsilon(0.01));
  CHECK(nu_pair(su2, su2, 0.5) == doctest::Approx(std::pow(std::log(0.5), 8) / std::pow(0.5, 6)));

  CHECK(x0_threshold(su2, 1.0, 1, 1.0) == doctest::Approx(std::pow(std::log(2.0), 2) * std::pow(std::log(std::log(4.0)), 4)));
  CHECK(x0_threshold(su2, 1.0, 1, 1.0) == doctest::Approx(0.00543).epsilon(0.01));
  CHECK(x0_threshold(su2, 1.0, 1, 0.0) == 0.0);
  CHECK(x0_threshold(su2, 0.1, 11, 1.0) ==
        doctest::Approx(nu(su2, 0.1) * std::pow(std::log(22.0), 2) * std::pow(std::log(std::log(44.0)), 4)));
}

TEST_CASE("hodge circles") {
  CHECK(hodge_circle_basis(catalog_lookup("SU2")) == std::vector<IntVec>{{1}});
  CHECK(hodge_circle_basis(catalog_lookup("SU2xSU2")) == std::vector<IntVec>{{1, 1}, {1, -1}});
  CHECK(hodge_circle_basis(catalog_lookup("U1_diag")) == std::vector<IntVec>{{1}});
  // A = (1,2)^t admits no Hodge circle.
  auto bad = catalog_lookup("U1_diag");
  bad.A = {{1}, {2}};
  try {
    hodge_circle_basis(bad);
    FAIL("expected descriptor-invalid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DescriptorInvalid);
  }
}

TEST_CASE("moments") {
  auto su2 = catalog_lookup("SU2"), usp4 = catalog_lookup("USp4");
  CHECK(std::abs(moment(su2, 1)) < 1e-12);
  CHECK(moment(su2, 2) == doctest::Approx(1.0));
  CHECK(moment(su2, 4) == doctest::Approx(2.0));
  CHECK(moment(catalog_lookup("U1"), 2) == doctest::Approx(2.0));
  CHECK(moment(catalog_lookup("N(U1)"), 2) == doctest::Approx(1.0));
  CHECK(moment(catalog_lookup("N(U1)"), 0) == doctest::Approx(1.0));

  // lie_core oracle: trivial constituents of V^{\otimes n}
  const auto& a1 = su2.root_system;
  const auto& c2 = usp4.root_system;
  for (int n = 0; n <= 6; ++n) {
    CHECK(moment(su2, n) == doctest::Approx(double(trivial_in_tensor_power(a1, a1.make_weight({1}), n))));
    CHECK(moment(usp4, n) == doctest::Approx(double(trivial_in_tensor_power(c2, c2.make_weight({1, 0}), n))));
  }

  // midpoint-rule oracle with the closed-form density
  for (const auto& name : catalog_names()) {
    auto d = catalog_lookup(name);
    if (!d.connected) continue;
    for (int n = 0; n <= 5; ++n) {
      const int grid = 64;
      double total = 0;
      if (d.q == 1) {
        for (int i = 0; i < grid; ++i) {
          const double t[] = {(i + 0.5) / grid};
          total += std::pow(trace_value(d, t), n) * weyl_density_value(d, t);
        }
        total /= grid;
      } else {
        for (int i = 0; i < grid; ++i)
          for (int j = 0; j < grid; ++j) {
            const double t[] = {(i + 0.5) / grid, (j + 0.5) / grid};
            total += std::pow(trace_value(d, t), n) * weyl_density_value(d, t);
          }
        total /= grid * grid;
      }
      CHECK(moment(d, n) == doctest::Approx(total).epsilon(1e-9));
    }
  }
}

TEST_CASE("descriptor json") {
  for (const auto& name : catalog_names()) {
    auto d = catalog_lookup(name);
    auto back = descriptor_from_json(descriptor_to_json(d));
    CHECK(back.name == d.name);
    CHECK(back.g == d.g);
    CHECK(back.q == d.q);
    CHECK(back.A == d.A);
    CHECK(back.connected == d.connected);
    CHECK(back.root_system.cartan_type == d.root_system.cartan_type);
  }
  CHECK_THROWS_AS(descriptor_from_json("{not json"), Error);
  CHECK_THROWS_AS(descriptor_from_json(R"({"schema":"st-group v1","name":"x","g":2,"cartan_label":"C2","A":[[1,0],[1,1]]})"), Error);
}
