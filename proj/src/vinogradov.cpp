#include "satotate/vinogradov.hpp"

#include "satotate/error.hpp"
#include "torus_region.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace satotate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CDF of the sum of r independent uniforms on [-h, h] (Irwin-Hall, rescaled).
double box_sum_cdf(int r, double h, double z) {
  if (r == 0) return z >= 0.0 ? 1.0 : 0.0;
  const double x = (z + r * h) / (2.0 * h);
  if (x <= 0.0) return 0.0;
  if (x >= r) return 1.0;
  double s = 0.0;
  for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
    const double term = boost::math::binomial_coefficient<double>(r, k) * std::pow(x - k, r);
    s += (k % 2 == 0) ? term : -term;
  }
  return s / boost::math::factorial<double>(r);
}

double box_sum_pdf(int r, double h, double z) {
  const double x = (z + r * h) / (2.0 * h);
  if (x <= 0.0 || x >= r) return 0.0;
  if (r == 1) return 1.0 / (2.0 * h);
  double s = 0.0;
  for (int k = 0; k <= static_cast<int>(std::floor(x)); ++k) {
    const double term = boost::math::binomial_coefficient<double>(r, k) * std::pow(x - k, r - 1);
    s += (k % 2 == 0) ? term : -term;
  }
  return s / boost::math::factorial<double>(r - 1) / (2.0 * h);
}

// Probability that t + Z lands in the periodic set given by `segments`.
double smoothed_line(const detail::Segments& segments, int r, double h, double t) {
  double p = 0.0;
  for (const auto& [a, b] : segments)
    for (int shift = -1; shift <= 1; ++shift)
      p += box_sum_cdf(r, h, b + shift - t) - box_sum_cdf(r, h, a + shift - t);
  return p;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Frequencies in torus coordinates <-> weights.
Weight weight_of(const RootSystem& rs, const IntVec& m) {
  const std::span<const std::int64_t> ss(m.data(), static_cast<std::size_t>(rs.rank_h));
  Weight w{fund_from_torus(rs, ss), IntVec(m.begin() + rs.rank_h, m.end())};
  return w;
}

IntVec frequency_of(const RootSystem& rs, const Weight& w) {
  IntVec m = torus_from_fund(rs, w.semisimple);
  m.insert(m.end(), w.abelian.begin(), w.abelian.end());
  return m;
}

std::vector<IntVec> frequency_orbit(const RootSystem& rs, const IntVec& m) {
  const Weight w = weight_of(rs, m);
  std::vector<IntVec> out;
  for (const IntMat& g : rs.weyl_elements)
    out.push_back(frequency_of(rs, Weight{act(g, w.semisimple), w.abelian}));
  return out;
}

}  // namespace

double FourierSeries::coefficient(const IntVec& m) const {
  const auto it = coeffs.find(m);
  return it == coeffs.end() ? 0.0 : it->second;
}

SmoothingParams make_smoothing_params(const GroupDescriptor& desc, double Delta, int r,
                                      std::int64_t M) {
  if (!(Delta > 0.0)) fail(ErrorKind::InvalidInput, "Delta must be positive");
  if (r < 0) fail(ErrorKind::InvalidInput, "r must be nonnegative");
  if (M < 0) fail(ErrorKind::InvalidInput, "M must be nonnegative");
  SmoothingParams p;
  p.Delta = Delta;
  p.r = r;
  p.K = gradient_bound(desc);
  p.M = M;
  p.delta = r == 0 ? 0.0 : Delta / (r * std::sqrt(static_cast<double>(desc.q)) * p.K);
  if (p.delta >= 1.0) fail(ErrorKind::InvalidInput, "box width must be below 1");
  return p;
}

SmoothingParams default_parameters(const GroupDescriptor& desc, double x, std::int64_t N,
                                   const Interval& interval) {
  if (!(x >= 2.0)) fail(ErrorKind::InvalidInput, "x must be at least 2");
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be at least 1");
  const double eps = boost::rational_cast<double>(epsilon(desc));
  const double Delta = std::pow(x, -eps) * std::pow(std::log(x), 4.0 * eps) *
                       std::pow(std::log(static_cast<double>(N) * x), 2.0 * eps);
  const int phi = desc.phi();
  const int r = phi > 0 ? desc.q + phi - 1 : desc.q;
  const double Mreal = phi > 0 ? std::pow(Delta, -static_cast<double>(desc.q + phi) / phi)
                               : std::pow(Delta, -static_cast<double>(desc.q + 1));
  if (2.0 * Delta > interval.length()) {
    fail(ErrorKind::BelowThreshold, "2*Delta = " + fmt(2.0 * Delta) + " exceeds |I| = " +
                                        fmt(interval.length()) + "; raise x");
  }
  return make_smoothing_params(desc, Delta, r, static_cast<std::int64_t>(std::ceil(Mreal)));
}

FourierSeries indicator_fourier(const GroupDescriptor& desc, const Interval& interval,
                                std::int64_t M) {
  if (M < 0) fail(ErrorKind::InvalidInput, "M must be nonnegative");
  if (desc.q > 2) fail(ErrorKind::Unsupported, "indicator coefficients implemented for q <= 2");
  const Interval iv = make_interval(desc, interval.lo, interval.hi);
  FourierSeries out;
  out.q = desc.q;
  out.M = M;

  if (desc.q == 1) {
    const auto segments = detail::preimage_on_line(desc, {}, iv.lo, iv.hi);
    for (std::int64_t m = 0; m <= M; ++m) {
      double c = 0.0;
      for (const auto& [a, b] : segments)
        c += m == 0 ? b - a : (std::sin(kTwoPi * m * b) - std::sin(kTwoPi * m * a)) / (kTwoPi * m);
      out.coeffs[{m}] = c;
      if (m) out.coeffs[{-m}] = c;
    }
    return out;
  }

  const double work = static_cast<double>(2 * M + 1) * static_cast<double>(M + 1);
  if (work > 5e7) fail(ErrorKind::NumericFailure, "coefficient budget exceeded for this M");

  // Composite Gauss-Legendre over the second coordinate; at each node the
  // inner cosine/sine integrals C, S over the preimage line are closed form.
  const std::size_t side = static_cast<std::size_t>(2 * M + 1);
  std::vector<double> acc(side * static_cast<std::size_t>(M + 1), 0.0);
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& absc = GL::abscissa();
  const auto& wts = GL::weights();
  std::vector<double> C(static_cast<std::size_t>(M + 1)), S(static_cast<std::size_t>(M + 1));
  std::vector<double> c2(static_cast<std::size_t>(M + 1)), s2(static_cast<std::size_t>(M + 1));

  auto add_node = [&](double s, double weight) {
    const double rest[] = {s};
    const auto segments = detail::preimage_on_line(desc, rest, iv.lo, iv.hi);
    for (std::int64_t k = 0; k <= M; ++k) {
      double ck = 0.0, sk = 0.0;
      for (const auto& [a, b] : segments) {
        if (k == 0) {
          ck += b - a;
        } else {
          const double w = kTwoPi * static_cast<double>(k);
          ck += (std::sin(w * b) - std::sin(w * a)) / w;
          sk += (std::cos(w * a) - std::cos(w * b)) / w;
        }
      }
      C[k] = ck * weight;
      S[k] = sk * weight;
      c2[k] = std::cos(kTwoPi * static_cast<double>(k) * s);
      s2[k] = std::sin(kTwoPi * static_cast<double>(k) * s);
    }
    // Re of int e^{-2 pi i (m1 t + m2 s)} = C_{m1} cos(m2 s) - S_{m1} sin(m2 s), with
    // C even and S odd in m1.
    for (std::int64_t m1 = -M; m1 <= M; ++m1) {
      const std::size_t k1 = static_cast<std::size_t>(std::abs(m1));
      const double cc = C[k1];
      const double ss = m1 < 0 ? -S[k1] : S[k1];
      double* row = &acc[static_cast<std::size_t>(m1 + M) * static_cast<std::size_t>(M + 1)];
      for (std::int64_t m2 = 0; m2 <= M; ++m2) row[m2] += cc * c2[m2] - ss * s2[m2];
    }
  };

  const auto breaks = detail::outer_breaks(desc, iv.lo, iv.hi);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double u = breaks[p], w = breaks[p + 1];
    if (w - u < 1e-13) continue;
    const int sub = 4 + static_cast<int>(std::ceil(3.0 * static_cast<double>(M) * (w - u)));
    for (int j = 0; j < sub; ++j) {
      const double t0 = static_cast<double>(j) / sub, half = 0.5 / sub;
      const double mid = t0 + half;
      for (std::size_t i = 0; i < absc.size(); ++i) {
        const double x = absc[i];
        if (x == 0.0) {
          const double t = mid;
          add_node(u + (w - u) * detail::smoothstep(t), (w - u) * detail::smoothstep_slope(t) * half * wts[i]);
          continue;
        }
        for (double sx : {x, -x}) {
          const double t = mid + half * sx;
          add_node(u + (w - u) * detail::smoothstep(t), (w - u) * detail::smoothstep_slope(t) * half * wts[i]);
        }
      }
    }
  }
  for (std::int64_t m1 = -M; m1 <= M; ++m1)
    for (std::int64_t m2 = 0; m2 <= M; ++m2) {
      const double v = acc[static_cast<std::size_t>(m1 + M) * static_cast<std::size_t>(M + 1) +
                           static_cast<std::size_t>(m2)];
      out.coeffs[{m1, m2}] = v;
      out.coeffs[{-m1, -m2}] = v;
    }
  return out;
}

double box_multiplier(std::int64_t m, double delta) {
  if (m == 0) return 1.0;
  const double x = kTwoPi * static_cast<double>(m) * delta;
  if (x == 0.0) return 1.0;
  return std::sin(x) / x;
}

FourierSeries smooth(const FourierSeries& series, const SmoothingParams& params) {
  FourierSeries out = series;
  if (params.r == 0) return out;
  for (auto& [m, c] : out.coeffs) {
    double f = 1.0;
    for (auto mj : m) f *= std::pow(box_multiplier(mj, params.delta), params.r);
    c *= f;
  }
  return out;
}

double evaluate_series(const FourierSeries& series, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != series.q) fail(ErrorKind::InvalidInput, "theta needs q entries");
  double re = 0.0, im = 0.0, scale = 0.0;
  for (const auto& [m, c] : series.coeffs) {
    double p = 0.0;
    for (int j = 0; j < series.q; ++j) p += static_cast<double>(m[j]) * theta[j];
    // reduce the phase first so large frequencies keep full accuracy
    p -= std::floor(p);
    re += c * std::cos(kTwoPi * p);
    im += c * std::sin(kTwoPi * p);
    scale += std::abs(c);
  }
  if (std::abs(im) > 1e-10 * std::max(1.0, scale))
    fail(ErrorKind::NumericFailure, "series is not real: imaginary part " + fmt(im));
  return re;
}

double evaluate_direct(const GroupDescriptor& desc, const Interval& interval,
                       const SmoothingParams& params, std::span<const double> theta, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidInput, "tolerance must be positive");
  if (static_cast<int>(theta.size()) != desc.q) fail(ErrorKind::InvalidInput, "theta needs q entries");
  if (desc.q > 2) fail(ErrorKind::Unsupported, "direct evaluation implemented for q <= 2");
  const Interval iv = make_interval(desc, interval.lo, interval.hi);
  const int r = params.r;
  const double h = params.delta;
  if (desc.q == 1) return smoothed_line(detail::preimage_on_line(desc, {}, iv.lo, iv.hi), r, h, theta[0]);

  auto line = [&](double s) {
    const double rest[] = {s - std::floor(s)};
    return smoothed_line(detail::preimage_on_line(desc, rest, iv.lo, iv.hi), r, h, theta[0]);
  };
  if (r == 0) return line(theta[1]);
  // Integrate the second coordinate against the box-sum density; split at
  // the density's knots so each piece is a polynomial times a smooth-ish map.
  double total = 0.0, error = 0.0;
  for (int k = 0; k < r; ++k) {
    const double a = -r * h + 2.0 * h * k, b = a + 2.0 * h;
    auto f = [&](double z) { return box_sum_pdf(r, h, z) * line(theta[1] + z); };
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &err);
    error += err;
  }
  if (!(error <= 100 * tol + 1e-12)) fail(ErrorKind::NumericFailure, "direct evaluation did not converge");
  return total;
}

double coefficient_bound(const GroupDescriptor& desc, const SmoothingParams& params,
                         const IntVec& m, double c0) {
  std::int64_t mx = 0;
  for (auto v : m) mx = std::max(mx, std::abs(v));
  if (mx == 0) return std::abs(c0);
  const double C = crossing_bound(desc);
  const double B = params.r * params.K * std::sqrt(static_cast<double>(desc.q)) / (kTwoPi * params.Delta);
  double best = std::abs(c0);
  for (int rho = 0; rho <= params.r; ++rho) {
    double v = C / (kPi * static_cast<double>(mx));
    for (auto mj : m)
      if (mj != 0) v *= std::pow(B / static_cast<double>(std::abs(mj)), rho);
    best = std::min(best, v);
  }
  return best;
}

double tail_bound(const GroupDescriptor& desc, const SmoothingParams& params) {
  const int r = params.r;
  if (r == 0) return std::numeric_limits<double>::infinity();
  const double M = static_cast<double>(std::max<std::int64_t>(params.M, 1));
  const double C = crossing_bound(desc);
  const double B = r * params.K * std::sqrt(static_cast<double>(desc.q)) / (kTwoPi * params.Delta);
  const double Br = std::pow(B, r);
  if (desc.q == 1) return 2.0 * C * Br / (kPi * r * std::pow(M, r));
  if (desc.q == 2) {
    // shells max|m_j| = n: 4 axis points plus at most 8n off-axis points
    if (r == 1) return C * B / kPi * ((4.0 + 8.0 * B) / M + 8.0 * B * (std::log(M) + 1.0) / M);
    const double harmonic = 1.0 + 1.0 / (r - 1);
    return C * Br / kPi * (4.0 + 8.0 * Br * harmonic) / (r * std::pow(M, r));
  }
  fail(ErrorKind::Unsupported, "tail bound implemented for q <= 2");
}

FourierSeries weyl_average(const GroupDescriptor& desc, const FourierSeries& series) {
  const RootSystem& rs = desc.root_system;
  FourierSeries out;
  out.q = series.q;
  out.M = series.M;
  std::set<IntVec> support;
  for (const auto& [m, c] : series.coeffs)
    for (const IntVec& v : frequency_orbit(rs, m)) support.insert(v);
  const double order = rs.weyl_order();
  for (const IntVec& m : support) {
    double s = 0.0;
    for (const IntVec& v : frequency_orbit(rs, m)) s += series.coefficient(v);
    out.coeffs[m] = s / order;
  }
  return out;
}

Decomposition character_decomposition(const GroupDescriptor& desc, const FourierSeries& F) {
  if (!desc.connected) fail(ErrorKind::Unsupported, "decomposition needs a connected group");
  const RootSystem& rs = desc.root_system;
  double scale = 0.0;
  for (const auto& [m, c] : F.coeffs) scale = std::max(scale, std::abs(c));
  std::set<IntVec> done;
  std::map<Weight, double> p;
  for (const auto& [m, c] : F.coeffs) {
    if (done.count(m)) continue;
    const auto orbit = frequency_orbit(rs, m);
    Weight rep;
    bool found = false;
    for (const IntVec& v : orbit) {
      if (std::abs(F.coefficient(v) - c) > 1e-12 + 1e-9 * scale)
        fail(ErrorKind::InvalidInput, "series is not Weyl-invariant");
      done.insert(v);
      const Weight w = weight_of(rs, v);
      if (!found && is_dominant(w)) {
        rep = w;
        found = true;
      }
    }
    if (c == 0.0) continue;
    // orbit sum of e(mu) = sum_nu d_mu^nu chi_nu
    for (const auto& [nu, d] : gupta_inverse_row(rs, rep))
      p[nu] += c * boost::rational_cast<double>(d);
  }
  Decomposition dec;
  const Weight zero = rs.zero_weight();
  for (const auto& [w, v] : p) {
    if (w == zero) {
      dec.delta = v;
      continue;
    }
    if (v == 0.0) continue;
    dec.coeffs[w] = v;
    dec.virtual_dimension += std::abs(v) * static_cast<double>(weyl_dimension(rs, w));
  }
  dec.virtual_dimension += std::abs(dec.delta);
  return dec;
}

double evaluate_decomposition(const GroupDescriptor& desc, const Decomposition& dec,
                              std::span<const double> theta) {
  const RootSystem& rs = desc.root_system;
  if (static_cast<int>(theta.size()) != desc.q) fail(ErrorKind::InvalidInput, "theta needs q entries");
  std::vector<double> angles =
      fund_angles_from_torus(rs, theta.subspan(0, static_cast<std::size_t>(rs.rank_h)));
  angles.insert(angles.end(), theta.begin() + rs.rank_h, theta.end());
  double total = dec.delta;
  for (const auto& [w, c] : dec.coeffs) total += c * character_value_complex(rs, w, angles).real();
  return total;
}

std::string series_to_csv(const FourierSeries& series) {
  std::ostringstream out;
  for (int j = 1; j <= series.q; ++j) out << 'm' << j << ',';
  out << "coefficient\n";
  for (const auto& [m, c] : series.coeffs) {
    for (auto v : m) out << v << ',';
    out << fmt(c) << '\n';
  }
  return out.str();
}

}  // namespace satotate
