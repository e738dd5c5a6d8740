#include "satotate/st_group.hpp"

#include "satotate/error.hpp"
#include "torus_region.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace satotate {

namespace {

constexpr double kPi = std::numbers::pi;

IntMat identity_rows(int n) {
  IntMat m(static_cast<std::size_t>(n), IntVec(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

GroupDescriptor build(std::string name, int g, CartanType type, int abelian, IntMat A,
                      bool connected = true) {
  GroupDescriptor d;
  d.name = std::move(name);
  d.g = g;
  d.root_system = RootSystem::make(type, abelian);
  d.q = d.root_system.total_rank();
  d.A = std::move(A);
  d.connected = connected;
  return d;
}

void validate(const GroupDescriptor& d) {
  if (d.g < 1) fail(ErrorKind::DescriptorInvalid, "g must be positive");
  if (d.q != d.root_system.total_rank())
    fail(ErrorKind::DescriptorInvalid, "q must equal the total rank of the root data");
  if (d.q > d.g) fail(ErrorKind::DescriptorInvalid, "q must not exceed g");
  if (static_cast<int>(d.A.size()) != d.g)
    fail(ErrorKind::DescriptorInvalid, "embedding matrix needs g rows");
  for (int l = 0; l < d.g; ++l) {
    if (static_cast<int>(d.A[l].size()) != d.q)
      fail(ErrorKind::DescriptorInvalid, "embedding rows need q entries");
    if (l < d.q)
      for (int j = 0; j < d.q; ++j)
        if (d.A[l][j] != (l == j ? 1 : 0))
          fail(ErrorKind::DescriptorInvalid, "first q rows of the embedding must be the identity");
  }
}

TrigPoly multiply(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      IntVec k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out[k] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

TrigPoly trace_poly(const GroupDescriptor& d) {
  TrigPoly t;
  for (const IntVec& a : d.A) {
    IntVec neg = a;
    for (auto& v : neg) v = -v;
    t[a] += 1.0;
    t[neg] += 1.0;
  }
  return t;
}

void require_measure_group(const GroupDescriptor& d) {
  if (d.q > 2) fail(ErrorKind::Unsupported, "trace measure implemented for q <= 2");
}

double connected_measure(const GroupDescriptor& d, double lo, double hi, double tol) {
  require_measure_group(d);
  const TrigPoly density = weyl_density(d);
  if (d.q == 1) {
    double total = 0.0;
    for (const auto& [a, b] : detail::preimage_on_line(d, {}, lo, hi))
      total += detail::line_integral(density, a, b, {});
    return total;
  }
  const auto breaks = detail::outer_breaks(d, lo, hi);
  double total = 0.0, error = 0.0;
  const double panel_tol = tol / static_cast<double>(breaks.size());
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double u = breaks[k], w = breaks[k + 1];
    auto inner = [&](double t) {
      const double s = u + (w - u) * detail::smoothstep(t);
      const double rest[] = {s};
      double v = 0.0;
      for (const auto& [a, b] : detail::preimage_on_line(d, rest, lo, hi))
        v += detail::line_integral(density, a, b, rest);
      return v * (w - u) * detail::smoothstep_slope(t);
    };
    // boost's tolerance is relative; convert the absolute panel budget using
    // a first non-adaptive estimate of the panel mass.
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double err = 0.0;
    const double rough = GK::integrate(inner, 0.0, 1.0, 0, 0.0, &err);
    if (err > panel_tol) {
      const double rel = std::max(panel_tol / std::max(std::abs(rough), 1e-300), 1e-15);
      total += GK::integrate(inner, 0.0, 1.0, 20, rel, &err);
    } else {
      total += rough;
    }
    error += err;
  }
  if (!(error <= tol)) fail(ErrorKind::NumericFailure, "trace-measure quadrature did not converge");
  return total;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"U1",      "SU2",  "U1xU1",   "SU2xU1",
                                              "SU2xSU2", "USp4", "U1_diag", "N(U1)"};
  return names;
}

GroupDescriptor catalog_lookup(const std::string& name) {
  if (name == "U1") return build(name, 1, CartanType::Abelian, 1, identity_rows(1));
  if (name == "SU2") return build(name, 1, CartanType::A1, 0, identity_rows(1));
  if (name == "U1xU1") return build(name, 2, CartanType::Abelian, 2, identity_rows(2));
  if (name == "SU2xU1") return build(name, 2, CartanType::A1, 1, identity_rows(2));
  if (name == "SU2xSU2") return build(name, 2, CartanType::A1xA1, 0, identity_rows(2));
  if (name == "USp4") return build(name, 2, CartanType::C2, 0, identity_rows(2));
  if (name == "U1_diag") return build(name, 2, CartanType::Abelian, 1, {{1}, {1}});
  // Normalizer of U(1) in SU(2): only its trace measure is modelled.
  if (name == "N(U1)") return build(name, 1, CartanType::Abelian, 1, identity_rows(1), false);
  fail(ErrorKind::NotFound, "unknown Sato-Tate group '" + name + "'");
}

Interval make_interval(const GroupDescriptor& desc, double lo, double hi) {
  const double bound = 2.0 * desc.g;
  if (!(std::isfinite(lo) && std::isfinite(hi)))
    fail(ErrorKind::InvalidInput, "interval bounds must be finite");
  if (!(lo < hi)) fail(ErrorKind::InvalidInput, "interval needs lo < hi");
  if (lo < -bound - 1e-12 || hi > bound + 1e-12)
    fail(ErrorKind::InvalidInput, "interval must lie in [-2g, 2g]");
  return {std::max(lo, -bound), std::min(hi, bound)};
}

double trace_value(const GroupDescriptor& desc, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != desc.q) fail(ErrorKind::InvalidInput, "theta needs q entries");
  double s = 0.0;
  for (const IntVec& a : desc.A) {
    double p = 0.0;
    for (int j = 0; j < desc.q; ++j) p += static_cast<double>(a[j]) * theta[j];
    s += 2.0 * std::cos(2.0 * kPi * p);
  }
  return s;
}

std::vector<double> trace_gradient(const GroupDescriptor& desc, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != desc.q) fail(ErrorKind::InvalidInput, "theta needs q entries");
  std::vector<double> grad(static_cast<std::size_t>(desc.q), 0.0);
  for (const IntVec& a : desc.A) {
    double p = 0.0;
    for (int j = 0; j < desc.q; ++j) p += static_cast<double>(a[j]) * theta[j];
    const double s = std::sin(2.0 * kPi * p);
    for (int j = 0; j < desc.q; ++j) grad[j] -= 4.0 * kPi * static_cast<double>(a[j]) * s;
  }
  return grad;
}

double gradient_bound(const GroupDescriptor& desc) {
  double s = 0.0;
  for (const IntVec& a : desc.A) {
    double n2 = 0.0;
    for (auto v : a) n2 += static_cast<double>(v * v);
    s += std::sqrt(n2);
  }
  return 4.0 * kPi * s;
}

int crossing_bound(const GroupDescriptor& desc) {
  std::int64_t m = 0;
  for (const IntVec& a : desc.A)
    for (auto v : a) m = std::max(m, std::abs(v));
  return static_cast<int>(4 * m);
}

TrigPoly weyl_density(const GroupDescriptor& desc) {
  const RootSystem& rs = desc.root_system;
  TrigPoly density{{IntVec(static_cast<std::size_t>(desc.q), 0), 1.0}};
  for (const IntVec& alpha : rs.positive_roots) {
    IntVec t = torus_from_fund(rs, alpha);
    t.resize(static_cast<std::size_t>(desc.q), 0);
    IntVec neg = t;
    for (auto& v : neg) v = -v;
    // 4 sin^2(pi x) = 2 - e(x) - e(-x)
    TrigPoly factor{{IntVec(static_cast<std::size_t>(desc.q), 0), 2.0}, {t, -1.0}, {neg, -1.0}};
    density = multiply(density, factor);
  }
  for (auto& [k, c] : density) c /= rs.weyl_order();
  return density;
}

double weyl_density_value(const GroupDescriptor& desc, std::span<const double> theta) {
  double s = 0.0;
  for (const auto& [k, c] : weyl_density(desc)) {
    double p = 0.0;
    for (int j = 0; j < desc.q; ++j) p += static_cast<double>(k[j]) * theta[j];
    s += c * std::cos(2.0 * kPi * p);
  }
  return s;
}

double measure_interval(const GroupDescriptor& desc, const Interval& interval, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidInput, "tolerance must be positive");
  const Interval iv = make_interval(desc, interval.lo, interval.hi);
  if (!desc.connected) {
    const double atom = (iv.lo <= 0.0 && 0.0 <= iv.hi) ? 1.0 : 0.0;
    return 0.5 * atom + 0.5 * connected_measure(catalog_lookup("U1"), iv.lo, iv.hi, tol);
  }
  return connected_measure(desc, iv.lo, iv.hi, tol);
}

TailEstimate measure_tail_u1(double y) {
  if (!(y >= std::pow(2.0, 2.0 / 3.0))) fail(ErrorKind::InvalidInput, "tail estimate needs y >= 2^(2/3)");
  return {1.0 / (kPi * std::pow(y, 0.25)), 2.0 * std::pow(y, -0.75)};
}

Rational epsilon(const GroupDescriptor& desc) {
  if (!desc.connected) fail(ErrorKind::Unsupported, "exponent defined for connected groups only");
  return Rational(1, 2 * (desc.q + desc.phi()));
}

Rational epsilon_pair(const GroupDescriptor& a, const GroupDescriptor& b) {
  if (!a.connected || !b.connected)
    fail(ErrorKind::Unsupported, "exponent defined for connected groups only");
  return Rational(1, 2 * (a.q + b.q + a.phi() + b.phi() - 1));
}

namespace {
double nu_generic(double eps, int power, double z) {
  if (!(z > 0.0)) fail(ErrorKind::InvalidInput, "nu needs z > 0");
  const double l = std::log(z);
  return std::max(1.0, std::pow(l, power) / std::pow(z, 1.0 / eps));
}
}  // namespace

double nu(const GroupDescriptor& desc, double z) {
  return nu_generic(boost::rational_cast<double>(epsilon(desc)), 6, z);
}

double nu_pair(const GroupDescriptor& a, const GroupDescriptor& b, double z) {
  return nu_generic(boost::rational_cast<double>(epsilon_pair(a, b)), 8, z);
}

double x0_threshold(const GroupDescriptor& desc, double interval_length, std::int64_t N,
                    double constant) {
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be at least 1");
  const double l2 = std::log(2.0 * static_cast<double>(N));
  const double ll = std::log(std::log(4.0 * static_cast<double>(N)));
  return constant * nu(desc, interval_length) * l2 * l2 * std::pow(ll, 4);
}

std::vector<IntVec> hodge_circle_basis(const GroupDescriptor& desc) {
  if (!desc.connected) fail(ErrorKind::Unsupported, "Hodge circles need a connected group");
  const int q = desc.q;
  std::vector<IntVec> basis;
  // Echelon copy of the accepted vectors for the independence test.
  std::vector<std::vector<double>> echelon;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q); ++mask) {
    IntVec v(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) v[j] = (mask >> (q - 1 - j)) & 1 ? -1 : 1;
    bool ok = true;
    for (const IntVec& a : desc.A) {
      std::int64_t u = 0;
      for (int j = 0; j < q; ++j) u += a[j] * v[j];
      if (u != 1 && u != -1) ok = false;
    }
    if (!ok) continue;
    std::vector<double> r(v.begin(), v.end());
    for (const auto& e : echelon) {
      std::size_t p = 0;
      while (std::abs(e[p]) < 1e-12) ++p;
      const double f = r[p] / e[p];
      for (int j = 0; j < q; ++j) r[j] -= f * e[j];
    }
    if (std::all_of(r.begin(), r.end(), [](double x) { return std::abs(x) < 1e-9; })) continue;
    echelon.push_back(r);
    basis.push_back(v);
    if (static_cast<int>(basis.size()) == q) break;
  }
  if (static_cast<int>(basis.size()) < q)
    fail(ErrorKind::DescriptorInvalid, "torus is not generated by Hodge circles");
  return basis;
}

double embedding_entry_bound(const GroupDescriptor& desc) {
  const double q = desc.q;
  return q * std::max(1.0, std::pow(q - 1.0, (q - 1.0) / 2.0));
}

double moment(const GroupDescriptor& desc, int n, double tol) {
  if (n < 0) fail(ErrorKind::InvalidInput, "moment order must be nonnegative");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidInput, "tolerance must be positive");
  if (!desc.connected) {
    const double atom = n == 0 ? 1.0 : 0.0;
    return 0.5 * atom + 0.5 * moment(catalog_lookup("U1"), n, tol);
  }
  // T^n times the density is a trigonometric polynomial; its mean is the
  // constant coefficient, so the torus integral is exact.
  TrigPoly power{{IntVec(static_cast<std::size_t>(desc.q), 0), 1.0}};
  const TrigPoly t = trace_poly(desc);
  for (int i = 0; i < n; ++i) power = multiply(power, t);
  double total = 0.0;
  for (const auto& [k, c] : weyl_density(desc)) {
    IntVec neg = k;
    for (auto& v : neg) v = -v;
    if (auto it = power.find(neg); it != power.end()) total += c * it->second;
  }
  return total;
}

std::string descriptor_to_json(const GroupDescriptor& desc) {
  nlohmann::ordered_json j;
  j["schema"] = "st-group v1";
  j["name"] = desc.name;
  j["g"] = desc.g;
  j["cartan_label"] = to_string(desc.root_system.cartan_type);
  j["abelian_rank"] = desc.root_system.abelian_rank;
  j["A"] = desc.A;
  j["connected"] = desc.connected;
  return j.dump(2);
}

GroupDescriptor descriptor_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("group descriptor: ") + e.what());
  }
  try {
    if (j.value("schema", std::string()) != "st-group v1")
      fail(ErrorKind::Parse, "group descriptor: expected schema 'st-group v1'");
    GroupDescriptor d;
    d.name = j.at("name").get<std::string>();
    d.g = j.at("g").get<int>();
    d.root_system = RootSystem::make(cartan_type_from_string(j.at("cartan_label").get<std::string>()),
                                     j.value("abelian_rank", 0));
    d.q = d.root_system.total_rank();
    d.A = j.at("A").get<IntMat>();
    d.connected = j.value("connected", true);
    validate(d);
    if (d.connected) hodge_circle_basis(d);
    return d;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("group descriptor: ") + e.what());
  }
}

}  // namespace satotate
