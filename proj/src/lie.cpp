#include "satotate/lie.hpp"

#include "satotate/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

namespace satotate {

namespace {

constexpr long double kWeylFormulaFloor = 1e-6L;

using RatMat = std::vector<std::vector<Rational>>;

RatMat invert(RatMat a) {
  const std::size_t n = a.size();
  RatMat inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].numerator() == 0) ++pivot;
    if (pivot == n) fail(ErrorKind::InvalidInput, "singular matrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

std::int64_t determinant(const IntMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  std::int64_t det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMat minor;
    for (std::size_t r = 1; r < n; ++r) {
      IntVec row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    const std::int64_t term = m[0][c] * determinant(minor);
    det += (c % 2 == 0) ? term : -term;
  }
  return det;
}

IntMat multiply(const IntMat& a, const IntMat& b) {
  const std::size_t n = a.size();
  IntMat c(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

IntMat identity(std::size_t n) {
  IntMat m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntVec add(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntVec sub(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Rational pair(const RootSystem& rs, std::span<const std::int64_t> u,
              std::span<const std::int64_t> v) {
  Rational s(0);
  for (int i = 0; i < rs.rank_h; ++i)
    for (int j = 0; j < rs.rank_h; ++j) s += rs.pairing[i][j] * u[i] * v[j];
  return s;
}

void check_shape(const RootSystem& rs, const Weight& w) {
  if (static_cast<int>(w.semisimple.size()) != rs.rank_h ||
      static_cast<int>(w.abelian.size()) != rs.abelian_rank)
    fail(ErrorKind::InvalidInput, "weight has wrong number of coordinates");
}

void require_dominant(const RootSystem& rs, const Weight& w, const char* what) {
  check_shape(rs, w);
  if (!is_dominant(w)) fail(ErrorKind::InvalidInput, std::string(what) + " must be dominant");
}

// Nonnegative integral simple-root coordinates of v, or empty if v is not in
// the positive cone of the root lattice.
std::optional<IntVec> cone_coordinates(const RootSystem& rs, std::span<const std::int64_t> v) {
  IntVec out;
  for (const Rational& c : simple_coordinates(rs, v)) {
    if (c.denominator() != 1 || c.numerator() < 0) return std::nullopt;
    out.push_back(c.numerator());
  }
  return out;
}

std::map<IntVec, std::int64_t> gupta_f_support(const RootSystem& rs) {
  std::map<IntVec, std::int64_t> f;
  const std::size_t phi = rs.positive_roots.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << phi); ++mask) {
    IntVec v = rs.rho;
    int parity = 1;
    for (std::size_t k = 0; k < phi; ++k) {
      if (mask & (std::uint64_t{1} << k)) {
        v = sub(v, rs.positive_roots[k]);
        parity = -parity;
      }
    }
    f[v] += parity;
  }
  std::erase_if(f, [](const auto& kv) { return kv.second == 0; });
  return f;
}

}  // namespace

std::string to_string(CartanType type) {
  switch (type) {
    case CartanType::Abelian: return "abelian";
    case CartanType::A1: return "A1";
    case CartanType::A1xA1: return "A1xA1";
    case CartanType::C2: return "C2";
  }
  return "?";
}

CartanType cartan_type_from_string(const std::string& label) {
  if (label == "abelian" || label.empty()) return CartanType::Abelian;
  if (label == "A1") return CartanType::A1;
  if (label == "A1xA1") return CartanType::A1xA1;
  if (label == "C2") return CartanType::C2;
  fail(ErrorKind::NotFound, "unknown Cartan label '" + label + "'");
}

RootSystem RootSystem::make(CartanType type, int abelian_rank) {
  if (abelian_rank < 0 || abelian_rank > 2)
    fail(ErrorKind::Unsupported, "abelian rank must be in [0, 2]");
  RootSystem rs;
  rs.cartan_type = type;
  rs.abelian_rank = abelian_rank;
  const Rational half(1, 2);
  switch (type) {
    case CartanType::Abelian:
      rs.rank_h = 0;
      break;
    case CartanType::A1:
      rs.rank_h = 1;
      rs.simple_roots = {{2}};
      rs.pairing = {{half}};
      rs.torus_from_fund = {{1}};
      break;
    case CartanType::A1xA1:
      rs.rank_h = 2;
      rs.simple_roots = {{2, 0}, {0, 2}};
      rs.pairing = {{half, Rational(0)}, {Rational(0), half}};
      rs.torus_from_fund = identity(2);
      break;
    case CartanType::C2:
      // alpha1 = e1 - e2 (short), alpha2 = 2 e2 (long); omega1 = e1, omega2 = e1 + e2.
      rs.rank_h = 2;
      rs.simple_roots = {{2, -1}, {-2, 2}};
      rs.pairing = {{Rational(1), Rational(1)}, {Rational(1), Rational(2)}};
      rs.torus_from_fund = {{1, 1}, {0, 1}};
      break;
  }
  const std::size_t h = static_cast<std::size_t>(rs.rank_h);
  rs.rho = IntVec(h, 1);

  RatMat transposed(h, std::vector<Rational>(h, Rational(0)));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) transposed[j][i] = rs.simple_roots[i][j];
  if (h > 0) rs.fund_to_simple = invert(transposed);

  // Weyl group: closure of the simple reflections s_i(m) = m - m_i alpha_i.
  std::vector<IntMat> generators;
  for (std::size_t i = 0; i < h; ++i) {
    IntMat s = identity(h);
    for (std::size_t r = 0; r < h; ++r) s[r][i] -= rs.simple_roots[i][r];
    generators.push_back(std::move(s));
  }
  std::set<IntMat> group{identity(h)};
  std::vector<IntMat> frontier{identity(h)};
  while (!frontier.empty()) {
    std::vector<IntMat> next;
    for (const IntMat& g : frontier)
      for (const IntMat& s : generators) {
        IntMat prod = multiply(s, g);
        if (group.insert(prod).second) next.push_back(std::move(prod));
      }
    frontier = std::move(next);
  }
  rs.weyl_elements.assign(group.begin(), group.end());
  for (const IntMat& w : rs.weyl_elements)
    rs.weyl_signs.push_back(static_cast<int>(determinant(w)));

  // Positive roots: the Weyl orbit of the simple roots, kept if their
  // simple-root coordinates are nonnegative.
  std::set<IntVec> roots;
  for (const IntMat& w : rs.weyl_elements)
    for (const IntVec& a : rs.simple_roots) roots.insert(act(w, a));
  for (const IntVec& r : roots) {
    if (auto c = cone_coordinates(rs, r)) {
      rs.positive_roots.push_back(r);
      rs.positive_roots_simple.push_back(*c);
    }
  }
  return rs;
}

Weight RootSystem::zero_weight() const {
  return Weight{IntVec(static_cast<std::size_t>(rank_h), 0),
                IntVec(static_cast<std::size_t>(abelian_rank), 0)};
}

Weight RootSystem::make_weight(IntVec semisimple, IntVec abelian) const {
  if (abelian.empty()) abelian.assign(static_cast<std::size_t>(abelian_rank), 0);
  Weight w{std::move(semisimple), std::move(abelian)};
  check_shape(*this, w);
  return w;
}

IntVec act(const IntMat& m, std::span<const std::int64_t> v) {
  IntVec out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

std::vector<Rational> simple_coordinates(const RootSystem& rs, std::span<const std::int64_t> v) {
  std::vector<Rational> out(static_cast<std::size_t>(rs.rank_h), Rational(0));
  for (int i = 0; i < rs.rank_h; ++i)
    for (int j = 0; j < rs.rank_h; ++j) out[i] += rs.fund_to_simple[i][j] * v[j];
  return out;
}

bool is_dominant(const Weight& w) {
  return std::all_of(w.semisimple.begin(), w.semisimple.end(),
                     [](std::int64_t m) { return m >= 0; });
}

std::uint64_t kostant_partition(const RootSystem& rs, const Weight& v) {
  check_shape(rs, v);
  if (std::any_of(v.abelian.begin(), v.abelian.end(), [](auto a) { return a != 0; }))
    fail(ErrorKind::InvalidInput, "partition function needs a root-lattice vector");
  const auto target = cone_coordinates(rs, v.semisimple);
  if (!target) return 0;
  if (rs.rank_h == 0) return 1;
  // Only simple roots (A1, A1xA1): exactly one way.
  if (rs.num_positive_roots() == rs.rank_h) return 1;

  // Coin-change table over the box [0, target] in simple-root coordinates.
  const std::size_t h = target->size();
  IntVec stride(h, 1);
  for (std::size_t i = h - 1; i > 0; --i) stride[i - 1] = stride[i] * ((*target)[i] + 1);
  const std::size_t cells = static_cast<std::size_t>(stride[0] * ((*target)[0] + 1));
  std::vector<std::uint64_t> table(cells, 0);
  table[0] = 1;
  IntVec coord(h);
  for (const IntVec& root : rs.positive_roots_simple) {
    for (std::size_t idx = 0; idx < cells; ++idx) {
      std::size_t rest = idx;
      bool fits = true;
      std::int64_t offset = 0;
      for (std::size_t i = 0; i < h; ++i) {
        coord[i] = static_cast<std::int64_t>(rest) / stride[i];
        rest %= static_cast<std::size_t>(stride[i]);
        if (coord[i] < root[i]) fits = false;
        offset += root[i] * stride[i];
      }
      if (!fits) continue;
      if (__builtin_add_overflow(table[idx], table[idx - static_cast<std::size_t>(offset)],
                                 &table[idx]))
        fail(ErrorKind::NumericFailure, "partition function overflow");
    }
  }
  return table.back();
}

std::int64_t weight_multiplicity(const RootSystem& rs, const Weight& lambda, const Weight& mu) {
  require_dominant(rs, lambda, "highest weight");
  check_shape(rs, mu);
  if (lambda.abelian != mu.abelian) return 0;
  const IntVec shifted_mu = add(mu.semisimple, rs.rho);
  const IntVec shifted_lambda = add(lambda.semisimple, rs.rho);
  std::int64_t m = 0;
  for (std::size_t k = 0; k < rs.weyl_elements.size(); ++k) {
    const IntVec diff = sub(act(rs.weyl_elements[k], shifted_lambda), shifted_mu);
    const auto p = kostant_partition(rs, rs.make_weight(diff));
    m += rs.weyl_signs[k] * static_cast<std::int64_t>(p);
  }
  return m;
}

std::int64_t gupta_f(const RootSystem& rs, const Weight& v) {
  check_shape(rs, v);
  if (std::any_of(v.abelian.begin(), v.abelian.end(), [](auto a) { return a != 0; })) return 0;
  const auto f = gupta_f_support(rs);
  const auto it = f.find(v.semisimple);
  return it == f.end() ? 0 : it->second;
}

Rational gupta_inverse_entry(const RootSystem& rs, const Weight& lambda, const Weight& mu) {
  require_dominant(rs, lambda, "row weight");
  require_dominant(rs, mu, "column weight");
  if (lambda.abelian != mu.abelian) return Rational(0);
  const auto f = gupta_f_support(rs);
  const IntVec shifted_mu = add(mu.semisimple, rs.rho);
  std::int64_t a = 0;
  for (std::size_t k = 0; k < rs.weyl_elements.size(); ++k) {
    const IntVec v = sub(act(rs.weyl_elements[k], shifted_mu), lambda.semisimple);
    if (auto it = f.find(v); it != f.end()) a += rs.weyl_signs[k] * it->second;
  }
  return Rational(a, weyl_orbit(rs, lambda).stabilizer_size);
}

std::map<Weight, Rational> gupta_inverse_row(const RootSystem& rs, const Weight& lambda) {
  require_dominant(rs, lambda, "row weight");
  const auto f = gupta_f_support(rs);
  std::set<Weight> candidates;
  // d_lambda^mu != 0 needs w(mu + rho) - lambda in supp f for some w.
  for (const auto& [s, coeff] : f) {
    const IntVec shifted = add(lambda.semisimple, s);
    for (const IntMat& w : rs.weyl_elements) {
      Weight mu{sub(act(w, shifted), rs.rho), lambda.abelian};
      if (is_dominant(mu)) candidates.insert(std::move(mu));
    }
  }
  std::map<Weight, Rational> row;
  for (const Weight& mu : candidates) {
    const Rational d = gupta_inverse_entry(rs, lambda, mu);
    if (d.numerator() != 0) row.emplace(mu, d);
  }
  return row;
}

std::int64_t weyl_dimension(const RootSystem& rs, const Weight& lambda) {
  require_dominant(rs, lambda, "highest weight");
  const IntVec shifted = add(lambda.semisimple, rs.rho);
  Rational dim(1);
  for (const IntVec& alpha : rs.positive_roots)
    dim *= pair(rs, shifted, alpha) / pair(rs, rs.rho, alpha);
  if (dim.denominator() != 1) fail(ErrorKind::NumericFailure, "non-integral Weyl dimension");
  return dim.numerator();
}

bool dominance_leq(const RootSystem& rs, const Weight& mu, const Weight& lambda) {
  check_shape(rs, mu);
  check_shape(rs, lambda);
  if (mu.abelian != lambda.abelian) return false;
  return kostant_partition(rs, rs.make_weight(sub(lambda.semisimple, mu.semisimple))) > 0;
}

Orbit weyl_orbit(const RootSystem& rs, const Weight& mu) {
  check_shape(rs, mu);
  std::set<Weight> seen;
  for (const IntMat& w : rs.weyl_elements) seen.insert(Weight{act(w, mu.semisimple), mu.abelian});
  Orbit orbit;
  orbit.weights.assign(seen.begin(), seen.end());
  orbit.stabilizer_size = rs.weyl_order() / static_cast<int>(orbit.weights.size());
  return orbit;
}

std::int64_t fund_norm(const Weight& lambda) {
  std::int64_t n = 0;
  for (auto m : lambda.semisimple) n = std::max(n, std::abs(m));
  for (auto m : lambda.abelian) n = std::max(n, std::abs(m));
  return n;
}

std::vector<Weight> dominant_weights_below(const RootSystem& rs, const Weight& lambda) {
  require_dominant(rs, lambda, "highest weight");
  std::vector<Weight> out;
  if (rs.rank_h == 0) return {lambda};
  // Dominant weights have nonnegative simple-root coordinates, so the
  // subtracted combination is bounded by lambda's own coordinates.
  IntVec bound;
  for (const Rational& c : simple_coordinates(rs, lambda.semisimple))
    bound.push_back(static_cast<std::int64_t>(std::floor(boost::rational_cast<double>(c))));
  IntVec c(bound.size(), 0);
  while (true) {
    IntVec v = lambda.semisimple;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c[i] * rs.simple_roots[i][j];
    Weight mu{std::move(v), lambda.abelian};
    if (is_dominant(mu)) out.push_back(std::move(mu));
    std::size_t i = 0;
    while (i < c.size() && c[i] == bound[i]) c[i++] = 0;
    if (i == c.size()) break;
    ++c[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::complex<double> character_value_complex(const RootSystem& rs, const Weight& lambda,
                                             std::span<const double> angles) {
  require_dominant(rs, lambda, "highest weight");
  if (static_cast<int>(angles.size()) != rs.total_rank())
    fail(ErrorKind::InvalidInput, "angle vector has wrong length");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto phase_of = [&](const IntVec& v) {
    double phase = 0.0;
    for (int j = 0; j < rs.rank_h; ++j) phase += static_cast<double>(v[j]) * angles[j];
    return std::polar(1.0, two_pi * phase);
  };
  // Weyl character formula (extended precision) off the walls; weight sum on
  // and very near them.
  auto phase_ld = [&](const IntVec& v) {
    long double phase = 0.0L;
    for (int j = 0; j < rs.rank_h; ++j) phase += static_cast<long double>(v[j]) * angles[j];
    phase -= std::floor(phase);
    return std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * phase);
  };
  std::complex<long double> num(0.0L, 0.0L), den(0.0L, 0.0L);
  IntVec shifted(lambda.semisimple);
  for (int j = 0; j < rs.rank_h; ++j) shifted[j] += rs.rho[j];
  for (std::size_t k = 0; k < rs.weyl_elements.size(); ++k) {
    num += static_cast<long double>(rs.weyl_signs[k]) * phase_ld(act(rs.weyl_elements[k], shifted));
    den += static_cast<long double>(rs.weyl_signs[k]) * phase_ld(act(rs.weyl_elements[k], rs.rho));
  }
  std::complex<double> total(0.0, 0.0);
  if (std::abs(den) > kWeylFormulaFloor) {
    const std::complex<long double> z = num / den;
    total = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
  } else {
    for (const Weight& mu : dominant_weights_below(rs, lambda)) {
      const std::int64_t mult = weight_multiplicity(rs, lambda, mu);
      if (mult == 0) continue;
      std::complex<double> orbit_sum(0.0, 0.0);
      for (const Weight& nu : weyl_orbit(rs, mu).weights) orbit_sum += phase_of(nu.semisimple);
      total += static_cast<double>(mult) * orbit_sum;
    }
  }
  double abelian_phase = 0.0;
  for (int j = 0; j < rs.abelian_rank; ++j)
    abelian_phase += static_cast<double>(lambda.abelian[j]) * angles[rs.rank_h + j];
  return total * std::polar(1.0, two_pi * abelian_phase);
}

double character_value(const RootSystem& rs, const Weight& lambda, std::span<const double> angles) {
  const auto z = character_value_complex(rs, lambda, angles);
  const double scale = 1.0 + static_cast<double>(weyl_dimension(rs, lambda));
  if (std::abs(z.imag()) > 1e-12 * scale)
    fail(ErrorKind::InvalidInput, "character is not real at this point (not selfdual)");
  return z.real();
}

std::vector<double> fund_angles_from_torus(const RootSystem& rs, std::span<const double> torus) {
  std::vector<double> out(torus.begin(), torus.end());
  for (int j = 0; j < rs.rank_h; ++j) {
    double s = 0.0;
    for (int i = 0; i < rs.rank_h; ++i)
      s += static_cast<double>(rs.torus_from_fund[i][j]) * torus[i];
    out[j] = s;
  }
  return out;
}

IntVec torus_from_fund(const RootSystem& rs, std::span<const std::int64_t> fund) {
  return act(rs.torus_from_fund, fund);
}

IntVec fund_from_torus(const RootSystem& rs, std::span<const std::int64_t> torus) {
  const std::size_t h = static_cast<std::size_t>(rs.rank_h);
  RatMat p(h, std::vector<Rational>(h));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) p[i][j] = rs.torus_from_fund[i][j];
  const RatMat inv = h ? invert(p) : RatMat{};
  IntVec out(h, 0);
  for (std::size_t i = 0; i < h; ++i) {
    Rational s(0);
    for (std::size_t j = 0; j < h; ++j) s += inv[i][j] * torus[j];
    if (s.denominator() != 1) fail(ErrorKind::InvalidInput, "frequency is not an integral weight");
    out[i] = s.numerator();
  }
  return out;
}

}  // namespace satotate
