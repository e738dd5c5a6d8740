#include "satotate/frobenius.hpp"

#include "satotate/error.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace satotate {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using boost::multiprecision::cpp_int;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

// Legendre symbol for odd prime p.
int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

u64 reduce(std::int64_t v, u64 p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  return static_cast<u64>(r);
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::string pstr(std::int64_t p) { return "p=" + std::to_string(p); }

// ---- elliptic curve arithmetic on y^2 = x^3 + A x + B (affine) --------------

struct Pt {
  u64 x = 0, y = 0;
  bool inf = true;
};

Pt ec_add(const Pt& P, const Pt& Q, u64 A, u64 p) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  u64 lam;
  if (P.x == Q.x) {
    if (addmod(P.y, Q.y, p) == 0) return {};
    u64 num = addmod(mulmod(3, mulmod(P.x, P.x, p), p), A, p);
    lam = mulmod(num, invmod(addmod(P.y, P.y, p), p), p);
  } else {
    lam = mulmod(submod(Q.y, P.y, p), invmod(submod(Q.x, P.x, p), p), p);
  }
  u64 x3 = submod(submod(mulmod(lam, lam, p), P.x, p), Q.x, p);
  u64 y3 = submod(mulmod(lam, submod(P.x, x3, p), p), P.y, p);
  return {x3, y3, false};
}

Pt ec_mul(Pt P, u64 k, u64 A, u64 p) {
  Pt R;
  while (k) {
    if (k & 1) R = ec_add(R, P, A, p);
    P = ec_add(P, P, A, p);
    k >>= 1;
  }
  return R;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> f;
  for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

// Some multiple n > 0 of ord(P) found by baby-step/giant-step over [lo, hi].
u64 multiple_in_interval(const Pt& P, u64 A, u64 p, u64 lo, u64 hi) {
  const u64 m = std::max<u64>(1, isqrt(hi - lo + 1) / 2 + 1);
  std::unordered_map<u64, u64> baby;
  baby.reserve(static_cast<std::size_t>(m) * 2);
  Pt R;
  for (u64 j = 1; j <= m; ++j) {
    R = ec_add(R, P, A, p);
    if (R.inf) return j;
    baby.emplace(R.x, j);
  }
  const Pt G = ec_mul(P, 2 * m, A, p);
  u64 c = lo + m;
  Pt Q = ec_mul(P, c, A, p);
  for (;;) {
    if (Q.inf) return c;
    auto it = baby.find(Q.x);
    if (it != baby.end()) {
      u64 j = it->second;
      Pt J = ec_mul(P, j, A, p);
      return J.y == Q.y ? c - j : c + j;
    }
    if (c + m >= hi) break;
    Q = ec_add(Q, G, A, p);
    c += 2 * m;
  }
  fail(ErrorKind::NumericFailure, "group order not found in the Hasse interval");
}

u64 point_order(const Pt& P, u64 n, u64 A, u64 p) {
  u64 ord = n;
  for (u64 l : prime_factors(n)) {
    while (ord % l == 0 && ec_mul(P, ord / l, A, p).inf) ord /= l;
  }
  return ord;
}

u64 lcm_capped(u64 a, u64 b) {
  u64 g = std::gcd(a, b);
  u128 v = static_cast<u128>(a / g) * b;
  return v > (static_cast<u128>(1) << 62) ? (static_cast<u64>(1) << 62) : static_cast<u64>(v);
}

u64 splitmix(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

cpp_int discriminant_of(std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t a4,
                        std::int64_t a6) {
  cpp_int A1 = a1, A2 = a2, A3 = a3, A4 = a4, A6 = a6;
  cpp_int b2 = A1 * A1 + 4 * A2;
  cpp_int b4 = 2 * A4 + A1 * A3;
  cpp_int b6 = A3 * A3 + 4 * A6;
  cpp_int b8 = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool parse_int(const std::string& s, std::int64_t& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && ptr == e;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

}  // namespace

// ---- curves -----------------------------------------------------------------

namespace {
bool divides_disc(const std::vector<std::uint32_t>& limbs, std::int64_t p) {
  if (limbs.empty()) return true;
  u128 r = 0;
  for (auto it = limbs.rbegin(); it != limbs.rend(); ++it) r = ((r << 32) | *it) % static_cast<u64>(p);
  return r == 0;
}
}  // namespace

std::string CurveSpec::discriminant() const {
  return discriminant_of(a1, a2, a3, a4, a6).str();
}

bool CurveSpec::is_bad(std::int64_t p) const {
  return std::binary_search(extra_bad.begin(), extra_bad.end(), p) || divides_disc(disc_limbs, p);
}

std::vector<std::int64_t> CurveSpec::bad_primes_upto(std::int64_t x) const {
  std::vector<std::int64_t> out;
  if (x < 2) return out;
  for (std::int64_t p : sieve_primes(x))
    if (is_bad(p)) out.push_back(p);
  return out;
}

CurveSpec make_curve(std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t a4,
                     std::int64_t a6, std::string label, std::vector<std::int64_t> extra_bad,
                     std::optional<std::int64_t> cm_discriminant) {
  const std::int64_t lim = std::int64_t{1} << 40;
  for (std::int64_t v : {a1, a2, a3, a4, a6})
    if (v > lim || v < -lim) fail(ErrorKind::InvalidInput, "curve coefficient out of range");
  const cpp_int disc = discriminant_of(a1, a2, a3, a4, a6);
  if (disc.is_zero()) fail(ErrorKind::InvalidInput, "singular model (discriminant 0)");
  for (std::int64_t p : extra_bad)
    if (p < 2) fail(ErrorKind::InvalidInput, "bad norm must be >= 2");
  std::sort(extra_bad.begin(), extra_bad.end());
  extra_bad.erase(std::unique(extra_bad.begin(), extra_bad.end()), extra_bad.end());
  CurveSpec c;
  c.a1 = a1;
  c.a2 = a2;
  c.a3 = a3;
  c.a4 = a4;
  c.a6 = a6;
  c.label = std::move(label);
  c.extra_bad = std::move(extra_bad);
  c.cm_discriminant = cm_discriminant;
  export_bits(cpp_int(abs(disc)), std::back_inserter(c.disc_limbs), 32, false);
  return c;
}

CurveSpec parse_curve(const std::string& text, std::string label) {
  auto parts = split(text, ',');
  if (parts.size() != 5) fail(ErrorKind::InvalidInput, "curve must be a1,a2,a3,a4,a6");
  std::int64_t a[5];
  for (int i = 0; i < 5; ++i)
    if (!parse_int(parts[i], a[i]))
      fail(ErrorKind::InvalidInput, "curve coefficient is not an integer: '" + parts[i] + "'");
  std::optional<std::int64_t> cm;
  if (a[0] == 0 && a[1] == 0 && a[2] == 0 && a[3] == -1 && a[4] == 0) cm = -4;
  if (label.empty()) label = "[" + trim(text) + "]";
  return make_curve(a[0], a[1], a[2], a[3], a[4], std::move(label), {}, cm);
}

CurveSpec named_curve(const std::string& name) {
  if (name == "11a1") return make_curve(0, -1, 1, 0, 0, "11a1");
  if (name == "37a1") return make_curve(0, 0, 1, -1, 0, "37a1");
  if (name == "cm4") return make_curve(0, 0, 0, -1, 0, "cm4", {}, -4);
  fail(ErrorKind::NotFound, "unknown curve: " + name);
}

// ---- primes -----------------------------------------------------------------

std::vector<std::int64_t> sieve_primes(std::int64_t x) {
  std::vector<std::int64_t> out;
  if (x < 2) return out;
  const std::int64_t r = static_cast<std::int64_t>(isqrt(static_cast<u64>(x)));
  std::vector<char> small(static_cast<std::size_t>(r + 1), 1);
  std::vector<std::int64_t> base;
  for (std::int64_t i = 2; i <= r; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::int64_t j = i * i; j <= r; j += i) small[j] = 0;
  }
  if (x > 1000) out.reserve(static_cast<std::size_t>(1.1 * x / std::log(static_cast<double>(x))));
  const std::int64_t seg = std::int64_t{1} << 18;
  std::vector<char> mark(static_cast<std::size_t>(seg));
  for (std::int64_t lo = 2; lo <= x; lo += seg) {
    const std::int64_t hi = std::min(x, lo + seg - 1);
    std::fill(mark.begin(), mark.end(), 1);
    for (std::int64_t q : base) {
      if (q * q > hi) break;
      std::int64_t start = std::max(q * q, (lo + q - 1) / q * q);
      for (std::int64_t j = start; j <= hi; j += q) mark[j - lo] = 0;
    }
    for (std::int64_t n = lo; n <= hi; ++n)
      if (mark[n - lo]) out.push_back(n);
  }
  return out;
}

// ---- point counting ---------------------------------------------------------

std::int64_t ap_naive(const CurveSpec& curve, std::int64_t p) {
  if (p < 2) fail(ErrorKind::InvalidInput, "prime must be >= 2");
  if (curve.is_bad(p)) fail(ErrorKind::BadReduction, "bad reduction at " + pstr(p));
  const u64 P = static_cast<u64>(p);
  if (P == 2) {
    int count = 1;
    for (std::int64_t x = 0; x < 2; ++x)
      for (std::int64_t y = 0; y < 2; ++y) {
        std::int64_t lhs = y * y + curve.a1 * x * y + curve.a3 * y;
        std::int64_t rhs = x * x * x + curve.a2 * x * x + curve.a4 * x + curve.a6;
        if (((lhs - rhs) % 2 + 2) % 2 == 0) ++count;
      }
    return 3 - count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
  const u64 a1 = reduce(curve.a1, P), a2 = reduce(curve.a2, P), a3 = reduce(curve.a3, P);
  const u64 a4 = reduce(curve.a4, P), a6 = reduce(curve.a6, P);
  const u64 b2 = addmod(mulmod(a1, a1, P), mulmod(4, a2, P), P);
  const u64 b4 = addmod(mulmod(2, a4, P), mulmod(a1, a3, P), P);
  const u64 b6 = addmod(mulmod(a3, a3, P), mulmod(4, a6, P), P);
  std::vector<signed char> chi(P, -1);
  chi[0] = 0;
  for (u64 y = 1; y <= (P - 1) / 2; ++y) chi[mulmod(y, y, P)] = 1;
  std::int64_t sum = 0;
  for (u64 x = 0; x < P; ++x) {
    u64 d = addmod(mulmod(4 % P, x, P), b2, P);
    d = addmod(mulmod(d, x, P), mulmod(2, b4, P), P);
    d = addmod(mulmod(d, x, P), b6, P);
    sum += chi[d];
  }
  return -sum;
}

std::int64_t ap_bsgs(const CurveSpec& curve, std::int64_t p, std::uint64_t seed) {
  if (p <= 457) return ap_naive(curve, p);
  if (curve.is_bad(p)) fail(ErrorKind::BadReduction, "bad reduction at " + pstr(p));
  if (p >= (std::int64_t{1} << 62)) fail(ErrorKind::InvalidInput, "prime too large");
  const u64 P = static_cast<u64>(p);
  // Short model y^2 = x^3 - 27 c4 x - 54 c6.
  const u64 a1 = reduce(curve.a1, P), a2 = reduce(curve.a2, P), a3 = reduce(curve.a3, P);
  const u64 a4 = reduce(curve.a4, P), a6 = reduce(curve.a6, P);
  const u64 b2 = addmod(mulmod(a1, a1, P), mulmod(4, a2, P), P);
  const u64 b4 = addmod(mulmod(2, a4, P), mulmod(a1, a3, P), P);
  const u64 b6 = addmod(mulmod(a3, a3, P), mulmod(4, a6, P), P);
  const u64 c4 = submod(mulmod(b2, b2, P), mulmod(24, b4, P), P);
  const u64 c6 = submod(addmod(submod(0, mulmod(b2, mulmod(b2, b2, P), P), P),
                               mulmod(36, mulmod(b2, b4, P), P), P),
                        mulmod(216, b6, P), P);
  const u64 A = submod(0, mulmod(27, c4, P), P);
  const u64 B = submod(0, mulmod(54, c6, P), P);

  const u64 amax = isqrt(4 * P);
  const u64 lo = P + 1 - amax, hi = P + 1 + amax;
  std::mt19937_64 rng(splitmix(P ^ splitmix(seed)));
  u64 LE = 1, LT = 1;  // known divisors of #E and of the twist order 2p+2-#E
  for (int attempt = 0; attempt < 200; ++attempt) {
    const u64 x0 = rng() % P;
    const u64 c = addmod(mulmod(addmod(mulmod(x0, x0, P), A, P), x0, P), B, P);
    if (c == 0) continue;
    // (c x0, c^2) lies on y^2 = x^3 + A c^2 x + B c^3, the twist of E by c.
    const int chi = legendre(c, P);
    const u64 Ac = mulmod(A, mulmod(c, c, P), P);
    const Pt pt{mulmod(c, x0, P), mulmod(c, c, P), false};
    u64 n;
    if (chi == 1) {
      n = multiple_in_interval(pt, Ac, P, lo, hi);
      LE = lcm_capped(LE, point_order(pt, n, Ac, P));
    } else {
      const u64 tlo = 2 * P + 2 - hi, thi = 2 * P + 2 - lo;
      n = multiple_in_interval(pt, Ac, P, tlo, thi);
      LT = lcm_capped(LT, point_order(pt, n, Ac, P));
    }
    if ((hi - lo) / LE > 100000) continue;
    std::int64_t found = -1;
    int count = 0;
    for (u64 N = (lo + LE - 1) / LE * LE; N <= hi; N += LE) {
      if ((2 * P + 2 - N) % LT != 0) continue;
      found = static_cast<std::int64_t>(N);
      if (++count > 1) break;
    }
    if (count == 1) return p + 1 - found;
    if (count == 0) fail(ErrorKind::NumericFailure, "inconsistent group order at " + pstr(p));
  }
  fail(ErrorKind::NumericFailure, "group order not determined within retry budget at " + pstr(p));
}

bool has_cm_fast_path(const CurveSpec& curve) {
  return curve.cm_discriminant == -4 && curve.a1 == 0 && curve.a2 == 0 && curve.a3 == 0 &&
         curve.a4 == -1 && curve.a6 == 0;
}

std::int64_t ap_cm(const CurveSpec& curve, std::int64_t p) {
  if (!has_cm_fast_path(curve))
    fail(ErrorKind::Unsupported, "CM fast path only for y^2 = x^3 - x (discriminant -4)");
  if (p == 2 || curve.is_bad(p)) fail(ErrorKind::BadReduction, "bad reduction at " + pstr(p));
  if (p < 2) fail(ErrorKind::InvalidInput, "prime must be >= 2");
  if (p % 4 == 3) return 0;
  const u64 P = static_cast<u64>(p);
  u64 g = 2;
  while (legendre(g, P) != -1) ++g;
  u64 r = powmod(g, (P - 1) / 4, P);  // r^2 = -1
  if (r < P / 2) r = P - r;
  // Cornacchia for x^2 + y^2 = p.
  u64 a = P, b = r;
  while (static_cast<u128>(b) * b > P) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  const u64 u = b;
  const u64 v = isqrt(P - u * u);
  if (u * u + v * v != P) fail(ErrorKind::NumericFailure, "Cornacchia failed at " + pstr(p));
  std::int64_t odd = static_cast<std::int64_t>(u % 2 ? u : v);
  const std::int64_t even = static_cast<std::int64_t>(u % 2 ? v : u);
  if (((odd + even) % 4 + 4) % 4 != 1) odd = -odd;
  return 2 * odd;
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "naive") return Strategy::Naive;
  if (s == "bsgs") return Strategy::Bsgs;
  if (s == "cm") return Strategy::Cm;
  if (s == "auto") return Strategy::Auto;
  fail(ErrorKind::InvalidInput, "unknown strategy: " + s);
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::Bsgs: return "bsgs";
    case Strategy::Cm: return "cm";
    case Strategy::Auto: return "auto";
  }
  return "?";
}

// ---- sequences --------------------------------------------------------------

double TraceRecord::abar() const {
  return static_cast<double>(a) / std::sqrt(static_cast<double>(norm));
}

std::span<const double> TraceSequence::lpoly(std::size_t i) const {
  if (lpoly_data.empty()) return {};
  const std::size_t w = static_cast<std::size_t>(2 * g);
  return std::span<const double>(lpoly_data).subspan(i * w, w);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("SATOTATE_THREADS")) {
    std::int64_t v = 0;
    if (!parse_int(trim(env), v) || v < 1 || v > 1024)
      fail(ErrorKind::InvalidInput, "SATOTATE_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TraceSequence trace_sequence(const CurveSpec& curve, std::int64_t x, Strategy strategy,
                             std::uint64_t seed, unsigned threads) {
  if (x < 2) fail(ErrorKind::InvalidInput, "x must be >= 2");
  if (strategy == Strategy::Cm && !has_cm_fast_path(curve))
    fail(ErrorKind::Unsupported, "CM fast path only for y^2 = x^3 - x (discriminant -4)");
  const bool use_cm = strategy == Strategy::Cm || (strategy == Strategy::Auto && has_cm_fast_path(curve));

  TraceSequence seq;
  seq.label = curve.label;
  seq.g = 1;
  seq.max_norm = x;
  std::vector<std::int64_t> good = sieve_primes(x);
  std::erase_if(good, [&](std::int64_t p) {
    if (!curve.is_bad(p)) return false;
    seq.bad_norms.push_back(p);
    return true;
  });
  seq.records.resize(good.size());

  auto one = [&](std::int64_t p) -> std::int64_t {
    if (use_cm) return ap_cm(curve, p);
    switch (strategy) {
      case Strategy::Naive: return ap_naive(curve, p);
      case Strategy::Bsgs: return ap_bsgs(curve, p, seed);
      default: return p < 10000 ? ap_naive(curve, p) : ap_bsgs(curve, p, seed);
    }
  };

  std::mutex mu;
  std::size_t err_index = good.size();
  ErrorKind err_kind = ErrorKind::NumericFailure;
  std::string err_msg;
  std::atomic<std::size_t> next{0};
  const std::size_t block = 4096;
  auto worker = [&] {
    for (;;) {
      const std::size_t start = next.fetch_add(block);
      if (start >= good.size()) return;
      const std::size_t end = std::min(good.size(), start + block);
      for (std::size_t i = start; i < end; ++i) {
        try {
          seq.records[i] = {good[i], one(good[i])};
        } catch (const Error& e) {
          std::lock_guard lock(mu);
          if (i < err_index) {
            err_index = i;
            err_kind = e.kind();
            err_msg = e.what();
          }
        }
      }
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, good.size() / block + 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err_index < good.size()) {
    const std::string tag = pstr(good[err_index]);
    fail(err_kind, err_msg.find(tag) == std::string::npos ? tag + ": " + err_msg : err_msg);
  }
  return seq;
}

// ---- angles -----------------------------------------------------------------

std::vector<double> eigen_angles(double abar, std::span<const double> lpoly, int g) {
  if (g < 1) fail(ErrorKind::InvalidInput, "g must be >= 1");
  if (lpoly.empty()) {
    if (g != 1) fail(ErrorKind::InvalidInput, "angles for g > 1 need the local polynomial");
    if (!(std::abs(abar) <= 2.0 + 1e-12)) fail(ErrorKind::DataInvalid, "normalized trace outside [-2,2]");
    return {std::acos(std::clamp(abar / 2.0, -1.0, 1.0)) / (2.0 * std::numbers::pi)};
  }
  const int n = 2 * g;
  if (static_cast<int>(lpoly.size()) != n) fail(ErrorKind::DataInvalid, "local polynomial must have 2g coefficients");
  const double lead = lpoly[n - 1];
  if (!(std::abs(lead) > 1e-8)) fail(ErrorKind::DataInvalid, "local polynomial has degree < 2g");
  // P(T) = 1 + c1 T + ... + c_n T^n; companion matrix of P / c_n.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  C(0, n - 1) = -1.0 / lead;
  for (int i = 1; i < n; ++i) C(i, n - 1) = -lpoly[i - 1] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) fail(ErrorKind::NumericFailure, "root finding failed");
  std::vector<std::complex<double>> roots(es.eigenvalues().begin(), es.eigenvalues().end());
  // Multiple roots are only accurate to sqrt(eps); their cluster mean is not.
  std::vector<char> used(roots.size(), 0);
  std::vector<double> angles;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::complex<double> sum = 0.0;
    int mult = 0;
    for (std::size_t j = i; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < 1e-6) {
        used[j] = 1;
        sum += roots[j];
        ++mult;
      }
    }
    const std::complex<double> z = sum / static_cast<double>(mult);
    if (std::abs(std::abs(z) - 1.0) > 1e-8)
      fail(ErrorKind::DataInvalid, "root of the local polynomial off the unit circle");
    const double th = std::abs(std::arg(z)) / (2.0 * std::numbers::pi);
    for (int k = 0; k < mult; ++k) angles.push_back(th);
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < angles.size(); i += 2) out.push_back(angles[i]);
  return out;
}

std::vector<double> eigen_angles(const TraceSequence& seq, std::size_t i) {
  return eigen_angles(seq.records.at(i).abar(), seq.lpoly(i), seq.g);
}

// ---- files ------------------------------------------------------------------

void write_traces(std::ostream& out, const TraceSequence& seq) {
  out << "# format: ap-traces v1\n";
  out << "# label: " << seq.label << "\n";
  out << "# g: " << seq.g << "\n";
  out << "# bad_norms: ";
  for (std::size_t i = 0; i < seq.bad_norms.size(); ++i) out << (i ? "," : "") << seq.bad_norms[i];
  out << "\n# max_norm: " << seq.max_norm << "\n";
  std::string line;
  char buf[64];
  for (std::size_t i = 0; i < seq.records.size(); ++i) {
    line = std::to_string(seq.records[i].norm);
    line += ',';
    line += std::to_string(seq.records[i].a);
    for (double c : seq.lpoly(i)) {
      std::snprintf(buf, sizeof buf, ",%.17g", c);
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

TraceSequence read_traces(std::istream& in, const std::string& source) {
  TraceSequence seq;
  bool have_format = false, have_max = false;
  std::string raw;
  std::size_t lineno = 0;
  int width = -1;
  auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      const auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(std::string_view(body).substr(0, colon));
      const std::string value = trim(std::string_view(body).substr(colon + 1));
      if (key == "format") {
        if (value != "ap-traces v1") fail(ErrorKind::Parse, where() + "unsupported format '" + value + "'");
        have_format = true;
      } else if (key == "label") {
        seq.label = value;
      } else if (key == "g") {
        std::int64_t g = 0;
        if (!parse_int(value, g) || g < 1 || g > 16) fail(ErrorKind::Parse, where() + "bad genus");
        if (!seq.records.empty()) fail(ErrorKind::Parse, where() + "genus after data rows");
        seq.g = static_cast<int>(g);
      } else if (key == "bad_norms") {
        seq.bad_norms.clear();
        if (!value.empty())
          for (const auto& f : split(value, ',')) {
            std::int64_t v = 0;
            if (!parse_int(f, v)) fail(ErrorKind::Parse, where() + "bad_norms entry is not an integer");
            seq.bad_norms.push_back(v);
          }
        std::sort(seq.bad_norms.begin(), seq.bad_norms.end());
        seq.bad_norms.erase(std::unique(seq.bad_norms.begin(), seq.bad_norms.end()), seq.bad_norms.end());
      } else if (key == "max_norm") {
        if (!parse_int(value, seq.max_norm)) fail(ErrorKind::Parse, where() + "max_norm is not an integer");
        have_max = true;
      }
      continue;
    }
    if (!have_format) fail(ErrorKind::Parse, where() + "data before '# format: ap-traces v1' header");
    const auto fields = split(line, ',');
    const int w = static_cast<int>(fields.size());
    if (w != 2 && w != 2 + 2 * seq.g)
      fail(ErrorKind::Parse, where() + "expected norm,a or norm,a plus 2g coefficients");
    if (width >= 0 && w != width) fail(ErrorKind::Parse, where() + "inconsistent column count");
    width = w;
    TraceRecord rec;
    if (!parse_int(fields[0], rec.norm)) fail(ErrorKind::Parse, where() + "norm must be an integer");
    if (!parse_int(fields[1], rec.a)) fail(ErrorKind::Parse, where() + "a must be an integer");
    if (rec.norm < 2) fail(ErrorKind::DataInvalid, where() + "norm must be >= 2");
    if (!seq.records.empty() && rec.norm <= seq.records.back().norm)
      fail(ErrorKind::DataInvalid, where() + "norms must be strictly increasing");
    if (std::binary_search(seq.bad_norms.begin(), seq.bad_norms.end(), rec.norm))
      fail(ErrorKind::DataInvalid, where() + "record at a bad norm");
    const __int128 a2 = static_cast<__int128>(rec.a) * rec.a;
    if (a2 > static_cast<__int128>(4) * seq.g * seq.g * rec.norm)
      fail(ErrorKind::DataInvalid, where() + "Hasse bound violated");
    std::vector<double> coeffs;
    for (int i = 2; i < w; ++i) {
      double v = 0;
      if (!parse_double(fields[i], v)) fail(ErrorKind::Parse, where() + "coefficient is not a number");
      coeffs.push_back(v);
    }
    if (!coeffs.empty()) {
      try {
        eigen_angles(rec.abar(), coeffs, seq.g);
      } catch (const Error& e) {
        fail(ErrorKind::DataInvalid, where() + e.what());
      }
      seq.lpoly_data.insert(seq.lpoly_data.end(), coeffs.begin(), coeffs.end());
    }
    seq.records.push_back(rec);
  }
  if (!have_format) fail(ErrorKind::Parse, source + ": missing '# format: ap-traces v1' header");
  const std::int64_t last = seq.records.empty() ? 0 : seq.records.back().norm;
  if (!have_max) seq.max_norm = last;
  if (seq.max_norm < last) fail(ErrorKind::DataInvalid, source + ": max_norm below the last norm");
  return seq;
}

void save_traces(const std::filesystem::path& path, const TraceSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open for writing: " + path.string());
  write_traces(out, seq);
  if (!out) fail(ErrorKind::InvalidInput, "write failed: " + path.string());
}

TraceSequence load_traces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::NotFound, "cannot open trace file: " + path.string());
  return read_traces(in, path.string());
}

}  // namespace satotate
