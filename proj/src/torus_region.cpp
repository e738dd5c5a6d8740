#include "torus_region.hpp"

#include "satotate/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace satotate::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LineTrace {
  const GroupDescriptor& desc;
  std::vector<double> phase0;  // 2 pi a_j . rest for each row
  std::vector<double> slope;   // 2 pi a_{j,1}

  LineTrace(const GroupDescriptor& d, std::span<const double> rest) : desc(d) {
    for (const IntVec& a : d.A) {
      double p = 0.0;
      for (std::size_t k = 1; k < a.size(); ++k) p += static_cast<double>(a[k]) * rest[k - 1];
      phase0.push_back(kTwoPi * p);
      slope.push_back(kTwoPi * static_cast<double>(a[0]));
    }
  }

  double value(double t) const {
    double s = 0.0;
    for (std::size_t j = 0; j < slope.size(); ++j) s += 2.0 * std::cos(slope[j] * t + phase0[j]);
    return s;
  }
  double derivative(double t) const {
    double s = 0.0;
    for (std::size_t j = 0; j < slope.size(); ++j)
      s -= 2.0 * slope[j] * std::sin(slope[j] * t + phase0[j]);
    return s;
  }
};

template <class F>
double root_between(F f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                             boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

Segments preimage_on_line(const GroupDescriptor& desc, std::span<const double> rest, double lo,
                          double hi) {
  const LineTrace line(desc, rest);
  std::int64_t amax = 0;
  for (const IntVec& a : desc.A) amax = std::max(amax, std::abs(a[0]));
  if (amax == 0) {
    const double v = line.value(0.0);
    if (lo <= v && v <= hi) return {{0.0, 1.0}};
    return {};
  }

  // Critical points of T along the line split [0,1] into monotone pieces.
  const int cells = static_cast<int>(64 * amax * static_cast<std::int64_t>(desc.A.size()) + 64);
  std::vector<double> knots{0.0};
  auto dfun = [&](double t) { return line.derivative(t); };
  double prev = dfun(0.0);
  for (int i = 1; i <= cells; ++i) {
    const double t = static_cast<double>(i) / cells;
    const double cur = dfun(t);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
      knots.push_back(root_between(dfun, static_cast<double>(i - 1) / cells, t, prev, cur));
    } else if (cur == 0.0 && i < cells) {
      knots.push_back(t);
    }
    prev = cur;
  }
  knots.push_back(1.0);

  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    if (b <= a) continue;
    const double fa = line.value(a), fb = line.value(b);
    for (double level : {lo, hi}) {
      const double ga = fa - level, gb = fb - level;
      if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
        cuts.push_back(root_between([&](double t) { return line.value(t) - level; }, a, b, ga, gb));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Segments out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const double v = line.value(0.5 * (a + b));
    if (v < lo || v > hi) continue;
    if (!out.empty() && out.back().second == a)
      out.back().second = b;
    else
      out.emplace_back(a, b);
  }
  return out;
}

std::vector<double> outer_breaks(const GroupDescriptor& desc, double lo, double hi) {
  if (desc.q != 2) fail(ErrorKind::Unsupported, "outer break points need a rank-2 torus");
  auto pieces = [&](double s) {
    const double rest[] = {s};
    const Segments seg = preimage_on_line(desc, rest, lo, hi);
    // Count boundary points strictly inside (0,1); wrap-around pieces are
    // joined so that a segment touching both ends counts once.
    int n = 0;
    for (const auto& [a, b] : seg) n += (a > 0.0) + (b < 1.0);
    return n;
  };
  std::int64_t amax = 1;
  for (const IntVec& a : desc.A) amax = std::max(amax, std::abs(a[1]));
  const int cells = static_cast<int>(512 * amax);
  std::vector<double> breaks{0.0};
  int prev = pieces(0.0);
  for (int i = 1; i <= cells; ++i) {
    double a = static_cast<double>(i - 1) / cells, b = static_cast<double>(i) / cells;
    const int cur = pieces(b);
    if (cur != prev) {
      const int left = prev;
      for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        if (pieces(m) == left)
          a = m;
        else
          b = m;
      }
      breaks.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-13; }),
               breaks.end());
  return breaks;
}

double line_integral(const TrigPoly& poly, double a, double b, std::span<const double> rest) {
  double total = 0.0;
  for (const auto& [k, c] : poly) {
    double phase = 0.0;
    for (std::size_t i = 1; i < k.size(); ++i) phase += static_cast<double>(k[i]) * rest[i - 1];
    phase *= kTwoPi;
    if (k[0] == 0) {
      total += c * (b - a) * std::cos(phase);
    } else {
      const double w = kTwoPi * static_cast<double>(k[0]);
      total += c * (std::sin(w * b + phase) - std::sin(w * a + phase)) / w;
    }
  }
  return total;
}

}  // namespace satotate::detail
