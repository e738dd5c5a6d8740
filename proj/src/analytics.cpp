#include "satotate/analytics.hpp"

#include "satotate/error.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace satotate {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_x(const TraceSequence& seq, std::int64_t x) {
  if (x < 2) fail(ErrorKind::InvalidInput, "x must be >= 2");
  if (x > seq.max_norm)
    fail(ErrorKind::InsufficientData, "x = " + std::to_string(x) + " beyond data (max_norm " +
                                          std::to_string(seq.max_norm) + ")");
}

std::size_t upto(const TraceSequence& seq, std::int64_t x) {
  auto it = std::upper_bound(seq.records.begin(), seq.records.end(), x,
                             [](std::int64_t v, const TraceRecord& r) { return v < r.norm; });
  return static_cast<std::size_t>(it - seq.records.begin());
}

void require_interval(const Interval& I) {
  if (!std::isfinite(I.lo) || !std::isfinite(I.hi) || I.lo > I.hi)
    fail(ErrorKind::InvalidInput, "interval needs finite lo <= hi");
}

ojson json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

ojson json_param(const ParamValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return json_number(std::get<double>(v));
}

std::string param_text(const ParamValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return format_number(std::get<double>(v));
}

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Groups whose maximal torus is parametrized by the unordered eigen angles.
void require_angle_group(const GroupDescriptor& desc, int g) {
  const auto t = desc.root_system.cartan_type;
  if (!((t == CartanType::A1 || t == CartanType::C2) && desc.root_system.abelian_rank == 0 &&
        desc.q == g && desc.g == g))
    fail(ErrorKind::Unsupported,
         "character evaluation from eigen angles needs SU2 (g=1) or USp4 (g=2) matching the data");
}

double class_trace_squared(const TraceSequence& seq, std::size_t i) {
  if (!seq.has_lpoly() && seq.g == 1) {
    const double t = seq.records[i].abar();
    return t * t - 2.0;
  }
  double s = 0.0;
  for (double th : eigen_angles(seq, i)) s += 2.0 * std::cos(4.0 * std::numbers::pi * th);
  return s;
}

double character_at(const CharacterSpec& chi, const TraceSequence& seq, std::size_t i, bool squared) {
  if (chi.kind == CharacterKind::Trivial) return 1.0;
  const RootSystem& rs = chi.group.root_system;
  std::vector<double> th = eigen_angles(seq, i);
  if (squared) for (double& t : th) t *= 2.0;
  return character_value(rs, chi.lambda, fund_angles_from_torus(rs, th));
}

// Calls f(i, j) for each pair of records with a common norm <= x.
template <class F>
void for_common(const TraceSequence& a, const TraceSequence& b, std::int64_t x, F&& f) {
  std::size_t i = 0, j = 0;
  const std::size_t na = upto(a, x), nb = upto(b, x);
  while (i < na && j < nb) {
    const auto p = a.records[i].norm, q = b.records[j].norm;
    if (p < q) {
      ++i;
    } else if (q < p) {
      ++j;
    } else {
      f(i, j);
      ++i;
      ++j;
    }
  }
}

void check_character(const CharacterSpec& chi, const TraceSequence& seq, const TraceSequence* other) {
  switch (chi.kind) {
    case CharacterKind::Trivial:
      break;
    case CharacterKind::Irreducible:
    case CharacterKind::Squared:
      require_angle_group(chi.group, seq.g);
      if (chi.lambda.semisimple.size() != static_cast<std::size_t>(chi.group.root_system.rank_h) ||
          !chi.lambda.abelian.empty() || !is_dominant(chi.lambda))
        fail(ErrorKind::InvalidInput, "character needs a dominant weight of the group");
      break;
    case CharacterKind::PsiPair:
      if (other == nullptr) fail(ErrorKind::InvalidInput, "psi character needs two trace sequences");
      if (chi.group.g != seq.g || chi.group2.g != other->g)
        fail(ErrorKind::InvalidInput, "psi character groups do not match the data genera");
      break;
  }
}

void add_common_params(AnalysisReport& rep, const TraceSequence& seq, std::int64_t N) {
  rep.parameters.emplace_back("label", seq.label);
  rep.parameters.emplace_back("g", static_cast<std::int64_t>(seq.g));
  rep.parameters.emplace_back("N", N);
}

void add_character_params(AnalysisReport& rep, const CharacterSpec& chi) {
  rep.parameters.emplace_back("character", to_string(chi.kind));
  if (chi.kind != CharacterKind::Trivial) rep.parameters.emplace_back("group", chi.group.name);
  if (chi.kind == CharacterKind::PsiPair) rep.parameters.emplace_back("group2", chi.group2.name);
  if (chi.kind == CharacterKind::Irreducible || chi.kind == CharacterKind::Squared) {
    std::string w;
    for (std::size_t i = 0; i < chi.lambda.semisimple.size(); ++i)
      w += (i ? "," : "") + std::to_string(chi.lambda.semisimple[i]);
    rep.parameters.emplace_back("weight", w);
  }
  rep.parameters.emplace_back("delta", character_delta(chi));
  rep.parameters.emplace_back("d_chi", character_dimension(chi));
  rep.parameters.emplace_back("w_chi", character_weight(chi));
}

bool all_within(const AnalysisReport& rep) {
  return std::all_of(rep.rows.begin(), rep.rows.end(), [](const ReportRow& r) { return r.within; });
}

}  // namespace

double li(double x) {
  if (!(x >= 2.0)) fail(ErrorKind::InvalidInput, "li needs x >= 2");
  if (x == 2.0) return 0.0;
  return boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string AnalysisReport::to_csv() const {
  std::ostringstream out;
  out << "# format: analysis-report v1\n# experiment: " << experiment << "\n";
  for (const auto& [k, v] : parameters) out << "# " << k << ": " << param_text(v) << "\n";
  for (const auto& [k, v] : verdicts) out << "# verdict " << k << ": " << (v ? "true" : "false") << "\n";
  out << "x,observed,main_term,error,normalized_error,envelope,within";
  if (!rows.empty())
    for (const auto& [k, v] : rows.front().extra) out << ',' << k;
  out << '\n';
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.observed) << ',' << format_number(r.main_term)
        << ',' << format_number(r.error) << ',' << format_number(r.normalized_error) << ','
        << format_number(r.envelope) << ',' << (r.within ? "true" : "false");
    for (const auto& [k, v] : r.extra) out << ',' << format_number(v);
    out << '\n';
  }
  return out.str();
}

std::string AnalysisReport::to_json() const {
  ojson j;
  j["schema"] = "analysis-report v1";
  j["experiment"] = experiment;
  ojson params = ojson::object();
  for (const auto& [k, v] : parameters) params[k] = json_param(v);
  j["parameters"] = params;
  ojson rs = ojson::array();
  for (const auto& r : rows) {
    ojson o;
    o["x"] = json_number(r.x);
    o["observed"] = json_number(r.observed);
    o["main_term"] = json_number(r.main_term);
    o["error"] = json_number(r.error);
    o["normalized_error"] = json_number(r.normalized_error);
    o["envelope"] = json_number(r.envelope);
    o["within"] = r.within;
    for (const auto& [k, v] : r.extra) o[k] = json_number(v);
    rs.push_back(o);
  }
  j["rows"] = rs;
  ojson vs = ojson::object();
  for (const auto& [k, v] : verdicts) vs[k] = v;
  j["verdicts"] = vs;
  return j.dump(2) + "\n";
}

std::int64_t interval_count(const TraceSequence& seq, const Interval& interval, std::int64_t x) {
  require_interval(interval);
  if (x > seq.max_norm) fail(ErrorKind::InsufficientData, "x beyond data");
  std::int64_t c = 0;
  const std::size_t n = upto(seq, x);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = seq.records[i].abar();
    if (t >= interval.lo && t <= interval.hi) ++c;
  }
  return c;
}

void validate_grid(const std::vector<std::int64_t>& grid) {
  if (grid.empty()) fail(ErrorKind::InvalidInput, "empty x grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2) fail(ErrorKind::InvalidInput, "grid points must be >= 2");
    if (i && grid[i] <= grid[i - 1]) fail(ErrorKind::InvalidInput, "grid must be strictly increasing");
  }
}

double st_envelope_shape(const GroupDescriptor& desc, double x, std::int64_t N) {
  const double eps = boost::rational_cast<double>(epsilon(desc));
  const double lx = std::log(x);
  return std::pow(x, 1.0 - eps) * std::pow(std::log(static_cast<double>(N) * x), 2.0 * eps) /
         std::pow(lx, 1.0 - 4.0 * eps);
}

AnalysisReport effective_st_report(const TraceSequence& seq, const GroupDescriptor& desc,
                                   const Interval& interval, const std::vector<std::int64_t>& grid,
                                   std::int64_t N, double envelope_constant) {
  if (!desc.connected) fail(ErrorKind::Unsupported, "effective report needs a connected group");
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be >= 1");
  validate_grid(grid);
  require_x(seq, grid.back());
  const Interval I = make_interval(desc, interval.lo, interval.hi);
  const double mu = measure_interval(desc, I);
  AnalysisReport rep;
  rep.experiment = "effective-st";
  add_common_params(rep, seq, N);
  rep.parameters.emplace_back("group", desc.name);
  rep.parameters.emplace_back("interval_lo", I.lo);
  rep.parameters.emplace_back("interval_hi", I.hi);
  rep.parameters.emplace_back("mu", mu);
  rep.parameters.emplace_back("epsilon", rational_text(epsilon(desc)));
  rep.parameters.emplace_back("envelope_constant", envelope_constant);
  for (std::int64_t x : grid) {
    ReportRow r;
    r.x = static_cast<double>(x);
    r.observed = static_cast<double>(interval_count(seq, I, x));
    const double l = li(r.x);
    r.main_term = mu * l;
    r.error = r.observed - r.main_term;
    const double shape = st_envelope_shape(desc, r.x, N);
    r.normalized_error = r.error / shape;
    r.envelope = envelope_constant * shape;
    r.within = std::abs(r.error) <= r.envelope;
    r.extra = {{"li", l}, {"relative_error", r.error / l}};
    rep.rows.push_back(std::move(r));
  }
  rep.verdicts.emplace_back("all_within_envelope", all_within(rep));
  return rep;
}

LinnikResult linnik_interval_search(const TraceSequence& seq, const GroupDescriptor& desc,
                                    const Interval& interval, std::int64_t N, double constant) {
  require_interval(interval);
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be >= 1");
  LinnikResult res;
  for (const auto& r : seq.records) {
    const double t = r.abar();
    if (t >= interval.lo && t <= interval.hi) {
      res.record = r;
      break;
    }
  }
  const double lo = std::max(interval.lo, -2.0 * desc.g), hi = std::min(interval.hi, 2.0 * desc.g);
  res.measure = lo <= hi ? measure_interval(desc, make_interval(desc, lo, hi)) : 0.0;
  const double z = std::min(std::max(0.0, hi - lo), res.measure);
  if (!desc.connected)
    res.bound = kNaN;
  else
    res.bound = z > 0.0 ? x0_threshold(desc, z, N, constant) : std::numeric_limits<double>::infinity();
  return res;
}

double psi_value(double abar, double abar2, int g, int g2) {
  return abar * abar2 * (-2.0 * g + abar) * (2.0 * g2 + abar2);
}

SignResult sign_search(const TraceSequence& a, const TraceSequence& b, std::int64_t N,
                       std::int64_t N2, double constant) {
  if (N < 1 || N2 < 1) fail(ErrorKind::InvalidInput, "N must be >= 1");
  SignResult res;
  const std::int64_t x = std::max(a.max_norm, b.max_norm);
  for_common(a, b, x, [&](std::size_t i, std::size_t j) {
    ++res.common_norms;
    const auto u = a.records[i].a, v = b.records[j].a;
    if (!res.norm && ((u < 0 && v > 0) || (u > 0 && v < 0))) res.norm = a.records[i].norm;
  });
  if (res.common_norms == 0) fail(ErrorKind::InsufficientData, "no common good norms");
  const double l = std::log(2.0 * static_cast<double>(N) * static_cast<double>(N2));
  res.bound = constant * l * l;
  return res;
}

CharacterSpec CharacterSpec::trivial() { return {}; }

CharacterSpec CharacterSpec::irreducible(const GroupDescriptor& desc, const Weight& lambda) {
  CharacterSpec c;
  c.kind = CharacterKind::Irreducible;
  c.group = desc;
  c.lambda = lambda;
  return c;
}

CharacterSpec CharacterSpec::squared(const GroupDescriptor& desc, const Weight& lambda) {
  CharacterSpec c = irreducible(desc, lambda);
  c.kind = CharacterKind::Squared;
  return c;
}

CharacterSpec CharacterSpec::psi_pair(const GroupDescriptor& a, const GroupDescriptor& b) {
  CharacterSpec c;
  c.kind = CharacterKind::PsiPair;
  c.group = a;
  c.group2 = b;
  return c;
}

std::string to_string(CharacterKind kind) {
  switch (kind) {
    case CharacterKind::Trivial: return "trivial";
    case CharacterKind::Irreducible: return "irreducible";
    case CharacterKind::Squared: return "squared";
    case CharacterKind::PsiPair: return "psi";
  }
  return "?";
}

double delta_psi(const GroupDescriptor& a, const GroupDescriptor& b, double tol) {
  const double ga = a.g, gb = b.g;
  return (-2.0 * ga * moment(a, 1, tol) + moment(a, 2, tol)) *
         (2.0 * gb * moment(b, 1, tol) + moment(b, 2, tol));
}

double character_delta(const CharacterSpec& chi, double tol) {
  switch (chi.kind) {
    case CharacterKind::Trivial:
      return 1.0;
    case CharacterKind::Irreducible:
      return chi.lambda == chi.group.root_system.zero_weight() ? 1.0 : 0.0;
    case CharacterKind::PsiPair:
      return delta_psi(chi.group, chi.group2, tol);
    case CharacterKind::Squared:
      break;
  }
  // Mean of chi(2 theta) times the Weyl density: a trigonometric polynomial,
  // integrated exactly by the midpoint rule once the grid outruns its degree.
  const GroupDescriptor& d = chi.group;
  require_angle_group(d, d.g);
  const RootSystem& rs = d.root_system;
  const int n = static_cast<int>(2 * character_weight(chi) + 4 * d.phi() + 3);
  const int q = d.q;
  std::vector<int> idx(static_cast<std::size_t>(q), 0);
  std::vector<double> th(static_cast<std::size_t>(q)), th2(static_cast<std::size_t>(q));
  double total = 0.0;
  for (;;) {
    for (int k = 0; k < q; ++k) {
      th[k] = (idx[k] + 0.5) / n;
      th2[k] = 2.0 * th[k];
    }
    total += character_value(rs, chi.lambda, fund_angles_from_torus(rs, th2)) * weyl_density_value(d, th);
    int k = 0;
    while (k < q && ++idx[k] == n) idx[k++] = 0;
    if (k == q) break;
  }
  return total / std::pow(static_cast<double>(n), q);
}

std::int64_t character_dimension(const CharacterSpec& chi) {
  switch (chi.kind) {
    case CharacterKind::Trivial: return 1;
    case CharacterKind::Irreducible:
    case CharacterKind::Squared: return weyl_dimension(chi.group.root_system, chi.lambda);
    case CharacterKind::PsiPair: {
      const std::int64_t g = chi.group.g, h = chi.group2.g;
      return 64 * g * g * h * h;
    }
  }
  return 0;
}

std::int64_t character_weight(const CharacterSpec& chi) {
  switch (chi.kind) {
    case CharacterKind::Trivial: return 0;
    case CharacterKind::PsiPair: return 4;
    case CharacterKind::Irreducible:
    case CharacterKind::Squared: {
      std::int64_t w = 0;
      for (auto v : torus_from_fund(chi.group.root_system, chi.lambda.semisimple)) w += std::abs(v);
      for (auto v : chi.lambda.abelian) w += std::abs(v);
      return chi.kind == CharacterKind::Squared ? 2 * w : w;
    }
  }
  return 0;
}

double character_sum(const TraceSequence& seq, const CharacterSpec& chi, std::int64_t x,
                     const TraceSequence* other) {
  check_character(chi, seq, other);
  require_x(seq, x);
  double s = 0.0;
  if (chi.kind == CharacterKind::PsiPair) {
    require_x(*other, x);
    for_common(seq, *other, x, [&](std::size_t i, std::size_t j) {
      s += psi_value(seq.records[i].abar(), other->records[j].abar(), seq.g, other->g);
    });
    return s;
  }
  const std::size_t n = upto(seq, x);
  const bool sq = chi.kind == CharacterKind::Squared;
  for (std::size_t i = 0; i < n; ++i) s += character_at(chi, seq, i, sq);
  return s;
}

AnalysisReport character_sum_report(const TraceSequence& seq, const CharacterSpec& chi,
                                    const std::vector<std::int64_t>& grid, std::int64_t N,
                                    double envelope_constant, const TraceSequence* other) {
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be >= 1");
  validate_grid(grid);
  AnalysisReport rep;
  rep.experiment = "character-sum";
  add_common_params(rep, seq, N);
  add_character_params(rep, chi);
  rep.parameters.emplace_back("envelope_constant", envelope_constant);
  const double delta = character_delta(chi);
  const double w = static_cast<double>(character_weight(chi));
  for (std::int64_t x : grid) {
    ReportRow r;
    r.x = static_cast<double>(x);
    r.observed = character_sum(seq, chi, x, other);
    r.main_term = delta * li(r.x);
    r.error = r.observed - r.main_term;
    const double shape = std::sqrt(r.x) * std::log(static_cast<double>(N) * (r.x + w));
    r.normalized_error = r.error / shape;
    r.envelope = envelope_constant * shape;
    r.within = std::abs(r.error) <= r.envelope;
    rep.rows.push_back(std::move(r));
  }
  rep.verdicts.emplace_back("all_within_envelope", all_within(rep));
  return rep;
}

double bach_sum(const TraceSequence& seq, const CharacterSpec& chi, std::int64_t x,
                bool include_squares, const TraceSequence* other) {
  check_character(chi, seq, other);
  require_x(seq, x);
  const double X = static_cast<double>(x);
  auto kernel = [&](double p, int r) {
    const double pr = std::pow(p, r);
    return std::log(p) * std::pow(pr / X, kBachA) * std::log(X / pr);
  };
  double s = 0.0;
  if (chi.kind == CharacterKind::PsiPair) {
    require_x(*other, x);
    for_common(seq, *other, x, [&](std::size_t i, std::size_t j) {
      const double p = static_cast<double>(seq.records[i].norm);
      s += psi_value(seq.records[i].abar(), other->records[j].abar(), seq.g, other->g) * kernel(p, 1);
      if (include_squares && p * p <= X)
        s += psi_value(class_trace_squared(seq, i), class_trace_squared(*other, j), seq.g, other->g) *
             kernel(p, 2);
    });
    return s;
  }
  const std::size_t n = upto(seq, x);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(seq.records[i].norm);
    s += character_at(chi, seq, i, false) * kernel(p, 1);
    if (include_squares && p * p <= X) s += character_at(chi, seq, i, true) * kernel(p, 2);
  }
  return s;
}

AnalysisReport bach_report(const TraceSequence& seq, const CharacterSpec& chi,
                           const std::vector<std::int64_t>& grid, std::int64_t N,
                           bool include_squares, double envelope_constant, const TraceSequence* other) {
  if (N < 1) fail(ErrorKind::InvalidInput, "N must be >= 1");
  validate_grid(grid);
  AnalysisReport rep;
  rep.experiment = include_squares ? "bach-sum-r12" : "bach-sum-r1";
  add_common_params(rep, seq, N);
  add_character_params(rep, chi);
  rep.parameters.emplace_back("a", kBachA);
  rep.parameters.emplace_back("envelope_constant", envelope_constant);
  const double delta = character_delta(chi);
  const double d = static_cast<double>(character_dimension(chi));
  const double w = static_cast<double>(character_weight(chi));
  for (std::int64_t x : grid) {
    ReportRow r;
    r.x = static_cast<double>(x);
    r.observed = bach_sum(seq, chi, x, include_squares, other);
    r.main_term = 16.0 / 25.0 * delta * r.x;
    r.error = r.observed - r.main_term;
    const double shape = d * std::log(2.0 * static_cast<double>(N)) * std::log(2.0 + w) * std::sqrt(r.x);
    r.normalized_error = r.error / shape;
    r.envelope = envelope_constant * shape;
    r.within = std::abs(r.error) <= r.envelope;
    r.extra = {{"sum_over_x", r.observed / r.x}};
    rep.rows.push_back(std::move(r));
  }
  rep.verdicts.emplace_back("all_within_envelope", all_within(rep));
  return rep;
}

MaxTraceCounts max_trace_counts(const TraceSequence& seq, std::int64_t x) {
  if (seq.g != 1) fail(ErrorKind::Unsupported, "maximal traces need g = 1");
  require_x(seq, x);
  MaxTraceCounts c;
  auto pow4 = [](std::int64_t j) { return static_cast<unsigned __int128>(j) * j * j * j; };
  c.n = 1;
  while (pow4(c.n + 1) * pow4(c.n + 1) * pow4(c.n + 1) * pow4(c.n + 1) <= static_cast<unsigned __int128>(x))
    ++c.n;
  const long double X = static_cast<long double>(x);
  const std::size_t m = upto(seq, x);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = seq.records[i];
    const std::int64_t p = r.norm;
    std::int64_t f = static_cast<std::int64_t>(std::sqrt(4.0L * p));
    while (f * f > 4 * p) --f;
    while ((f + 1) * (f + 1) <= 4 * p) ++f;
    if (r.a == f) ++c.M;
    const long double sp = std::sqrt(static_cast<long double>(p));
    const long double dev = (2.0L * sp - r.a) / sp;  // 2 - abar >= 0
    const long double dev2 = dev * dev;
    if (dev2 * X < 1.0L) ++c.R;
    if (pow4(c.n) * static_cast<unsigned __int128>(p) <= static_cast<unsigned __int128>(x)) {
      ++c.tail;
      continue;
    }
    // x_{j+1} < p <= x_j
    std::int64_t j = 1;
    while (pow4(j + 1) * static_cast<unsigned __int128>(p) <= static_cast<unsigned __int128>(x)) ++j;
    const long double j1 = static_cast<long double>(j + 1);
    if (dev2 * X < j1 * j1 * j1 * j1) ++c.S;
  }
  return c;
}

AnalysisReport max_trace_stats(const TraceSequence& seq, const std::vector<std::int64_t>& grid) {
  validate_grid(grid);
  require_x(seq, grid.back());
  AnalysisReport rep;
  rep.experiment = "max-trace";
  rep.parameters.emplace_back("label", seq.label);
  rep.parameters.emplace_back("g", static_cast<std::int64_t>(seq.g));
  rep.parameters.emplace_back("cm_target", 2.0 / (3.0 * std::numbers::pi));
  for (std::int64_t x : grid) {
    const MaxTraceCounts c = max_trace_counts(seq, x);
    ReportRow r;
    r.x = static_cast<double>(x);
    const double shape = std::pow(r.x, 0.75) / std::log(r.x);
    r.observed = static_cast<double>(c.M);
    r.main_term = 2.0 / (3.0 * std::numbers::pi) * shape;
    r.error = r.observed - r.main_term;
    r.normalized_error = r.error / shape;
    r.envelope = static_cast<double>(c.bound());
    r.within = c.R <= c.M && c.M <= c.bound();
    r.extra = {{"R", static_cast<double>(c.R)},
               {"S", static_cast<double>(c.S)},
               {"tail", static_cast<double>(c.tail)},
               {"n", static_cast<double>(c.n)},
               {"ratio", r.observed / shape}};
    rep.rows.push_back(std::move(r));
  }
  rep.verdicts.emplace_back("sandwich", all_within(rep));
  return rep;
}

double empirical_moment(const TraceSequence& seq, int n, std::int64_t x) {
  if (n < 0 || n > 8) fail(ErrorKind::InvalidInput, "moment order must be in [0, 8]");
  require_x(seq, x);
  const std::size_t m = upto(seq, x);
  if (m == 0) fail(ErrorKind::InsufficientData, "no records up to x");
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += std::pow(seq.records[i].abar(), n);
  return s / static_cast<double>(m);
}

}  // namespace satotate
