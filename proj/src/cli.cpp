#include "satotate/cli.hpp"

#include "satotate/analytics.hpp"
#include "satotate/error.hpp"
#include "satotate/frobenius.hpp"
#include "satotate/lie.hpp"
#include "satotate/st_group.hpp"
#include "satotate/vinogradov.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace satotate {

namespace {

using ojson = nlohmann::ordered_json;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    fail(ErrorKind::InvalidInput, what + ": not a number: '" + s + "'");
  return v;
}

// Integer that may be written as 1e6.
std::int64_t parse_count(const std::string& s, const std::string& what) {
  const double v = parse_real(s, what);
  if (v != std::floor(v) || std::abs(v) > 9.0e15)
    fail(ErrorKind::InvalidInput, what + ": not an integer: '" + s + "'");
  return static_cast<std::int64_t>(v);
}

std::vector<double> parse_reals(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& f : split_list(s)) out.push_back(parse_real(f, what));
  return out;
}

std::vector<std::int64_t> parse_counts(const std::string& s, const std::string& what) {
  std::vector<std::int64_t> out;
  for (const auto& f : split_list(s)) out.push_back(parse_count(f, what));
  return out;
}

Interval parse_interval(const std::string& s) {
  const auto v = parse_reals(s, "--interval");
  if (v.size() != 2) fail(ErrorKind::InvalidInput, "--interval needs lo,hi");
  if (v[0] > v[1]) fail(ErrorKind::InvalidInput, "--interval needs lo <= hi");
  return {v[0], v[1]};
}

Weight parse_weight(const RootSystem& rs, const std::string& s) {
  const auto v = parse_counts(s, "weight");
  if (static_cast<int>(v.size()) != rs.total_rank())
    fail(ErrorKind::InvalidInput, "weight needs " + std::to_string(rs.total_rank()) + " entries");
  IntVec ss(v.begin(), v.begin() + rs.rank_h), ab(v.begin() + rs.rank_h, v.end());
  return rs.make_weight(ss, ab);
}

std::string weight_text(const Weight& w) {
  std::string s;
  bool first = true;
  for (auto v : w.semisimple) {
    s += (first ? "" : " ") + std::to_string(v);
    first = false;
  }
  for (auto v : w.abelian) {
    s += (first ? "" : " ") + std::to_string(v);
    first = false;
  }
  return s;
}

std::string rational_text(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidInput, "cannot open for writing: " + path);
  f << text;
  if (!f) fail(ErrorKind::InvalidInput, "write failed: " + path);
}

std::int64_t default_conductor(const TraceSequence& seq) {
  // Product of the bad norms (the model's discriminant support), capped.
  std::int64_t n = 1;
  for (auto p : seq.bad_norms) {
    if (n > std::numeric_limits<std::int64_t>::max() / p) return std::numeric_limits<std::int64_t>::max();
    n *= p;
  }
  return n;
}

CurveSpec curve_from_arg(const std::string& s, const std::string& label) {
  if (s.find(',') == std::string::npos) {
    CurveSpec c = named_curve(s);
    if (!label.empty()) c.label = label;
    return c;
  }
  return parse_curve(s, label);
}

struct Options {
  // shared
  std::string group, group2, weight, mu, theta, interval, out, format = "csv";
  double tol = 1e-9;
  // measure
  int moment = -1;
  bool describe = false;
  // vinogradov
  double delta = 0.0, x_real = 0.0;
  int r = 1;
  std::int64_t M = 0;
  bool weyl = false, decompose = false;
  // traces
  std::string curve, x, strategy = "auto", label, bad_norms;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  // analyze
  std::string traces, traces2, grid, character = "trivial";
  std::int64_t N = 0, N2 = 0;
  double constant = 1.0;
  bool squares = false;
  int n = 2;
};

const GroupDescriptor& need_group(const std::string& name, std::optional<GroupDescriptor>& slot) {
  if (name.empty()) fail(ErrorKind::InvalidInput, "--group is required");
  slot = catalog_lookup(name);
  return *slot;
}

// ---- lie ----------------------------------------------------------------------

void do_lie(const std::string& op, const Options& o, std::ostream& out) {
  std::optional<GroupDescriptor> slot;
  const RootSystem& rs = need_group(o.group, slot).root_system;
  if (o.weight.empty()) fail(ErrorKind::InvalidInput, "--weight is required");
  const Weight lambda = parse_weight(rs, o.weight);
  if (op == "dim") {
    out << weyl_dimension(rs, lambda) << "\n";
  } else if (op == "partition") {
    out << kostant_partition(rs, lambda) << "\n";
  } else if (op == "mult") {
    if (o.mu.empty()) fail(ErrorKind::InvalidInput, "--mu is required");
    out << weight_multiplicity(rs, lambda, parse_weight(rs, o.mu)) << "\n";
  } else if (op == "inverse") {
    if (!o.mu.empty()) {
      out << rational_text(gupta_inverse_entry(rs, lambda, parse_weight(rs, o.mu))) << "\n";
    } else {
      out << "weight,d\n";
      for (const auto& [w, d] : gupta_inverse_row(rs, lambda)) out << weight_text(w) << "," << rational_text(d) << "\n";
    }
  } else if (op == "char") {
    const auto th = parse_reals(o.theta.empty() ? std::string() : o.theta, "--theta");
    if (static_cast<int>(th.size()) != rs.total_rank())
      fail(ErrorKind::InvalidInput, "--theta needs " + std::to_string(rs.total_rank()) + " torus angles");
    auto angles = fund_angles_from_torus(rs, std::span<const double>(th).subspan(0, rs.rank_h));
    angles.insert(angles.end(), th.begin() + rs.rank_h, th.end());
    out << format_number(character_value(rs, lambda, angles)) << "\n";
  }
}

// ---- measure ------------------------------------------------------------------

void do_measure(const Options& o, std::ostream& out) {
  std::optional<GroupDescriptor> slot;
  const GroupDescriptor& d = need_group(o.group, slot);
  if (o.describe) {
    out << descriptor_to_json(d) << "\n";
    return;
  }
  if (o.moment >= 0) {
    out << format_number(moment(d, o.moment, o.tol)) << "\n";
    return;
  }
  if (o.interval.empty()) fail(ErrorKind::InvalidInput, "--interval is required");
  const Interval I = parse_interval(o.interval);
  out << format_number(measure_interval(d, make_interval(d, I.lo, I.hi), o.tol)) << "\n";
}

// ---- vinogradov -----------------------------------------------------------------

void do_vinogradov(const Options& o, std::ostream& out) {
  std::optional<GroupDescriptor> slot;
  const GroupDescriptor& d = need_group(o.group, slot);
  if (o.interval.empty()) fail(ErrorKind::InvalidInput, "--interval is required");
  const Interval raw = parse_interval(o.interval);
  const Interval I = make_interval(d, raw.lo, raw.hi);
  SmoothingParams p;
  if (o.x_real > 0.0) {
    p = default_parameters(d, o.x_real, o.N > 0 ? o.N : 1, I);
    if (o.M > 0) p = make_smoothing_params(d, p.Delta, p.r, o.M);
  } else {
    if (!(o.delta > 0.0) || o.M <= 0) fail(ErrorKind::InvalidInput, "give --delta and --M, or --x");
    p = make_smoothing_params(d, o.delta, o.r, o.M);
  }
  FourierSeries F = smooth(indicator_fourier(d, I, p.M), p);
  if (o.weyl || o.decompose) F = weyl_average(d, F);
  std::ostringstream text;
  if (!o.theta.empty()) {
    const auto th = parse_reals(o.theta, "--theta");
    if (o.decompose)
      text << format_number(evaluate_decomposition(d, character_decomposition(d, F), th)) << "\n";
    else
      text << format_number(evaluate_series(F, th)) << "\n";
  } else if (o.decompose) {
    const Decomposition dec = character_decomposition(d, F);
    text << "# delta: " << format_number(dec.delta) << "\n# virtual_dimension: "
         << format_number(dec.virtual_dimension) << "\nweight,coefficient\n";
    for (const auto& [w, c] : dec.coeffs) text << weight_text(w) << "," << format_number(c) << "\n";
  } else {
    text << "# group: " << d.name << "\n# interval: " << format_number(I.lo) << "," << format_number(I.hi)
         << "\n# Delta: " << format_number(p.Delta) << "\n# r: " << p.r << "\n# delta: " << format_number(p.delta)
         << "\n# M: " << p.M << "\n";
    text << series_to_csv(F);
  }
  emit(text.str(), o.out, out);
}

// ---- traces ---------------------------------------------------------------------

void do_traces(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.curve.empty()) fail(ErrorKind::InvalidInput, "--curve is required");
  if (o.x.empty()) fail(ErrorKind::InvalidInput, "--x is required");
  const std::int64_t x = parse_count(o.x, "--x");
  if (x < 2) fail(ErrorKind::InvalidInput, "--x must be >= 2");
  CurveSpec c = curve_from_arg(o.curve, o.label);
  if (!o.bad_norms.empty()) {
    auto extra = parse_counts(o.bad_norms, "--bad-norms");
    c = make_curve(c.a1, c.a2, c.a3, c.a4, c.a6, c.label, extra, c.cm_discriminant);
  }
  const TraceSequence seq = trace_sequence(c, x, strategy_from_string(o.strategy), o.seed, o.threads);
  std::ostringstream text;
  write_traces(text, seq);
  emit(text.str(), o.out, out);
  if (!o.out.empty()) err << "wrote " << seq.records.size() << " records to " << o.out << "\n";
}

// ---- analyze --------------------------------------------------------------------

std::string render(const AnalysisReport& rep, const std::string& format) {
  return format == "json" ? rep.to_json() : rep.to_csv();
}

TraceSequence need_traces(const std::string& path, const char* flag) {
  if (path.empty()) fail(ErrorKind::InvalidInput, std::string(flag) + " is required");
  return load_traces(path);
}

std::vector<std::int64_t> need_grid(const Options& o, const TraceSequence& seq) {
  if (o.grid.empty()) return {seq.max_norm};
  return parse_counts(o.grid, "--grid");
}

CharacterSpec make_character(const Options& o, std::optional<GroupDescriptor>& g1,
                             std::optional<GroupDescriptor>& g2) {
  if (o.character == "trivial") return CharacterSpec::trivial();
  if (o.character == "psi") {
    const auto& a = need_group(o.group.empty() ? "SU2" : o.group, g1);
    const auto& b = need_group(o.group2.empty() ? "SU2" : o.group2, g2);
    return CharacterSpec::psi_pair(a, b);
  }
  const auto& d = need_group(o.group, g1);
  if (o.weight.empty()) fail(ErrorKind::InvalidInput, "--weight is required");
  const Weight w = parse_weight(d.root_system, o.weight);
  if (o.character == "irreducible") return CharacterSpec::irreducible(d, w);
  if (o.character == "squared") return CharacterSpec::squared(d, w);
  fail(ErrorKind::InvalidInput, "unknown character kind: " + o.character);
}

void do_analyze(const std::string& op, const Options& o, std::ostream& out) {
  if (o.format != "csv" && o.format != "json") fail(ErrorKind::InvalidInput, "--format must be csv or json");
  const bool json = o.format == "json";
  std::ostringstream text;
  if (op == "sign") {
    const TraceSequence a = need_traces(o.traces, "--a");
    const TraceSequence b = need_traces(o.traces2, "--b");
    const SignResult r = sign_search(a, b, o.N > 0 ? o.N : default_conductor(a),
                                     o.N2 > 0 ? o.N2 : default_conductor(b), o.constant);
    if (json) {
      ojson j;
      j["schema"] = "sign-search v1";
      j["a"] = a.label;
      j["b"] = b.label;
      j["norm"] = r.norm ? ojson(*r.norm) : ojson(nullptr);
      j["common_norms"] = r.common_norms;
      j["bound"] = std::strtod(format_number(r.bound).c_str(), nullptr);
      text << j.dump(2) << "\n";
    } else {
      text << (r.norm ? std::to_string(*r.norm) : std::string("exhausted")) << "\n";
    }
  } else if (op == "interval") {
    const TraceSequence s = need_traces(o.traces, "--traces");
    std::optional<GroupDescriptor> g;
    const auto& d = need_group(o.group, g);
    if (o.interval.empty()) fail(ErrorKind::InvalidInput, "--interval is required");
    text << render(effective_st_report(s, d, parse_interval(o.interval), need_grid(o, s),
                                       o.N > 0 ? o.N : default_conductor(s), o.constant),
                   o.format);
  } else if (op == "linnik") {
    const TraceSequence s = need_traces(o.traces, "--traces");
    std::optional<GroupDescriptor> g;
    const auto& d = need_group(o.group, g);
    if (o.interval.empty()) fail(ErrorKind::InvalidInput, "--interval is required");
    const LinnikResult r =
        linnik_interval_search(s, d, parse_interval(o.interval), o.N > 0 ? o.N : default_conductor(s), o.constant);
    if (json) {
      ojson j;
      j["schema"] = "linnik-search v1";
      j["label"] = s.label;
      j["norm"] = r.record ? ojson(r.record->norm) : ojson(nullptr);
      j["a"] = r.record ? ojson(r.record->a) : ojson(nullptr);
      j["measure"] = std::strtod(format_number(r.measure).c_str(), nullptr);
      j["bound"] = std::isfinite(r.bound) ? ojson(std::strtod(format_number(r.bound).c_str(), nullptr))
                                          : ojson(nullptr);
      text << j.dump(2) << "\n";
    } else {
      text << "norm,a,abar,measure,bound\n";
      if (r.record)
        text << r.record->norm << "," << r.record->a << "," << format_number(r.record->abar()) << ",";
      else
        text << "exhausted,,,";
      text << format_number(r.measure) << "," << format_number(r.bound) << "\n";
    }
  } else if (op == "charsum" || op == "bach") {
    const TraceSequence s = need_traces(o.traces, "--traces");
    std::optional<TraceSequence> s2;
    if (!o.traces2.empty()) s2 = load_traces(o.traces2);
    std::optional<GroupDescriptor> g1, g2;
    const CharacterSpec chi = make_character(o, g1, g2);
    const TraceSequence* other = s2 ? &*s2 : nullptr;
    std::vector<std::int64_t> grid = need_grid(o, s);
    if (o.grid.empty() && other) grid = {std::min(s.max_norm, other->max_norm)};
    const std::int64_t N = o.N > 0 ? o.N : default_conductor(s);
    const AnalysisReport rep = op == "bach" ? bach_report(s, chi, grid, N, o.squares, o.constant, other)
                                            : character_sum_report(s, chi, grid, N, o.constant, other);
    text << render(rep, o.format);
  } else if (op == "maxtrace") {
    const TraceSequence s = need_traces(o.traces, "--traces");
    text << render(max_trace_stats(s, need_grid(o, s)), o.format);
  } else if (op == "moment") {
    const TraceSequence s = need_traces(o.traces, "--traces");
    const std::int64_t x = o.x.empty() ? s.max_norm : parse_count(o.x, "--x");
    text << format_number(empirical_moment(s, o.n, x)) << "\n";
  }
  emit(text.str(), o.out, out);
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NumericFailure: return 3;
    case ErrorKind::InsufficientData: return 4;
    default: return 2;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sato-Tate experiments: Lie data, trace measures, smoothing, Frobenius traces, analyses"};
  app.name("satotate");
  app.require_subcommand(1);

  auto* lie = app.add_subcommand("lie", "Representation theory of the catalog groups");
  lie->require_subcommand(1);
  std::vector<CLI::App*> lie_ops;
  for (const char* name : {"dim", "mult", "inverse", "partition", "char"}) {
    auto* s = lie->add_subcommand(name);
    s->add_option("--group", o.group, "catalog group (SU2, USp4, ...)")->required();
    s->add_option("--weight", o.weight, "weight in fundamental coordinates, then abelian")->required();
    if (std::string(name) == "mult" || std::string(name) == "inverse") s->add_option("--mu", o.mu, "second weight");
    if (std::string(name) == "char") s->add_option("--theta", o.theta, "torus angles (turns)")->required();
    lie_ops.push_back(s);
  }
  lie_ops[0]->description("Weyl dimension");
  lie_ops[1]->description("weight multiplicity m_lambda^mu");
  lie_ops[2]->description("entry or row of the inverse multiplicity matrix");
  lie_ops[3]->description("Kostant partition function");
  lie_ops[4]->description("character value at a torus point");

  auto* meas = app.add_subcommand("measure", "Trace-measure mass of an interval, moments, descriptors");
  meas->add_option("--group", o.group)->required();
  meas->add_option("--interval", o.interval, "lo,hi");
  meas->add_option("--tol", o.tol);
  meas->add_option("--moment", o.moment, "print E[T^n] instead");
  meas->add_flag("--describe", o.describe, "print the descriptor as JSON");

  auto* vin = app.add_subcommand("vinogradov", "Smoothed indicator series and character decomposition");
  vin->add_option("--group", o.group)->required();
  vin->add_option("--interval", o.interval, "lo,hi")->required();
  vin->add_option("--delta", o.delta, "Delta");
  vin->add_option("--r", o.r, "box-averaging order");
  vin->add_option("--M", o.M, "truncation");
  vin->add_option("--x", o.x_real, "derive Delta, r, M from x");
  vin->add_option("--N", o.N, "conductor for --x");
  vin->add_option("--theta", o.theta, "evaluate at torus angles");
  vin->add_flag("--weyl", o.weyl, "Weyl-average the series");
  vin->add_flag("--decompose", o.decompose, "print the character decomposition");
  vin->add_option("--out", o.out);

  auto* tr = app.add_subcommand("traces", "Compute a_p of an elliptic curve and write an ap-traces file");
  tr->add_option("--curve", o.curve, "a1,a2,a3,a4,a6 or a catalog name (11a1, 37a1, cm4)")->required();
  tr->add_option("--x", o.x, "bound (1e6 notation accepted)")->required();
  tr->add_option("--strategy", o.strategy, "naive|bsgs|cm|auto");
  tr->add_option("--out", o.out);
  tr->add_option("--label", o.label);
  tr->add_option("--bad-norms", o.bad_norms, "extra bad primes");
  tr->add_option("--seed", o.seed);
  tr->add_option("--threads", o.threads, "worker threads (default: SATOTATE_THREADS or all cores)");

  auto* an = app.add_subcommand("analyze", "Experiments on trace files");
  an->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> an_ops;
  for (const char* name : {"sign", "interval", "linnik", "charsum", "bach", "maxtrace", "moment"}) {
    auto* s = an->add_subcommand(name);
    const std::string nm = name;
    if (nm == "sign") {
      s->add_option("--a", o.traces, "first trace file")->required();
      s->add_option("--b", o.traces2, "second trace file")->required();
      s->add_option("--N2", o.N2, "conductor of the second curve");
    } else {
      s->add_option("--traces", o.traces, "trace file")->required();
    }
    s->add_option("--N", o.N, "conductor (default: product of bad norms)");
    s->add_option("--constant", o.constant, "envelope / bound constant");
    s->add_option("--format", o.format, "csv|json");
    s->add_option("--out", o.out);
    if (nm == "interval" || nm == "linnik") {
      s->add_option("--group", o.group)->required();
      s->add_option("--interval", o.interval, "lo,hi")->required();
    }
    if (nm == "interval" || nm == "charsum" || nm == "bach" || nm == "maxtrace")
      s->add_option("--grid", o.grid, "x values, comma separated (default: max_norm)");
    if (nm == "charsum" || nm == "bach") {
      s->add_option("--character", o.character, "trivial|irreducible|squared|psi");
      s->add_option("--group", o.group);
      s->add_option("--group2", o.group2);
      s->add_option("--weight", o.weight);
      s->add_option("--traces2", o.traces2, "second trace file (psi)");
    }
    if (nm == "bach") s->add_flag("--squares", o.squares, "add the prime-square terms");
    if (nm == "moment") {
      s->add_option("--n", o.n, "order (0..8)");
      s->add_option("--x", o.x, "bound (default: max_norm)");
    }
    an_ops.emplace_back(nm, s);
  }

  std::vector<std::string> argv_store{"satotate"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (lie->parsed()) {
      for (auto* s : lie_ops)
        if (s->parsed()) do_lie(s->get_name(), o, out);
    } else if (meas->parsed()) {
      do_measure(o, out);
    } else if (vin->parsed()) {
      do_vinogradov(o, out);
    } else if (tr->parsed()) {
      do_traces(o, out, err);
    } else if (an->parsed()) {
      for (const auto& [nm, s] : an_ops)
        if (s->parsed()) do_analyze(nm, o, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  out.flush();
  return 0;
}

}  // namespace satotate
