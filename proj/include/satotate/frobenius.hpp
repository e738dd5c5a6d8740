#pragma once

// Frobenius trace data: primes, a_p of elliptic curves over Q (naive count,
// baby-step/giant-step group order, CM formula) and the ap-traces file format.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace satotate {

struct CurveSpec {
  std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  std::string label;
  std::vector<std::int64_t> extra_bad;  // user-supplied bad primes (sorted, unique)
  std::optional<std::int64_t> cm_discriminant;
  std::vector<std::uint32_t> disc_limbs;  // |discriminant|, base 2^32 little-endian (set by make_curve)

  /// Discriminant of the model as a decimal string.
  std::string discriminant() const;
  /// True if p divides the discriminant or was supplied as bad.
  bool is_bad(std::int64_t p) const;
  /// Bad primes <= x (discriminant support plus supplied).
  std::vector<std::int64_t> bad_primes_upto(std::int64_t x) const;
};

/// Validates the model (nonzero discriminant) and normalizes extra_bad.
CurveSpec make_curve(std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t a4,
                     std::int64_t a6, std::string label = {},
                     std::vector<std::int64_t> extra_bad = {},
                     std::optional<std::int64_t> cm_discriminant = std::nullopt);
/// "a1,a2,a3,a4,a6"; CM discriminant -4 is attached to y^2 = x^3 - x.
CurveSpec parse_curve(const std::string& text, std::string label = {});
/// Catalog curves: "11a1", "37a1", "cm4" (y^2 = x^3 - x).
CurveSpec named_curve(const std::string& name);

std::vector<std::int64_t> sieve_primes(std::int64_t x);

std::int64_t ap_naive(const CurveSpec& curve, std::int64_t p);
std::int64_t ap_bsgs(const CurveSpec& curve, std::int64_t p, std::uint64_t seed = 0);
std::int64_t ap_cm(const CurveSpec& curve, std::int64_t p);
bool has_cm_fast_path(const CurveSpec& curve);

enum class Strategy { Naive, Bsgs, Cm, Auto };
Strategy strategy_from_string(const std::string& s);
std::string to_string(Strategy s);

struct TraceRecord {
  std::int64_t norm = 0;
  std::int64_t a = 0;
  double abar() const;
  bool operator==(const TraceRecord&) const = default;
};

struct TraceSequence {
  std::string label;
  int g = 1;
  std::vector<std::int64_t> bad_norms;
  std::int64_t max_norm = 0;
  std::vector<TraceRecord> records;
  std::vector<double> lpoly_data;  // empty, or 2g normalized coefficients per record

  bool has_lpoly() const { return !lpoly_data.empty(); }
  std::span<const double> lpoly(std::size_t i) const;
  bool operator==(const TraceSequence&) const = default;
};

/// Thread count from SATOTATE_THREADS, else the hardware concurrency.
unsigned default_thread_count();

TraceSequence trace_sequence(const CurveSpec& curve, std::int64_t x, Strategy strategy,
                             std::uint64_t seed = 0, unsigned threads = 0);

/// Angles in [0, 1/2]: arccos(abar/2)/(2 pi) for g = 1 without lpoly, otherwise
/// one angle per conjugate pair of roots of the normalized local polynomial.
std::vector<double> eigen_angles(double abar, std::span<const double> lpoly, int g);
std::vector<double> eigen_angles(const TraceSequence& seq, std::size_t i);

void write_traces(std::ostream& out, const TraceSequence& seq);
TraceSequence read_traces(std::istream& in, const std::string& source = "<stream>");
void save_traces(const std::filesystem::path& path, const TraceSequence& seq);
TraceSequence load_traces(const std::filesystem::path& path);

}  // namespace satotate
