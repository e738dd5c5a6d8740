#pragma once

// Experiments on trace data: prime counts in trace intervals against
// mu(I) li(x), Linnik-type searches, character and Bach-kernel prime sums,
// maximal-trace counts and empirical moments.

#include "satotate/frobenius.hpp"
#include "satotate/lie.hpp"
#include "satotate/st_group.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace satotate {

/// Integral of 1/log t from 2 to x.
double li(double x);

using ParamValue = std::variant<std::string, double, std::int64_t>;

struct ReportRow {
  double x = 0.0;
  double observed = 0.0;
  double main_term = 0.0;
  double error = 0.0;             // observed - main_term
  double normalized_error = 0.0;  // error / envelope shape (the implied constant)
  double envelope = 0.0;
  bool within = true;
  std::vector<std::pair<std::string, double>> extra;  // same keys on every row
};

struct AnalysisReport {
  std::string experiment;
  std::vector<std::pair<std::string, ParamValue>> parameters;
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, bool>> verdicts;

  std::string to_csv() const;
  std::string to_json() const;  // schema "analysis-report v1"
};

/// %.12g
std::string format_number(double v);

/// #{records: norm <= x, abar in [lo, hi]}.
std::int64_t interval_count(const TraceSequence& seq, const Interval& interval, std::int64_t x);

/// Strictly increasing grid check; throws invalid-input.
void validate_grid(const std::vector<std::int64_t>& grid);

double st_envelope_shape(const GroupDescriptor& desc, double x, std::int64_t N);

AnalysisReport effective_st_report(const TraceSequence& seq, const GroupDescriptor& desc,
                                   const Interval& interval, const std::vector<std::int64_t>& grid,
                                   std::int64_t N, double envelope_constant = 1.0);

struct LinnikResult {
  std::optional<TraceRecord> record;  // empty: exhausted
  double measure = 0.0;               // mu(I)
  double bound = 0.0;                 // constant * nu(min{|I|, mu(I)}) log(2N)^2 log(log 4N)^4
};
LinnikResult linnik_interval_search(const TraceSequence& seq, const GroupDescriptor& desc,
                                    const Interval& interval, std::int64_t N, double constant = 1.0);

double psi_value(double abar, double abar2, int g, int g2);

struct SignResult {
  std::optional<std::int64_t> norm;  // empty: exhausted
  std::size_t common_norms = 0;
  double bound = 0.0;  // constant * log(2 N N')^2
};
SignResult sign_search(const TraceSequence& a, const TraceSequence& b, std::int64_t N, std::int64_t N2,
                       double constant = 1.0);

enum class CharacterKind { Trivial, Irreducible, Squared, PsiPair };

struct CharacterSpec {
  CharacterKind kind = CharacterKind::Trivial;
  GroupDescriptor group;   // Irreducible, Squared, PsiPair (first factor)
  Weight lambda;           // Irreducible, Squared
  GroupDescriptor group2;  // PsiPair

  static CharacterSpec trivial();
  static CharacterSpec irreducible(const GroupDescriptor& desc, const Weight& lambda);
  static CharacterSpec squared(const GroupDescriptor& desc, const Weight& lambda);
  static CharacterSpec psi_pair(const GroupDescriptor& a, const GroupDescriptor& b);
};

std::string to_string(CharacterKind kind);

/// Multiplicity of the trivial character, d_chi (sum of |coefficient| times
/// dimension) and weight w_chi.
double character_delta(const CharacterSpec& chi, double tol = 1e-9);
std::int64_t character_dimension(const CharacterSpec& chi);
std::int64_t character_weight(const CharacterSpec& chi);

/// delta(psi) = (-2g E[T] + E[T^2]) (2g' E[T'] + E[T'^2]).
double delta_psi(const GroupDescriptor& a, const GroupDescriptor& b, double tol = 1e-9);

/// Sum over good norms <= x of chi(y_p); PsiPair needs `other` and runs over
/// common norms.
double character_sum(const TraceSequence& seq, const CharacterSpec& chi, std::int64_t x,
                     const TraceSequence* other = nullptr);
/// Rows: observed sum, main delta li(x), envelope constant sqrt(x) log(N (x + w)).
AnalysisReport character_sum_report(const TraceSequence& seq, const CharacterSpec& chi,
                                    const std::vector<std::int64_t>& grid, std::int64_t N,
                                    double envelope_constant = 1.0,
                                    const TraceSequence* other = nullptr);

inline constexpr double kBachA = 0.25;

/// sum chi(y_p) log p (p/x)^a log(x/p); with include_squares also the r = 2
/// terms chi(y_p^2) log p (p^2/x)^a log(x/p^2).
double bach_sum(const TraceSequence& seq, const CharacterSpec& chi, std::int64_t x,
                bool include_squares = false, const TraceSequence* other = nullptr);
/// Rows: observed sum, main (16/25) delta x, envelope
/// constant d_chi log(2N) log(2 + w_chi) sqrt(x).
AnalysisReport bach_report(const TraceSequence& seq, const CharacterSpec& chi,
                           const std::vector<std::int64_t>& grid, std::int64_t N,
                           bool include_squares = false, double envelope_constant = 1.0,
                           const TraceSequence* other = nullptr);

struct MaxTraceCounts {
  std::int64_t M = 0;  // a_p = floor(2 sqrt p)
  std::int64_t R = 0;  // |abar - 2| < x^{-1/2}
  std::int64_t n = 0;  // partition size floor(x^{1/16})
  std::int64_t S = 0;  // sum_j #S(x_{j+1}, x_j), x_j = x / j^4
  std::int64_t tail = 0;  // #{p <= x_n}
  std::int64_t bound() const { return S + tail; }
};
MaxTraceCounts max_trace_counts(const TraceSequence& seq, std::int64_t x);
AnalysisReport max_trace_stats(const TraceSequence& seq, const std::vector<std::int64_t>& grid);

/// (1/#records) sum abar^n over norm <= x, 0 <= n <= 8.
double empirical_moment(const TraceSequence& seq, int n, std::int64_t x);

}  // namespace satotate
