#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gramlab/gram.hpp"
#include "gramlab/zeros.hpp"

namespace gramlab {

/// Gram interval (g_n, g_{n+1}] holding k critical-line zeros (an F_k interval).
struct GramInterval {
  std::int64_t n = 0;
  double lo = 0.0;
  double hi = 0.0;
  int k = 0;
  /// Holds a near_tangency record: its true count is uncertain.
  bool flagged = false;
};

struct Classification {
  std::vector<GramInterval> intervals;
  /// Census records outside (g_first, g_last], excluded from all intervals.
  std::size_t zeros_below = 0;
  std::size_t zeros_above = 0;
  /// near_tangency records inside the Gram span.
  std::size_t flagged_records = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Histogram and Gram's law statistics over the unflagged intervals.
/// n_g and n_zeros exclude flagged intervals so that
///   sum_k N_{F_k} = n_g  and  sum_k k N_{F_k} = n_zeros
/// hold exactly. flagged_count is the number of near_tangency records in
/// the span (one per flagged interval when built from intervals alone).
struct ClassificationReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::map<int, std::int64_t> histogram;
  std::int64_t n_g = 0;
  std::int64_t n_zeros = 0;
  std::int64_t failure_count = 0;       // k != 1
  std::int64_t weak_failure_count = 0;  // k == 0
  std::int64_t weak_success_count = 0;  // k >= 1
  std::int64_t flagged_count = 0;
  std::int64_t flagged_intervals = 0;

  double failure_proportion() const;
  double f0_proportion() const;
  double weak_success_proportion() const;
};

/// Labels every Gram interval of the range with its zero count. Throws
/// ArgumentError when the census does not cover the Gram range.
Classification classify(const GramRange& range, const ZeroCensus& census);

ClassificationReport report(const Classification& classification);
ClassificationReport report(const std::vector<GramInterval>& intervals);

/// Combines reports over disjoint ranges; counts add.
ClassificationReport merge_reports(const std::vector<ClassificationReport>& reports);

struct DecayProfile {
  /// N_{F_k} / n_g, pooled over the input reports.
  std::map<int, double> rate;
  /// Whether rate(k) strictly decreases from k = 2 up to the largest k seen.
  bool monotone_from_2 = true;
  std::int64_t n_g = 0;
};

DecayProfile decay_profile(const std::vector<ClassificationReport>& reports);

/// JSON object with keys in a fixed order:
/// range, n_g, n_zeros, histogram, failure_proportion, f0_proportion,
/// weak_success_proportion, flagged_count.
std::string report_to_json(const ClassificationReport& report);

/// CSV table n,lo,hi,k,flagged.
void write_intervals_csv(std::ostream& out, const std::vector<GramInterval>& intervals);

}  // namespace gramlab
