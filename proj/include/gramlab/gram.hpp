#pragma once

#include <cstdint>
#include <vector>

namespace gramlab {

/// Solution of theta(t) = n pi. Index origin: g_0 ~ 17.8456 (theta(g_0) = 0).
struct GramPoint {
  std::int64_t n = 0;
  double t = 0.0;
  double residual = 0.0;  // |theta(t) - n pi|
};

/// All Gram points g_n with t_lo <= g_n <= t_hi, consecutive in n.
struct GramRange {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<GramPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::int64_t first_index() const { return points.empty() ? -1 : points.front().n; }
};

struct IntervalLengthStats {
  double max_len = 0.0;
  double min_len = 0.0;
};

GramPoint gram_point(std::int64_t n);

/// Smallest n >= 0 with g_n >= t (t > 2pi).
std::int64_t first_gram_index_at_or_above(double t);

/// Largest n with g_n <= t, or -1 when t < g_0.
std::int64_t last_gram_index_at_or_below(double t);

/// Enumerates the range; Gram points are solved in parallel by index blocks.
GramRange gram_range(double t_lo, double t_hi);

IntervalLengthStats interval_length_stats(const GramRange& range);

/// 2pi / log(T / 2pi): the Gram interval length at height T to leading order.
double gram_length_scale(double t);

}  // namespace gramlab
