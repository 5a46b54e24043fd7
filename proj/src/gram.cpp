#include "gramlab/gram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gramlab/error.hpp"
#include "gramlab/special_functions.hpp"

namespace gramlab {
namespace {

constexpr int kMaxNewton = 50;
constexpr double kRelTol = 1e-12;

// Fixed point of t = (n pi + pi/8 + t/2) / (log(t / 2pi) / 2), the leading
// terms of theta(t) = n pi solved for the t outside the logarithm.
double initial_guess(std::int64_t n) {
  const double target = static_cast<double>(n) * kPi + kPi / 8.0;
  double t = 20.0 + 2.0 * static_cast<double>(n);
  for (int i = 0; i < 8; ++i) {
    const double next = (target + 0.5 * t) / (0.5 * std::log(t / kTwoPi));
    if (std::fabs(next - t) < 1e-3 * t) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

}  // namespace

double gram_length_scale(double t) { return kTwoPi / std::log(t / kTwoPi); }

GramPoint gram_point(std::int64_t n) {
  if (n < 0) throw ArgumentError("gram_point: index must be >= 0");
  const double target = static_cast<double>(n) * kPi;
  double t = initial_guess(n);
  for (int it = 0; it < kMaxNewton; ++it) {
    const double step = (theta_value(t) - target) / theta_deriv(t);
    t -= step;
    if (std::fabs(step) <= kRelTol * t) {
      // One more step lands on the floating-point fixed point.
      t -= (theta_value(t) - target) / theta_deriv(t);
      return GramPoint{n, t, std::fabs(theta_value(t) - target)};
    }
  }
  throw NumericError("gram_point: Newton did not converge for n = " + std::to_string(n) +
                     ", last iterate t = " + std::to_string(t));
}

std::int64_t first_gram_index_at_or_above(double t) {
  if (!(t > kTwoPi)) throw DomainError("first_gram_index_at_or_above: requires t > 2pi");
  auto n = static_cast<std::int64_t>(std::ceil(theta_value(t) / kPi));
  n = std::max<std::int64_t>(n, 0);
  // theta/pi lands within rounding of an integer near Gram points.
  while (n > 0 && gram_point(n - 1).t >= t) --n;
  while (gram_point(n).t < t) ++n;
  return n;
}

std::int64_t last_gram_index_at_or_below(double t) {
  if (!(t > kTwoPi)) throw DomainError("last_gram_index_at_or_below: requires t > 2pi");
  auto n = static_cast<std::int64_t>(std::floor(theta_value(t) / kPi));
  if (n < 0) return -1;
  while (n >= 0 && gram_point(n).t > t) --n;
  while (gram_point(n + 1).t <= t) ++n;
  return n;
}

GramRange gram_range(double t_lo, double t_hi) {
  if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) throw ArgumentError("gram_range: non-finite bound");
  if (t_lo <= kTwoPi) throw DomainError("gram_range: requires t_lo > 2pi");
  if (t_hi < t_lo) throw ArgumentError("gram_range: t_hi < t_lo");

  GramRange range{t_lo, t_hi, {}};
  const std::int64_t first = first_gram_index_at_or_above(t_lo);
  const std::int64_t last = last_gram_index_at_or_below(t_hi);
  if (last < first) return range;

  const auto count = static_cast<std::int64_t>(last - first + 1);
  range.points.resize(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static, 1024)
  for (std::int64_t i = 0; i < count; ++i) {
    range.points[static_cast<std::size_t>(i)] = gram_point(first + i);
  }
  return range;
}

IntervalLengthStats interval_length_stats(const GramRange& range) {
  if (range.points.size() < 2) throw ArgumentError("interval_length_stats: need at least 2 Gram points");
  IntervalLengthStats stats{0.0, INFINITY};
  for (std::size_t i = 1; i < range.points.size(); ++i) {
    const double len = range.points[i].t - range.points[i - 1].t;
    stats.max_len = std::max(stats.max_len, len);
    stats.min_len = std::min(stats.min_len, len);
  }
  return stats;
}

}  // namespace gramlab
