#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "gramlab/zeros.hpp"

namespace gramlab {

/// Smooth part theta(t)/pi of the zero counting function.
struct RiemannSiegelPhase {};

/// Surrogate smooth part rate * t (units of pi), for hand-checkable S functions.
struct LinearPhase {
  double rate = 1.0;
};

using PhaseModel = std::variant<RiemannSiegelPhase, LinearPhase>;

/// S(t) = s_offset + #{zeros in (anchor, t]} - (phase(t) - phase(anchor))
/// for t >= anchor (the count turns negative below it). With the
/// Riemann-Siegel phase the anchor is a Gram point, so S is an integer there.
/// Right-continuous at every zero.
class SFunction {
 public:
  SFunction(std::vector<double> zeros, double t_lo, double t_hi, double anchor, std::int64_t s_offset,
            PhaseModel phase = RiemannSiegelPhase{});

  double operator()(double t) const;

  /// (phase(t + h) - phase(t)), computed without cancellation.
  double phase_increment(double t, double h) const;

  /// Number of zeros <= t.
  std::int64_t count_upto(double t) const;

  const std::vector<double>& zeros() const { return zeros_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  double anchor() const { return anchor_; }
  std::int64_t s_offset() const { return s_offset_; }
  const PhaseModel& phase() const { return phase_; }

 private:
  std::vector<double> zeros_;
  double t_lo_;
  double t_hi_;
  double anchor_;
  std::int64_t s_offset_;
  PhaseModel phase_;
  std::int64_t anchor_count_;
};

/// S at the first Gram point of the census, from the audit's estimate of
/// S(t_lo) rounded to the nearest integer. Exact when the census starts
/// below the first zero.
std::int64_t infer_s_offset(const ZeroCensus& census);

/// Requires a passing audit (AuditError otherwise) and at least one Gram
/// point in the census range, which becomes the anchor.
SFunction build_s(const ZeroCensus& census, std::int64_t s_offset);

/// Throws ArgumentError outside [t_lo, t_hi].
double eval_s(const SFunction& sf, double t);

struct MomentEstimate {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double h = 0.0;
  int m = 1;
  double value = 0.0;
  double quad_error = 0.0;
  /// pi^-2 (t_hi - t_lo) log(3 + h log t_lo); equals leading_term(T, h) on [T, 2T].
  double leading_term = 0.0;
  std::size_t pieces = 0;
};

struct MomentOptions {
  int threads = 0;
};

inline constexpr std::size_t kMaxMomentBreakpoints = 100'000'000;

/// Integral of |S(t + h) - S(t)|^{2m} over [t_lo, t_hi]. The integrand is
/// smooth between the breakpoints {zeros} and {zeros - h}; each piece gets
/// an 8-point Gauss-Legendre rule, and quad_error sums |GL8 - GL4| per piece.
/// Pieces are summed in fixed-size blocks so the value does not depend on
/// the thread count.
MomentEstimate shifted_moment(const SFunction& sf, double h, int m, double t_lo, double t_hi,
                              const MomentOptions& options = {});

/// Serial reference: breakpoints by sort, the step part by binary search at
/// each piece midpoint, GL8 per piece. No error estimate.
double shifted_moment_reference(const SFunction& sf, double h, int m, double t_lo, double t_hi);

/// pi^-2 T log(3 + h log T).
double leading_term(double T, double h);

/// The short shift 2pi / (3 log(T / 2pi)), one third of a Gram interval.
double korolev_shift(double T);

/// Window length T^(27/82 + 0.0005).
double korolev_window(double T);

struct MomentGrowthRow {
  int m = 1;
  double value = 0.0;
  double quad_error = 0.0;
  /// value^(1/m) / m^2
  double root_ratio = 0.0;
  /// (value / H)^(1/m) / m^2, the quantity the (C m^2)^m H bound caps.
  double normalized_ratio = 0.0;
};

struct MomentGrowthTable {
  double T = 0.0;
  double H = 0.0;
  double h = 0.0;
  std::vector<MomentGrowthRow> rows;
};

/// Moments m = 1..m_max (m_max <= 5) over [T, T + H] at h = korolev_shift(T).
/// H defaults to korolev_window(T).
MomentGrowthTable moment_growth_check(const SFunction& sf, double T, int m_max, std::optional<double> H = {},
                                      const MomentOptions& options = {});

/// Reference scale for the ratio column: leading_term for m = 1,
/// (t_hi - t_lo) log^m(3 + h log t_lo) for m >= 2.
double moment_reference_scale(const MomentEstimate& estimate);

/// CSV with columns T,H,h,m,value,quad_error,leading_term,ratio.
void write_moment_csv_header(std::ostream& out);
void write_moment_csv_row(std::ostream& out, const MomentEstimate& estimate);

}  // namespace gramlab
