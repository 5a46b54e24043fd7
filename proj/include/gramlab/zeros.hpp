#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gramlab {

enum class ZeroFlag : std::uint8_t {
  ok,             ///< refined sign change of Z
  near_tangency,  ///< unresolved dip standing in for zeros the audit says are missing
};

/// A refined sign change of Z(t). For near_tangency records the bracket
/// is the dip that could not be resolved and carries no sign change.
struct ZeroOrdinate {
  double t = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double width = 0.0;
  ZeroFlag flag = ZeroFlag::ok;
};

struct ZeroCensus {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<ZeroOrdinate> zeros;
  /// Zero count implied by theta and the boundary S estimates.
  std::int64_t expected_count = 0;
  bool audit_passed = false;
  /// Estimated S(t_lo) and S(t_hi) inferred from the census itself.
  double s_lo = 0.0;
  double s_hi = 0.0;

  std::size_t ok_count() const;
  std::size_t flagged_count() const;
};

struct ScanOptions {
  /// Sample spacing. Unset: every Gram interval (and each partial piece at
  /// the range ends) is split into kDefaultSamplesPerInterval equal steps.
  std::optional<double> step;
  /// Final bracket width for refined zeros.
  double tolerance = 5e-10;
  /// OpenMP threads; 0 keeps the runtime default.
  int threads = 0;
  /// Step halvings the audit may apply to a deficient window.
  int max_halvings = 6;
};

inline constexpr int kDefaultSamplesPerInterval = 8;

/// Locates every zero of Z in [t_lo, t_hi], 10 <= t_lo < t_hi. The range is
/// cut at Gram points and the pieces are scanned in parallel on a grid that
/// depends only on each piece; results are merged in order, so the census
/// is identical for any thread count.
ZeroCensus scan_zeros(double t_lo, double t_hi, const ScanOptions& options = {});
ZeroCensus scan_zeros(double t_lo, double t_hi, double initial_step);

/// Serial reference: uniform grid over the whole range, sign changes and
/// bisection only. No dip search, no audit (audit_passed stays false).
ZeroCensus scan_zeros_reference(double t_lo, double t_hi, double step, double tolerance = 5e-10);

struct RefineResult {
  ZeroOrdinate zero;
  int iterations = 0;
};

/// Shrinks a sign-change bracket of Z to width <= tol. Endpoints may be
/// given in either order. Uses the ITP method, which never needs more than
/// ceil(log2(|b - a| / tol)) + 1 iterations.
RefineResult refine_zero_counted(double a, double b, double tol);
ZeroOrdinate refine_zero(double a, double b, double tol);

/// round(theta(t) / pi + 1): N(t) with S(t) taken as zero.
std::int64_t count_estimate(double t);

/// Recomputes expected_count, s_lo, s_hi and audit_passed from the zeros.
void audit_census(ZeroCensus& census);

/// Gram-interval index n with zero t in (g_n, g_{n+1}], with zeros within
/// 1e-9 above a Gram point assigned to the interval below it.
/// Returns -1 when t <= g_0.
std::int64_t gram_interval_of(double t);

// Census CSV: "# gramlab-zeros v1" header, a metadata comment line, then
// index,t,bracket_width,flag rows with 17 significant digits.
void write_census(std::ostream& out, const ZeroCensus& census);
ZeroCensus read_census(std::istream& in);
std::string census_to_string(const ZeroCensus& census);

}  // namespace gramlab
