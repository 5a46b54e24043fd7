#include "gramlab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <omp.h>

#include <boost/math/tools/minima.hpp>

#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"
#include "gramlab/special_functions.hpp"

namespace gramlab {

std::size_t ZeroCensus::ok_count() const {
  return static_cast<std::size_t>(
      std::count_if(zeros.begin(), zeros.end(), [](const ZeroOrdinate& z) { return z.flag == ZeroFlag::ok; }));
}

std::size_t ZeroCensus::flagged_count() const { return zeros.size() - ok_count(); }

namespace {

constexpr double kDuplicateSeparation = 1e-8;
constexpr std::size_t kPiecesPerBlock = 16;
// Audit windows, in mean zero spacings.
constexpr double kAuditWindowSpacings = 64.0;
constexpr double kLocateWindowSpacings = 32.0;
// A near_tangency record stands in for a missing pair.
constexpr std::int64_t kGapWeight = 2;

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

int weight(const ZeroOrdinate& z) { return z.flag == ZeroFlag::ok ? 1 : static_cast<int>(kGapWeight); }

struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  int subdivisions = 1;
  double step() const { return (hi - lo) / subdivisions; }
};

struct DipCandidate {
  double t = 0.0;
  double depth = 0.0;  // min of sign * Z over the dip; >= 0 when unresolved
  double lo = 0.0;
  double hi = 0.0;
};

struct PassResult {
  std::vector<ZeroOrdinate> zeros;
  std::vector<DipCandidate> dips;
};

void sort_and_dedupe(std::vector<ZeroOrdinate>& zeros) {
  std::sort(zeros.begin(), zeros.end(), [](const ZeroOrdinate& a, const ZeroOrdinate& b) { return a.t < b.t; });
  std::vector<ZeroOrdinate> out;
  out.reserve(zeros.size());
  for (const auto& z : zeros) {
    if (!out.empty() && z.t - out.back().t < kDuplicateSeparation) continue;
    out.push_back(z);
  }
  zeros = std::move(out);
}

class Scanner {
 public:
  Scanner(double t_lo, double t_hi, const ScanOptions& options) : t_lo_(t_lo), t_hi_(t_hi), options_(options) {
    gram_ = gram_range(t_lo, t_hi);
    std::vector<double> cuts{t_lo};
    for (const auto& g : gram_.points) {
      if (g.t > t_lo && g.t < t_hi) cuts.push_back(g.t);
    }
    cuts.push_back(t_hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces_.push_back(make_piece(cuts[i], cuts[i + 1]));
    // Neighbouring pieces just outside the range supply the outer samples
    // for dip detection; when the range ends on a Gram point they are the
    // adjacent Gram intervals, so split scans see the same samples.
    below_ = pieces_.front();
    if (!gram_.empty() && gram_.points.front().t == t_lo && gram_.points.front().n > 0) {
      below_ = make_piece(gram_point(gram_.points.front().n - 1).t, t_lo);
    }
    above_ = pieces_.back();
    if (!gram_.empty() && gram_.points.back().t == t_hi) {
      above_ = make_piece(t_hi, gram_point(gram_.points.back().n + 1).t);
    }
  }

  PassResult scan(std::size_t first, std::size_t last, int level) const {
    const std::size_t n_pieces = last - first;
    const std::size_t n_blocks = (n_pieces + kPiecesPerBlock - 1) / kPiecesPerBlock;
    std::vector<PassResult> blocks(n_blocks);
    const int threads = options_.threads > 0 ? options_.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(n_blocks); ++b) {
      const std::size_t lo = first + static_cast<std::size_t>(b) * kPiecesPerBlock;
      const std::size_t hi = std::min(last, lo + kPiecesPerBlock);
      blocks[static_cast<std::size_t>(b)] = scan_block(lo, hi, level);
    }
    PassResult merged;
    for (auto& blk : blocks) {
      merged.zeros.insert(merged.zeros.end(), blk.zeros.begin(), blk.zeros.end());
      merged.dips.insert(merged.dips.end(), blk.dips.begin(), blk.dips.end());
    }
    sort_and_dedupe(merged.zeros);
    return merged;
  }

  std::size_t piece_count() const { return pieces_.size(); }

  /// Index range of pieces overlapping [u, v].
  std::pair<std::size_t, std::size_t> pieces_covering(double u, double v) const {
    std::size_t first = 0;
    while (first + 1 < pieces_.size() && pieces_[first].hi <= u) ++first;
    std::size_t last = first;
    while (last < pieces_.size() && pieces_[last].lo < v) ++last;
    return {first, std::max(last, first + 1)};
  }

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }

 private:
  Piece make_piece(double lo, double hi) const {
    int n = kDefaultSamplesPerInterval;
    if (options_.step) n = std::max(1, static_cast<int>(std::ceil((hi - lo) / *options_.step)));
    return Piece{lo, hi, n};
  }

  PassResult scan_block(std::size_t first, std::size_t last, int level) const {
    const int mult = 1 << level;
    std::vector<double> xs;
    // Outer sample below the block.
    const Piece& prev = first == 0 ? below_ : pieces_[first - 1];
    const double x_before = pieces_[first].lo - prev.step() / mult;
    for (std::size_t p = first; p < last; ++p) {
      const Piece& pc = pieces_[p];
      const int n = pc.subdivisions * mult;
      const double h = (pc.hi - pc.lo) / n;
      for (int j = (p == first ? 0 : 1); j < n; ++j) xs.push_back(pc.lo + j * h);
      xs.push_back(pc.hi);
    }
    const Piece& next = last == pieces_.size() ? above_ : pieces_[last];
    const double x_after = pieces_[last - 1].hi + next.step() / mult;

    std::vector<double> zs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) zs[i] = z_value(xs[i]);
    const bool have_before = x_before >= 10.0;
    const double z_before = have_before ? z_value(x_before) : 0.0;
    const double z_after = z_value(x_after);

    PassResult out;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (sign_of(zs[i]) != sign_of(zs[i + 1])) {
        out.zeros.push_back(refine_zero(xs[i], xs[i + 1], options_.tolerance));
      }
    }

    // A pair of zeros between two samples leaves a same-signed local minimum
    // of |Z| at one of the samples next to it.
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double xl, zl, xr, zr;
      if (i == 0) {
        if (!have_before) continue;
        xl = x_before;
        zl = z_before;
      } else {
        xl = xs[i - 1];
        zl = zs[i - 1];
      }
      if (i + 1 == xs.size()) {
        xr = x_after;
        zr = z_after;
      } else {
        xr = xs[i + 1];
        zr = zs[i + 1];
      }
      const int s = sign_of(zs[i]);
      if (sign_of(zl) != s || sign_of(zr) != s) continue;
      const double a = std::fabs(zs[i]);
      if (!(a < std::fabs(zl) && a <= std::fabs(zr))) continue;
      probe_dip(xl, xr, s, out);
    }
    return out;
  }

  void probe_dip(double lo, double hi, int s, PassResult& out) const {
    auto f = [s](double t) { return s * z_value(t); };
    std::uintmax_t max_iter = 60;
    const auto [t_min, f_min] = boost::math::tools::brent_find_minima(f, lo, hi, 40, max_iter);
    if (f_min < 0.0) {
      for (auto [a, b] : {std::pair{lo, t_min}, std::pair{t_min, hi}}) {
        const ZeroOrdinate z = refine_zero(a, b, options_.tolerance);
        if (z.t >= t_lo_ && z.t <= t_hi_) out.zeros.push_back(z);
      }
    } else if (t_min >= t_lo_ && t_min <= t_hi_) {
      out.dips.push_back(DipCandidate{t_min, f_min, lo, hi});
    }
  }

  double t_lo_;
  double t_hi_;
  ScanOptions options_;
  GramRange gram_;
  std::vector<Piece> pieces_;
  Piece below_;
  Piece above_;
};

// Weighted count of census records in (t_lo, t] and its integral, evaluated
// over a sorted record list.
class CountingProfile {
 public:
  CountingProfile(const ZeroCensus& census) : census_(census), theta_lo_(theta_value(census.t_lo)) {
    cumulative_.reserve(census.zeros.size() + 1);
    cumulative_.push_back(0);
    for (const auto& z : census.zeros) cumulative_.push_back(cumulative_.back() + weight(z));
  }

  std::int64_t total() const { return cumulative_.back(); }

  std::int64_t count_upto(double t) const {
    const auto it = std::upper_bound(census_.zeros.begin(), census_.zeros.end(), t,
                                     [](double v, const ZeroOrdinate& z) { return v < z.t; });
    return cumulative_[static_cast<std::size_t>(it - census_.zeros.begin())];
  }

  /// S(t) - S(t_lo) assuming the records are complete.
  double relative_s(double t) const {
    return static_cast<double>(count_upto(t)) - theta_increment(census_.t_lo, t - census_.t_lo) / kPi;
  }

  /// Mean of relative_s over [u, v].
  double mean_relative_s(double u, double v) const {
    const double len = v - u;
    double count_integral = static_cast<double>(count_upto(u)) * len;
    auto it = std::upper_bound(census_.zeros.begin(), census_.zeros.end(), u,
                               [](double x, const ZeroOrdinate& z) { return x < z.t; });
    for (; it != census_.zeros.end() && it->t <= v; ++it) count_integral += weight(*it) * (v - it->t);
    const double theta_integral = theta_antiderivative(v) - theta_antiderivative(u) - theta_lo_ * len;
    return (count_integral - theta_integral / kPi) / len;
  }

 private:
  const ZeroCensus& census_;
  double theta_lo_;
  std::vector<std::int64_t> cumulative_;
};

double audit_window(const ZeroCensus& census) {
  return std::min((census.t_hi - census.t_lo) / 3.0, kAuditWindowSpacings * gram_length_scale(census.t_hi));
}

bool exact_lower_boundary(const ZeroCensus& census) { return census.t_lo < kFirstZeroOrdinate - 1e-6; }

/// Start of the first window whose mean S falls a unit below the bottom
/// baseline, or NaN when the profile shows no such drop.
double locate_deficit(const ZeroCensus& census) {
  const CountingProfile profile(census);
  const double w = std::min(kLocateWindowSpacings * gram_length_scale(census.t_hi), (census.t_hi - census.t_lo) / 2.0);
  for (double u = census.t_lo; u + w <= census.t_hi; u += w / 4.0) {
    const double s = census.s_lo + profile.mean_relative_s(u, u + w);
    if (s <= -1.0) return u;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void merge_into(std::vector<ZeroOrdinate>& zeros, const std::vector<ZeroOrdinate>& extra) {
  zeros.insert(zeros.end(), extra.begin(), extra.end());
  sort_and_dedupe(zeros);
}

void validate_range(double t_lo, double t_hi) {
  if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) throw ArgumentError("scan_zeros: non-finite bound");
  if (t_lo < 10.0) throw DomainError("scan_zeros: requires t_lo >= 10");
  if (!(t_hi > t_lo)) throw ArgumentError("scan_zeros: requires t_lo < t_hi");
}

}  // namespace

void audit_census(ZeroCensus& census) {
  const CountingProfile profile(census);
  const double w = audit_window(census);
  const double theta_span = theta_increment(census.t_lo, census.t_hi - census.t_lo) / kPi;
  const double top_mean = profile.mean_relative_s(census.t_hi - w, census.t_hi);
  census.s_lo = exact_lower_boundary(census) ? -theta_value(census.t_lo) / kPi - 1.0
                                             : -profile.mean_relative_s(census.t_lo, census.t_lo + w);
  census.s_hi = profile.relative_s(census.t_hi) - top_mean;
  census.expected_count = std::llround(theta_span + census.s_hi - census.s_lo);
  census.audit_passed = census.flagged_count() == 0 && census.expected_count == profile.total();
}

ZeroCensus scan_zeros(double t_lo, double t_hi, double initial_step) {
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) throw ArgumentError("scan_zeros: step must be > 0");
  ScanOptions options;
  options.step = initial_step;
  return scan_zeros(t_lo, t_hi, options);
}

ZeroCensus scan_zeros(double t_lo, double t_hi, const ScanOptions& options) {
  validate_range(t_lo, t_hi);
  if (options.step && !(*options.step > 0.0)) throw ArgumentError("scan_zeros: step must be > 0");
  // Gram intervals shrink with height, so the top one is the shortest.
  if (options.step && *options.step > 0.25 * gram_length_scale(t_hi)) {
    throw ArgumentError("scan_zeros: step exceeds a quarter of the shortest Gram interval");
  }
  if (!(options.tolerance > 0.0)) throw ArgumentError("scan_zeros: tolerance must be > 0");

  const Scanner scanner(t_lo, t_hi, options);
  PassResult pass = scanner.scan(0, scanner.piece_count(), 0);

  ZeroCensus census;
  census.t_lo = t_lo;
  census.t_hi = t_hi;
  census.zeros = std::move(pass.zeros);
  audit_census(census);

  // Halve the step on the first window where S drops below its baseline,
  // up to max_halvings times; an unresolved deficit becomes a gap record.
  int rounds = 0;
  while (!census.audit_passed && rounds++ < 64) {
    const std::int64_t deficit = census.expected_count - CountingProfile(census).total();
    if (deficit <= 0) break;
    const double start = locate_deficit(census);
    if (std::isnan(start)) break;
    const double w = kLocateWindowSpacings * gram_length_scale(t_hi);
    const auto [first, last] = scanner.pieces_covering(start - w, start + 2.0 * w);

    bool resolved = false;
    std::vector<DipCandidate> dips;
    for (int level = 1; level <= options.max_halvings; ++level) {
      PassResult finer = scanner.scan(first, last, level);
      const std::size_t before = census.zeros.size();
      merge_into(census.zeros, finer.zeros);
      dips = std::move(finer.dips);
      if (census.zeros.size() > before) {
        resolved = true;
        break;
      }
    }
    if (!resolved) {
      ZeroOrdinate gap;
      if (!dips.empty()) {
        const auto best = std::min_element(dips.begin(), dips.end(),
                                           [](const DipCandidate& a, const DipCandidate& b) { return a.depth < b.depth; });
        gap = ZeroOrdinate{best->t, best->lo, best->hi, best->hi - best->lo, ZeroFlag::near_tangency};
      } else {
        const double mid = start + 0.5 * w;
        gap = ZeroOrdinate{mid, start, start + w, w, ZeroFlag::near_tangency};
      }
      merge_into(census.zeros, {gap});
    }
    audit_census(census);
  }
  return census;
}

RefineResult refine_zero_counted(double a, double b, double tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ArgumentError("refine_zero: non-finite bracket");
  if (!(tol > 0.0)) throw ArgumentError("refine_zero: tol must be > 0");
  if (a > b) std::swap(a, b);
  double ya = z_value(a);
  double yb = z_value(b);
  if (sign_of(ya) == sign_of(yb)) {
    throw ArgumentError("refine_zero: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }

  // ITP (interpolate, truncate, project) with k1 = 0.2 / (b - a), k2 = 2, n0 = 1.
  const double eps = 0.5 * tol;
  const double k1 = 0.2 / (b - a);
  const int n_half = std::max(0, static_cast<int>(std::ceil(std::log2((b - a) / (2.0 * eps)))));
  const int n_max = n_half + 1;
  int iterations = 0;
  while (b - a > 2.0 * eps && iterations < n_max + 2) {
    const double mid = 0.5 * (a + b);
    const double r = eps * std::ldexp(1.0, n_max - iterations) - 0.5 * (b - a);
    const double delta = k1 * (b - a) * (b - a);
    const double x_f = (yb * a - ya * b) / (yb - ya);
    const double sigma = mid >= x_f ? 1.0 : -1.0;
    const double x_t = delta <= std::fabs(mid - x_f) ? x_f + sigma * delta : mid;
    double x = std::fabs(x_t - mid) <= r ? x_t : mid - sigma * r;
    if (!(x > a && x < b)) x = mid;
    if (!(x > a && x < b)) break;  // bracket is down to adjacent doubles
    const double y = z_value(x);
    ++iterations;
    if (sign_of(y) == sign_of(ya)) {
      a = x;
      ya = y;
    } else {
      b = x;
      yb = y;
    }
  }
  const double t = a + 0.5 * (b - a);
  // Adjacent doubles: keep t strictly inside by stepping the ends out one ulp.
  if (!(t > a)) a = std::nextafter(t, -INFINITY);
  if (!(t < b)) b = std::nextafter(t, INFINITY);
  return RefineResult{ZeroOrdinate{t, a, b, b - a, ZeroFlag::ok}, iterations};
}

ZeroOrdinate refine_zero(double a, double b, double tol) { return refine_zero_counted(a, b, tol).zero; }

std::int64_t count_estimate(double t) {
  if (!std::isfinite(t)) throw ArgumentError("count_estimate: non-finite ordinate");
  if (t < 10.0) throw DomainError("count_estimate: requires t >= 10");
  return std::llround(theta_value(t) / kPi + 1.0);
}

std::int64_t gram_interval_of(double t) { return last_gram_index_at_or_below(t - 1e-9); }

}  // namespace gramlab
