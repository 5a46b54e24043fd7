#include "gramlab/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <omp.h>

#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"
#include "gramlab/special_functions.hpp"

namespace gramlab {
namespace {

// Gauss-Legendre on [-1, 1]; symmetric halves.
constexpr std::array<double, 4> kGL8Nodes = {0.1834346424956498049394761, 0.5255324099163289858177390,
                                             0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kGL8Weights = {0.3626837833783619829651504, 0.3137066458778872873379622,
                                               0.2223810344533744705443560, 0.1012285362903762591525314};
constexpr std::array<double, 2> kGL4Nodes = {0.3399810435848562648026658, 0.8611363115940525752239465};
constexpr std::array<double, 2> kGL4Weights = {0.6521451548625461426269361, 0.3478548451374538573730639};

constexpr std::size_t kPiecesPerBlock = 4096;

double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

struct PieceSums {
  double gl8 = 0.0;
  double err = 0.0;
};

PieceSums integrate_piece(const SFunction& sf, double lo, double hi, int jump, double h, int two_m) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  auto f = [&](double t) { return ipow(static_cast<double>(jump) - sf.phase_increment(t, h), two_m); };
  double gl8 = 0.0;
  for (std::size_t i = 0; i < kGL8Nodes.size(); ++i) {
    gl8 += kGL8Weights[i] * (f(mid - half * kGL8Nodes[i]) + f(mid + half * kGL8Nodes[i]));
  }
  double gl4 = 0.0;
  for (std::size_t i = 0; i < kGL4Nodes.size(); ++i) {
    gl4 += kGL4Weights[i] * (f(mid - half * kGL4Nodes[i]) + f(mid + half * kGL4Nodes[i]));
  }
  return {gl8 * half, std::fabs(gl8 - gl4) * half};
}

void check_moment_args(const SFunction& sf, double h, int m, double t_lo, double t_hi) {
  if (!std::isfinite(h) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) {
    throw ArgumentError("shifted_moment: non-finite argument");
  }
  if (!(t_lo < t_hi)) throw ArgumentError("shifted_moment: requires t_lo < t_hi");
  if (!(h > 0.0) || h > 0.5 * (t_hi - t_lo)) {
    throw ArgumentError(fmt::format("shifted_moment: h = {} outside (0, (t_hi - t_lo)/2]", h));
  }
  if (m < 1 || m > 8) throw ArgumentError("shifted_moment: m must be in [1, 8]");
  if (t_lo < sf.t_lo() || t_hi + h > sf.t_hi()) {
    throw ArgumentError(fmt::format("shifted_moment: [{}, {}] plus shift {} exceeds S domain [{}, {}]", t_lo, t_hi,
                                    h, sf.t_lo(), sf.t_hi()));
  }
}

}  // namespace

SFunction::SFunction(std::vector<double> zeros, double t_lo, double t_hi, double anchor, std::int64_t s_offset,
                     PhaseModel phase)
    : zeros_(std::move(zeros)), t_lo_(t_lo), t_hi_(t_hi), anchor_(anchor), s_offset_(s_offset), phase_(phase) {
  if (!(t_lo < t_hi)) throw ArgumentError("SFunction: requires t_lo < t_hi");
  if (!std::is_sorted(zeros_.begin(), zeros_.end())) throw ArgumentError("SFunction: zeros must be sorted");
  if (std::holds_alternative<RiemannSiegelPhase>(phase_) && t_lo <= kTwoPi) {
    throw DomainError("SFunction: Riemann-Siegel phase requires t_lo > 2pi");
  }
  anchor_count_ = count_upto(anchor_);
}

std::int64_t SFunction::count_upto(double t) const {
  return static_cast<std::int64_t>(std::upper_bound(zeros_.begin(), zeros_.end(), t) - zeros_.begin());
}

double SFunction::phase_increment(double t, double h) const {
  if (const auto* lin = std::get_if<LinearPhase>(&phase_)) return lin->rate * h;
  return theta_increment(t, h) / kPi;
}

double SFunction::operator()(double t) const {
  return static_cast<double>(s_offset_ + count_upto(t) - anchor_count_) - phase_increment(anchor_, t - anchor_);
}

std::int64_t infer_s_offset(const ZeroCensus& census) {
  const std::int64_t a = first_gram_index_at_or_above(census.t_lo);
  const double g = gram_point(a).t;
  if (g > census.t_hi) throw ArgumentError("infer_s_offset: census range holds no Gram point");
  std::int64_t count = 0;
  for (const auto& z : census.zeros) {
    if (z.t <= g && z.flag == ZeroFlag::ok) ++count;
  }
  const double relative = static_cast<double>(count) - theta_increment(census.t_lo, g - census.t_lo) / kPi;
  return std::llround(census.s_lo + relative);
}

SFunction build_s(const ZeroCensus& census, std::int64_t s_offset) {
  if (!census.audit_passed) {
    throw AuditError(fmt::format("build_s: census [{}, {}] failed its audit ({} found, {} expected)", census.t_lo,
                                 census.t_hi, census.ok_count(), census.expected_count));
  }
  const std::int64_t a = first_gram_index_at_or_above(census.t_lo);
  const double g = gram_point(a).t;
  if (g > census.t_hi) throw ArgumentError("build_s: census range holds no Gram point");
  std::vector<double> zeros;
  zeros.reserve(census.zeros.size());
  for (const auto& z : census.zeros) zeros.push_back(z.t);
  return SFunction(std::move(zeros), census.t_lo, census.t_hi, g, s_offset);
}

double eval_s(const SFunction& sf, double t) {
  if (!(t >= sf.t_lo() && t <= sf.t_hi())) {
    throw ArgumentError(fmt::format("eval_s: t = {} outside [{}, {}]", t, sf.t_lo(), sf.t_hi()));
  }
  return sf(t);
}

MomentEstimate shifted_moment(const SFunction& sf, double h, int m, double t_lo, double t_hi,
                              const MomentOptions& options) {
  check_moment_args(sf, h, m, t_lo, t_hi);
  const auto& zs = sf.zeros();
  auto first_above = [&](double t) { return std::upper_bound(zs.begin(), zs.end(), t); };

  // Breakpoints: zeros z in (t_lo, t_hi) where S(t) steps, and z - h where
  // S(t + h) steps. Walk both in order, tracking the step part of the
  // integrand J = #zeros in (t, t + h].
  auto own = first_above(t_lo);
  const auto own_end = std::lower_bound(zs.begin(), zs.end(), t_hi);
  auto shifted = first_above(t_lo + h);
  const auto shifted_end = std::lower_bound(zs.begin(), zs.end(), t_hi + h);
  const auto n_break = static_cast<std::size_t>((own_end - own) + (shifted_end - shifted));
  if (n_break > kMaxMomentBreakpoints) {
    throw ResourceError(fmt::format("shifted_moment: {} breakpoints exceed the limit", n_break));
  }

  std::vector<double> cuts;
  std::vector<int> jumps;
  cuts.reserve(n_break + 2);
  jumps.reserve(n_break + 1);
  cuts.push_back(t_lo);
  int jump = static_cast<int>(sf.count_upto(t_lo + h) - sf.count_upto(t_lo));
  while (own != own_end || shifted != shifted_end) {
    const bool take_own = shifted == shifted_end || (own != own_end && *own <= *shifted - h);
    const double at = take_own ? *own : *shifted - h;
    if (at > cuts.back()) {
      jumps.push_back(jump);
      cuts.push_back(at);
    }
    if (take_own) {
      --jump;
      ++own;
    } else {
      ++jump;
      ++shifted;
    }
  }
  jumps.push_back(jump);
  cuts.push_back(t_hi);

  const std::size_t n_pieces = jumps.size();
  const std::size_t n_blocks = (n_pieces + kPiecesPerBlock - 1) / kPiecesPerBlock;
  std::vector<PieceSums> blocks(n_blocks);
  const int two_m = 2 * m;
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(n_blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kPiecesPerBlock;
    const std::size_t hi = std::min(n_pieces, lo + kPiecesPerBlock);
    PieceSums acc;
    for (std::size_t i = lo; i < hi; ++i) {
      const PieceSums p = integrate_piece(sf, cuts[i], cuts[i + 1], jumps[i], h, two_m);
      acc.gl8 += p.gl8;
      acc.err += p.err;
    }
    blocks[static_cast<std::size_t>(b)] = acc;
  }

  MomentEstimate out;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.h = h;
  out.m = m;
  out.pieces = n_pieces;
  for (const auto& blk : blocks) {
    out.value += blk.gl8;
    out.quad_error += blk.err;
  }
  // Rounding in the per-piece sums.
  out.quad_error += 1e-15 * out.value * std::sqrt(static_cast<double>(n_pieces));
  out.leading_term = (t_hi - t_lo) * std::log(3.0 + h * std::log(t_lo)) / (kPi * kPi);
  return out;
}

double leading_term(double T, double h) {
  if (!(T > std::exp(1.0))) throw DomainError("leading_term: requires T > e");
  if (!(h >= 0.0)) throw ArgumentError("leading_term: requires h >= 0");
  return T * std::log(3.0 + h * std::log(T)) / (kPi * kPi);
}

double korolev_shift(double T) {
  if (!(T > kTwoPi)) throw DomainError("korolev_shift: requires T > 2pi");
  return kTwoPi / (3.0 * std::log(T / kTwoPi));
}

double korolev_window(double T) { return std::pow(T, 27.0 / 82.0 + 0.0005); }

MomentGrowthTable moment_growth_check(const SFunction& sf, double T, int m_max, std::optional<double> H,
                                      const MomentOptions& options) {
  if (m_max < 1 || m_max > 5) throw ArgumentError("moment_growth_check: m_max must be in [1, 5]");
  MomentGrowthTable table;
  table.T = T;
  table.h = korolev_shift(T);
  table.H = H.value_or(korolev_window(T));
  if (!(table.H > 2.0 * table.h)) throw ArgumentError("moment_growth_check: window shorter than twice the shift");
  if (T < sf.t_lo() || T + table.H + table.h > sf.t_hi()) {
    throw ArgumentError(fmt::format("moment_growth_check: S domain [{}, {}] does not cover [{}, {}]", sf.t_lo(),
                                    sf.t_hi(), T, T + table.H + table.h));
  }
  for (int m = 1; m <= m_max; ++m) {
    const MomentEstimate e = shifted_moment(sf, table.h, m, T, T + table.H, options);
    MomentGrowthRow row;
    row.m = m;
    row.value = e.value;
    row.quad_error = e.quad_error;
    row.root_ratio = std::pow(e.value, 1.0 / m) / (m * m);
    row.normalized_ratio = std::pow(e.value / table.H, 1.0 / m) / (m * m);
    table.rows.push_back(row);
  }
  return table;
}

double moment_reference_scale(const MomentEstimate& e) {
  if (e.m == 1) return e.leading_term;
  return (e.t_hi - e.t_lo) * std::pow(std::log(3.0 + e.h * std::log(e.t_lo)), e.m);
}

void write_moment_csv_header(std::ostream& out) { out << "T,H,h,m,value,quad_error,leading_term,ratio\n"; }

void write_moment_csv_row(std::ostream& out, const MomentEstimate& e) {
  out << fmt::format("{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", e.t_lo, e.t_hi - e.t_lo, e.h,
                     e.m, e.value, e.quad_error, e.leading_term, e.value / moment_reference_scale(e));
}

}  // namespace gramlab
