#include "gramlab/special_functions.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "gramlab/error.hpp"

namespace gramlab {
namespace {

// Taylor coefficients in x = p - 1/2 of the Riemann-Siegel remainder
// functions C0..C4, where C0(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p)
// and C1..C4 are the usual combinations of its derivatives.
#include "rs_coefficients.inc"

// Gabcke's bound on the error left after the C4 correction, valid for t >= 200
// and used as an estimate below that.
constexpr double kRemainderAfterC4 = 0.017;

constexpr double kLogTwoPi = 1.83787706640934548356;

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw ArgumentError(std::string(what) + ": non-finite ordinate");
}

void require_above_two_pi(double t, const char* what) {
  require_finite(t, what);
  if (t <= kTwoPi) {
    throw DomainError(std::string(what) + ": requires t > 2pi, got " + std::to_string(t));
  }
}

struct MainSumTables {
  std::vector<double> log_n;
  std::vector<double> inv_sqrt_n;
};

// Covers t up to ~2.7e10; larger t fall back to on-the-fly evaluation.
constexpr std::size_t kTableSize = 1 << 16;

const MainSumTables& main_sum_tables() {
  static const MainSumTables tables = [] {
    MainSumTables tb;
    tb.log_n.resize(kTableSize + 1);
    tb.inv_sqrt_n.resize(kTableSize + 1);
    for (std::size_t n = 1; n <= kTableSize; ++n) {
      tb.log_n[n] = std::log(static_cast<double>(n));
      tb.inv_sqrt_n[n] = 1.0 / std::sqrt(static_cast<double>(n));
    }
    return tb;
  }();
  return tables;
}

double riemann_siegel(double t, std::int64_t& term_count) {
  const double a = std::sqrt(t / kTwoPi);
  const auto n_terms = static_cast<std::int64_t>(std::floor(a));
  term_count = n_terms;
  const double th = theta_value(t);

  double sum = 0.0;
  const auto& tb = main_sum_tables();
  const std::int64_t tabulated = std::min<std::int64_t>(n_terms, kTableSize);
  for (std::int64_t n = 1; n <= tabulated; ++n) {
    sum += tb.inv_sqrt_n[n] * std::cos(th - t * tb.log_n[n]);
  }
  for (std::int64_t n = tabulated + 1; n <= n_terms; ++n) {
    const double dn = static_cast<double>(n);
    sum += std::cos(th - t * std::log(dn)) / std::sqrt(dn);
  }
  sum *= 2.0;

  const double x = (a - static_cast<double>(n_terms)) - 0.5;
  const double w = 1.0 / a;
  const double rem =
      horner(kC0, x) +
      w * (horner(kC1, x) + w * (horner(kC2, x) + w * (horner(kC3, x) + w * horner(kC4, x))));
  const double sign = (n_terms % 2 == 1) ? 1.0 : -1.0;  // (-1)^(N-1)
  return sum + sign * rem / std::sqrt(a);
}

int oracle_terms(double t) { return static_cast<int>(std::fabs(t) / 2.0) + 50; }

}  // namespace

double theta_value(double t) {
  const double inv = 1.0 / t;
  const double inv3 = inv * inv * inv;
  return 0.5 * t * (std::log(t) - kLogTwoPi) - 0.5 * t - kPi / 8.0 + inv / 48.0 +
         7.0 * inv3 / 5760.0;
}

ThetaValue theta(double t) {
  require_above_two_pi(t, "theta");
  const double t5 = t * t * t * t * t;
  // Coefficients of the series are positive and shrink fast for t > 2pi;
  // twice the first omitted term covers the tail.
  return ThetaValue{t, theta_value(t), 2.0 * 31.0 / (80640.0 * t5)};
}

double theta_increment(double t, double h) {
  if (h == 0.0) return 0.0;
  const double u = t + h;
  const double main = 0.5 * h * (std::log(u) - kLogTwoPi) + 0.5 * t * std::log1p(h / t) - 0.5 * h;
  const double c1 = -h / (48.0 * t * u);
  const double c3 = -7.0 * h * (3.0 * t * t + 3.0 * t * h + h * h) / (5760.0 * t * t * t * u * u * u);
  return main + c1 + c3;
}

double theta_antiderivative(double t) {
  const double t2 = t * t;
  return 0.25 * t2 * (std::log(t) - kLogTwoPi) - 0.375 * t2 - kPi * t / 8.0 + std::log(t) / 48.0 -
         7.0 / (11520.0 * t2);
}

double theta_deriv(double t) {
  require_above_two_pi(t, "theta_deriv");
  const double t2 = t * t;
  return 0.5 * (std::log(t) - kLogTwoPi) - 1.0 / (48.0 * t2) - 7.0 / (1920.0 * t2 * t2);
}

std::complex<double> zeta_euler_maclaurin(double sigma, double t, int terms) {
  if (!std::isfinite(sigma) || !std::isfinite(t)) throw ArgumentError("zeta_euler_maclaurin: non-finite argument");
  if (terms < 10) throw ArgumentError("zeta_euler_maclaurin: terms must be >= 10");
  if (std::fabs(t) >= 1e6) throw DomainError("zeta_euler_maclaurin: |t| must be < 1e6");
  if (sigma == 1.0 && t == 0.0) throw DomainError("zeta_euler_maclaurin: pole at s = 1");

  const std::complex<double> s(sigma, t);
  const int big_n = terms;

  // n^{-s} = n^{-sigma} (cos(t log n) - i sin(t log n))
  auto power = [&](double n, double extra) {
    const double ln = std::log(n);
    const double mag = std::exp(-(sigma + extra) * ln);
    return std::complex<double>(mag * std::cos(t * ln), -mag * std::sin(t * ln));
  };

  std::complex<double> sum(0.0, 0.0);
  for (int n = big_n - 1; n >= 1; --n) sum += power(n, 0.0);  // small terms first

  const double dn = static_cast<double>(big_n);
  const std::complex<double> n_pow = power(dn, 0.0);  // N^{-s}
  sum += n_pow * dn / (s - 1.0);
  sum += 0.5 * n_pow;

  // T_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) N^{-s-2k+1}
  std::complex<double> rising = s;  // s (s+1) ... (s+2k-2) for k = 1
  std::complex<double> n_term = n_pow / dn;
  double prev_mag = INFINITY;
  for (int k = 1; k <= 60; ++k) {
    const double coeff = boost::math::bernoulli_b2n<double>(k) /
                         boost::math::factorial<double>(static_cast<unsigned>(2 * k));
    const std::complex<double> term = coeff * rising * n_term;
    const double mag = std::abs(term);
    if (mag > prev_mag) break;  // asymptotic tail has started to grow
    sum += term;
    if (mag < 1e-18 * std::abs(sum)) break;
    prev_mag = mag;
    rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    n_term /= dn * dn;
  }
  return sum;
}

double z_oracle(double t) {
  require_above_two_pi(t, "z_oracle");
  const std::complex<double> zeta = zeta_euler_maclaurin(0.5, t, oracle_terms(t));
  const double th = theta_value(t);
  return (std::complex<double>(std::cos(th), std::sin(th)) * zeta).real();
}

ZValue z(double t) {
  require_finite(t, "z");
  if (t < 10.0) throw DomainError("z: requires t >= 10 (use zeta_euler_maclaurin below)");
  ZValue out;
  out.t = t;
  out.term_count = static_cast<std::int64_t>(std::floor(std::sqrt(t / kTwoPi)));
  if (t < kRiemannSiegelMinT) {
    out.value = z_oracle(t);
    out.method = ZMethod::euler_maclaurin;
    out.remainder_estimate = 1e-12;
    return out;
  }
  std::int64_t count = 0;
  out.value = riemann_siegel(t, count);
  out.remainder_estimate = kRemainderAfterC4 * std::pow(t, -2.75);
  out.method = ZMethod::riemann_siegel;
  return out;
}

double z_value(double t) {
  if (t < kRiemannSiegelMinT) return z(t).value;
  std::int64_t count = 0;
  return riemann_siegel(t, count);
}

}  // namespace gramlab
