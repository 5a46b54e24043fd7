#pragma once

#include <complex>
#include <cstdint>

namespace gramlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

/// Ordinate of the first nontrivial zero; no zeros lie on 0 < t < this.
inline constexpr double kFirstZeroOrdinate = 14.134725141734693790;

/// Below this height Z(t) is evaluated through the Euler-Maclaurin zeta
/// instead of the Riemann-Siegel sum.
inline constexpr double kRiemannSiegelMinT = 100.0;

struct ThetaValue {
  double t = 0.0;
  double value = 0.0;
  double truncation_bound = 0.0;
};

enum class ZMethod : std::uint8_t { riemann_siegel, euler_maclaurin };

struct ZValue {
  double t = 0.0;
  double value = 0.0;
  /// Riemann-Siegel main-sum length floor(sqrt(t / 2pi)).
  std::int64_t term_count = 0;
  double remainder_estimate = 0.0;
  ZMethod method = ZMethod::riemann_siegel;
};

/// Riemann-Siegel theta through the 7/(5760 t^3) term. Requires t > 2pi.
ThetaValue theta(double t);

/// Same series as theta() without the bookkeeping; the hot-loop entry point.
double theta_value(double t);

/// theta(t + h) - theta(t) without cancellation; h may be tiny or zero.
double theta_increment(double t, double h);

/// Antiderivative of the theta series (any constant). Requires t > 0.
double theta_antiderivative(double t);

/// Derivative of the theta series. Requires t > 2pi.
double theta_deriv(double t);

/// Riemann-Siegel Z(t) for t >= 10. Uses the main sum plus remainder
/// corrections C0..C4 for t >= kRiemannSiegelMinT, Euler-Maclaurin below.
ZValue z(double t);

/// Plain Z(t) value; same dispatch as z().
double z_value(double t);

/// zeta(sigma + i t) by Euler-Maclaurin summation with `terms` leading terms.
/// Bernoulli corrections are added until they stop contributing.
std::complex<double> zeta_euler_maclaurin(double sigma, double t, int terms);

/// Z(t) computed as Re(exp(i theta(t)) zeta(1/2 + i t)) with an
/// Euler-Maclaurin term count sized for t. Independent of the
/// Riemann-Siegel path; intended for validation.
double z_oracle(double t);

}  // namespace gramlab
