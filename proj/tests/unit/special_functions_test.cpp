#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"
#include "gramlab/special_functions.hpp"
#include "support/oracles.hpp"

using namespace gramlab;

TEST_CASE("theta matches high-precision values") {
  CHECK(theta(100.0).value == doctest::Approx(oracle::kTheta100).epsilon(1e-13));
  CHECK(theta(1e4).value == doctest::Approx(oracle::kTheta10000).epsilon(1e-14));
  CHECK(theta(1000.5).value == doctest::Approx(oracle::kTheta1000_5).epsilon(1e-14));

  const ThetaValue v = theta(kTwoPi * std::exp(1.0));
  CHECK(v.truncation_bound < 1e-4);
  CHECK(std::fabs(v.value - oracle::kThetaTwoPiE) <= v.truncation_bound);
}

TEST_CASE("theta at the first Gram points") {
  // The series is short of the true theta by about 31/(80640 t^5) here.
  const ThetaValue t1 = theta(oracle::kGram1);
  const ThetaValue t0 = theta(oracle::kGram0);
  CHECK(std::fabs(t1.value - kPi) <= t1.truncation_bound);
  CHECK(std::fabs(t0.value) <= t0.truncation_bound);
}

TEST_CASE("theta domain") {
  CHECK_THROWS_AS(theta(kTwoPi), DomainError);
  CHECK_THROWS_AS(theta(1.0), DomainError);
  CHECK_THROWS_AS(theta_deriv(6.0), DomainError);
}

TEST_CASE("theta is strictly increasing above 7") {
  double prev = theta_value(7.0);
  for (double t = 7.01; t < 2000.0; t += 0.01) {
    const double cur = theta_value(t);
    REQUIRE(cur > prev);
    prev = cur;
  }
}

TEST_CASE("theta_increment agrees with differences and is exact at zero") {
  CHECK(theta_increment(500.0, 0.0) == 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tdist(20.0, 1e6);
  std::uniform_real_distribution<double> hdist(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double t = tdist(rng);
    const double h = hdist(rng);
    const double diff = theta_value(t + h) - theta_value(t);
    // The plain difference loses a couple of ulps of theta(t).
    CHECK(std::fabs(theta_increment(t, h) - diff) <= 1e-12 + 8e-16 * theta_value(t));
  }
  // Small shifts: first-order Taylor is the oracle.
  CHECK(theta_increment(1e5, 1e-9) == doctest::Approx(1e-9 * theta_deriv(1e5)).epsilon(1e-8));
}

TEST_CASE("theta_deriv") {
  const double at = theta_deriv(kTwoPi * std::exp(1.0));
  CHECK(at == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(at < 0.5);
  for (double t : {10.0, 100.0, 1e6}) CHECK(theta_deriv(t) > 0.0);
  const double t = 1e4;
  const double eps = 1e-3;
  const double fd = (theta_value(t + eps) - theta_value(t - eps)) / (2.0 * eps);
  CHECK(theta_deriv(t) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("theta antiderivative differentiates back to theta") {
  for (double t : {20.0, 300.0, 5e4, 1e6}) {
    const double eps = 1e-3 * t;
    const double fd = (theta_antiderivative(t + eps) - theta_antiderivative(t - eps)) / (2.0 * eps);
    CHECK(fd == doctest::Approx(theta_value(t)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("z against high-precision values") {
  for (const auto& [t, expected] : oracle::kZ) {
    CAPTURE(t);
    CHECK(std::fabs(z_value(t) - expected) < 1e-6);
  }
}

TEST_CASE("z near the first zero and at g0") {
  CHECK(std::fabs(z_value(oracle::kZero1)) < 1e-6);
  CHECK(z_value(oracle::kGram0) > 0.0);
  CHECK_THROWS_AS(z(9.99), DomainError);
}

TEST_CASE("z agrees with the Euler-Maclaurin oracle on [50, 500]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(50.0, 500.0);
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng);
    CAPTURE(t);
    CHECK(std::fabs(z_value(t) - z_oracle(t)) < 1e-6);
  }
}

TEST_CASE("reflection consistency on [20, 1e4]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(20.0, 1e4);
  for (int i = 0; i < 200; ++i) {
    const double t = dist(rng);
    const ZValue zv = z(t);
    const std::complex<double> zeta = zeta_euler_maclaurin(0.5, t, static_cast<int>(t / 2.0) + 50);
    const std::complex<double> rotated = std::polar(1.0, theta_value(t)) * zeta;
    CAPTURE(t);
    CHECK(std::fabs(rotated.imag()) < 1e-6);
    CHECK(std::fabs(rotated.real() - zv.value) < std::max(1e-6, zv.remainder_estimate));
  }
}

TEST_CASE("zeta is real with sign (-1)^n at Gram points") {
  for (std::int64_t n = 0; n < 500; n += 7) {
    const double g = gram_point(n).t;
    const std::complex<double> zeta = zeta_euler_maclaurin(0.5, g, static_cast<int>(g / 2.0) + 50);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    CAPTURE(n);
    CHECK(std::fabs(zeta.imag()) < 1e-6);
    CHECK(std::fabs(zeta.real() - sign * z_value(g)) < 1e-6);
  }
}

TEST_CASE("term count steps at 2 pi k^2") {
  for (int k = 4; k < 60; ++k) {
    const double edge = kTwoPi * k * k;
    if (edge < kRiemannSiegelMinT + 1.0) continue;
    CAPTURE(k);
    CHECK(z(edge * (1.0 - 1e-12)).term_count == k - 1);
    CHECK(z(edge * (1.0 + 1e-12)).term_count == k);
  }
}

TEST_CASE("Euler-Maclaurin zeta at known points") {
  CHECK(zeta_euler_maclaurin(2.0, 0.0, 50).real() == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-9));
  CHECK(zeta_euler_maclaurin(0.0, 0.0, 50).real() == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(std::abs(zeta_euler_maclaurin(0.5, 14.134725, 60)) < 1e-5);
  CHECK_THROWS_AS(zeta_euler_maclaurin(0.5, 20.0, 9), ArgumentError);
  CHECK_THROWS_AS(zeta_euler_maclaurin(0.5, 1e6, 100), DomainError);
  CHECK_THROWS_AS(zeta_euler_maclaurin(1.0, 0.0, 50), DomainError);
}
