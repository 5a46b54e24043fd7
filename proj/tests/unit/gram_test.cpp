#include "doctest.h"

#include <cmath>

#include "gramlab/error.hpp"
#include "gramlab/gram.hpp"
#include "gramlab/special_functions.hpp"
#include "support/oracles.hpp"

using namespace gramlab;

TEST_CASE("Gram points against high-precision values") {
  // Low Gram points inherit the theta series truncation (~2e-10 in theta).
  CHECK(std::fabs(gram_point(0).t - oracle::kGram0) < 1e-9);
  CHECK(std::fabs(gram_point(1).t - oracle::kGram1) < 1e-9);
  CHECK(gram_point(16).t == doctest::Approx(oracle::kGram16).epsilon(1e-13));
  CHECK(gram_point(100).t == doctest::Approx(oracle::kGram100).epsilon(1e-13));
  CHECK(gram_point(1000).t == doctest::Approx(oracle::kGram1000).epsilon(1e-13));
  CHECK(gram_point(100000).t == doctest::Approx(oracle::kGram100000).epsilon(1e-13));
  CHECK_THROWS_AS(gram_point(-1), ArgumentError);
}

TEST_CASE("theta(g_n) = n pi and ordinates increase") {
  double prev = 0.0;
  for (std::int64_t n = 0; n <= 1000; ++n) {
    const GramPoint g = gram_point(n);
    REQUIRE(g.t > prev);
    REQUIRE(std::fabs(theta_value(g.t) - n * kPi) <= 1e-12 * std::max(1.0, n * kPi));
    REQUIRE(g.residual <= 1e-12 * std::max(1.0, n * kPi));
    prev = g.t;
  }
}

TEST_CASE("index lookups bracket t") {
  for (double t : {18.0, 100.0, 1234.5, 99999.0, 1e6}) {
    const std::int64_t lo = last_gram_index_at_or_below(t);
    const std::int64_t hi = first_gram_index_at_or_above(t);
    CAPTURE(t);
    CHECK(gram_point(lo).t <= t);
    CHECK(gram_point(lo + 1).t > t);
    CHECK(gram_point(hi).t >= t);
    CHECK(hi - lo == 1);
  }
  CHECK(last_gram_index_at_or_below(15.0) == -1);
  CHECK(first_gram_index_at_or_above(10.0) == 0);
}

TEST_CASE("Gram count on [T, 2T] matches the theta increment") {
  for (double T : {1e3, 1e4, 1e5}) {
    const GramRange r = gram_range(T, 2.0 * T);
    const double expected = (theta_value(2.0 * T) - theta_value(T)) / kPi;
    CAPTURE(T);
    CHECK(std::fabs(static_cast<double>(r.size()) - expected) <= 1.0);
    for (std::size_t i = 1; i < r.size(); ++i) REQUIRE(r.points[i].n == r.points[i - 1].n + 1);
  }
  const double T = 1e5;
  const double leading = T * std::log(T) / kTwoPi;
  CHECK(std::fabs(gram_range(T, 2 * T).size() / leading - 1.0) < 0.25);
}

TEST_CASE("gram_range round trip and degenerate ranges") {
  const GramRange r = gram_range(5000.0, 5200.0);
  for (const auto& p : r.points) REQUIRE(std::fabs(gram_point(p.n).t - p.t) < 1e-9);
  const double g5 = gram_point(5).t;
  CHECK(gram_range(g5 + 1e-6, g5 + 2e-6).empty());
  CHECK_THROWS_AS(gram_range(3.0, 20.0), DomainError);
}

TEST_CASE("interval lengths near T = 1e6") {
  const double T = 1e6;
  const IntervalLengthStats s = interval_length_stats(gram_range(T, T + 1e3));
  CHECK(s.max_len / s.min_len < 1.001);
  CHECK(s.max_len <= gram_length_scale(T) * (1.0 + 1e-6));

  const IntervalLengthStats s4 = interval_length_stats(gram_range(1e4, 1.1e4));
  CHECK(s4.max_len <= gram_length_scale(1e4) + 1e-6);
}

TEST_CASE("adjacent spacing matches pi / theta'") {
  const GramRange r = gram_range(1e5, 1e5 + 200.0);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double gap = r.points[i + 1].t - r.points[i].t;
    REQUIRE(std::fabs(gap * theta_deriv(r.points[i].t) / kPi - 1.0) < 1e-2);
  }
}

TEST_CASE("spacing law constant is finite and stable") {
  for (double T : {1e4, 1e5}) {
    const GramRange r = gram_range(T, 2.0 * T);
    const double span = r.points.back().t - r.points.front().t;
    const double steps = static_cast<double>(r.points.back().n - r.points.front().n);
    const double c = span * std::log(T) / steps;
    CAPTURE(T);
    CHECK(c <= kTwoPi * std::log(T) / std::log(T / kTwoPi));
    CHECK(c > 0.5 * kTwoPi);
  }
}
