#include <doctest.h>

#include <cmath>

#include "fluct/error.hpp"
#include "fluct/scaling.hpp"

using namespace fluct;

namespace {

// P(S_k > 0) for the fair coin as a binomial tail.
double coin_positive(std::size_t k) {
  long double s = 0.0L;
  for (std::size_t j = k / 2 + 1; j <= k; ++j)
    s += std::exp(std::lgamma(k + 1.0L) - std::lgamma(j + 1.0L) - std::lgamma(k - j + 1.0L) - k * std::log(2.0L));
  return static_cast<double>(s);
}

}  // namespace

TEST_SUITE("scaling") {
  TEST_CASE("zero positivity gives a_n = 1") {
    CHECK(norming_constant([](std::size_t) { return 0.0; }, 1) == 1.0);
    CHECK(norming_constant([](std::size_t) { return 0.0; }, 1000) == 1.0);
  }

  TEST_CASE("half positivity at n = 1") {
    const double expected = 1.0 / std::sqrt(1.0 - std::exp(-1.0));
    CHECK(norming_constant(symmetric_diffuse_rule(), 1) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(1.2578).epsilon(1e-4));
  }

  TEST_CASE("half positivity for large n matches the logarithmic series") {
    // sum_k e^{-k/n}/k = -ln(1 - e^{-1/n})
    for (std::size_t n : {10u, 100u, 4096u}) {
      const double expected = std::pow(1.0 - std::exp(-1.0 / n), -0.5);
      CHECK(norming_constant(symmetric_diffuse_rule(), n) == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  TEST_CASE("fair coin exact positivity") {
    const auto seq = positivity_probabilities(IncrementLaw::fair_coin(), 4, Mode::exact);
    CHECK(seq.exact_at(1) == Rational(1, 2));
    CHECK(seq.exact_at(2) == Rational(1, 4));
    CHECK(seq.exact_at(3) == Rational(1, 2));
    CHECK(seq.exact_at(4) == Rational(5, 16));
  }

  TEST_CASE("fair coin norming constant against a binomial oracle") {
    for (std::size_t n : {1u, 5u, 20u}) {
      const std::size_t K = norming_truncation(n, 1e-12);
      const auto seq = positivity_probabilities(IncrementLaw::fair_coin(), K, Mode::exact);
      double s = 0.0;
      for (std::size_t k = 1; k <= K + 200; ++k) s += std::exp(-double(k) / n) * coin_positive(k) / k;
      CHECK(norming_constant(seq, n, 1e-12) == doctest::Approx(std::exp(s)).epsilon(1e-9));
      CHECK(norming_constant(fair_coin_rule(), n, 1e-12) == doctest::Approx(std::exp(s)).epsilon(1e-9));
    }
  }

  TEST_CASE("fair coin rule matches exact probabilities") {
    const auto seq = positivity_probabilities(IncrementLaw::fair_coin(), 60, Mode::exact);
    const auto rule = fair_coin_rule();
    for (std::size_t k = 1; k <= 60; ++k) CHECK(rule(k) == doctest::Approx(seq.at(k)).epsilon(1e-12));
  }

  TEST_CASE("point mass is always positive") {
    const auto seq = positivity_probabilities(IncrementLaw::point_mass(Rational(1)), 10, Mode::exact);
    for (std::size_t k = 1; k <= 10; ++k) CHECK(seq.exact_at(k) == Rational(1));
    const auto neg = positivity_probabilities(IncrementLaw::point_mass(Rational(1)), 10, Mode::exact, {}, Sign::negative);
    for (std::size_t k = 1; k <= 10; ++k) CHECK(neg.exact_at(k) == Rational(0));
  }

  TEST_CASE("symmetric diffuse law estimated near one half") {
    const auto seq = positivity_probabilities(IncrementLaw::gaussian(0, 1), 8, Mode::montecarlo, {40000, 3});
    CHECK(seq.source() == PositivitySequence::Source::estimated);
    for (std::size_t k = 1; k <= 8; ++k) CHECK(std::fabs(seq.at(k) - 0.5) <= 5.0 * seq.std_error(k));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(positivity_probabilities(IncrementLaw::gaussian(0, 1), 5, Mode::exact), UnsupportedModeError);
    const auto seq = positivity_probabilities(IncrementLaw::fair_coin(), 5, Mode::exact);
    CHECK_THROWS_AS(norming_constant(seq, 100), InsufficientDataError);
    CHECK_THROWS_AS(fristedt_residual(IncrementLaw::fair_coin(), 0.0, 0.0), UnboundedTailError);
    CHECK_THROWS_AS(fristedt_residual(IncrementLaw::gaussian(0, 1), 1.0, 0.0), UnsupportedModeError);
  }

  TEST_CASE("truncation bound") {
    for (std::size_t n : {1u, 10u, 1000u}) {
      const std::size_t K = norming_truncation(n, 1e-8);
      CHECK(n * std::exp(-double(K) / n) / K <= 1e-8);
      CHECK(n * std::exp(-double(K - 1) / n) / (K - 1) > 1e-8);
    }
  }

  TEST_CASE("fristedt point mass") {
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {0.0, 0.5}) {
        const auto r = fristedt_residual(IncrementLaw::point_mass(Rational(1)), a, b);
        const double exact = 1.0 - std::exp(-a - b);
        CHECK(r.lhs == doctest::Approx(exact).epsilon(1e-12));
        CHECK(r.rhs == doctest::Approx(exact).epsilon(1e-12));
      }
  }

  TEST_CASE("fristedt fair coin spot value") {
    // E s^{T_1} = (1 - sqrt(1 - s^2)) / s
    const double s = std::exp(-1.0);
    const double expected = 1.0 - (1.0 - std::sqrt(1.0 - s * s)) / s;
    const auto r = fristedt_residual(IncrementLaw::fair_coin(), 1.0, 0.0, 60);
    CHECK(r.lhs == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.8094).epsilon(1e-4));
    CHECK(r.within_bound());
    CHECK(r.tail_bound <= 1e-6);
  }

  TEST_CASE("fristedt large alpha") {
    const auto r = fristedt_residual(IncrementLaw::uniform_three(), 20.0, 0.5);
    CHECK(std::fabs(r.lhs - 1.0) <= std::exp(-20.0));
    CHECK(std::fabs(r.rhs - 1.0) <= std::exp(-20.0));
  }

  TEST_CASE("fristedt report json") {
    const auto j = fristedt_residual(IncrementLaw::fair_coin(), 1.0, 0.5).to_json();
    for (const char* key : {"alpha", "beta", "lhs", "rhs", "residual", "tail_bound"}) CHECK(j.contains(key));
  }
}
