#include <doctest.h>

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fluct/error.hpp"
#include "fluct/limit_laws.hpp"

using namespace fluct;

namespace {

// e^{x^2} erfc(x)
double erfcx(double x) {
  if (x < 20.0) return std::exp(x * x) * std::erfc(x);
  const double y = 1.0 / (2.0 * x * x);
  return (1.0 - y + 3.0 * y * y - 15.0 * y * y * y) / (x * std::sqrt(M_PI));
}

}  // namespace

TEST_SUITE("limit_laws") {
  TEST_CASE("closed-form values") {
    CHECK(kappa_bm(1, 0) == doctest::Approx(1.0));
    CHECK(levy_half_cdf(1.0) == doctest::Approx(std::erfc(0.5)));
    CHECK(levy_half_cdf(1.0) == doctest::Approx(0.4795).epsilon(1e-4));
    CHECK(rayleigh_cdf(std::sqrt(2.0 * std::log(2.0))) == doctest::Approx(0.5));
    CHECK(half_stable_tau_tail() == doctest::Approx(1.0 / std::sqrt(M_PI)));
    CHECK(half_stable_tau_tail() == doctest::Approx(0.5642).epsilon(1e-4));
    CHECK(delta_h_bm() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(pi_h_bm(0.5, 1.0) == 0.0);
  }

  TEST_CASE("kappa boundary values") {
    for (double x = 0.0; x <= 5.0; x += 0.25) {
      CHECK(kappa_bm(x, 0) == doctest::Approx(std::sqrt(x)));
      CHECK(kappa_bm(0, x) == doctest::Approx(x / std::sqrt(2.0)));
    }
  }

  TEST_CASE("kappa against the Fristedt integral") {
    // kappa(a,b) = exp(int_0^inf dt int_0^inf (e^{-t} - e^{-a t - b x}) P(B_t in dx) / t)
    boost::math::quadrature::exp_sinh<double> outer;
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {0.0, 0.5, 1.0}) {
        auto inner = [&](double t) {
          // int_0^inf e^{-b x} phi_t(x) dx = e^{b^2 t/2} erfc(b sqrt(t/2)) / 2
          const double term = 0.5 * std::exp(-t) - std::exp(-a * t) * 0.5 * erfcx(b * std::sqrt(t / 2.0));
          return term / t;
        };
        const double log_kappa = outer.integrate(inner, 1e-12);
        CHECK(kappa_bm(a, b) == doctest::Approx(std::exp(log_kappa)).epsilon(1e-7));
      }
  }

  TEST_CASE("levy cdf laplace transform") {
    // int_0^inf e^{-a s} dF(s) = e^{-sqrt a}
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double a : {0.5, 1.0, 2.0}) {
      const double lt = integrator.integrate([&](double s) { return std::exp(-a * s) * levy_half_density(s); }, 1e-12);
      CHECK(std::fabs(lt - std::exp(-std::sqrt(a))) <= 1e-6);
    }
  }

  TEST_CASE("levy cdf is a distribution function") {
    double prev = 0.0;
    for (double s = 1e-3; s < 1e6; s *= 1.3) {
      const double f = levy_half_cdf(s);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(levy_half_cdf(0.0) == 0.0);
    CHECK(levy_half_cdf(1e12) == doctest::Approx(1.0).epsilon(1e-5));
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    CHECK(gk.integrate(levy_half_density, 0.5, 3.0, 15, 1e-12) == doctest::Approx(levy_half_cdf(3.0) - levy_half_cdf(0.5)));
  }

  TEST_CASE("rayleigh density integrates to one") {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double total = integrator.integrate([](double x) { return x * std::exp(-x * x / 2.0); }, 1e-14);
    CHECK(std::fabs(total - 1.0) <= 1e-9);
  }

  TEST_CASE("tau tail matches the levy measure integral") {
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double c : {0.5, 1.0, 4.0}) {
      const double tail =
          integrator.integrate([](double s) { return std::pow(s, -1.5) / (2.0 * std::sqrt(M_PI)); }, c, std::numeric_limits<double>::infinity());
      CHECK(half_stable_tau_tail(c) == doctest::Approx(tail).epsilon(1e-9));
    }
  }

  TEST_CASE("half-stable interval ratio") {
    CHECK(half_stable_interval_ratio(0.5, 1, 1, 2) == doctest::Approx((std::sqrt(2.0) - 1.0) / (1.0 - std::sqrt(0.5))));
    CHECK(half_stable_interval_ratio(0.5, 1, 1, 2) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("h is linear") {
    CHECK(h_bm(0.0) == 0.0);
    CHECK(h_bm(3.0) == doctest::Approx(3.0 * std::sqrt(2.0)));
  }

  TEST_CASE("dispatcher and domains") {
    CHECK(reference("kappa_bm", {1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(reference("rayleigh_cdf", {1.0}) == doctest::Approx(rayleigh_cdf(1.0)));
    CHECK(reference("half_stable_tau_tail", {}) == doctest::Approx(half_stable_tau_tail()));
    CHECK_THROWS_AS(reference("nope", {}), DomainError);
    CHECK_THROWS_AS(levy_half_cdf(-1.0), DomainError);
    CHECK_THROWS_AS(kappa_bm(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(rayleigh_cdf(-0.1), DomainError);
    CHECK_THROWS_AS(reference("kappa_bm", {1.0}), DomainError);
  }
}
