#include <doctest.h>

#include <cmath>
#include <random>

#include "fluct/error.hpp"
#include "fluct/rng.hpp"
#include "fluct/stats.hpp"

using namespace fluct;

namespace {

double uniform_cdf(double x) { return x <= 0 ? 0.0 : (x >= 1 ? 1.0 : x); }

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("ks examples") {
    const Sample a({0.3, 0.1, 0.7});
    CHECK(ks_statistic(a, a).statistic == 0.0);
    CHECK(ks_statistic(Sample({0, 1}), Sample({5, 6})).statistic == 1.0);
    CHECK(ks_statistic(Sample({0, 1}), uniform_cdf).statistic == doctest::Approx(0.5));
  }

  TEST_CASE("ks against a hand-computed step sup") {
    // ECDF of {0.2, 0.5, 0.9}: largest gap is 0.9 - 2/3 just below 0.9
    CHECK(ks_statistic(Sample({0.2, 0.5, 0.9}), uniform_cdf).statistic == doctest::Approx(0.9 - 2.0 / 3.0));
  }

  TEST_CASE("ks against a reference with atoms") {
    auto coin = [](double x) { return x < 0 ? 0.0 : (x < 1 ? 0.5 : 1.0); };
    CHECK(ks_statistic(Sample({0, 1}), coin).statistic == doctest::Approx(0.0));
    CHECK(ks_statistic(Sample({0, 0, 0, 1}), coin).statistic == doctest::Approx(0.25));
  }

  TEST_CASE("dkw epsilon") {
    CHECK(dkw_epsilon(100, 0.01) == doctest::Approx(std::sqrt(std::log(200.0) / 200.0)));
    const auto r = ks_statistic(Sample({1, 2, 3, 4}), Sample({1, 2}));
    CHECK(r.effective_n == doctest::Approx(8.0 / 6.0));
    CHECK(r.dkw_epsilon == doctest::Approx(dkw_epsilon(8.0 / 6.0, 0.01)));
  }

  TEST_CASE("weighted samples") {
    const Sample w({0.0, 1.0}, {3.0, 1.0});
    CHECK(w.effective_size() == doctest::Approx(16.0 / 10.0));
    const Ecdf F(w);
    CHECK(F(0.0) == doctest::Approx(0.75));
    CHECK(F.left(0.0) == 0.0);
    CHECK(F(1.0) == 1.0);
    CHECK(ks_statistic(w, Sample({0, 0, 0, 1})).statistic == doctest::Approx(0.0));
  }

  TEST_CASE("invalid samples") {
    CHECK_THROWS_AS(ks_statistic(Sample(std::vector<double>{}), Sample({1})), InputError);
    CHECK_THROWS_AS(Sample({1, 2}, {1}).validate(), InputError);
    CHECK_THROWS_AS(Sample({1, 2}, {1, -1}).validate(), InputError);
    CHECK_THROWS_AS(wasserstein1(Sample(std::vector<double>{}), Sample({1})), InputError);
  }

  TEST_CASE("wasserstein") {
    CHECK(wasserstein1(Sample({1, 2}), Sample({2, 1})) == 0.0);
    CHECK(wasserstein1(Sample({0}), Sample({1})) == doctest::Approx(1.0));
    CHECK(wasserstein1(Sample({0, 0}), Sample({0, 2})) == doctest::Approx(1.0));
    CHECK(wasserstein1(Sample({0}), Sample({0, 3}, {1, 1})) == doctest::Approx(1.5));
  }

  TEST_CASE("trend test") {
    auto t = trend_test({{1, 4}, {2, 2}, {3, 1}});
    CHECK(t.violations == 0);
    CHECK(t.ratio == doctest::Approx(0.25));
    t = trend_test({{1, 1}, {2, 2}, {3, 3}});
    CHECK(t.violations == 2);
    CHECK(t.ratio == doctest::Approx(3.0));
    t = trend_test({{1, 4}, {2, 5}, {3, 1}});
    CHECK(t.violations == 1);
    CHECK(t.ratio == doctest::Approx(0.25));
    CHECK_THROWS_AS(trend_test({{1, 1}, {2, 1}}), InputError);
  }

  TEST_CASE("ecdf") {
    const Ecdf F(Sample({2, 1, 2, 3}));
    CHECK(F(0.5) == 0.0);
    CHECK(F(1.0) == 0.25);
    CHECK(F(2.0) == 0.75);
    CHECK(F.left(2.0) == 0.25);
    CHECK(F(3.0) == 1.0);
    CHECK(F.points() == std::vector<double>{1, 2, 3});
    CHECK(F.to_csv().rfind("x,F", 0) == 0);
  }

  TEST_CASE("moments and median") {
    const auto m = moments({1, 2, 3, 4});
    CHECK(m.mean == 2.5);
    CHECK(m.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
  }

  TEST_CASE("dkw coverage for uniform samples") {
    // exceedances at delta = 0.01 over 1000 repetitions: Bin(1000, <=0.01)
    Rng rng = make_rng(77);
    int exceed = 0;
    for (int r = 0; r < 1000; ++r) {
      std::vector<double> v(200);
      for (auto& x : v) x = uniform_open(rng);
      const auto k = ks_statistic(Sample(v), uniform_cdf);
      exceed += k.statistic > k.dkw_epsilon;
    }
    // mean <= 10, sd ~ 3.1
    CHECK(exceed <= 25);
  }
}
