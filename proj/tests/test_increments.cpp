#include <doctest.h>

#include <cmath>

#include "fluct/error.hpp"
#include "fluct/increments.hpp"
#include "fluct/rational.hpp"
#include "fluct/rng.hpp"
#include "support.hpp"

using namespace fluct;
using testing::path;

TEST_SUITE("increments") {
  TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK(to_string(Rational(6, 8)) == "3/4");
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParameterError);
    CHECK_THROWS_AS(parse_rational("abc"), ParameterError);
  }

  TEST_CASE("point mass walk is deterministic") {
    const auto law = IncrementLaw::point_mass(Rational(1));
    CHECK(sample_walk(law, 3, 7).data() == testing::vec<double>({0, 1, 2, 3}));
  }

  TEST_CASE("same seed gives bit-identical paths") {
    for (const auto& law : {IncrementLaw::fair_coin(), IncrementLaw::gaussian(0, 1), IncrementLaw::symmetric_stable(1.0),
                            IncrementLaw::symmetric_stable(1.5)}) {
      const auto a = sample_walk(law, 500, 99);
      const auto b = sample_walk(law, 500, 99);
      CHECK(a == b);
      CHECK_FALSE(a == sample_walk(law, 500, 100));
    }
  }

  TEST_CASE("fair coin endpoint within the CLT band") {
    // mean of S_m / sqrt(m) over N seeds has sd 1/sqrt(N)
    const std::size_t m = 10000, N = 1000;
    double sum = 0.0;
    for (std::size_t s = 0; s < N; ++s) sum += sample_walk(IncrementLaw::fair_coin(), m, s)[m] / std::sqrt(double(m));
    CHECK(std::fabs(sum / N) <= 4.0 / std::sqrt(double(N)));
  }

  TEST_CASE("invalid laws") {
    CHECK_THROWS_AS(IncrementLaw::lattice({Rational(1), Rational(-1)}, {Rational(1, 2), Rational(1, 3)}), ParameterError);
    CHECK_THROWS_AS(IncrementLaw::lattice({Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)}), ParameterError);
    CHECK_THROWS_AS(IncrementLaw::lattice({Rational(1)}, {Rational(-1)}), ParameterError);
    CHECK_THROWS_AS(IncrementLaw::gaussian(0, 0), ParameterError);
    CHECK_THROWS_AS(IncrementLaw::symmetric_stable(2.5), ParameterError);
    CHECK_THROWS_AS(IncrementLaw::symmetric_stable(0.0), ParameterError);
    CHECK_THROWS_AS(sample_walk(IncrementLaw::fair_coin(), 0, 1), ParameterError);
  }

  TEST_CASE("law queries") {
    const auto coin = IncrementLaw::biased_coin(Rational(3, 4));
    CHECK(coin.mean() == doctest::Approx(0.5));
    CHECK(coin.variance() == doctest::Approx(0.75));
    CHECK_FALSE(coin.is_symmetric());
    CHECK(IncrementLaw::fair_coin().is_symmetric());
    CHECK(IncrementLaw::uniform_three().variance() == doctest::Approx(2.0 / 3.0));
    CHECK(std::isinf(IncrementLaw::symmetric_stable(1.5).variance()));
    CHECK(IncrementLaw::symmetric_stable(2.0, 1.0).variance() == doctest::Approx(2.0));
    CHECK_FALSE(IncrementLaw::point_mass(Rational(1)).has_negative_steps());
    CHECK(IncrementLaw::gaussian(0, 1).is_diffuse());
  }

  TEST_CASE("json round trip") {
    for (const auto& law : {IncrementLaw::biased_coin(Rational(3, 4)), IncrementLaw::gaussian(0.5, 2.0),
                            IncrementLaw::symmetric_stable(1.2, 0.5)}) {
      const auto back = IncrementLaw::from_json(law.to_json());
      CHECK(back.to_json() == law.to_json());
    }
    CHECK_THROWS(IncrementLaw::from_json(nlohmann::json{{"type", "nope"}}));
  }

  TEST_CASE("integer lattice") {
    const auto lat = IntegerLattice::from(IncrementLaw::lattice({Rational(1, 2), Rational(-1, 3)},
                                                                {Rational(1, 3), Rational(2, 3)})
                                              .as_lattice());
    CHECK(lat.unit == Rational(1, 6));
    CHECK(lat.min_step() == -2);
    CHECK(lat.max_step() == 3);
  }

  TEST_CASE("skeleton") {
    const auto p = path({0, 1, 2, 1, 0, -1, 0, 1, 2});
    CHECK(skeleton(p, 2).data() == testing::vec<double>({0, 2, 0, 0, 2}));
    CHECK(skeleton(p, 1) == p);
    CHECK(skeleton(skeleton(p, 2), 2) == skeleton(p, 4));
    CHECK_THROWS_AS(skeleton(p, 3), DimensionError);
  }

  TEST_CASE("killed path freeze") {
    const auto k = WalkPath::killed({0, 1, 2, 5, 7}, 3);
    CHECK(k.data() == testing::vec<double>({0, 1, 2, 2, 2}));
    CHECK(k.kill_index() == 3u);
    CHECK_THROWS_AS(WalkPath({0, 1, 2, 5}, 2), ParameterError);
    CHECK_THROWS_AS(WalkPath(std::vector<double>{1, 2}), ParameterError);
  }

  TEST_CASE("uniform_open stays inside (0,1)") {
    Rng rng = make_rng(5);
    for (int i = 0; i < 100000; ++i) {
      double u = uniform_open(rng);
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
    }
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  }
}
