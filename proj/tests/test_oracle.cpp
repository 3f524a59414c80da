#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fluct/certify.hpp"
#include "fluct/error.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/oracle.hpp"

using namespace fluct;

TEST_SUITE("oracle") {
  TEST_CASE("enumerate small laws") {
    const auto d = enumerate(IncrementLaw::fair_coin(), 2);
    CHECK(d.size() == 4);
    for (const auto& [o, p] : d.atoms()) CHECK(p == Rational(1, 4));
    const auto one = enumerate(IncrementLaw::point_mass(Rational(1)), 5);
    CHECK(one.size() == 1);
    CHECK(one.is_probability());

    const auto b = enumerate(IncrementLaw::biased_coin(Rational(3, 4)), 2);
    std::multiset<Rational> masses;
    for (const auto& [o, p] : b.atoms()) masses.insert(p);
    CHECK(masses == std::multiset<Rational>{Rational(1, 16), Rational(3, 16), Rational(3, 16), Rational(9, 16)});
  }

  TEST_CASE("budget") {
    CHECK_THROWS_AS(enumerate(IncrementLaw::uniform_three(), 30), BudgetError);
    CHECK_NOTHROW(enumerate(IncrementLaw::uniform_three(), 4, 81));
    CHECK_THROWS_AS(enumerate(IncrementLaw::uniform_three(), 4, 80), BudgetError);
  }

  TEST_CASE("local time at step two") {
    auto lt = [](LocalTimeVariant v) {
      return path_functional_distribution(IncrementLaw::fair_coin(), 2, [v](const WalkPath& p) -> std::optional<Outcome> {
        const auto c = v == LocalTimeVariant::verbatim ? local_time_verbatim(p) : local_time_strict(p);
        return Outcome{c.at(2)};
      });
    };
    const auto verbatim = lt(LocalTimeVariant::verbatim);
    const auto strict = lt(LocalTimeVariant::strict);
    CHECK(verbatim.prob({0}) == Rational(1, 4));
    CHECK(verbatim.prob({1}) == Rational(1, 2));
    CHECK(verbatim.prob({2}) == Rational(1, 4));
    CHECK(strict.prob({0}) == Rational(1, 2));
    CHECK(strict.prob({1}) == Rational(1, 4));
    CHECK(strict.prob({2}) == Rational(1, 4));
    CHECK(total_variation(verbatim, strict) == Rational(1, 4));
    CHECK(total_variation(verbatim, verbatim) == 0);
  }

  TEST_CASE("pushforward") {
    const auto d = enumerate(IncrementLaw::uniform_three(), 3);
    const auto c = functional_distribution(d, [](const Outcome&) { return Outcome{7}; });
    CHECK(c.size() == 1);
    CHECK(c.prob({7}) == 1);
    const auto sum = functional_distribution(d, [](const Outcome& o) { return Outcome{o[0] + o[1] + o[2]}; });
    CHECK(sum.is_probability());
    CHECK(sum.prob({3}) == Rational(7, 27));
  }

  TEST_CASE("json export") {
    const auto d = enumerate(IncrementLaw::biased_coin(Rational(3, 4)), 1);
    const auto j = d.to_json();
    CHECK(j.at("1") == "3/4");
    CHECK(j.at("0") == "1/4");
  }

  TEST_CASE("restricted laws are sub-probabilities") {
    const auto d = path_functional_distribution(IncrementLaw::fair_coin(), 4, [](const WalkPath& p) -> std::optional<Outcome> {
      if (p[1] < 0) return std::nullopt;
      return encode_path(p);
    });
    CHECK(d.total_mass() == Rational(1, 2));
    CHECK_FALSE(d.is_probability());
  }

  TEST_CASE("oracle frequencies against sampled walks") {
    // empirical law of S_6 over 20000 walks inside the 0.99 DKW band
    const auto law = IncrementLaw::biased_coin(Rational(3, 4));
    const auto exact = path_functional_distribution(law, 6, [](const WalkPath& p) -> std::optional<Outcome> {
      return Outcome{std::lround(p[6])};
    });
    const int N = 20000;
    std::map<long, int> counts;
    for (int s = 0; s < N; ++s) ++counts[std::lround(sample_walk(law, 6, s)[6])];
    double F = 0.0, Fhat = 0.0, d = 0.0;
    for (const auto& [o, p] : exact.atoms()) {
      F += to_double(p);
      Fhat += counts[o[0]] / double(N);
      d = std::max(d, std::fabs(F - Fhat));
    }
    CHECK(d <= std::sqrt(std::log(2.0 / 0.01) / (2.0 * N)));
  }

  TEST_CASE("certificates") {
    const auto laws = certification_laws();
    CHECK(certify_fristedt(laws, {0.5, 1, 2}, {0, 0.5, 1}).pass);
    CHECK(certify_time_reversal(laws, 6, {LadderVariant::strict, LadderVariant::weak}).pass);
    CHECK(certify_idloc(10, 200, 200, 3).pass);
    CHECK(certify_meander_ac(laws, 8).pass);
    CHECK(certify_h_kernel(laws, 8).pass);
  }
}
