#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fluct/error.hpp"
#include "fluct/experiments.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/limit_laws.hpp"

using namespace fluct;

namespace {

ExperimentConfig small(const std::string& id) {
  auto c = ExperimentConfig::defaults(id);
  c.trials = 200;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("config validation") {
    auto c = ExperimentConfig::defaults("theorem1");
    CHECK_NOTHROW(c.validate());
    c.n_grid = {64, 32};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig::defaults("theorem1");
    c.trials = 99;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::defaults("nope"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"n_grid", {1, 2}}}), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"id", "theorem1"}, {"law", {{"type", "bogus"}}}}), ConfigError);
  }

  TEST_CASE("config json merges over defaults") {
    const auto c = ExperimentConfig::from_json({{"id", "lemma1"}, {"trials", 500}, {"params", {{"a", 0.25}}}});
    CHECK(c.trials == 500);
    CHECK(c.param("a") == 0.25);
    CHECK(c.param("b") == 1.0);
    CHECK(ExperimentConfig::from_json(c.to_json()).to_json() == c.to_json());
  }

  TEST_CASE("draw ladder") {
    const StepSampler up(IncrementLaw::point_mass(Rational(1)));
    Rng rng = make_rng(1);
    auto d = draw_ladder(up, 5, 100, rng);
    CHECK(d.epoch == 5);
    CHECK(d.height == 5.0);
    CHECK_FALSE(d.censored);
    d = draw_ladder(up, 5, 100, rng, true);
    CHECK(d.censored);
    CHECK(draw_ladder(up, 0, 100, rng).epoch == 0);
  }

  TEST_CASE("draw ladder matches the path recursion") {
    const auto law = IncrementLaw::gaussian(0, 1);
    const StepSampler s(law);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng a = make_rng(seed), b = make_rng(seed);
      const auto d = draw_ladder(s, 3, 5000, a);
      const auto p = sample_walk(s, 5000, b);
      const auto l = ladder_sequence(p);
      if (l.count() >= 3) {
        CHECK(d.epoch == l.epochs[3]);
        CHECK(d.height == l.heights[3]);
      } else {
        CHECK(d.censored);
      }
    }
  }

  TEST_CASE("skeleton discrepancy") {
    const auto base = sample_walk(IncrementLaw::gaussian(0, 1), 1024, 9);
    CHECK(skeleton_discrepancy(base, 1024, 7.0, 1024, 7.0) == 0.0);
    CHECK_THROWS_AS(skeleton_discrepancy(base, 3, 1, 6, 1), DimensionError);
    // monotone walk: Lambda_j = j on every skeleton
    const auto up = sample_walk(IncrementLaw::point_mass(Rational(1)), 64, 1);
    const double a = 3.0, b = 5.0;
    double expected = 0.0;
    for (std::size_t j = 0; j <= 16; ++j) expected = std::max(expected, std::fabs(double(j / 2) / a - double(j) / b));
    CHECK(skeleton_discrepancy(up, 8, a, 16, b) == doctest::Approx(expected));
  }

  TEST_CASE("exact meander endpoint law") {
    const auto law = IncrementLaw::fair_coin();
    const auto one = meander_endpoint_law(law, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == 1.0);
    CHECK(one[0].second == 1.0);
    const auto two = meander_endpoint_law(law, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].second == doctest::Approx(0.5));
    CHECK(two[1].first == doctest::Approx(2.0 / std::sqrt(2.0)));
    double total = 0.0;
    for (const auto& [x, p] : meander_endpoint_law(law, 300)) total += p;
    CHECK(total == doctest::Approx(1.0));
    CHECK_THROWS_AS(meander_endpoint_law(IncrementLaw::gaussian(0, 1), 4), UnsupportedModeError);
  }

  TEST_CASE("hypothesis guards") {
    for (const char* id : {"theorem1", "localtime", "lemma1", "meander", "harmonic"}) {
      auto c = small(id);
      c.law = IncrementLaw::point_mass(Rational(1)).to_json();
      const auto r = run_experiment(c);
      CHECK(r.hypothesis_violation);
      CHECK(r.exit_code() == 2);
      CHECK_FALSE(r.diagnostic.empty());
    }
    auto c = small("theorem1");
    c.law = IncrementLaw::symmetric_stable(1.0).to_json();
    CHECK(run_experiment(c).exit_code() == 2);
  }

  TEST_CASE("theorem1 at t = 0 is degenerate at zero") {
    auto c = small("theorem1");
    c.n_grid = {16, 32};
    c.params["t"] = 0.0;
    const auto r = run_theorem1(c);
    for (const auto& row : r.data["rows"]) {
      CHECK(row["m"] == 0);
      CHECK(row["h_mean"] == 0.0);
    }
    CHECK(r.pass());
  }

  TEST_CASE("localtime rejects non-dyadic grids") {
    auto c = small("localtime");
    c.n_grid = {256, 384, 512};
    CHECK_THROWS_AS(run_localtime_stability(c), ConfigError);
  }

  TEST_CASE("reports are reproducible") {
    auto c = small("theorem1");
    c.n_grid = {16, 64, 256};
    c.params["coro4_trials"] = 200;
    const auto a = run_theorem1(c);
    const auto b = run_theorem1(c);
    CHECK(a.tables == b.tables);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_json()["config"]["seed"] == c.seed);
    c.seed += 1;
    CHECK(run_theorem1(c).tables != a.tables);
  }

  TEST_CASE("report files") {
    auto c = small("harmonic");
    c.n_grid = {16, 32, 64};
    const auto r = run_harmonic(c);
    const auto dir = std::filesystem::temp_directory_path() / "fluct_report_test";
    std::filesystem::remove_all(dir);
    r.write(dir.string());
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "harmonic.csv"));
    std::ifstream in(dir / "report.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j["experiment"] == "harmonic");
    CHECK(j["criteria"].size() >= 2);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("small runs of every experiment produce criteria") {
    auto l = small("lemma1");
    l.n_grid = {64, 256};
    l.params["cauchy_trials"] = 2000;
    l.params["cauchy_n"] = 64;
    l.params["step_cap"] = 100000;
    l.params["cauchy_cap"] = 20000;
    const auto r1 = run_lemma1(l);
    CHECK(r1.find("a_n_EH_rel_error") != nullptr);
    CHECK(r1.find("stable_ratio_rel_error") != nullptr);

    auto m = small("meander");
    m.n_grid = {16, 64};
    m.params["small_n"] = 8;
    m.params["small_trials"] = 2000;
    m.params["stability_trials"] = 200;
    const auto r2 = run_meander(m);
    CHECK(r2.find("endpoint_ks_rayleigh") != nullptr);
    CHECK(r2.find("rejection_vs_reweight_ks") != nullptr);

    auto t = small("localtime");
    t.n_grid = {16, 32, 64};
    t.params["base_log2"] = 10;
    const auto r3 = run_localtime_stability(t);
    CHECK(r3.find("monotonicity_violations") != nullptr);
    CHECK(r3.tables.count("localtime.csv") == 1);
  }
}
