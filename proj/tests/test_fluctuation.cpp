#include <doctest.h>

#include "fluct/fluctuation.hpp"
#include "support.hpp"

using namespace fluct;
using testing::path;
using testing::vec;

TEST_SUITE("fluctuation") {
  TEST_CASE("running max") {
    CHECK(running_max(path({0, 1, 0, 2})) == vec<double>({0, 1, 1, 2}));
    CHECK(running_max(path({0, -1, -2})) == vec<double>({0, 0, 0}));
    CHECK(running_max(path({0})) == vec<double>({0}));
    CHECK(running_min(path({0, -1, 1, -2})) == vec<double>({0, -1, -1, -2}));
  }

  TEST_CASE("verbatim local time") {
    CHECK(local_time_verbatim(path({0})).counts == vec<long>({0}));
    CHECK(local_time_verbatim(path({0, 1, 0, 2})).counts == vec<long>({0, 1, 1, 2}));
    CHECK(local_time_verbatim(path({0, 1, 0, 1})).counts == vec<long>({0, 1, 1, 2}));
  }

  TEST_CASE("strict local time") {
    CHECK(local_time_strict(path({0, 1, 0, 1})).counts == vec<long>({0, 1, 1, 1}));
    CHECK(local_time_strict(path({0, 1, 0, 2})).counts == vec<long>({0, 1, 1, 2}));
    CHECK(local_time_strict(path({0})).counts == vec<long>({0}));
  }

  TEST_CASE("ladder sequence") {
    auto l = ladder_sequence(path({0, 1, 0, 2}));
    CHECK(l.epochs == vec<std::size_t>({0, 1, 3}));
    CHECK(l.heights == vec<double>({0, 1, 2}));
    CHECK_FALSE(l.killed);

    l = ladder_sequence(path({0, -1, -2}));
    CHECK(l.epochs == vec<std::size_t>({0}));
    CHECK(l.killed);

    l = ladder_sequence(path({0, -1, 1}));
    CHECK(l.epochs == vec<std::size_t>({0, 2}));
    CHECK(l.heights == vec<double>({0, 1}));
  }

  TEST_CASE("weak ladder sequence counts ties") {
    auto l = ladder_sequence(path({0, 1, 0, 1, 1}), Direction::ascending, LadderVariant::weak);
    CHECK(l.epochs == vec<std::size_t>({0, 1, 3, 4}));
    l = ladder_sequence(path({0, 0, -1}), Direction::ascending, LadderVariant::weak);
    CHECK(l.epochs == vec<std::size_t>({0, 1}));
    CHECK(l.killed);
  }

  TEST_CASE("descending ladder is ascending ladder of the negation") {
    const auto p = path({0, -1, 0, -2, -3, 1});
    const auto d = ladder_sequence(p, Direction::descending);
    const auto a = ladder_sequence(p.negated());
    CHECK(d.epochs == a.epochs);
    CHECK(d.heights == a.heights);
    CHECK(d.epochs == vec<std::size_t>({0, 1, 3, 4}));
  }

  TEST_CASE("ladder epochs after the kill index are not observed") {
    const auto k = WalkPath::killed({0, 1, 2, 3, 4}, 2);
    const auto l = ladder_sequence(k);
    CHECK(l.epochs == vec<std::size_t>({0, 1}));
    CHECK(l.killed);
  }

  TEST_CASE("last max and min index") {
    const auto p = path({0, 1, 0, 2});
    CHECK(last_max_index(p, 2) == 1);
    CHECK(last_max_index(p, 3) == 3);
    CHECK(last_max_index(p, 0) == 0);
    const auto q = path({0, -1, 1, -2});
    CHECK(last_min_index(q, 2) == 1);
    CHECK(last_min_index(q, 3) == 3);
    CHECK(last_min_index(q, 0) == 0);
  }

  TEST_CASE("records ratio") {
    auto r = records_ratio(path({0, 1, 0, 2}));
    CHECK(r.up == 2);
    CHECK(r.down == 1);
    CHECK(r.ratio == 2.0);
    CHECK(r.flag == RecordsRatio::Flag::finite);
    r = records_ratio(path({0, 1, 2}));
    CHECK(r.down == 0);
    CHECK(r.flag == RecordsRatio::Flag::infinite);
    r = records_ratio(path({0}));
    CHECK(r.flag == RecordsRatio::Flag::undefined);
  }

  TEST_CASE("normalized local time") {
    const auto lt = local_time_strict(path({0, 1, 2}));
    CHECK(lt.normalized(2.0) == vec<double>({0, 0.5, 1.0}));
  }
}
