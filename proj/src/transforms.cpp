#include "fluct/transforms.hpp"

#include <algorithm>
#include <limits>

#include "fluct/error.hpp"

namespace fluct {

namespace {

double clean(double x) { return x == 0.0 ? 0.0 : x; }

WalkPath reversed_prefix(const WalkPath& path, std::size_t g) {
  std::vector<double> v(g + 1);
  for (std::size_t i = 0; i <= g; ++i) v[i] = clean(path[g] - path[g - i]);
  return WalkPath(std::move(v));
}

}  // namespace

ExcursionDecomposition excursions(const WalkPath& path, LadderVariant variant) {
  const auto ladder = ladder_sequence(path, Direction::ascending, variant);
  ExcursionDecomposition out;
  out.variant = variant;
  for (std::size_t k = 0; k + 1 < ladder.epochs.size(); ++k) {
    std::vector<double> e;
    for (std::size_t i = ladder.epochs[k]; i < ladder.epochs[k + 1]; ++i) e.push_back(clean(ladder.heights[k] - path[i]));
    e.push_back(0.0);
    out.excursions.push_back(std::move(e));
  }
  const std::size_t last = ladder.epochs.back();
  for (std::size_t i = last; i < path.size(); ++i) out.boundary.push_back(clean(ladder.heights.back() - path[i]));
  return out;
}

TanakaDoneyResult tanaka_doney_detailed(const WalkPath& path, LadderVariant variant) {
  const auto ladder = ladder_sequence(path, Direction::ascending, variant);
  std::vector<double> up(path.size(), 0.0);
  for (std::size_t k = 0; k + 1 < ladder.epochs.size(); ++k) {
    const std::size_t a = ladder.epochs[k], b = ladder.epochs[k + 1];
    const double hk = ladder.heights[k], hk1 = ladder.heights[k + 1];
    for (std::size_t i = a; i <= b; ++i) up[i] = clean(hk + hk1 - path[b - (i - a)]);
  }
  const std::size_t last = ladder.epochs.back();
  const double h = ladder.heights.back();
  for (std::size_t i = last; i < path.size(); ++i) up[i] = clean(h + (h - path[i]));
  TanakaDoneyResult r{WalkPath(std::move(up)), last, last < path.length(), variant};
  return r;
}

WalkPath tanaka_doney(const WalkPath& path, LadderVariant variant) {
  return tanaka_doney_detailed(path, variant).path;
}

LocalTimeCurve future_min_local_time(const WalkPath& path) {
  const std::size_t n = path.size();
  std::vector<double> future_min(n);
  double cur = std::numeric_limits<double>::infinity();
  for (std::size_t i = n; i-- > 0;) future_min[i] = cur = std::min(cur, path[i]);
  LocalTimeCurve out{std::vector<long>(n, 0), LocalTimeVariant::verbatim};
  for (std::size_t j = 1; j < n; ++j) {
    bool hit = j + 1 < n && path[j] == future_min[j] && path[j] < path[j + 1];
    out.counts[j] = out.counts[j - 1] + (hit ? 1 : 0);
  }
  return out;
}

std::vector<std::size_t> future_min_records(const WalkPath& path, LadderVariant variant) {
  const std::size_t n = path.size();
  // min over i > j
  std::vector<double> after(n);
  double cur = std::numeric_limits<double>::infinity();
  for (std::size_t i = n; i-- > 0;) {
    after[i] = cur;
    cur = std::min(cur, path[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j < n; ++j) {
    bool rec = variant == LadderVariant::weak ? path[j] <= after[j] : path[j] < after[j];
    if (rec) out.push_back(j);
  }
  return out;
}

WalkPath reverse_at_ladder(const WalkPath& path, std::size_t k, LadderVariant variant) {
  if (k == 0) throw ParameterError("ladder index must be positive");
  const auto ladder = ladder_sequence(path, Direction::ascending, variant);
  if (ladder.count() < k)
    throw InsufficientLadderError("only " + std::to_string(ladder.count()) + " ladder epochs in the window, need " +
                                  std::to_string(k));
  return reversed_prefix(path, ladder.epochs[k]);
}

WalkPath reverse_at_last_max(const WalkPath& path, std::size_t m, LadderVariant variant) {
  if (m > path.length()) throw DimensionError("index beyond the window");
  std::size_t g = 0;
  if (variant == LadderVariant::weak) {
    g = last_max_index(path, m);
  } else {
    double max = path[0];
    for (std::size_t j = 1; j <= m; ++j)
      if (path[j] > max) {
        max = path[j];
        g = j;
      }
  }
  return reversed_prefix(path, g);
}

WalkPath post_min_process(const WalkPath& path, std::size_t m) {
  if (m > path.length()) throw DimensionError("index beyond the window");
  const std::size_t K = last_min_index(path, m);
  std::vector<double> v(m - K + 1);
  for (std::size_t i = 0; i <= m - K; ++i) v[i] = clean(path[K + i] - path[K]);
  return WalkPath(std::move(v));
}

}  // namespace fluct
