#pragma once

#include <cstddef>
#include <vector>

#include "fluct/fluctuation.hpp"
#include "fluct/increments.hpp"

namespace fluct {

// Excursions of M - S between consecutive ladder epochs.
struct ExcursionDecomposition {
  std::vector<std::vector<double>> excursions;  // e^(k)_i = H_k - S_{T_k + i}, complete
  std::vector<double> boundary;                 // unfinished excursion after the last epoch
  LadderVariant variant = LadderVariant::strict;
};

ExcursionDecomposition excursions(const WalkPath& path, LadderVariant variant = LadderVariant::strict);

struct TanakaDoneyResult {
  WalkPath path;
  std::size_t complete_until = 0;  // last complete ladder epoch T_last
  bool has_trailing = false;       // indices after T_last use the trailing rule
  LadderVariant variant = LadderVariant::strict;
};

// S_up_i = H_k + H_{k+1} - S_{T_{k+1} - (i - T_k)} for T_k <= i <= T_{k+1}; after the
// last epoch S_up_i = H_last + (H_last - S_i).
TanakaDoneyResult tanaka_doney_detailed(const WalkPath& path, LadderVariant variant = LadderVariant::strict);
WalkPath tanaka_doney(const WalkPath& path, LadderVariant variant = LadderVariant::strict);

// Counts j >= 1 with S_j = min_{i>=j} S_i (window) and S_j < S_{j+1}.
LocalTimeCurve future_min_local_time(const WalkPath& path);

// Indices j >= 1 that are future-minimum records on the window:
// weak: S_j <= S_i for all i > j; strict: S_j < S_i for all i > j.
// On a Tanaka-Doney output these are the ladder epochs of the input, up to T_last.
std::vector<std::size_t> future_min_records(const WalkPath& path, LadderVariant variant);

// (S_{T_k} - S_{T_k - i}, 0 <= i <= T_k).
WalkPath reverse_at_ladder(const WalkPath& path, std::size_t k, LadderVariant variant = LadderVariant::strict);

// (S_G - S_{G - i}, 0 <= i <= G) with G the last ladder epoch <= m: the last
// time the running max is attained (weak, the default) or its first time (strict).
WalkPath reverse_at_last_max(const WalkPath& path, std::size_t m, LadderVariant variant = LadderVariant::weak);

// (S_{K_m + i} - S_{K_m}, 0 <= i <= m - K_m) with K_m the last running-minimum time <= m.
WalkPath post_min_process(const WalkPath& path, std::size_t m);

}  // namespace fluct
