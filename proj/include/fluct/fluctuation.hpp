#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/increments.hpp"

namespace fluct {

enum class LocalTimeVariant { verbatim, strict };

// Lambda_0..Lambda_m, nondecreasing with unit jumps.
struct LocalTimeCurve {
  std::vector<long> counts;
  LocalTimeVariant variant = LocalTimeVariant::verbatim;

  long at(std::size_t k) const { return counts[k]; }
  std::size_t size() const { return counts.size(); }
  std::vector<double> normalized(double norming) const;
  std::string to_csv() const;
};

enum class Direction { ascending, descending };

// strict: T_{k+1} = min{j > T_k : S_j > S_{T_k}}
// weak:   T_{k+1} = min{j > T_k : S_j >= S_{T_k}}
enum class LadderVariant { strict, weak };

struct LadderSequence {
  std::vector<std::size_t> epochs;  // T_0 = 0 < T_1 < ...
  std::vector<double> heights;      // H_0 = 0, H_1, ... (of -S when descending)
  bool killed = false;              // no further epoch observed before the window end
  Direction direction = Direction::ascending;
  LadderVariant variant = LadderVariant::strict;

  // Number of ladder epochs after T_0.
  std::size_t count() const { return epochs.size() - 1; }
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

std::vector<double> running_max(const WalkPath& path);
std::vector<double> running_min(const WalkPath& path);

// Counts j with S_{j-1} < S_j and S_j = max_{i<=j} S_i.
LocalTimeCurve local_time_verbatim(const WalkPath& path);
// Counts j with S_j > max_{i<j} S_i.
LocalTimeCurve local_time_strict(const WalkPath& path);

// Ladder epochs at indices >= the kill index are never observed.
LadderSequence ladder_sequence(const WalkPath& path, Direction direction = Direction::ascending,
                               LadderVariant variant = LadderVariant::strict);

// Largest j <= k with S_j = M_j (resp. S_j = min_{i<=j} S_i).
std::size_t last_max_index(const WalkPath& path, std::size_t k);
std::size_t last_min_index(const WalkPath& path, std::size_t k);

struct RecordsRatio {
  enum class Flag { finite, infinite, undefined };
  long up = 0;    // Lambda_m
  long down = 0;  // Lambda-hat_m
  double ratio = 0.0;
  Flag flag = Flag::undefined;
  nlohmann::json to_json() const;
};

RecordsRatio records_ratio(const WalkPath& path);

}  // namespace fluct
