#pragma once

#include <cstddef>
#include <cstdint>

namespace fluct {

// Sample count and master seed for Monte Carlo modes.
struct MonteCarloBudget {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

enum class Mode { exact, montecarlo };

}  // namespace fluct
