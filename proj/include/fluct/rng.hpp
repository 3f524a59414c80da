#pragma once

#include <cstdint>
#include <random>

namespace fluct {

using Rng = std::mt19937_64;

// SplitMix64 finalizer, used to decorrelate nearby seeds.
std::uint64_t mix64(std::uint64_t x);

// Stream seed for trial `index` of a run with `master` seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

inline Rng trial_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

// Uniform on the open interval (0,1).
inline double uniform_open(Rng& rng) {
  // 53 random bits, shifted off zero
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace fluct
