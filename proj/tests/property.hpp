#pragma once

#include <doctest.h>

#include <cstdint>
#include <sstream>
#include <string>

#include "fluct/increments.hpp"
#include "fluct/rng.hpp"

namespace property {

inline constexpr std::size_t default_cases = 1000;

// Runs prop(rng, case_index) on `cases` independent streams and reports the
// first failing case with its seed.
template <class Prop>
void for_all(const std::string& name, std::size_t cases, std::uint64_t seed, Prop prop) {
  std::size_t failures = 0;
  std::string first;
  for (std::size_t i = 0; i < cases; ++i) {
    fluct::Rng rng = fluct::trial_rng(seed, i);
    std::string why;
    if (!prop(rng, why)) {
      if (failures++ == 0) first = "case " + std::to_string(i) + ": " + why;
    }
  }
  INFO(name, " failures=", failures, " first: ", first);
  CHECK(failures == 0);
  MESSAGE(name, ": ", cases, " cases");
}

inline std::size_t uniform_int(fluct::Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

// Random finite lattice law on small integers with rational weights.
inline fluct::IncrementLaw random_lattice(fluct::Rng& rng, bool need_both_signs = false) {
  while (true) {
    std::vector<fluct::Rational> support, probs;
    long total = 0;
    std::vector<long> w;
    for (long s = -3; s <= 3; ++s) {
      const long weight = static_cast<long>(rng() % 4);
      if (weight == 0) continue;
      support.emplace_back(s);
      w.push_back(weight);
      total += weight;
    }
    if (support.empty()) continue;
    bool neg = false, pos = false;
    for (const auto& s : support) {
      neg = neg || s < 0;
      pos = pos || s > 0;
    }
    if (need_both_signs && !(neg && pos)) continue;
    for (long x : w) probs.push_back(fluct::ratio(x, total));
    return fluct::IncrementLaw::lattice(support, probs);
  }
}

inline fluct::IncrementLaw random_law(fluct::Rng& rng) {
  switch (rng() % 6) {
    case 0: return fluct::IncrementLaw::fair_coin();
    case 1: return fluct::IncrementLaw::uniform_three();
    case 2: return fluct::IncrementLaw::biased_coin(fluct::Rational(static_cast<long>(1 + rng() % 3), 4));
    case 3: return fluct::IncrementLaw::gaussian(0.0, 1.0);
    case 4: return fluct::IncrementLaw::symmetric_stable(0.5 + 1.5 * fluct::uniform_open(rng));
    default: return random_lattice(rng);
  }
}

inline fluct::WalkPath random_path(fluct::Rng& rng, std::size_t max_length = 60) {
  const auto law = random_law(rng);
  return fluct::sample_walk(law, uniform_int(rng, 1, max_length), rng());
}

template <class T>
std::string show(const std::vector<T>& v) {
  std::ostringstream out;
  for (const auto& x : v) out << x << ' ';
  return out.str();
}

}  // namespace property
