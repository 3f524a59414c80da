#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/increments.hpp"
#include "fluct/rational.hpp"

namespace fluct {

using Outcome = std::vector<long>;

// Finite map outcome -> exact probability. Restricted (sub-probability) laws
// are allowed; is_probability() tells them apart.
class ExactDistribution {
 public:
  void add(const Outcome& outcome, const Rational& mass);

  const std::map<Outcome, Rational>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Rational prob(const Outcome& outcome) const;
  Rational total_mass() const;
  bool is_probability() const { return total_mass() == 1; }

  // {"1,0,2": "3/8", ...}
  nlohmann::json to_json() const;

 private:
  std::map<Outcome, Rational> atoms_;
};

inline constexpr double default_enumeration_budget = 16777216.0;  // 2^24 paths

// Visitor receives the increment indices and the path in integer lattice
// units (support = unit * steps) with its exact probability.
using PathVisitor = std::function<void(const Outcome& indices, const WalkPath& path, const Rational& prob)>;

// Depth-first over all increment sequences of length m with positive mass.
void enumerate_paths(const IncrementLaw& law, std::size_t m, const PathVisitor& visit,
                     double budget = default_enumeration_budget);

// Outcomes are increment-index sequences.
ExactDistribution enumerate(const IncrementLaw& law, std::size_t m, double budget = default_enumeration_budget);

// A functional returns nullopt off its domain, giving a restricted law.
using PathFunctional = std::function<std::optional<Outcome>(const WalkPath&)>;

// Streams enumerate_paths through the functional; first-level prefixes run in parallel.
ExactDistribution path_functional_distribution(const IncrementLaw& law, std::size_t m, const PathFunctional& f,
                                               double budget = default_enumeration_budget);

// Pushforward of an existing distribution.
ExactDistribution functional_distribution(const ExactDistribution& dist,
                                          const std::function<Outcome(const Outcome&)>& f);

// (1/2) sum |d1 - d2| over the union of outcomes.
Rational total_variation(const ExactDistribution& d1, const ExactDistribution& d2);

// Integer-unit path values as an outcome key.
Outcome encode_path(const WalkPath& path);

}  // namespace fluct
