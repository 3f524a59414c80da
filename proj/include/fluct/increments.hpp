#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/rational.hpp"
#include "fluct/rng.hpp"

namespace fluct {

struct LatticeLaw {
  std::vector<Rational> support;
  std::vector<Rational> probs;
};

struct GaussianLaw {
  double mean = 0.0;
  double stddev = 1.0;
};

// Symmetric alpha-stable law with characteristic function exp(-|scale*t|^alpha).
// Sampled by Chambers-Mallows-Stuck; alpha = 1 is the standard Cauchy (scale 1)
// and alpha = 2 is N(0, 2 scale^2).
struct StableLaw {
  double tail_index = 1.0;
  double scale = 1.0;
};

// Step distribution of a random walk.
class IncrementLaw {
 public:
  using Kind = std::variant<LatticeLaw, GaussianLaw, StableLaw>;

  static IncrementLaw lattice(std::vector<Rational> support, std::vector<Rational> probs,
                              std::string description = "lattice");
  static IncrementLaw gaussian(double mean, double stddev, std::string description = "gaussian");
  static IncrementLaw symmetric_stable(double tail_index, double scale = 1.0,
                                       std::string description = "symmetric-stable");

  static IncrementLaw fair_coin();                    // +-1 with probability 1/2
  static IncrementLaw biased_coin(const Rational& p_up);
  static IncrementLaw uniform_three();                // uniform on {-1, 0, +1}
  static IncrementLaw point_mass(const Rational& at);

  const Kind& kind() const { return kind_; }
  const std::string& description() const { return description_; }

  bool is_lattice() const { return std::holds_alternative<LatticeLaw>(kind_); }
  const LatticeLaw& as_lattice() const;  // throws ParameterError unless lattice

  // No atoms: ties between partial sums have probability zero.
  bool is_diffuse() const { return !is_lattice(); }
  bool is_symmetric() const;
  bool has_negative_steps() const;
  bool has_positive_steps() const;
  double mean() const;      // NaN for alpha <= 1 stable laws
  double variance() const;  // +inf for alpha < 2 stable laws

  // Law of c * Y. Lattice laws need a rational factor.
  IncrementLaw scaled(double factor) const;
  IncrementLaw scaled(const Rational& factor) const;

  nlohmann::json to_json() const;
  static IncrementLaw from_json(const nlohmann::json& j);

 private:
  IncrementLaw(Kind kind, std::string description);
  void validate() const;

  Kind kind_;
  std::string description_;
};

// A lattice law rewritten on the integers: support = unit * steps,
// P(step index i) = weights[i] / denominator.
struct IntegerLattice {
  Rational unit;
  std::vector<long> steps;
  std::vector<BigInt> weights;
  BigInt denominator;

  static IntegerLattice from(const LatticeLaw& law);
  Rational prob(std::size_t i) const { return ratio(weights[i], denominator); }
  long min_step() const;
  long max_step() const;
};

// Draws single increments; cheap to copy, holds no RNG state.
class StepSampler {
 public:
  explicit StepSampler(const IncrementLaw& law);
  double operator()(Rng& rng) const;
  // Lattice laws only: index into the support.
  std::size_t draw_index(Rng& rng) const;

 private:
  enum class Kind { lattice, gaussian, stable };
  Kind kind_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  double mean_ = 0.0;
  double stddev_ = 1.0;
  double alpha_ = 1.0;
  double scale_ = 1.0;
};

// S_0 = 0, ..., S_m on the unit grid, optionally killed at kill_index.
class WalkPath {
 public:
  WalkPath() : values_{0.0} {}
  // Throws ParameterError unless values[0] == 0 and a present kill index has a
  // frozen tail.
  explicit WalkPath(std::vector<double> values, std::optional<std::size_t> kill_index = {});

  // Builds the killed path: entries at indices >= kill are frozen at values[kill-1].
  static WalkPath killed(std::vector<double> raw, std::size_t kill);
  static WalkPath from_increments(std::span<const double> increments);

  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t length() const { return values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  std::optional<std::size_t> kill_index() const { return kill_index_; }

  WalkPath negated() const;
  WalkPath scaled(double factor) const;
  WalkPath prefix(std::size_t last_index) const;

  bool operator==(const WalkPath&) const = default;

 private:
  std::vector<double> values_;
  std::optional<std::size_t> kill_index_;
};

// Pure function of (law, length, seed).
WalkPath sample_walk(const IncrementLaw& law, std::size_t length, std::uint64_t seed);
WalkPath sample_walk(const StepSampler& sampler, std::size_t length, Rng& rng);

// values[j] = path[stride * j]. Kill information does not survive subsampling.
WalkPath skeleton(const WalkPath& path, std::size_t stride);

std::string to_csv(const WalkPath& path);

}  // namespace fluct
