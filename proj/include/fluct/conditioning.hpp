#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/budget.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/increments.hpp"
#include "fluct/rational.hpp"
#include "fluct/scaling.hpp"

namespace fluct {

// V(x) = sum_k P(H-hat_k <= x) over strict descending ladder heights.
class RenewalFunction {
 public:
  // Downward skip-free lattice laws: V(x) = sum_{j <= floor(x/d)} rho^j, with
  // rho = 1 for mean <= 0, rho = q/p for biased +-1 and rho = 0 without down-steps.
  static RenewalFunction exact(const IncrementLaw& law);
  // Simulates descending ladder chains up to level x_max; linear beyond.
  static RenewalFunction estimate(const IncrementLaw& law, const MonteCarloBudget& budget, double x_max,
                                  std::size_t step_cap = 1000000);

  Mode mode() const { return mode_; }
  const IncrementLaw& law() const { return *law_; }

  double operator()(double x) const;
  double std_error(double x) const;        // 0 in exact mode
  Rational exact_at(const Rational& x) const;  // exact mode only
  // P(descending ladder process survives one more step) in exact mode.
  const Rational& ratio() const { return rho_; }
  const Rational& span() const { return span_; }
  // Estimated mode: chains whose ladder walk hit the step cap before x_max.
  std::size_t truncated_chains() const { return truncated_; }

 private:
  RenewalFunction(const IncrementLaw& law, Mode mode);

  std::shared_ptr<const IncrementLaw> law_;
  Mode mode_;
  Rational rho_;
  Rational span_;
  // estimated mode
  std::vector<double> sorted_heights_;
  std::vector<std::vector<double>> chains_;
  double x_max_ = 0.0;
  double slope_ = 0.0;
  std::size_t truncated_ = 0;
};

struct KernelEntry {
  Rational to;
  Rational prob;
};

// Exact row of q_up(x, y) = V(y)/V(x) P(x + Y = y), y >= 0. Lattice law, exact V.
std::vector<KernelEntry> h_kernel_row(const Rational& x, const RenewalFunction& V);

// One step of the h-chain from x >= 0.
double h_kernel_step(double x, const RenewalFunction& V, Rng& rng);

enum class ConditioningMethod { tanaka_doney, h_chain };

struct ConditionedWalkOptions {
  ConditioningMethod method = ConditioningMethod::tanaka_doney;
  LadderVariant variant = LadderVariant::weak;  // Tanaka-Doney ladder notion
  std::size_t step_cap = 50000000;             // Tanaka-Doney: raw steps before giving up
};

// h_chain needs V; tanaka_doney ignores it.
WalkPath conditioned_walk(const IncrementLaw& law, std::size_t length, std::uint64_t seed,
                          const ConditionedWalkOptions& options = {}, const RenewalFunction* V = nullptr);
WalkPath conditioned_walk(const IncrementLaw& law, std::size_t length, Rng& rng,
                          const ConditionedWalkOptions& options, const RenewalFunction* V);

struct WeightedPath {
  WalkPath path;
  double weight = 1.0;
};

enum class MeanderMethod { rejection, reweight };

// Rejection: unweighted exact-law meander, BudgetError after max_attempts.
WalkPath meander_rejection(const IncrementLaw& law, std::size_t k, Rng& rng, std::size_t max_attempts);
// Reweight: h-chain path with weight 1/(P(C_k) V(S_k)).
WeightedPath meander_reweight(const IncrementLaw& law, std::size_t k, Rng& rng, const RenewalFunction& V,
                              double survival);
WeightedPath meander_sample(const IncrementLaw& law, std::size_t k, std::uint64_t seed, MeanderMethod method,
                            std::size_t max_attempts = 1000000);

struct SurvivalEstimate {
  double value = 0.0;
  double error_bound = 0.0;  // 0 when exact; otherwise 3 standard errors
  std::optional<Rational> exact;
};

// P(S_1 >= 0, ..., S_k >= 0). Exact mode: lattice DP or, for symmetric diffuse
// laws, C(2k,k)/4^k.
SurvivalEstimate survival_probability(const IncrementLaw& law, std::size_t k, Mode mode,
                                      const MonteCarloBudget& budget = {});
// Exact P(C_j) for j = 0..K.
std::vector<Rational> survival_table(const IncrementLaw& law, std::size_t K);

// Law of S^{(n)} = S / (spread * n^{scale_exponent}).
struct LawFamily {
  IncrementLaw base;
  double scale_exponent = 0.5;
  double spread = 1.0;
  double scale(std::size_t n) const;
};

struct HarmonicRow {
  std::size_t n = 0;
  double a_hat = 0.0;
  double survival = 0.0;
  double product = 0.0;
  std::vector<double> v_at_x;  // P(C_n) V^{(n)}(x)
  double product_change = 0.0;  // relative change against the previous n
};

struct HarmonicReport {
  bool degenerate = false;
  std::string diagnostic;
  std::vector<double> x_grid;
  std::vector<HarmonicRow> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// a-hat_n P(C_n) and P(C_n) V^{(n)}(x) across n. a-hat_n uses `rule` for
// P(S_k < 0) when given.
HarmonicReport harmonic_limits(const LawFamily& family, const std::vector<double>& x_grid,
                               const std::vector<std::size_t>& n_grid, const MonteCarloBudget& budget = {},
                               const PositivityRule* rule = nullptr);

}  // namespace fluct
