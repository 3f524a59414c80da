#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/budget.hpp"
#include "fluct/increments.hpp"
#include "fluct/rational.hpp"

namespace fluct {

// k -> P(S_k > 0) for k = 1..K.
class PositivitySequence {
 public:
  enum class Source { exact, estimated };

  static PositivitySequence from_exact(std::vector<Rational> probs);
  static PositivitySequence from_estimates(std::vector<double> probs, std::vector<double> std_errors);

  Source source() const { return source_; }
  std::size_t size() const { return values_.size(); }
  double at(std::size_t k) const;                // 1-based
  const Rational& exact_at(std::size_t k) const;  // exact source only
  double std_error(std::size_t k) const;         // 0 for exact entries

 private:
  Source source_ = Source::exact;
  std::vector<Rational> exact_;
  std::vector<double> values_;
  std::vector<double> errors_;
};

// Closed-form k -> P(S_k > 0).
using PositivityRule = std::function<double(std::size_t)>;

enum class Sign { positive, negative };

// Smallest K with n e^{-K/n} / K <= rel_tol, bounding sum_{k>K} e^{-k/n}/k.
std::size_t norming_truncation(std::size_t n, double rel_tol);

// a_n = exp(sum_k k^{-1} e^{-k/n} P(S_k > 0)); pass P(S_k < 0) for a-hat_n.
double norming_constant(const PositivitySequence& probs, std::size_t n, double rel_tol = 1e-10);
double norming_constant(const PositivityRule& rule, std::size_t n, double rel_tol = 1e-10);

PositivityRule symmetric_diffuse_rule();  // 1/2
PositivityRule fair_coin_rule();          // (1 - P(S_k = 0)) / 2

// Exact mode needs a lattice law and uses big-integer convolution.
PositivitySequence positivity_probabilities(const IncrementLaw& law, std::size_t K, Mode mode,
                                            const MonteCarloBudget& budget = {},
                                            Sign sign = Sign::positive);

// Exact distribution of S_k on the integer lattice: weights[k][i] at position
// lo[k] + i, each row over denominator^k.
struct ConvolutionTable {
  IntegerLattice lattice;
  std::vector<long> lo;
  std::vector<std::vector<BigInt>> weights;
  std::vector<BigInt> denominators;

  static ConvolutionTable build(const IntegerLattice& lattice, std::size_t K);
};

struct FristedtReport {
  double alpha = 0.0;
  double beta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tail_bound = 0.0;
  std::size_t truncation = 0;
  bool within_bound() const { return residual <= tail_bound; }
  nlohmann::json to_json() const;
};

// 1 - E e^{-alpha T_1 - beta H_1} against exp(-sum_k e^{-alpha k}/k E(e^{-beta S_k}; S_k > 0)).
FristedtReport fristedt_residual(const IncrementLaw& law, double alpha, double beta, std::size_t K = 60);

}  // namespace fluct
