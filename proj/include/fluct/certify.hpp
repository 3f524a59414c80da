#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/fluctuation.hpp"
#include "fluct/increments.hpp"
#include "fluct/rational.hpp"

namespace fluct {

// Outcome of an exact certification: every case is listed in `cases`.
struct Certificate {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  std::size_t violations = 0;
  Rational max_tv = 0;
  double max_residual = 0.0;
  nlohmann::json cases = nlohmann::json::array();
  nlohmann::json to_json() const;
};

// Fair +-1, biased +-1 with P(up) = 3/4, uniform on {-1, 0, +1}.
std::vector<IncrementLaw> certification_laws();

// |lhs - rhs| <= tail bound <= bound_cap on the (alpha, beta) grid.
Certificate certify_fristedt(const std::vector<IncrementLaw>& laws, const std::vector<double>& alphas,
                             const std::vector<double>& betas, std::size_t K = 60, double bound_cap = 1e-6);

// Time reversal at ladder epochs (part 1, laws restricted to {T_k <= m}) and at
// the last maximum (part 2), TV = 0 for every window m <= m_max and every k.
Certificate certify_time_reversal(const std::vector<IncrementLaw>& laws, std::size_t m_max,
                                  const std::vector<LadderVariant>& variants);

// Future-minimum local time of the weak Tanaka-Doney path against the verbatim
// local time, below the last ladder epoch: all +-1 paths up to m_max, then
// sampled Gaussian paths.
Certificate certify_idloc(std::size_t m_max, std::size_t gaussian_paths, std::size_t gaussian_length,
                          std::uint64_t seed);

// Meander law = h-chain law / (P(C_k) V(S_k)) path by path, k <= k_max.
Certificate certify_meander_ac(const std::vector<IncrementLaw>& laws, std::size_t k_max);

// Exact law of the h-chain against the weak-ladder Tanaka-Doney path, k <= k_max.
Certificate certify_h_kernel(const std::vector<IncrementLaw>& laws, std::size_t k_max);

// Sample mean of 1/(P(C_n) V(S_n)) over h-chain paths within 3 standard errors of 1.
Certificate certify_reweight_mean(const IncrementLaw& law, std::size_t n, std::size_t samples, std::uint64_t seed);

}  // namespace fluct
