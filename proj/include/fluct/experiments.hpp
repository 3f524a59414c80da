#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluct/budget.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/increments.hpp"

namespace fluct {

struct ExperimentConfig {
  std::string id;
  nlohmann::json law;               // IncrementLaw JSON
  double scale_exponent = 0.5;      // S^{(n)} = S / n^{scale_exponent}
  std::vector<std::size_t> n_grid;  // strictly increasing
  std::size_t trials = 10000;       // >= 100
  std::uint64_t seed = 20240917;
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json params = nlohmann::json::object();  // experiment-specific knobs
  std::string out_dir;

  // Defaults for theorem1, localtime, lemma1, meander, harmonic.
  static ExperimentConfig defaults(const std::string& id);
  // Missing keys fall back to defaults(id).
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // ConfigError

  IncrementLaw increment_law() const { return IncrementLaw::from_json(law); }
  double tolerance(const std::string& key) const;
  double param(const std::string& key) const;
};

struct Criterion {
  std::string id;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=", ">=", "within"
  bool gating = true;      // false for diagnostics reported alongside
  nlohmann::json to_json() const;
};

struct ExperimentReport {
  std::string id;
  nlohmann::json config;
  bool hypothesis_violation = false;
  std::string diagnostic;
  std::vector<Criterion> criteria;
  nlohmann::json data = nlohmann::json::object();
  std::map<std::string, std::string> tables;  // file name -> CSV

  bool pass() const;  // all gating criteria, no hypothesis violation
  int exit_code() const;  // 0 pass, 1 tolerance failure, 2 hypothesis violation
  const Criterion* find(const std::string& criterion_id) const;
  nlohmann::json to_json() const;
  // report.json plus one CSV per table.
  void write(const std::string& dir) const;
};

// Refuses laws that break the regularity hypotheses; empty string when fine.
std::string hypothesis_diagnostic(const IncrementLaw& law, bool needs_brownian);

ExperimentReport run_theorem1(const ExperimentConfig& config);
ExperimentReport run_localtime_stability(const ExperimentConfig& config);
ExperimentReport run_lemma1(const ExperimentConfig& config);
ExperimentReport run_meander(const ExperimentConfig& config);
ExperimentReport run_harmonic(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

// Simulation pieces shared with tests.

// (T_m, H_m) of one walk, T censored at `cap` steps (then censored = true).
// a_n from a closed-form positivity rule when one exists, else exact lattice
// terms when the truncation needs at most exact_terms of them, else Monte Carlo.
double law_norming_constant(const IncrementLaw& law, std::size_t n, const MonteCarloBudget& budget,
                            std::size_t exact_terms = 200);

struct LadderDraw {
  std::size_t epoch = 0;
  double height = 0.0;
  bool censored = false;
};
LadderDraw draw_ladder(const StepSampler& sampler, std::size_t m, std::size_t cap, Rng& rng, bool descending = false);

// max_{j <= n2} |Lambda^{n}_{floor(j n / n2)} / a_n - Lambda^{n2}_j / a_{n2}| on nested
// skeletons of base; n divides n2 and n2 divides the base length.
double skeleton_discrepancy(const WalkPath& base, std::size_t n, double a_n, std::size_t n2, double a_n2,
                            LocalTimeVariant variant = LocalTimeVariant::verbatim);

// Exact law of the scaled endpoint S_n / sqrt(n var) of the lattice meander.
std::vector<std::pair<double, double>> meander_endpoint_law(const IncrementLaw& law, std::size_t n);

}  // namespace fluct
