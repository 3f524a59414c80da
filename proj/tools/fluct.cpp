#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fluct/certify.hpp"
#include "fluct/conditioning.hpp"
#include "fluct/error.hpp"
#include "fluct/experiments.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/limit_laws.hpp"
#include "fluct/scaling.hpp"
#include "fluct/transforms.hpp"

namespace {

using namespace fluct;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::optional<std::size_t> trials;
  std::vector<std::size_t> n_grid;
};

nlohmann::json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(file + ": " + e.what());
  }
}

IncrementLaw named_law(const std::string& name) {
  if (name == "fair") return IncrementLaw::fair_coin();
  if (name == "biased") return IncrementLaw::biased_coin(Rational(3, 4));
  if (name == "uniform3") return IncrementLaw::uniform_three();
  if (name == "gaussian") return IncrementLaw::gaussian(0.0, 1.0);
  if (name == "cauchy") return IncrementLaw::symmetric_stable(1.0);
  if (std::filesystem::exists(name)) return IncrementLaw::from_json(read_json(name));
  throw ConfigError("unknown law '" + name + "' (fair, biased, uniform3, gaussian, cauchy or a JSON file)");
}

void emit(const Globals& g, const std::string& name, const nlohmann::json& json, const std::string& csv) {
  if (g.out.empty()) {
    std::cout << (g.format == "csv" ? csv : json.dump(2) + "\n");
    return;
  }
  std::filesystem::create_directories(g.out);
  std::ofstream(std::filesystem::path(g.out) / "report.json") << json.dump(2) << '\n';
  if (!csv.empty()) std::ofstream(std::filesystem::path(g.out) / (name + ".csv")) << csv;
}

std::string certificate_csv(const Certificate& c) {
  std::ostringstream out;
  out << "name,pass,checks,violations,max_tv,max_residual\n"
      << c.name << ',' << (c.pass ? 1 : 0) << ',' << c.checks << ',' << c.violations << ','
      << to_string(c.max_tv) << ',' << c.max_residual << '\n';
  return out.str();
}

int run_verify(const Globals& g, const std::string& which) {
  nlohmann::json cfg = g.config.empty() ? nlohmann::json::object() : read_json(g.config);
  const auto laws = certification_laws();
  const std::uint64_t seed = g.seed.value_or(cfg.value("seed", std::uint64_t{20240917}));
  std::vector<Certificate> certs;
  if (which == "fristedt") {
    certs.push_back(certify_fristedt(laws, cfg.value("alphas", std::vector<double>{0.5, 1, 2}),
                                     cfg.value("betas", std::vector<double>{0, 0.5, 1}),
                                     cfg.value("K", std::size_t{60}), cfg.value("bound_cap", 1e-6)));
  } else if (which == "reversal") {
    certs.push_back(certify_time_reversal(laws, cfg.value("m_max", std::size_t{10}),
                                          {LadderVariant::strict, LadderVariant::weak}));
  } else if (which == "idloc") {
    certs.push_back(certify_idloc(cfg.value("m_max", std::size_t{12}), g.trials.value_or(cfg.value("gaussian_paths", std::size_t{10000})),
                                  cfg.value("gaussian_length", std::size_t{1000}), seed));
  } else if (which == "meander-ac") {
    const std::vector<IncrementLaw> fair{IncrementLaw::fair_coin()};
    certs.push_back(certify_meander_ac(fair, cfg.value("k_max", std::size_t{10})));
    certs.push_back(certify_reweight_mean(IncrementLaw::fair_coin(), cfg.value("n", std::size_t{32}),
                                          g.trials.value_or(cfg.value("samples", std::size_t{100000})), seed));
  } else if (which == "h-kernel") {
    const std::vector<IncrementLaw> fair{IncrementLaw::fair_coin()};
    certs.push_back(certify_h_kernel(fair, cfg.value("k_max", std::size_t{10})));
  } else {
    throw ConfigError("unknown certificate '" + which + "'");
  }
  nlohmann::json j{{"certificate", which}, {"seed", seed}, {"results", nlohmann::json::array()}};
  std::string csv;
  bool pass = true;
  for (const auto& c : certs) {
    j["results"].push_back(c.to_json());
    std::string part = certificate_csv(c);
    csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
    pass = pass && c.pass;
  }
  j["pass"] = pass;
  emit(g, which, j, csv);
  return pass ? 0 : 1;
}

int run_converge(const Globals& g, const std::string& which) {
  ExperimentConfig c;
  if (!g.config.empty()) {
    nlohmann::json j = read_json(g.config);
    if (!j.contains("id")) j["id"] = which;
    if (j.at("id") != which) throw ConfigError("config id does not match '" + which + "'");
    c = ExperimentConfig::from_json(j);
  } else {
    c = ExperimentConfig::defaults(which);
  }
  if (g.seed) c.seed = *g.seed;
  if (g.trials) c.trials = *g.trials;
  if (!g.n_grid.empty()) c.n_grid = g.n_grid;
  c.validate();
  const ExperimentReport r = run_experiment(c);
  if (!g.out.empty()) {
    r.write(g.out);
  } else if (g.format == "csv") {
    for (const auto& [name, table] : r.tables) std::cout << "# " << name << '\n' << table;
  } else {
    std::cout << r.to_json().dump(2) << '\n';
  }
  for (const auto& cr : r.criteria)
    std::cerr << (cr.pass ? "PASS " : "FAIL ") << cr.id << ' ' << cr.value << ' ' << cr.comparison << ' '
              << cr.threshold << (cr.gating ? "" : " (informational)") << '\n';
  if (r.hypothesis_violation) std::cerr << "hypothesis violation: " << r.diagnostic << '\n';
  return r.exit_code();
}

int run_simulate(const Globals& g, const std::string& law_name, const std::string& kind, std::size_t length) {
  const IncrementLaw law = named_law(law_name);
  const std::uint64_t seed = g.seed.value_or(1);
  WalkPath path;
  double weight = 1.0;
  if (kind == "walk") {
    path = sample_walk(law, length, seed);
  } else if (kind == "conditioned") {
    path = conditioned_walk(law, length, seed);
  } else if (kind == "meander") {
    auto wp = meander_sample(law, length, seed, MeanderMethod::rejection);
    path = wp.path;
    weight = wp.weight;
  } else if (kind == "tanaka-doney") {
    path = tanaka_doney(sample_walk(law, length, seed), LadderVariant::weak);
  } else {
    throw ConfigError("unknown path kind '" + kind + "'");
  }
  const auto lt = law.is_lattice() ? local_time_strict(path) : local_time_verbatim(path);
  const auto ladder = ladder_sequence(path);
  std::ostringstream csv;
  csv << "i,S,M,L\n";
  const auto m = running_max(path);
  for (std::size_t i = 0; i < path.size(); ++i) csv << i << ',' << path[i] << ',' << m[i] << ',' << lt.at(i) << '\n';
  nlohmann::json j{{"law", law.to_json()}, {"kind", kind},        {"length", length},
                   {"seed", seed},         {"weight", weight},    {"path", path.data()},
                   {"ladder", ladder.to_json()}, {"local_time", lt.counts}};
  emit(g, "path", j, csv.str());
  return 0;
}

int run_tables(const Globals& g, const std::string& law_name, std::size_t K) {
  const IncrementLaw law = named_law(law_name);
  std::ostringstream csv;
  nlohmann::json rows = nlohmann::json::array();
  csv << "n,a_n,P_C_n,a_n_P_C_n,levy_half_cdf,rayleigh_cdf\n";
  const auto grid = g.n_grid.empty() ? std::vector<std::size_t>{16, 64, 256, 1024, 4096} : g.n_grid;
  const std::size_t n_max = grid.back();
  std::vector<Rational> surv;
  if (law.is_lattice()) surv = survival_table(law, n_max);
  for (std::size_t n : grid) {
    const double a_n = law_norming_constant(law, n, {g.trials.value_or(100000), g.seed.value_or(1)}, K);
    const double pc = law.is_lattice() ? to_double(surv[n]) : survival_probability(law, n, Mode::exact).value;
    const double s = static_cast<double>(n) / static_cast<double>(n_max);
    csv << n << ',' << a_n << ',' << pc << ',' << a_n * pc << ',' << levy_half_cdf(s) << ',' << rayleigh_cdf(s) << '\n';
    rows.push_back({{"n", n}, {"a_n", a_n}, {"P_C_n", pc}, {"a_n_P_C_n", a_n * pc}});
  }
  emit(g, "tables", {{"law", law.to_json()}, {"rows", rows}, {"target_product", half_stable_tau_tail()}}, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluctuation theory of random walks: exact certificates and Monte Carlo convergence runs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--trials", g.trials, "Monte Carlo trials");
  app.add_option("--n-grid", g.n_grid, "n grid")->delimiter(',');

  std::string which, law_name = "fair", kind = "walk";
  std::size_t length = 100, K = 200;
  auto* verify = app.add_subcommand("verify", "exact certificates");
  verify->add_option("certificate", which)->required()->check(
      CLI::IsMember({"fristedt", "reversal", "idloc", "meander-ac", "h-kernel"}));
  auto* converge = app.add_subcommand("converge", "Monte Carlo convergence experiments");
  converge->add_option("experiment", which)->required()->check(
      CLI::IsMember({"theorem1", "localtime", "lemma1", "meander", "harmonic"}));
  auto* simulate = app.add_subcommand("simulate", "sample one path");
  simulate->add_option("--law", law_name, "fair|biased|uniform3|gaussian|cauchy|file.json");
  simulate->add_option("--kind", kind, "walk|conditioned|meander|tanaka-doney");
  simulate->add_option("--length", length)->check(CLI::PositiveNumber);
  auto* tables = app.add_subcommand("tables", "norming constants and survival probabilities");
  tables->add_option("--law", law_name, "fair|biased|uniform3|gaussian|file.json");
  tables->add_option("--positivity-terms", K, "largest number of exact P(S_k>0) terms before Monte Carlo");

  for (auto* sub : {verify, converge, simulate, tables}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*verify) return run_verify(g, which);
    if (*converge) return run_converge(g, which);
    if (*simulate) return run_simulate(g, law_name, kind, length);
    if (*tables) return run_tables(g, law_name, K);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
