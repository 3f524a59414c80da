#include "fluct/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fluct/error.hpp"
#include "fluct/parallel.hpp"
#include "fluct/transforms.hpp"

namespace fluct {

RenewalFunction::RenewalFunction(const IncrementLaw& law, Mode mode)
    : law_(std::make_shared<const IncrementLaw>(law)), mode_(mode), rho_(1), span_(1) {}

RenewalFunction RenewalFunction::exact(const IncrementLaw& law) {
  if (!law.is_lattice()) throw UnsupportedModeError("exact renewal function needs a lattice law");
  const IntegerLattice lat = IntegerLattice::from(law.as_lattice());
  RenewalFunction V(law, Mode::exact);
  std::vector<long> down, up;
  for (std::size_t i = 0; i < lat.steps.size(); ++i) {
    if (lat.weights[i] == 0) continue;
    if (lat.steps[i] < 0) down.push_back(lat.steps[i]);
    if (lat.steps[i] > 0) up.push_back(lat.steps[i]);
  }
  if (down.empty()) {
    V.rho_ = 0;
    V.span_ = lat.unit;
    return V;
  }
  if (down.size() > 1) throw UnsupportedModeError("exact renewal function needs a downward skip-free law");
  const long d = -down.front();
  for (long s : up)
    if (s % d != 0) throw UnsupportedModeError("exact renewal function needs steps on the down-step lattice");
  V.span_ = lat.unit * d;
  V.span_.canonicalize();
  Rational mean = 0;
  for (std::size_t i = 0; i < lat.steps.size(); ++i) mean += Rational(lat.steps[i]) * lat.prob(i);
  if (sgn(mean) <= 0) {
    V.rho_ = 1;
    return V;
  }
  if (up.size() == 1 && up.front() == d) {
    Rational q = 0, p = 0;
    for (std::size_t i = 0; i < lat.steps.size(); ++i) {
      if (lat.steps[i] == -d) q = lat.prob(i);
      if (lat.steps[i] == d) p = lat.prob(i);
    }
    V.rho_ = q / p;
    V.rho_.canonicalize();
    return V;
  }
  throw UnsupportedModeError("exact renewal function for upward-drifting laws only covers +-d steps");
}

RenewalFunction RenewalFunction::estimate(const IncrementLaw& law, const MonteCarloBudget& budget, double x_max,
                                          std::size_t step_cap) {
  if (!(x_max > 0.0)) throw ParameterError("x_max must be positive");
  if (budget.samples < 2) throw ParameterError("renewal estimate needs at least 2 chains");
  RenewalFunction V(law, Mode::montecarlo);
  V.x_max_ = x_max;
  V.chains_.resize(budget.samples);
  std::vector<char> truncated(budget.samples, 0);
  const StepSampler sampler(law);
  parallel_for(budget.samples, [&](std::size_t c) {
    Rng rng = trial_rng(budget.seed, c);
    double s = 0.0, min = 0.0;
    auto& heights = V.chains_[c];
    std::size_t steps = 0;
    for (;;) {
      if (steps++ >= step_cap) {
        truncated[c] = 1;
        break;
      }
      s += sampler(rng);
      if (s < min) {
        min = s;
        if (-s > x_max) break;
        heights.push_back(-s);
      }
    }
  });
  for (std::size_t c = 0; c < budget.samples; ++c) {
    V.truncated_ += static_cast<std::size_t>(truncated[c]);
    V.sorted_heights_.insert(V.sorted_heights_.end(), V.chains_[c].begin(), V.chains_[c].end());
  }
  std::sort(V.sorted_heights_.begin(), V.sorted_heights_.end());
  V.slope_ = (V(x_max) - V(x_max / 2.0)) / (x_max / 2.0);
  return V;
}

double RenewalFunction::operator()(double x) const {
  if (x < 0.0) return 0.0;
  if (mode_ == Mode::exact) {
    const double j = std::floor(x / to_double(span_) + 1e-9);
    if (rho_ == 0) return 1.0;
    if (rho_ == 1) return j + 1.0;
    const double r = to_double(rho_);
    return (1.0 - std::pow(r, j + 1.0)) / (1.0 - r);
  }
  if (x > x_max_) return (*this)(x_max_) + slope_ * (x - x_max_);
  auto it = std::upper_bound(sorted_heights_.begin(), sorted_heights_.end(), x);
  return 1.0 + static_cast<double>(it - sorted_heights_.begin()) / static_cast<double>(chains_.size());
}

double RenewalFunction::std_error(double x) const {
  if (mode_ == Mode::exact || x < 0.0) return 0.0;
  const double xc = std::min(x, x_max_);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& chain : chains_) {
    double c = static_cast<double>(std::upper_bound(chain.begin(), chain.end(), xc) - chain.begin());
    sum += c;
    sum2 += c * c;
  }
  const double N = static_cast<double>(chains_.size());
  const double var = (sum2 - sum * sum / N) / (N - 1.0);
  double se = std::sqrt(std::max(var, 0.0) / N);
  if (x > x_max_) se *= x / x_max_;
  return se;
}

Rational RenewalFunction::exact_at(const Rational& x) const {
  if (mode_ != Mode::exact) throw UnsupportedModeError("renewal function is estimated");
  if (sgn(x) < 0) return Rational(0);
  Rational q = x / span_;
  BigInt j;
  mpz_fdiv_q(j.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (rho_ == 0) return Rational(1);
  if (rho_ == 1) return Rational(j + 1);
  Rational power = 1;
  for (BigInt i = 0; i <= j; ++i) power *= rho_;
  Rational v = (1 - power) / (1 - rho_);
  v.canonicalize();
  return v;
}

std::vector<KernelEntry> h_kernel_row(const Rational& x, const RenewalFunction& V) {
  if (!V.law().is_lattice()) throw UnsupportedModeError("exact kernel rows need a lattice law");
  const Rational vx = V.exact_at(x);
  if (vx == 0) throw DegenerateStateError("V(" + to_string(x) + ") = 0");
  const auto& lat = V.law().as_lattice();
  std::vector<KernelEntry> row;
  for (std::size_t i = 0; i < lat.support.size(); ++i) {
    if (lat.probs[i] == 0) continue;
    Rational y = x + lat.support[i];
    if (sgn(y) < 0) continue;
    Rational p = V.exact_at(y) / vx * lat.probs[i];
    p.canonicalize();
    if (p != 0) row.push_back({y, p});
  }
  std::sort(row.begin(), row.end(), [](const KernelEntry& a, const KernelEntry& b) { return a.to < b.to; });
  return row;
}

double h_kernel_step(double x, const RenewalFunction& V, Rng& rng) {
  const IncrementLaw& law = V.law();
  const double vx = V(x);
  if (!(vx > 0.0)) throw DegenerateStateError("V(x) = 0 at x = " + std::to_string(x));
  if (const auto* lat = std::get_if<LatticeLaw>(&law.kind())) {
    double total = 0.0;
    double w[16];
    const std::size_t m = lat->support.size();
    std::vector<double> big;
    double* weights = w;
    if (m > 16) {
      big.resize(m);
      weights = big.data();
    }
    for (std::size_t i = 0; i < m; ++i) {
      double y = x + to_double(lat->support[i]);
      weights[i] = y >= 0.0 ? V(y) * to_double(lat->probs[i]) : 0.0;
      total += weights[i];
    }
    if (!(total > 0.0)) throw DegenerateStateError("h-kernel row has no mass");
    double u = uniform_open(rng) * total;
    for (std::size_t i = 0; i < m; ++i) {
      if (u < weights[i]) return x + to_double(lat->support[i]);
      u -= weights[i];
    }
    for (std::size_t i = m; i-- > 0;)
      if (weights[i] > 0.0) return x + to_double(lat->support[i]);
  }
  const auto* g = std::get_if<GaussianLaw>(&law.kind());
  if (!g) throw UnsupportedModeError("h-kernel sampling covers lattice and Gaussian laws");
  // envelope V(x + b) with P(Y > b) below 1e-13
  const double b = g->mean + 7.5 * g->stddev;
  const double envelope = V(x + std::max(b, 0.0));
  std::normal_distribution<double> normal(g->mean, g->stddev);
  for (std::size_t attempt = 0; attempt < 10000000; ++attempt) {
    double y = x + normal(rng);
    if (y < 0.0) continue;
    if (uniform_open(rng) * envelope <= V(y)) return y;
  }
  throw BudgetError("h-kernel rejection exhausted its attempts");
}

namespace {

bool is_epoch(double v, double level, LadderVariant variant) {
  return variant == LadderVariant::strict ? v > level : v >= level;
}

}  // namespace

WalkPath conditioned_walk(const IncrementLaw& law, std::size_t length, Rng& rng,
                          const ConditionedWalkOptions& options, const RenewalFunction* V) {
  if (length < 1) throw ParameterError("length must be at least 1");
  if (options.method == ConditioningMethod::h_chain) {
    if (!V) throw ParameterError("the h-chain method needs a renewal function");
    std::vector<double> v(length + 1, 0.0);
    for (std::size_t i = 1; i <= length; ++i) v[i] = h_kernel_step(v[i - 1], *V, rng);
    return WalkPath(std::move(v));
  }
  const StepSampler sampler(law);
  std::vector<double> raw{0.0};
  raw.reserve(2 * length + 2);
  double level = 0.0;
  for (std::size_t i = 1;; ++i) {
    if (i > options.step_cap) throw BudgetError("excursion straddling the window did not finish within the step cap");
    raw.push_back(raw.back() + sampler(rng));
    if (is_epoch(raw.back(), level, options.variant)) {
      level = raw.back();
      if (i >= length) break;
    }
  }
  return tanaka_doney(WalkPath(std::move(raw)), options.variant).prefix(length);
}

WalkPath conditioned_walk(const IncrementLaw& law, std::size_t length, std::uint64_t seed,
                          const ConditionedWalkOptions& options, const RenewalFunction* V) {
  Rng rng = make_rng(seed);
  return conditioned_walk(law, length, rng, options, V);
}

WalkPath meander_rejection(const IncrementLaw& law, std::size_t k, Rng& rng, std::size_t max_attempts) {
  if (k < 1) throw ParameterError("meander length must be at least 1");
  const StepSampler sampler(law);
  std::vector<double> v(k + 1, 0.0);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    bool ok = true;
    for (std::size_t i = 1; i <= k; ++i) {
      v[i] = v[i - 1] + sampler(rng);
      if (v[i] < 0.0) {
        ok = false;
        break;
      }
    }
    if (ok) return WalkPath(v);
  }
  throw BudgetError("meander rejection accepted nothing in " + std::to_string(max_attempts) + " attempts", 0.0);
}

WeightedPath meander_reweight(const IncrementLaw& law, std::size_t k, Rng& rng, const RenewalFunction& V,
                              double survival) {
  if (!(survival > 0.0)) throw ParameterError("survival probability must be positive");
  ConditionedWalkOptions opt;
  opt.method = ConditioningMethod::h_chain;
  WalkPath p = conditioned_walk(law, k, rng, opt, &V);
  double w = 1.0 / (survival * V(p[k]));
  return {std::move(p), w};
}

WeightedPath meander_sample(const IncrementLaw& law, std::size_t k, std::uint64_t seed, MeanderMethod method,
                            std::size_t max_attempts) {
  Rng rng = make_rng(seed);
  if (method == MeanderMethod::rejection) return {meander_rejection(law, k, rng, max_attempts), 1.0};
  if (law.is_lattice()) {
    auto V = RenewalFunction::exact(law);
    auto surv = survival_probability(law, k, Mode::exact);
    return meander_reweight(law, k, rng, V, surv.value);
  }
  if (!law.is_symmetric()) throw UnsupportedModeError("reweighted meanders need a lattice or symmetric diffuse law");
  const double sd = std::sqrt(std::max(law.variance(), 1.0));
  auto V = RenewalFunction::estimate(law, {10000, mix64(seed)}, 10.0 * sd * std::sqrt(static_cast<double>(k)));
  auto surv = survival_probability(law, k, Mode::exact);
  return meander_reweight(law, k, rng, V, surv.value);
}

std::vector<Rational> survival_table(const IncrementLaw& law, std::size_t K) {
  std::vector<Rational> out{Rational(1)};
  if (!law.is_lattice()) {
    if (!(law.is_diffuse() && law.is_symmetric()))
      throw UnsupportedModeError("exact survival needs a lattice or symmetric diffuse law");
    Rational r = 1;
    for (std::size_t k = 1; k <= K; ++k) {
      r *= ratio(BigInt(2 * k - 1), BigInt(2 * k));
      out.push_back(r);
    }
    return out;
  }
  const IntegerLattice lat = IntegerLattice::from(law.as_lattice());
  std::vector<BigInt> row{BigInt(1)};
  BigInt den = 1;
  BigInt w;
  for (std::size_t k = 1; k <= K; ++k) {
    const long reach = static_cast<long>(row.size()) - 1 + std::max(0L, lat.max_step());
    std::vector<BigInt> next(static_cast<std::size_t>(reach + 1));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0) continue;
      for (std::size_t s = 0; s < lat.steps.size(); ++s) {
        if (lat.weights[s] == 0) continue;
        long to = static_cast<long>(i) + lat.steps[s];
        if (to < 0) continue;
        if (lat.weights[s] == 1) {
          next[static_cast<std::size_t>(to)] += row[i];
        } else {
          w = row[i] * lat.weights[s];
          next[static_cast<std::size_t>(to)] += w;
        }
      }
    }
    while (next.size() > 1 && next.back() == 0) next.pop_back();
    row.swap(next);
    den *= lat.denominator;
    BigInt mass = 0;
    for (const auto& x : row) mass += x;
    Rational p(mass, den);
    p.canonicalize();
    out.push_back(p);
  }
  return out;
}

SurvivalEstimate survival_probability(const IncrementLaw& law, std::size_t k, Mode mode,
                                      const MonteCarloBudget& budget) {
  SurvivalEstimate est;
  if (mode == Mode::exact) {
    auto table = survival_table(law, k);
    est.exact = table[k];
    est.value = to_double(table[k]);
    return est;
  }
  if (budget.samples < 1) throw ParameterError("Monte Carlo survival needs samples");
  const StepSampler sampler(law);
  std::vector<char> alive(budget.samples, 0);
  parallel_for(budget.samples, [&](std::size_t t) {
    Rng rng = trial_rng(budget.seed, t);
    double s = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      s += sampler(rng);
      if (s < 0.0) return;
    }
    alive[t] = 1;
  });
  double hits = 0.0;
  for (char a : alive) hits += a;
  const double N = static_cast<double>(budget.samples);
  est.value = hits / N;
  est.error_bound = 3.0 * std::max(std::sqrt(est.value * (1.0 - est.value) / N), 1.0 / N);
  return est;
}

double LawFamily::scale(std::size_t n) const { return spread * std::pow(static_cast<double>(n), scale_exponent); }

nlohmann::json HarmonicReport::to_json() const {
  nlohmann::json j{{"degenerate", degenerate}, {"diagnostic", diagnostic}, {"x_grid", x_grid}};
  auto& rs = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"n", r.n},
                  {"a_hat_n", r.a_hat},
                  {"P_Cn", r.survival},
                  {"product", r.product},
                  {"V_at_x", r.v_at_x},
                  {"product_change", r.product_change}});
  return j;
}

std::string HarmonicReport::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "n,a_hat_n,P_Cn,product";
  for (double x : x_grid) out << ",V_at_x=" << x;
  out << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.a_hat << ',' << r.survival << ',' << r.product;
    for (double v : r.v_at_x) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

namespace {

bool is_fair_coin(const IncrementLaw& law) {
  if (!law.is_lattice() || !law.is_symmetric()) return false;
  const auto& lat = law.as_lattice();
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < lat.support.size(); ++i)
    if (lat.probs[i] != 0) {
      ++nonzero;
      if (lat.support[i] == 0) return false;
    }
  return nonzero == 2;
}

}  // namespace

HarmonicReport harmonic_limits(const LawFamily& family, const std::vector<double>& x_grid,
                               const std::vector<std::size_t>& n_grid, const MonteCarloBudget& budget,
                               const PositivityRule* rule) {
  HarmonicReport report;
  report.x_grid = x_grid;
  const IncrementLaw& law = family.base;
  if (!law.has_negative_steps()) {
    report.degenerate = true;
    report.diagnostic = "law has no negative steps: no descending ladder epochs, the limit is not regular for (-inf,0)";
    return report;
  }
  if (!law.has_positive_steps()) {
    report.degenerate = true;
    report.diagnostic = "law has no positive steps: the walk cannot stay nonnegative";
    return report;
  }
  if (n_grid.empty()) throw ParameterError("empty n-grid");
  const std::size_t n_max = *std::max_element(n_grid.begin(), n_grid.end());

  std::vector<double> survival;
  bool exact_survival = law.is_lattice() || (law.is_diffuse() && law.is_symmetric());
  if (exact_survival) {
    auto table = survival_table(law, n_max);
    for (const auto& r : table) survival.push_back(to_double(r));
  }

  std::optional<RenewalFunction> V;
  try {
    V = RenewalFunction::exact(law);
  } catch (const UnsupportedModeError&) {
    double x_top = 1.0;
    for (double x : x_grid) x_top = std::max(x_top, x);
    V = RenewalFunction::estimate(law, budget, 1.1 * x_top * family.scale(n_max));
  }

  PositivityRule negative;
  if (rule) {
    negative = *rule;
  } else if (is_fair_coin(law)) {
    negative = fair_coin_rule();
  } else if (law.is_diffuse() && law.is_symmetric()) {
    negative = symmetric_diffuse_rule();
  }

  for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
    const std::size_t n = n_grid[idx];
    HarmonicRow row;
    row.n = n;
    if (negative) {
      row.a_hat = norming_constant(negative, n, 1e-10);
    } else {
      const std::size_t K = norming_truncation(n, 1e-4);
      auto probs = positivity_probabilities(law, K, Mode::montecarlo, budget, Sign::negative);
      row.a_hat = norming_constant(probs, n, 1e-4);
    }
    row.survival = exact_survival ? survival[n] : survival_probability(law, n, Mode::montecarlo, budget).value;
    row.product = row.a_hat * row.survival;
    for (double x : x_grid) row.v_at_x.push_back(row.survival * (*V)(x * family.scale(n)));
    if (!report.rows.empty()) {
      double prev = report.rows.back().product;
      row.product_change = std::fabs(row.product - prev) / prev;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace fluct
