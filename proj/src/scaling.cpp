#include "fluct/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluct/error.hpp"
#include "fluct/parallel.hpp"

namespace fluct {

PositivitySequence PositivitySequence::from_exact(std::vector<Rational> probs) {
  PositivitySequence seq;
  seq.source_ = Source::exact;
  for (const auto& p : probs) {
    if (sgn(p) < 0 || p > 1) throw ParameterError("positivity probability outside [0,1]");
    seq.values_.push_back(to_double(p));
    seq.errors_.push_back(0.0);
  }
  seq.exact_ = std::move(probs);
  return seq;
}

PositivitySequence PositivitySequence::from_estimates(std::vector<double> probs,
                                                      std::vector<double> std_errors) {
  if (probs.size() != std_errors.size()) throw ParameterError("estimates and standard errors differ in size");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("positivity probability outside [0,1]");
  PositivitySequence seq;
  seq.source_ = Source::estimated;
  seq.values_ = std::move(probs);
  seq.errors_ = std::move(std_errors);
  return seq;
}

double PositivitySequence::at(std::size_t k) const {
  if (k == 0 || k > values_.size()) throw InsufficientDataError("no positivity entry for k=" + std::to_string(k));
  return values_[k - 1];
}

const Rational& PositivitySequence::exact_at(std::size_t k) const {
  if (source_ != Source::exact) throw UnsupportedModeError("positivity sequence is estimated");
  if (k == 0 || k > exact_.size()) throw InsufficientDataError("no positivity entry for k=" + std::to_string(k));
  return exact_[k - 1];
}

double PositivitySequence::std_error(std::size_t k) const {
  if (k == 0 || k > errors_.size()) throw InsufficientDataError("no positivity entry for k=" + std::to_string(k));
  return errors_[k - 1];
}

std::size_t norming_truncation(std::size_t n, double rel_tol) {
  if (n == 0) throw ParameterError("n must be positive");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
  const double nn = static_cast<double>(n);
  auto ok = [&](std::size_t K) {
    double k = static_cast<double>(K);
    return std::log(nn) - k / nn - std::log(k) <= std::log(rel_tol);
  };
  std::size_t hi = 1;
  while (!ok(hi)) hi *= 2;
  std::size_t lo = hi / 2;  // ok(lo) false unless lo == 0
  if (lo == 0) return hi;
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

namespace {

double norming_sum(const std::function<double(std::size_t)>& p, std::size_t n, std::size_t K) {
  const double nn = static_cast<double>(n);
  // smallest terms first
  long double sum = 0.0L;
  for (std::size_t k = K; k >= 1; --k) {
    double kk = static_cast<double>(k);
    sum += static_cast<long double>(std::exp(-kk / nn) / kk * p(k));
  }
  return static_cast<double>(sum);
}

}  // namespace

double norming_constant(const PositivitySequence& probs, std::size_t n, double rel_tol) {
  std::size_t K = norming_truncation(n, rel_tol);
  if (probs.size() < K)
    throw InsufficientDataError("norming constant at n=" + std::to_string(n) + " needs P(S_k>0) up to k=" +
                                std::to_string(K) + ", have " + std::to_string(probs.size()));
  return std::exp(norming_sum([&](std::size_t k) { return probs.at(k); }, n, K));
}

double norming_constant(const PositivityRule& rule, std::size_t n, double rel_tol) {
  std::size_t K = norming_truncation(n, rel_tol);
  return std::exp(norming_sum(rule, n, K));
}

PositivityRule symmetric_diffuse_rule() {
  return [](std::size_t) { return 0.5; };
}

PositivityRule fair_coin_rule() {
  return [](std::size_t k) {
    if (k % 2 == 1) return 0.5;
    double kk = static_cast<double>(k);
    double atom = std::exp(std::lgamma(kk + 1.0) - 2.0 * std::lgamma(kk / 2.0 + 1.0) - kk * std::log(2.0));
    return 0.5 * (1.0 - atom);
  };
}

ConvolutionTable ConvolutionTable::build(const IntegerLattice& lattice, std::size_t K) {
  ConvolutionTable t;
  t.lattice = lattice;
  t.lo = {0};
  t.weights = {{BigInt(1)}};
  t.denominators = {BigInt(1)};
  const long smin = lattice.min_step();
  const long smax = lattice.max_step();
  for (std::size_t k = 1; k <= K; ++k) {
    const auto& prev = t.weights.back();
    long lo = t.lo.back() + smin;
    std::vector<BigInt> row(prev.size() + static_cast<std::size_t>(smax - smin), BigInt(0));
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (prev[i] == 0) continue;
      long pos = t.lo.back() + static_cast<long>(i);
      for (std::size_t s = 0; s < lattice.steps.size(); ++s) {
        if (lattice.weights[s] == 0) continue;
        row[static_cast<std::size_t>(pos + lattice.steps[s] - lo)] += prev[i] * lattice.weights[s];
      }
    }
    t.lo.push_back(lo);
    t.weights.push_back(std::move(row));
    t.denominators.push_back(t.denominators.back() * lattice.denominator);
  }
  return t;
}

PositivitySequence positivity_probabilities(const IncrementLaw& law, std::size_t K, Mode mode,
                                            const MonteCarloBudget& budget, Sign sign) {
  if (mode == Mode::exact) {
    if (!law.is_lattice()) throw UnsupportedModeError("exact positivity probabilities need a lattice law");
    auto table = ConvolutionTable::build(IntegerLattice::from(law.as_lattice()), K);
    std::vector<Rational> probs;
    for (std::size_t k = 1; k <= K; ++k) {
      BigInt mass = 0;
      for (std::size_t i = 0; i < table.weights[k].size(); ++i) {
        long pos = table.lo[k] + static_cast<long>(i);
        if (sign == Sign::positive ? pos > 0 : pos < 0) mass += table.weights[k][i];
      }
      Rational p(mass, table.denominators[k]);
      p.canonicalize();
      probs.push_back(p);
    }
    return PositivitySequence::from_exact(std::move(probs));
  }
  if (budget.samples < 2) throw ParameterError("Monte Carlo positivity needs at least 2 samples");
  StepSampler sampler(law);
  constexpr std::size_t chunk = 1024;
  const std::size_t chunks = (budget.samples + chunk - 1) / chunk;
  std::vector<std::vector<std::size_t>> hits(chunks, std::vector<std::size_t>(K + 1, 0));
  parallel_for(chunks, [&](std::size_t c) {
    auto& h = hits[c];
    for (std::size_t t = c * chunk; t < std::min(budget.samples, (c + 1) * chunk); ++t) {
      Rng rng = trial_rng(budget.seed, t);
      double s = 0.0;
      for (std::size_t k = 1; k <= K; ++k) {
        s += sampler(rng);
        if (sign == Sign::positive ? s > 0.0 : s < 0.0) ++h[k];
      }
    }
  });
  std::vector<double> probs(K), errors(K);
  const double N = static_cast<double>(budget.samples);
  for (std::size_t k = 1; k <= K; ++k) {
    std::size_t total = 0;
    for (const auto& h : hits) total += h[k];
    double p = static_cast<double>(total) / N;
    probs[k - 1] = p;
    errors[k - 1] = std::sqrt(p * (1.0 - p) / N);
  }
  return PositivitySequence::from_estimates(std::move(probs), std::move(errors));
}

nlohmann::json FristedtReport::to_json() const {
  return {{"alpha", alpha},         {"beta", beta},         {"lhs", lhs},
          {"rhs", rhs},             {"residual", residual}, {"tail_bound", tail_bound},
          {"truncation", truncation}};
}

FristedtReport fristedt_residual(const IncrementLaw& law, double alpha, double beta, std::size_t K) {
  if (!law.is_lattice()) throw UnsupportedModeError("Fristedt residual needs a lattice law");
  if (alpha == 0.0) throw UnboundedTailError("alpha = 0 leaves both truncation tails uncontrolled");
  if (!(alpha > 0.0) || !(beta >= 0.0)) throw ParameterError("need alpha > 0 and beta >= 0");
  if (K < 1) throw ParameterError("truncation must be at least 1");
  const IntegerLattice lat = IntegerLattice::from(law.as_lattice());
  const double unit = to_double(lat.unit);
  const long smin = lat.min_step();

  // lhs: walk killed on entering (0, inf); positions -span..0 stored at index pos + span.
  long double transform = 0.0L;
  {
    const long span = static_cast<long>(K) * std::max(0L, -smin);
    std::vector<BigInt> alive(static_cast<std::size_t>(span + 1), BigInt(0));
    alive[static_cast<std::size_t>(span)] = 1;
    BigInt den = 1;
    for (std::size_t t = 1; t <= K; ++t) {
      std::vector<BigInt> next(alive.size(), BigInt(0));
      den *= lat.denominator;
      long double here = 0.0L;
      for (std::size_t i = 0; i < alive.size(); ++i) {
        if (alive[i] == 0) continue;
        long pos = static_cast<long>(i) - span;
        for (std::size_t s = 0; s < lat.steps.size(); ++s) {
          if (lat.weights[s] == 0) continue;
          long to = pos + lat.steps[s];
          BigInt w = alive[i] * lat.weights[s];
          if (to > 0) {
            here += static_cast<long double>(to_double(ratio(w, den))) *
                    std::exp(-static_cast<long double>(beta) * static_cast<long double>(to) * unit);
          } else {
            next[static_cast<std::size_t>(to + span)] += w;
          }
        }
      }
      transform += here * std::exp(-static_cast<long double>(alpha) * static_cast<long double>(t));
      alive.swap(next);
    }
  }

  // rhs: exact law of S_k by convolution.
  long double sum = 0.0L;
  {
    auto table = ConvolutionTable::build(lat, K);
    for (std::size_t k = 1; k <= K; ++k) {
      long double e = 0.0L;
      for (std::size_t i = 0; i < table.weights[k].size(); ++i) {
        long pos = table.lo[k] + static_cast<long>(i);
        if (pos <= 0 || table.weights[k][i] == 0) continue;
        e += static_cast<long double>(to_double(ratio(table.weights[k][i], table.denominators[k]))) *
             std::exp(-static_cast<long double>(beta) * static_cast<long double>(pos) * unit);
      }
      long double kk = static_cast<long double>(k);
      sum += std::exp(-static_cast<long double>(alpha) * kk) / kk * e;
    }
  }

  FristedtReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.truncation = K;
  r.lhs = static_cast<double>(1.0L - transform);
  r.rhs = static_cast<double>(std::exp(-sum));
  r.residual = std::fabs(r.lhs - r.rhs);
  const double k1 = static_cast<double>(K + 1);
  const double lhs_tail = std::exp(-alpha * k1);
  const double rhs_tail = std::exp(-alpha * k1) / (k1 * (1.0 - std::exp(-alpha)));
  const double rounding = 8.0 * k1 * std::numeric_limits<double>::epsilon();
  r.tail_bound = lhs_tail + rhs_tail + rounding;
  return r;
}

}  // namespace fluct
