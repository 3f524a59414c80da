#include "fluct/certify.hpp"

#include <atomic>
#include <cmath>
#include <map>

#include "fluct/conditioning.hpp"
#include "fluct/error.hpp"
#include "fluct/oracle.hpp"
#include "fluct/parallel.hpp"
#include "fluct/scaling.hpp"
#include "fluct/transforms.hpp"

namespace fluct {

nlohmann::json Certificate::to_json() const {
  return {{"name", name},
          {"pass", pass},
          {"checks", checks},
          {"violations", violations},
          {"max_tv", to_string(max_tv)},
          {"max_residual", max_residual},
          {"cases", cases}};
}

std::vector<IncrementLaw> certification_laws() {
  return {IncrementLaw::fair_coin(), IncrementLaw::biased_coin(Rational(3, 4)), IncrementLaw::uniform_three()};
}

namespace {

const char* variant_name(LadderVariant v) { return v == LadderVariant::strict ? "strict" : "weak"; }

Outcome encode_prefix(const WalkPath& path, std::size_t last) {
  Outcome o(last + 1);
  for (std::size_t i = 0; i <= last; ++i) o[i] = std::lround(path[i]);
  return o;
}

void record_tv(Certificate& c, const Rational& tv, nlohmann::json entry) {
  ++c.checks;
  entry["tv"] = to_string(tv);
  if (tv > c.max_tv) c.max_tv = tv;
  if (tv != 0) {
    ++c.violations;
    c.pass = false;
  }
  c.cases.push_back(std::move(entry));
}

}  // namespace

Certificate certify_fristedt(const std::vector<IncrementLaw>& laws, const std::vector<double>& alphas,
                             const std::vector<double>& betas, std::size_t K, double bound_cap) {
  Certificate c;
  c.name = "fristedt";
  for (const auto& law : laws)
    for (double a : alphas)
      for (double b : betas) {
        auto r = fristedt_residual(law, a, b, K);
        ++c.checks;
        bool ok = r.residual <= r.tail_bound && r.tail_bound <= bound_cap;
        if (!ok) {
          ++c.violations;
          c.pass = false;
        }
        c.max_residual = std::max(c.max_residual, r.residual);
        auto j = r.to_json();
        j["law"] = law.description();
        j["pass"] = ok;
        c.cases.push_back(std::move(j));
      }
  return c;
}

Certificate certify_time_reversal(const std::vector<IncrementLaw>& laws, std::size_t m_max,
                                  const std::vector<LadderVariant>& variants) {
  Certificate c;
  c.name = "time_reversal";
  std::size_t record_mismatch = 0;
  for (const auto& law : laws)
    for (LadderVariant variant : variants)
      for (std::size_t m = 1; m <= m_max; ++m) {
        std::vector<ExactDistribution> reversed(m + 1), stopped(m + 1);
        ExactDistribution last_max, stopped_last;
        enumerate_paths(law, m, [&](const Outcome&, const WalkPath& S, const Rational& p) {
          const auto ladder = ladder_sequence(S, Direction::ascending, variant);
          const WalkPath up = tanaka_doney(S, variant);
          const auto records = future_min_records(up.prefix(ladder.epochs.back()), variant);
          if (records.size() != ladder.count()) ++record_mismatch;
          for (std::size_t k = 1; k <= ladder.count(); ++k) {
            if (k > records.size() || records[k - 1] != ladder.epochs[k]) ++record_mismatch;
            reversed[k].add(encode_path(reverse_at_ladder(S, k, variant)), p);
            stopped[k].add(encode_prefix(up, ladder.epochs[k]), p);
          }
          last_max.add(encode_path(reverse_at_last_max(S, m, variant)), p);
          stopped_last.add(encode_prefix(up, ladder.epochs.back()), p);
        });
        for (std::size_t k = 1; k <= m; ++k) {
          if (reversed[k].size() == 0 && stopped[k].size() == 0) continue;
          record_tv(c, total_variation(reversed[k], stopped[k]),
                    {{"part", 1}, {"law", law.description()}, {"variant", variant_name(variant)}, {"m", m}, {"k", k},
                     {"mass", to_string(reversed[k].total_mass())}});
        }
        record_tv(c, total_variation(last_max, stopped_last),
                  {{"part", 2}, {"law", law.description()}, {"variant", variant_name(variant)}, {"m", m}});
      }
  if (record_mismatch > 0) {
    c.pass = false;
    c.violations += record_mismatch;
  }
  c.cases.push_back({{"future_min_record_mismatches", record_mismatch}});
  return c;
}

Certificate certify_idloc(std::size_t m_max, std::size_t gaussian_paths, std::size_t gaussian_length,
                          std::uint64_t seed) {
  Certificate c;
  c.name = "idloc";
  auto violations_on = [](const WalkPath& S) {
    const auto ladder = ladder_sequence(S, Direction::ascending, LadderVariant::weak);
    const auto fm = future_min_local_time(tanaka_doney(S, LadderVariant::weak));
    const auto lt = local_time_verbatim(S);
    std::size_t bad = 0;
    for (std::size_t j = 0; j < ladder.epochs.back(); ++j)
      if (fm.counts[j] != lt.counts[j]) ++bad;
    return bad;
  };
  const IncrementLaw coin = IncrementLaw::fair_coin();
  std::size_t lattice_paths = 0, lattice_bad = 0;
  for (std::size_t m = 1; m <= m_max; ++m)
    enumerate_paths(coin, m, [&](const Outcome&, const WalkPath& S, const Rational&) {
      ++lattice_paths;
      if (violations_on(S) > 0) ++lattice_bad;
    });
  std::vector<std::size_t> bad(gaussian_paths, 0);
  const IncrementLaw gauss = IncrementLaw::gaussian(0.0, 1.0);
  parallel_for(gaussian_paths, [&](std::size_t t) {
    bad[t] = violations_on(sample_walk(gauss, gaussian_length, derive_seed(seed, t))) > 0 ? 1 : 0;
  });
  std::size_t gaussian_bad = 0;
  for (auto b : bad) gaussian_bad += b;
  c.checks = lattice_paths + gaussian_paths;
  c.violations = lattice_bad + gaussian_bad;
  c.pass = c.violations == 0;
  c.cases.push_back({{"law", "fair +-1"}, {"paths", lattice_paths}, {"max_length", m_max}, {"violations", lattice_bad}});
  c.cases.push_back({{"law", "gaussian"},
                     {"paths", gaussian_paths},
                     {"length", gaussian_length},
                     {"violations", gaussian_bad},
                     {"seed", seed}});
  return c;
}

namespace {

// Exact rows in integer lattice units, cached per state.
class KernelCache {
 public:
  explicit KernelCache(const IncrementLaw& law)
      : V_(RenewalFunction::exact(law)), unit_(IntegerLattice::from(law.as_lattice()).unit) {}

  const std::vector<std::pair<long, Rational>>& row(long x) {
    auto it = rows_.find(x);
    if (it != rows_.end()) return it->second;
    std::vector<std::pair<long, Rational>> r;
    for (const auto& e : h_kernel_row(Rational(x) * unit_, V_)) {
      Rational y = e.to / unit_;
      r.emplace_back(y.get_num().get_si(), e.prob);
    }
    return rows_.emplace(x, std::move(r)).first->second;
  }

  const RenewalFunction& V() const { return V_; }
  const Rational& unit() const { return unit_; }

 private:
  RenewalFunction V_;
  Rational unit_;
  std::map<long, std::vector<std::pair<long, Rational>>> rows_;
};

void h_chain_law(KernelCache& cache, std::size_t k, Outcome& path, const Rational& p, ExactDistribution& out) {
  if (path.size() == k + 1) {
    out.add(path, p);
    return;
  }
  const auto row = cache.row(path.back());
  for (const auto& [y, q] : row) {
    path.push_back(y);
    h_chain_law(cache, k, path, p * q, out);
    path.pop_back();
  }
}

}  // namespace

Certificate certify_meander_ac(const std::vector<IncrementLaw>& laws, std::size_t k_max) {
  Certificate c;
  c.name = "meander_ac";
  for (const auto& law : laws) {
    KernelCache cache(law);
    const auto survival = survival_table(law, k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
      ExactDistribution chain;
      Outcome start{0};
      h_chain_law(cache, k, start, Rational(1), chain);
      std::size_t mismatches = 0, paths = 0;
      Rational meander_mass = 0;
      enumerate_paths(law, k, [&](const Outcome&, const WalkPath& S, const Rational& p) {
        bool survives = true;
        for (std::size_t i = 0; i <= k; ++i) survives = survives && S[i] >= 0.0;
        const Outcome key = encode_path(S);
        const Rational hp = chain.prob(key);
        ++paths;
        if (!survives) {
          if (hp != 0) ++mismatches;
          return;
        }
        const Rational meander = p / survival[k];
        meander_mass += meander;
        const Rational rhs = hp / (survival[k] * cache.V().exact_at(Rational(key.back()) * cache.unit()));
        if (meander != rhs) ++mismatches;
      });
      c.checks += paths;
      bool ok = mismatches == 0 && chain.is_probability() && meander_mass == 1;
      if (!ok) {
        c.pass = false;
        c.violations += mismatches + 1;
      }
      c.cases.push_back({{"law", law.description()},
                         {"k", k},
                         {"paths", paths},
                         {"mismatches", mismatches},
                         {"P_Ck", to_string(survival[k])},
                         {"h_chain_mass", to_string(chain.total_mass())}});
    }
  }
  return c;
}

Certificate certify_h_kernel(const std::vector<IncrementLaw>& laws, std::size_t k_max) {
  Certificate c;
  c.name = "h_kernel";
  for (const auto& law : laws) {
    KernelCache cache(law);
    const IntegerLattice lat = IntegerLattice::from(law.as_lattice());
    const Rational span_units = cache.V().span() / lat.unit;
    const long d = span_units.get_num().get_si();
    if (lat.max_step() != d) throw UnsupportedModeError("the exact Tanaka-Doney law needs upward skip-free steps");
    const Rational rho = cache.V().ratio();
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < lat.steps.size(); ++i)
      if (lat.weights[i] != 0) live.push_back(i);

    for (std::size_t k = 1; k <= k_max; ++k) {
      ExactDistribution chain;
      Outcome start{0};
      h_chain_law(cache, k, start, Rational(1), chain);

      // Decompose at the last weak ladder epoch t <= k: the path after t is the
      // start of a reversed excursion, which must stay > 0 and later hit 0
      // (probability rho^{z/d} from level z).
      ExactDistribution td;
      for (std::size_t t = 0; t <= k; ++t) {
        std::vector<std::pair<Outcome, Rational>> prefixes;
        if (t == 0) {
          prefixes.push_back({Outcome{0}, Rational(1)});
        } else {
          enumerate_paths(law, t, [&](const Outcome&, const WalkPath& S, const Rational& p) {
            double max = 0.0;
            for (std::size_t i = 0; i < t; ++i) max = std::max(max, S[i]);
            if (S[t] < max) return;
            prefixes.push_back({encode_path(tanaka_doney(S, LadderVariant::weak)), p});
          });
        }
        const std::size_t r = k - t;
        for (const auto& [prefix, p] : prefixes) {
          const long h = prefix.back();
          Outcome path = prefix;
          // depth-first over the reversed-excursion prefix
          std::function<void(std::size_t, long, const Rational&)> extend = [&](std::size_t depth, long z,
                                                                               const Rational& q) {
            if (depth == r) {
              Rational hit = 1;
              for (long j = 0; j < z / d; ++j) hit *= rho;
              td.add(path, p * q * hit);
              return;
            }
            for (std::size_t s : live) {
              long z2 = z + lat.steps[s];
              if (z2 <= 0) continue;
              path.push_back(h + z2);
              extend(depth + 1, z2, q * lat.prob(s));
              path.pop_back();
            }
          };
          extend(0, 0, Rational(1));
        }
      }
      record_tv(c, total_variation(chain, td),
                {{"law", law.description()},
                 {"k", k},
                 {"h_chain_mass", to_string(chain.total_mass())},
                 {"td_mass", to_string(td.total_mass())}});
      if (!chain.is_probability() || !td.is_probability()) {
        c.pass = false;
        ++c.violations;
      }
    }
  }
  return c;
}

Certificate certify_reweight_mean(const IncrementLaw& law, std::size_t n, std::size_t samples, std::uint64_t seed) {
  Certificate c;
  c.name = "reweight_mean";
  const auto V = RenewalFunction::exact(law);
  const double survival = survival_probability(law, n, Mode::exact).value;
  std::vector<double> w(samples);
  parallel_for(samples, [&](std::size_t t) {
    Rng rng = trial_rng(seed, t);
    w[t] = meander_reweight(law, n, rng, V, survival).weight;
  });
  double sum = 0.0, sum2 = 0.0;
  for (double x : w) {
    sum += x;
    sum2 += x * x;
  }
  const double N = static_cast<double>(samples);
  const double mean = sum / N;
  const double se = std::sqrt((sum2 / N - mean * mean) / (N - 1.0));
  c.checks = 1;
  c.pass = std::fabs(mean - 1.0) <= 3.0 * se;
  c.violations = c.pass ? 0 : 1;
  c.max_residual = std::fabs(mean - 1.0);
  c.cases.push_back({{"law", law.description()}, {"n", n}, {"samples", samples}, {"seed", seed},
                     {"mean", mean}, {"std_error", se}});
  return c;
}

}  // namespace fluct
