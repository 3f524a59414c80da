#include "fluct/oracle.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "fluct/error.hpp"
#include "fluct/parallel.hpp"

namespace fluct {

void ExactDistribution::add(const Outcome& outcome, const Rational& mass) {
  if (sgn(mass) == 0) return;
  auto [it, inserted] = atoms_.try_emplace(outcome, mass);
  if (!inserted) it->second += mass;
}

Rational ExactDistribution::prob(const Outcome& outcome) const {
  auto it = atoms_.find(outcome);
  return it == atoms_.end() ? Rational(0) : it->second;
}

Rational ExactDistribution::total_mass() const {
  Rational total = 0;
  for (const auto& [k, p] : atoms_) total += p;
  return total;
}

nlohmann::json ExactDistribution::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, p] : atoms_) {
    std::ostringstream key;
    for (std::size_t i = 0; i < k.size(); ++i) key << (i ? "," : "") << k[i];
    Rational q = p;
    q.canonicalize();
    j[key.str()] = to_string(q);
  }
  return j;
}

namespace {

struct Enumerator {
  IntegerLattice lattice;
  std::vector<std::size_t> live;  // support indices with positive weight
  BigInt denominator_power;
  std::size_t m = 0;

  Enumerator(const IncrementLaw& law, std::size_t length, double budget) {
    if (!law.is_lattice()) throw UnsupportedModeError("enumeration needs a finite-support lattice law");
    lattice = IntegerLattice::from(law.as_lattice());
    for (std::size_t i = 0; i < lattice.steps.size(); ++i)
      if (lattice.weights[i] != 0) live.push_back(i);
    m = length;
    const double count = std::pow(static_cast<double>(live.size()), static_cast<double>(length));
    if (count > budget)
      throw BudgetError("enumeration of " + std::to_string(live.size()) + "^" + std::to_string(length) +
                        " paths exceeds the budget");
    denominator_power = 1;
    for (std::size_t i = 0; i < length; ++i) denominator_power *= lattice.denominator;
  }

  // Paths whose first increment is live[first] (all paths when first is npos).
  void run(std::size_t first, const PathVisitor& visit) const {
    Outcome idx(m);
    std::vector<double> values(m + 1, 0.0);
    std::vector<BigInt> weight(m + 1);
    weight[0] = 1;
    std::size_t start = 0;
    if (first != static_cast<std::size_t>(-1)) {
      if (m == 0) return;
      idx[0] = static_cast<long>(live[first]);
      values[1] = static_cast<double>(lattice.steps[live[first]]);
      weight[1] = lattice.weights[live[first]];
      start = 1;
    }
    recurse(start, idx, values, weight, visit);
  }

  void recurse(std::size_t depth, Outcome& idx, std::vector<double>& values, std::vector<BigInt>& weight,
               const PathVisitor& visit) const {
    if (depth == m) {
      Rational p(weight[m], denominator_power);
      p.canonicalize();
      visit(idx, WalkPath(values), p);
      return;
    }
    for (std::size_t s : live) {
      idx[depth] = static_cast<long>(s);
      values[depth + 1] = values[depth] + static_cast<double>(lattice.steps[s]);
      weight[depth + 1] = weight[depth] * lattice.weights[s];
      recurse(depth + 1, idx, values, weight, visit);
    }
  }
};

}  // namespace

void enumerate_paths(const IncrementLaw& law, std::size_t m, const PathVisitor& visit, double budget) {
  Enumerator e(law, m, budget);
  e.run(static_cast<std::size_t>(-1), visit);
}

ExactDistribution enumerate(const IncrementLaw& law, std::size_t m, double budget) {
  ExactDistribution d;
  enumerate_paths(
      law, m, [&](const Outcome& idx, const WalkPath&, const Rational& p) { d.add(idx, p); }, budget);
  return d;
}

ExactDistribution path_functional_distribution(const IncrementLaw& law, std::size_t m, const PathFunctional& f,
                                               double budget) {
  Enumerator e(law, m, budget);
  ExactDistribution out;
  if (m == 0) {
    e.run(static_cast<std::size_t>(-1), [&](const Outcome&, const WalkPath& path, const Rational& p) {
      if (auto v = f(path)) out.add(*v, p);
    });
    return out;
  }
  std::vector<ExactDistribution> parts(e.live.size());
  parallel_for(e.live.size(), [&](std::size_t first) {
    auto& part = parts[first];
    e.run(first, [&](const Outcome&, const WalkPath& path, const Rational& p) {
      if (auto v = f(path)) part.add(*v, p);
    });
  });
  for (const auto& part : parts)
    for (const auto& [k, p] : part.atoms()) out.add(k, p);
  return out;
}

ExactDistribution functional_distribution(const ExactDistribution& dist,
                                          const std::function<Outcome(const Outcome&)>& f) {
  ExactDistribution out;
  for (const auto& [k, p] : dist.atoms()) out.add(f(k), p);
  return out;
}

Rational total_variation(const ExactDistribution& d1, const ExactDistribution& d2) {
  Rational sum = 0;
  for (const auto& [k, p] : d1.atoms()) sum += abs(p - d2.prob(k));
  for (const auto& [k, p] : d2.atoms())
    if (d1.atoms().find(k) == d1.atoms().end()) sum += abs(p);
  Rational tv = sum / 2;
  tv.canonicalize();
  return tv;
}

Outcome encode_path(const WalkPath& path) {
  Outcome o(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) o[i] = std::lround(path[i]);
  return o;
}

}  // namespace fluct
