#include "fluct/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fluct/error.hpp"

namespace fluct {

Sample::Sample(std::vector<double> v, std::vector<double> w) : values(std::move(v)), weights(std::move(w)) {}

double Sample::total_weight() const {
  if (!weighted()) return static_cast<double>(values.size());
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double Sample::effective_size() const {
  if (!weighted()) return static_cast<double>(values.size());
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s * s / s2;
}

void Sample::validate() const {
  if (values.empty()) throw InputError("empty sample");
  if (weighted()) {
    if (weights.size() != values.size()) throw InputError("weights and values differ in size");
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be finite and nonnegative");
    if (!(total_weight() > 0.0)) throw InputError("weights must have positive sum");
  }
  for (double v : values)
    if (std::isnan(v)) throw InputError("NaN in sample");
}

Ecdf::Ecdf(const Sample& sample) {
  sample.validate();
  std::vector<std::size_t> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample.values[a] < sample.values[b]; });
  const double total = sample.total_weight();
  double acc = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t j = order[i];
    acc += sample.weighted() ? sample.weights[j] : 1.0;
    if (!points_.empty() && points_.back() == sample.values[j]) {
      cumulative_.back() = acc / total;
    } else {
      points_.push_back(sample.values[j]);
      cumulative_.push_back(acc / total);
    }
  }
  cumulative_.back() = 1.0;
}

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), x);
  if (it == points_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double Ecdf::left(double x) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x);
  if (it == points_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

std::string Ecdf::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "x,F\n";
  for (std::size_t i = 0; i < points_.size(); ++i) out << points_[i] << ',' << cumulative_[i] << '\n';
  return out.str();
}

double dkw_epsilon(double n, double delta) {
  if (!(n > 0.0)) throw InputError("DKW epsilon needs a positive sample size");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0,1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * n));
}

nlohmann::json KsReport::to_json() const {
  return {{"D", statistic},   {"n1", n1},         {"n2", n2},
          {"n_eff", effective_n}, {"delta", delta}, {"dkw_epsilon", dkw_epsilon}};
}

KsReport ks_statistic(const Sample& a, const Sample& b, double delta) {
  const Ecdf fa(a), fb(b);
  std::vector<double> pts = fa.points();
  pts.insert(pts.end(), fb.points().begin(), fb.points().end());
  std::sort(pts.begin(), pts.end());
  double d = 0.0;
  for (double x : pts) d = std::max(d, std::fabs(fa(x) - fb(x)));
  KsReport r;
  r.statistic = d;
  r.n1 = static_cast<double>(a.size());
  r.n2 = static_cast<double>(b.size());
  const double e1 = a.effective_size(), e2 = b.effective_size();
  r.effective_n = e1 * e2 / (e1 + e2);
  r.delta = delta;
  r.dkw_epsilon = dkw_epsilon(r.effective_n, delta);
  return r;
}

KsReport ks_statistic(const Sample& a, const std::function<double(double)>& cdf, double delta) {
  const Ecdf fa(a);
  double d = 0.0;
  for (double x : fa.points()) {
    const double below = std::nextafter(x, -std::numeric_limits<double>::infinity());
    d = std::max(d, std::fabs(fa(x) - cdf(x)));
    d = std::max(d, std::fabs(fa.left(x) - cdf(below)));
  }
  KsReport r;
  r.statistic = d;
  r.n1 = static_cast<double>(a.size());
  r.effective_n = a.effective_size();
  r.delta = delta;
  r.dkw_epsilon = dkw_epsilon(r.effective_n, delta);
  return r;
}

double wasserstein1(const Sample& a, const Sample& b) {
  const Ecdf fa(a), fb(b);
  std::vector<double> pts = fa.points();
  pts.insert(pts.end(), fb.points().begin(), fb.points().end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double w = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) w += std::fabs(fa(pts[i]) - fb(pts[i])) * (pts[i + 1] - pts[i]);
  return w;
}

nlohmann::json TrendReport::to_json() const { return {{"violations", violations}, {"ratio", ratio}}; }

TrendReport trend_test(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw InputError("trend test needs at least 3 points");
  TrendReport r;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (series[i].second >= series[i - 1].second) ++r.violations;
  r.ratio = series.back().second / series.front().second;
  return r;
}

Moments moments(const std::vector<double>& values) {
  if (values.empty()) throw InputError("moments of an empty sample");
  Moments m;
  const double n = static_cast<double>(values.size());
  long double s = 0.0L;
  for (double v : values) s += v;
  m.mean = static_cast<double>(s / n);
  long double ss = 0.0L;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stddev = values.size() > 1 ? std::sqrt(static_cast<double>(ss / (n - 1.0))) : 0.0;
  m.std_error = m.stddev / std::sqrt(n);
  return m;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace fluct
