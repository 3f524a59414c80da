#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace fluct {

// Values with optional positive weights (empty weights = unit weights).
struct Sample {
  std::vector<double> values;
  std::vector<double> weights;

  Sample() = default;
  explicit Sample(std::vector<double> v, std::vector<double> w = {});

  bool weighted() const { return !weights.empty(); }
  std::size_t size() const { return values.size(); }
  double total_weight() const;
  // Kish effective size (sum w)^2 / sum w^2; plain size when unweighted.
  double effective_size() const;
  void validate() const;  // InputError on empty or malformed samples
};

// Right-continuous (weighted) empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(const Sample& sample);
  double operator()(double x) const;
  // F just below x.
  double left(double x) const;
  const std::vector<double>& points() const { return points_; }
  std::string to_csv() const;

 private:
  std::vector<double> points_;      // distinct sorted values
  std::vector<double> cumulative_;  // F at each point
};

double dkw_epsilon(double n, double delta);

struct KsReport {
  double statistic = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;           // 0 against a CDF
  double effective_n = 0.0;  // drives the DKW epsilon
  double delta = 0.01;
  double dkw_epsilon = 0.0;
  nlohmann::json to_json() const;
};

KsReport ks_statistic(const Sample& a, const Sample& b, double delta = 0.01);
// The reference may have atoms; its left limits are taken just below each breakpoint.
KsReport ks_statistic(const Sample& a, const std::function<double(double)>& cdf, double delta = 0.01);

// Integral of |F1 - F2|.
double wasserstein1(const Sample& a, const Sample& b);

struct TrendReport {
  std::size_t violations = 0;  // consecutive pairs with value_i >= value_{i-1}
  double ratio = 0.0;          // last / first
  nlohmann::json to_json() const;
};

TrendReport trend_test(const std::vector<std::pair<double, double>>& series);

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& values);
double median(std::vector<double> values);

}  // namespace fluct
