#include "fluct/limit_laws.hpp"

#include <cmath>
#include <numbers>

#include "fluct/error.hpp"

namespace fluct {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

double kappa_bm(double alpha, double beta) {
  require(alpha >= 0.0 && beta >= 0.0, "kappa_bm needs alpha, beta >= 0");
  return std::sqrt(alpha) + beta / std::numbers::sqrt2;
}

double levy_half_cdf(double s) {
  require(s >= 0.0, "levy_half_cdf needs s >= 0");
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return 1.0;
  return std::erfc(1.0 / (2.0 * std::sqrt(s)));
}

double levy_half_density(double s) {
  require(s >= 0.0, "levy_half_density needs s >= 0");
  if (s == 0.0) return 0.0;
  return std::exp(-1.0 / (4.0 * s)) / (2.0 * std::sqrt(std::numbers::pi) * s * std::sqrt(s));
}

double rayleigh_cdf(double x) {
  require(x >= 0.0, "rayleigh_cdf needs x >= 0");
  return -std::expm1(-0.5 * x * x);
}

double half_stable_tau_tail(double c) {
  require(c > 0.0, "half_stable_tau_tail needs c > 0");
  return 1.0 / std::sqrt(std::numbers::pi * c);
}

double h_bm(double x) {
  require(x >= 0.0, "h_bm needs x >= 0");
  return std::numbers::sqrt2 * x;
}

double delta_h_bm() { return 1.0 / std::numbers::sqrt2; }

double pi_h_bm(double a, double b) {
  require(0.0 < a && a < b, "pi_h_bm needs 0 < a < b");
  return 0.0;
}

double half_stable_interval_ratio(double a, double b, double a2, double b2) {
  require(0.0 < a && a < b && 0.0 < a2 && a2 < b2, "intervals must satisfy 0 < a < b");
  return (1.0 / std::sqrt(a) - 1.0 / std::sqrt(b)) / (1.0 / std::sqrt(a2) - 1.0 / std::sqrt(b2));
}

double reference(const std::string& id, const std::vector<double>& args) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw DomainError(id + " takes " + std::to_string(n) + " argument(s)");
  };
  if (id == "kappa_bm") {
    need(2);
    return kappa_bm(args[0], args[1]);
  }
  if (id == "levy_half_cdf") {
    need(1);
    return levy_half_cdf(args[0]);
  }
  if (id == "rayleigh_cdf") {
    need(1);
    return rayleigh_cdf(args[0]);
  }
  if (id == "half_stable_tau_tail") {
    if (args.empty()) return half_stable_tau_tail();
    need(1);
    return half_stable_tau_tail(args[0]);
  }
  if (id == "h_bm") {
    need(1);
    return h_bm(args[0]);
  }
  throw DomainError("unknown reference law '" + id + "'");
}

}  // namespace fluct
