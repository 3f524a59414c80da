#pragma once

#include <string>
#include <vector>

namespace fluct {

// Brownian limit, normalized by kappa(1,0) = 1.
double kappa_bm(double alpha, double beta);  // sqrt(alpha) + beta/sqrt(2)
double levy_half_cdf(double s);              // erfc(1/(2 sqrt s)), ladder time tau_1
double levy_half_density(double s);
double rayleigh_cdf(double x);               // 1 - exp(-x^2/2), meander endpoint
double half_stable_tau_tail(double c = 1.0); // pi^tau(c, inf) = 1/sqrt(pi c)
double h_bm(double x);                       // sqrt(2) x
double delta_h_bm();                         // 1/sqrt(2), drift of H
double pi_h_bm(double a, double b);          // 0, H has no jumps

// Normalization-free ratio of 1/2-stable Levy measure masses of (a,b] and (a2,b2].
double half_stable_interval_ratio(double a, double b, double a2, double b2);

// Dispatch by id: kappa_bm, levy_half_cdf, rayleigh_cdf, half_stable_tau_tail, h_bm.
double reference(const std::string& id, const std::vector<double>& args);

}  // namespace fluct
