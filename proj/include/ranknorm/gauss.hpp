#pragma once

// Scalar normal-distribution special functions. Everything downstream
// (quadrature engine, Monte Carlo oracles, limit formulas) inherits its
// accuracy from these four functions, so they are kept near machine
// precision: the CDF goes through erfc and the quantile is a rational
// initial guess polished by Newton steps on that CDF.

namespace ranknorm::gauss {

// Density of N(0,1); requires finite x.
double std_normal_pdf(double x);

// Distribution function of N(0,1) via 0.5*erfc(-x/sqrt(2)); relatively
// accurate in both tails.
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0,1). Throws std::domain_error outside the
// open interval; out-of-domain probabilities are never clamped.
double std_normal_quantile(double p);

// Density of N(mean, sd^2). Throws std::domain_error if sd <= 0.
double normal_pdf(double x, double mean, double sd);

}  // namespace ranknorm::gauss
