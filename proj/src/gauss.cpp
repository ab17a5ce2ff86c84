#include "ranknorm/gauss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ranknorm::gauss {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
constexpr double kSqrt2 = std::numbers::sqrt2;

// Rational approximation of the probit function (Acklam), |rel err| < 1.2e-9.
// Used only as the starting point for Newton refinement below.
double quantile_initial_guess(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Quantile for p in (0, 0.5]; the tail where Phi(x) = 0.5*erfc(-x/sqrt(2))
// stays relatively accurate, so the Newton residual Phi(x) - p is computed
// without cancellation.
double quantile_lower(double p) {
    double x = quantile_initial_guess(p);
    for (int it = 0; it < 3; ++it) {
        const double err = std_normal_cdf(x) - p;
        const double dens = std_normal_pdf(x);
        if (dens <= 0.0) break;  // deep denormal tail; the guess stands
        x -= err / dens;
    }
    return x;
}

}  // namespace

double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("std_normal_quantile: p must lie in (0,1), got " +
                                std::to_string(p));
    }
    return p <= 0.5 ? quantile_lower(p) : -quantile_lower(1.0 - p);
}

double normal_pdf(double x, double mean, double sd) {
    if (!(sd > 0.0)) {
        throw std::domain_error("normal_pdf: sd must be positive, got " + std::to_string(sd));
    }
    return std_normal_pdf((x - mean) / sd) / sd;
}

}  // namespace ranknorm::gauss
