#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ranknorm/gauss.hpp"

using namespace ranknorm::gauss;

namespace {

// Independent quantile oracle: plain bisection on the CDF.
double quantile_by_bisection(double p) {
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std_normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("standard normal pdf") {
    CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(std_normal_pdf(1.7) == std_normal_pdf(-1.7));
    // direct evaluation of the closed form at x = 3
    CHECK(std_normal_pdf(3.0) == doctest::Approx(0.004431848411938007).epsilon(1e-12));
    CHECK(std_normal_pdf(10.0) > 0.0);
}

TEST_CASE("standard normal cdf") {
    CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std_normal_cdf(1.645) == doctest::Approx(0.95).epsilon(2e-5));

    // far-left tail: below 1e-15 and consistent with the phi(8)/8 bound
    const double left = std_normal_cdf(-8.0);
    CHECK(left > 0.0);
    CHECK(left < 1e-15);
    CHECK(left <= std_normal_pdf(8.0) / 8.0);

    double prev = 0.0;
    for (double x = -10.0; x <= 10.0; x += 0.125) {
        const double c = std_normal_cdf(x);
        CHECK(c >= prev);
        CHECK(std_normal_cdf(x) + std_normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
        prev = c;
    }
}

TEST_CASE("pdf integrates to one") {
    // trapezoid over [-10, 10]
    const int n = 800001;
    const double h = 20.0 / (n - 1);
    double sum = 0.5 * (std_normal_pdf(-10.0) + std_normal_pdf(10.0));
    for (int i = 1; i + 1 < n; ++i) sum += std_normal_pdf(-10.0 + i * h);
    CHECK(sum * h == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("standard normal quantile") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std_normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-9));
    CHECK(std_normal_quantile(0.75) ==
          doctest::Approx(quantile_by_bisection(0.75)).epsilon(1e-10));

    CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(-0.1), std::domain_error);
    CHECK_THROWS_AS(std_normal_quantile(1.1), std::domain_error);
}

TEST_CASE("quantile round trip and antisymmetry") {
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-10);
        CHECK(std::abs(std_normal_quantile(p) + std_normal_quantile(1.0 - p)) <= 1e-12);
    }
    // deep tails still round-trip in relative terms
    for (double p : {1e-12, 1e-8, 1e-4}) {
        CHECK(std_normal_cdf(std_normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("general normal pdf") {
    CHECK(normal_pdf(0.0, 0.0, 1.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(normal_pdf(2.0, 2.0, 5.0) == doctest::Approx(0.07978845608028654).epsilon(1e-12));
    CHECK(normal_pdf(1.0, 0.0, 2.0) == doctest::Approx(0.17603266338214976).epsilon(1e-12));
    CHECK_THROWS_AS(normal_pdf(0.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(normal_pdf(0.0, 0.0, -1.0), std::domain_error);
}
