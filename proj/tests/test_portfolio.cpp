#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ranknorm/errors.hpp"
#include "ranknorm/portfolio.hpp"
#include "ranknorm/rng.hpp"

using namespace ranknorm;
using namespace ranknorm::portfolio;

namespace {

PortfolioProblem random_problem(Rng& rng, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    }
    Eigen::VectorXd mu(n);
    for (int i = 0; i < n; ++i) mu(i) = rng.normal();
    return {mu, a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n), 4.0};
}

}  // namespace

TEST_CASE("symmetric problem splits the budget evenly") {
    const auto s = solve_mean_variance(
        {Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4), 4.0});
    for (int i = 0; i < 4; ++i) CHECK(s.weights(i) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.lagrange_multiplier == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("hand-computed KKT example") {
    Eigen::VectorXd mu(2);
    mu << 0.1, 0.3;
    const auto s = solve_mean_variance({mu, Eigen::MatrixXd::Identity(2, 2), 4.0});
    CHECK(s.weights(0) == doctest::Approx(0.475).epsilon(1e-12));
    CHECK(s.weights(1) == doctest::Approx(0.525).epsilon(1e-12));
    CHECK(s.lagrange_multiplier == doctest::Approx(-1.8).epsilon(1e-12));
}

TEST_CASE("budget and stationarity on random problems") {
    Rng rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const auto problem = random_problem(rng, n);
        const auto s = solve_mean_variance(problem);

        CHECK(std::abs(s.weights.sum() - 1.0) < 1e-10);
        const Eigen::VectorXd residual = problem.mu_hat - problem.gamma * problem.big_xi * s.weights -
                                         s.lagrange_multiplier * Eigen::VectorXd::Ones(n);
        CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("parallel shift invariance") {
    Rng rng(808);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const auto problem = random_problem(rng, n);
        const auto base = solve_mean_variance(problem);
        for (double c : {-5.0, 0.1, 100.0}) {
            PortfolioProblem shifted = problem;
            shifted.mu_hat.array() += c;
            const auto moved = solve_mean_variance(shifted);
            worst = std::max(worst, (moved.weights - base.weights).cwiseAbs().maxCoeff());
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("certainty equivalent") {
    Eigen::VectorXd w(2), x(2);
    w << 0.475, 0.525;
    x << 0.1, 0.3;
    CHECK(certainty_equivalent(w, x, Eigen::MatrixXd::Identity(2, 2), 4.0) ==
          doctest::Approx(-0.7975).epsilon(1e-12));

    Eigen::VectorXd single(2), ret(2);
    single << 1.0, 0.0;
    ret << 0.37, -5.0;
    CHECK(certainty_equivalent(single, ret, Eigen::MatrixXd::Identity(2, 2), 4.0) ==
          doctest::Approx(0.37 - 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(certainty_equivalent(w, Eigen::VectorXd::Zero(3),
                                         Eigen::MatrixXd::Identity(2, 2), 4.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(certainty_equivalent(w, x, Eigen::MatrixXd::Identity(2, 2), 0.0),
                    std::invalid_argument);
}

TEST_CASE("clairvoyance dominates any tested feasible portfolio") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 6);
        const auto problem = random_problem(rng, n);
        // the realized return IS the estimate here
        const auto star = solve_mean_variance(problem);
        const double best = certainty_equivalent(star.weights, problem.mu_hat, problem.big_xi,
                                                 problem.gamma);

        Eigen::VectorXd other(n);
        for (int i = 0; i < n; ++i) other(i) = rng.normal();
        other.array() += (1.0 - other.sum()) / n;  // project onto the budget
        const double alt =
            certainty_equivalent(other, problem.mu_hat, problem.big_xi, problem.gamma);
        CHECK(best >= alt - 1e-10);
    }
}

TEST_CASE("error paths") {
    Eigen::VectorXd mu(2);
    mu << 0.1, 0.2;

    // rank-one covariance is singular
    const Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(2, 2);
    CHECK_THROWS_AS(solve_mean_variance({mu, singular, 4.0}), SingularCovarianceError);

    const Eigen::MatrixXd negative = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(solve_mean_variance({mu, negative, 4.0}), SingularCovarianceError);

    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
    asym(0, 1) = 0.3;
    CHECK_THROWS_AS(solve_mean_variance({mu, asym, 4.0}), std::invalid_argument);

    CHECK_THROWS_AS(solve_mean_variance({mu, Eigen::MatrixXd::Identity(2, 2), 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_mean_variance({mu, Eigen::MatrixXd::Identity(3, 3), 4.0}),
                    std::invalid_argument);
}
