#pragma once

#include <Eigen/Dense>

namespace ranknorm::portfolio {

// Mean-variance inputs: expected returns, SPD covariance of future returns,
// risk aversion. The only constraint is the budget sum(w) = 1.
struct PortfolioProblem {
    Eigen::VectorXd mu_hat;
    Eigen::MatrixXd big_xi;
    double gamma = 0.0;
};

struct PortfolioSolution {
    Eigen::VectorXd weights;
    double lagrange_multiplier = 0.0;
};

// Closed-form KKT solution of  max_{sum w = 1}  mu'w - (gamma/2) w'Xi w:
//   w = (1/gamma) Xi^{-1} (mu - lambda 1),
//   lambda = (1'Xi^{-1}mu - gamma) / (1'Xi^{-1}1).
// One SPD factorization, two triangular solves. Throws
// SingularCovarianceError when the factorization fails and
// std::invalid_argument for asymmetric Xi or gamma <= 0.
PortfolioSolution solve_mean_variance(const PortfolioProblem& problem);

// Certainty equivalent return of weights w against the realized mean vector
// x and the true covariance:  x'w - (gamma/2) w'Xi w.
double certainty_equivalent(const Eigen::VectorXd& weights, const Eigen::VectorXd& x_true,
                            const Eigen::MatrixXd& big_xi, double gamma);

}  // namespace ranknorm::portfolio
