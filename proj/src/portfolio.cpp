#include "ranknorm/portfolio.hpp"

#include <stdexcept>
#include <string>

#include "ranknorm/errors.hpp"

namespace ranknorm::portfolio {

namespace {
constexpr double kSymmetryTol = 1e-12;
}

PortfolioSolution solve_mean_variance(const PortfolioProblem& problem) {
    const Eigen::Index n = problem.mu_hat.size();
    if (problem.big_xi.rows() != n || problem.big_xi.cols() != n) {
        throw std::invalid_argument("solve_mean_variance: covariance dimensions do not match mu");
    }
    if (!(problem.gamma > 0.0)) {
        throw std::invalid_argument("solve_mean_variance: gamma must be positive");
    }
    const double asym = (problem.big_xi - problem.big_xi.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol) {
        throw std::invalid_argument("solve_mean_variance: covariance asymmetric by " +
                                    std::to_string(asym));
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(problem.big_xi);
    if (llt.info() != Eigen::Success) {
        throw SingularCovarianceError(
            "solve_mean_variance: covariance is not positive definite (LLT failed)");
    }

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd xi_inv_mu = llt.solve(problem.mu_hat);
    const Eigen::VectorXd xi_inv_one = llt.solve(ones);

    const double lambda = (ones.dot(xi_inv_mu) - problem.gamma) / ones.dot(xi_inv_one);
    PortfolioSolution solution;
    solution.lagrange_multiplier = lambda;
    solution.weights = (xi_inv_mu - lambda * xi_inv_one) / problem.gamma;
    return solution;
}

double certainty_equivalent(const Eigen::VectorXd& weights, const Eigen::VectorXd& x_true,
                            const Eigen::MatrixXd& big_xi, double gamma) {
    const Eigen::Index n = weights.size();
    if (x_true.size() != n || big_xi.rows() != n || big_xi.cols() != n) {
        throw std::invalid_argument("certainty_equivalent: dimension mismatch");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("certainty_equivalent: gamma must be positive");
    }
    return x_true.dot(weights) - 0.5 * gamma * weights.dot(big_xi * weights);
}

}  // namespace ranknorm::portfolio
