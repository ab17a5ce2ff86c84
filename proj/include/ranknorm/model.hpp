#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ranknorm/rng.hpp"

namespace ranknorm {

// Multivariate normal with every pairwise correlation equal to one constant
// rho in [0,1]; equivalently the one-factor representation
//   X_i = mu_i + sigma_i * (sqrt(rho) * M + sqrt(1-rho) * Z_i)
// with M, Z_i iid N(0,1).
struct UniformCorrelationModel {
    std::vector<double> mu;
    std::vector<double> sigma;
    double rho = 0.0;

    // Validates n >= 2, sigma_i > 0 and rho in [0,1]; throws std::invalid_argument.
    UniformCorrelationModel(std::vector<double> mu_in, std::vector<double> sigma_in, double rho_in);

    // Zero means, unit marginal SDs.
    static UniformCorrelationModel standard(std::size_t n, double rho);

    std::size_t n() const { return mu.size(); }
    bool is_standard() const;
};

// Complete ordering constraint X_{order[0]} <= X_{order[1]} <= ... <= X_{order[n-1]}
// (indices 0-based). The identity permutation is the canonical ascending cone.
struct Ranking {
    std::vector<std::size_t> order;

    // Validates that order is a permutation of {0,...,n-1}.
    explicit Ranking(std::vector<std::size_t> order_in);

    static Ranking identity(std::size_t n);

    std::size_t n() const { return order.size(); }
    bool is_identity() const;
    Ranking inverse() const;

    // True iff x satisfies the ordering constraint (ties allowed).
    bool satisfied_by(const std::vector<double>& x) const;
};

// Per-component conditional moments given the ranking, in original index
// order, plus log of the normalizing probability B = P(X in R).
struct ConditionalMoments {
    std::vector<double> mean;
    std::vector<double> second_moment;
    std::vector<double> variance;
    std::vector<double> sd;
    double log_prob = 0.0;
};

// Sigma_ii = sigma_i^2, Sigma_ij = rho * sigma_i * sigma_j.
Eigen::MatrixXd covariance_matrix(const UniformCorrelationModel& model);

// Draws M, Z_1..Z_n (in that order) from rng and applies the one-factor
// transform. Deterministic given the generator state.
std::vector<double> one_factor_sample(const UniformCorrelationModel& model, Rng& rng);

// Permutation sorting x ascending; ties broken by lower original index.
Ranking extract_ranking(const std::vector<double>& x);

// Permutes mu and sigma so the canonical cone x_1 <= ... <= x_n on the result
// expresses the original constraint. Valid because the uniform correlation
// structure is permutation-invariant. Throws on dimension mismatch.
UniformCorrelationModel apply_ranking(const UniformCorrelationModel& model, const Ranking& ranking);

}  // namespace ranknorm
