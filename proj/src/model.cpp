#include "ranknorm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ranknorm {

UniformCorrelationModel::UniformCorrelationModel(std::vector<double> mu_in,
                                                 std::vector<double> sigma_in, double rho_in)
    : mu(std::move(mu_in)), sigma(std::move(sigma_in)), rho(rho_in) {
    if (mu.size() < 2) {
        throw std::invalid_argument("UniformCorrelationModel: need n >= 2 components");
    }
    if (sigma.size() != mu.size()) {
        throw std::invalid_argument("UniformCorrelationModel: mu and sigma sizes differ");
    }
    for (double s : sigma) {
        if (!(s > 0.0)) {
            throw std::invalid_argument("UniformCorrelationModel: sigma entries must be positive");
        }
    }
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("UniformCorrelationModel: rho must lie in [0,1], got " +
                                    std::to_string(rho));
    }
}

UniformCorrelationModel UniformCorrelationModel::standard(std::size_t n, double rho) {
    return UniformCorrelationModel(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0), rho);
}

bool UniformCorrelationModel::is_standard() const {
    for (std::size_t i = 0; i < n(); ++i) {
        if (mu[i] != 0.0 || sigma[i] != 1.0) return false;
    }
    return true;
}

Ranking::Ranking(std::vector<std::size_t> order_in) : order(std::move(order_in)) {
    std::vector<bool> seen(order.size(), false);
    for (std::size_t idx : order) {
        if (idx >= order.size() || seen[idx]) {
            throw std::invalid_argument("Ranking: order is not a permutation of {0,...,n-1}");
        }
        seen[idx] = true;
    }
}

Ranking Ranking::identity(std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return Ranking(std::move(order));
}

bool Ranking::is_identity() const {
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k] != k) return false;
    }
    return true;
}

Ranking Ranking::inverse() const {
    std::vector<std::size_t> inv(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        inv[order[k]] = k;
    }
    return Ranking(std::move(inv));
}

bool Ranking::satisfied_by(const std::vector<double>& x) const {
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        if (!(x[order[k]] <= x[order[k + 1]])) return false;
    }
    return true;
}

Eigen::MatrixXd covariance_matrix(const UniformCorrelationModel& model) {
    const auto n = static_cast<Eigen::Index>(model.n());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = model.sigma[static_cast<std::size_t>(i)] *
                             model.sigma[static_cast<std::size_t>(j)];
            cov(i, j) = (i == j) ? s : model.rho * s;
        }
    }
    return cov;
}

std::vector<double> one_factor_sample(const UniformCorrelationModel& model, Rng& rng) {
    const double sqrt_rho = std::sqrt(model.rho);
    const double sqrt_1mrho = std::sqrt(1.0 - model.rho);
    const double m = rng.normal();
    std::vector<double> x(model.n());
    for (std::size_t i = 0; i < model.n(); ++i) {
        const double z = rng.normal();
        x[i] = model.mu[i] + model.sigma[i] * (sqrt_rho * m + sqrt_1mrho * z);
    }
    return x;
}

Ranking extract_ranking(const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return a < b;  // deterministic tie-break
    });
    return Ranking(std::move(order));
}

UniformCorrelationModel apply_ranking(const UniformCorrelationModel& model,
                                      const Ranking& ranking) {
    if (ranking.n() != model.n()) {
        throw std::invalid_argument("apply_ranking: ranking size " + std::to_string(ranking.n()) +
                                    " does not match model size " + std::to_string(model.n()));
    }
    std::vector<double> mu(model.n());
    std::vector<double> sigma(model.n());
    for (std::size_t k = 0; k < model.n(); ++k) {
        mu[k] = model.mu[ranking.order[k]];
        sigma[k] = model.sigma[ranking.order[k]];
    }
    return UniformCorrelationModel(std::move(mu), std::move(sigma), model.rho);
}

}  // namespace ranknorm
