#include "ranknorm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ranknorm/errors.hpp"
#include "ranknorm/gauss.hpp"

namespace ranknorm::oracle {

namespace {

// One-pass central-moment accumulator (Welford/Pebay updates up to M4),
// giving the mean, the unbiased variance and honest standard errors for both.
class MomentAccumulator {
public:
    void add(double x) {
        const double n1 = static_cast<double>(count_);
        ++count_;
        const double n = static_cast<double>(count_);
        const double delta = x - mean_;
        const double delta_n = delta / n;
        const double delta_n2 = delta_n * delta_n;
        const double term1 = delta * delta_n * n1;
        mean_ += delta_n;
        m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ -
               4.0 * delta_n * m3_;
        m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
        m2_ += term1;
    }

    long long count() const { return count_; }
    double mean() const { return mean_; }
    double sample_variance() const { return m2_ / (static_cast<double>(count_) - 1.0); }

    double mean_std_error() const {
        return std::sqrt(sample_variance() / static_cast<double>(count_));
    }

    // SE of the sample variance: sqrt((m4 - s^4 (N-3)/(N-1)) / N).
    double variance_std_error() const {
        const double n = static_cast<double>(count_);
        const double s2 = sample_variance();
        const double mu4 = m4_ / n;
        const double v = (mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n;
        return std::sqrt(std::max(v, 0.0));
    }

private:
    long long count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

}  // namespace

RejectionMoments rejection_conditional_moments(const UniformCorrelationModel& model,
                                               const Ranking& ranking, long long target_accepted,
                                               long long max_proposed, std::uint64_t seed) {
    if (target_accepted < 2) {
        throw std::invalid_argument("rejection_conditional_moments: need target_accepted >= 2");
    }
    if (ranking.n() != model.n()) {
        throw std::invalid_argument("rejection_conditional_moments: ranking/model size mismatch");
    }

    Rng rng(seed);
    const std::size_t n = model.n();
    std::vector<MomentAccumulator> acc(n);

    long long accepted = 0;
    long long proposed = 0;
    while (accepted < target_accepted && proposed < max_proposed) {
        const std::vector<double> x = one_factor_sample(model, rng);
        ++proposed;
        if (!ranking.satisfied_by(x)) continue;
        ++accepted;
        for (std::size_t i = 0; i < n; ++i) acc[i].add(x[i]);
    }

    if (accepted < target_accepted) {
        const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
        throw InsufficientAcceptanceError(
            "rejection sampler accepted " + std::to_string(accepted) + " of " +
                std::to_string(proposed) + " proposals (rate " + std::to_string(rate) +
                "); raise max_proposed or lower target_accepted",
            rate);
    }

    RejectionMoments out;
    out.n_accepted = accepted;
    out.n_proposed = proposed;
    out.mean.resize(n);
    out.variance.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.mean[i] = {acc[i].mean(), acc[i].mean_std_error(), accepted, proposed};
        out.variance[i] = {acc[i].sample_variance(), acc[i].variance_std_error(), accepted,
                           proposed};
    }
    return out;
}

OrderStatMoments order_statistic_moments_mc(int n, int k, long long replications,
                                            std::uint64_t seed) {
    if (n < 1 || k < 1 || k > n) {
        throw std::invalid_argument("order_statistic_moments_mc: need 1 <= k <= n");
    }
    if (replications < 2) {
        throw std::invalid_argument("order_statistic_moments_mc: need replications >= 2");
    }

    Rng rng(seed);
    std::vector<double> draw(static_cast<std::size_t>(n));
    MomentAccumulator acc;
    for (long long rep = 0; rep < replications; ++rep) {
        for (double& z : draw) z = rng.normal();
        auto kth = draw.begin() + (k - 1);
        std::nth_element(draw.begin(), kth, draw.end());
        acc.add(*kth);
    }

    OrderStatMoments out;
    out.mean = {acc.mean(), acc.mean_std_error(), replications, replications};
    out.variance = {acc.sample_variance(), acc.variance_std_error(), replications, replications};
    return out;
}

McEstimate expected_order_statistic_mc(int n, int k, long long replications, std::uint64_t seed) {
    return order_statistic_moments_mc(n, k, replications, seed).mean;
}

OrderStatExact order_statistic_moments_exact(int n, int k) {
    if (n < 1 || k < 1 || k > n) {
        throw std::invalid_argument("order_statistic_moments_exact: need 1 <= k <= n");
    }
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k)) -
                         std::lgamma(static_cast<double>(n - k + 1));

    // Simpson over [-12, 12]; the density decays like a Gaussian power, so the
    // truncation error is far below the quadrature error.
    const int nodes = 6001;
    const double half = 12.0;
    const double dz = 2.0 * half / (nodes - 1);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double z = -half + j * dz;
        const double w = (j == 0 || j == nodes - 1) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const double log_cdf = std::log(gauss::std_normal_cdf(z));
        const double log_sf = std::log(gauss::std_normal_cdf(-z));
        const double log_pdf = -0.5 * z * z - 0.9189385332046727;  // log(1/sqrt(2pi))
        const double f =
            std::exp(log_c + (k - 1) * log_cdf + (n - k) * log_sf + log_pdf) * w * (dz / 3.0);
        m0 += f;
        m1 += f * z;
        m2 += f * z * z;
    }
    m1 /= m0;  // normalize away residual quadrature error in the density mass
    m2 /= m0;
    return {m1, m2 - m1 * m1};
}

double limit_mean(double p, double rho, LimitVariant variant) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("limit_mean: p must lie in (0,1), got " + std::to_string(p));
    }
    const double q = gauss::std_normal_quantile(p);
    return variant == LimitVariant::statement ? (1.0 - rho) * q : std::sqrt(1.0 - rho) * q;
}

double limit_variance(double rho) {
    return rho;
}

}  // namespace ranknorm::oracle
