#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ranknorm/recursive.hpp"

namespace ranknorm::experiments {

// Invoked once per finished grid point / instance with a short human-readable
// tag. May be called from worker threads; callers serialize their own sink.
using ProgressFn = std::function<void(const std::string&)>;

// Maps a quantile q in (0,1] to the 1-based component index ceil(q*n),
// with a tiny guard against floating noise in the product.
int quantile_index(double q, int n);

// Deterministic per-instance seed split: H(master, n, bits(rho), instance).
std::uint64_t instance_seed(std::uint64_t master, int n, double rho, int instance);

// ---------------------------------------------------------------------------
// Convergence study: conditional SDs of selected quantile components of the
// standard structure across dimensions and correlation levels.

struct ConvergenceConfig {
    std::vector<int> n_values{5, 15, 25, 75};
    std::vector<double> rho_values{0.0, 0.25, 0.50, 0.75};
    std::vector<double> quantiles{0.25, 0.50, 0.75, 1.00};
    QuadratureSpec quadrature;

    void validate() const;
};

struct ConvergenceRow {
    int n = 0;
    double rho = 0.0;
    double quantile = 0.0;
    int index = 0;  // 1-based component index ceil(q*n)
    double sd = 0.0;
};

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config, int workers = 1,
                                           const ProgressFn& progress = nullptr);

// ---------------------------------------------------------------------------
// Reinforcement study: conditional SD of the median component when the prior
// mean is the equi-spaced vector scaled to signed length r.

struct ReinforcementConfig {
    std::vector<int> n_values{5, 75};
    std::vector<double> rho_values{0.0, 0.5};
    std::vector<double> r_values = default_r_values();
    double quantile = 0.5;
    QuadratureSpec quadrature;

    // 21 equi-spaced reinforcement indices on [-2, 2].
    static std::vector<double> default_r_values();
    void validate() const;
};

struct ReinforcementRow {
    int n = 0;
    double rho = 0.0;
    double r = 0.0;
    double sd = 0.0;
};

// Prior mean vector r * nu / ||nu||_2 with nu_i = -1 + 2(i-1)/(n-1);
// increasing for r > 0 (reinforcing), decreasing for r < 0 (opposing).
// Throws std::domain_error for n < 2.
std::vector<double> reinforcement_mu(int n, double r);

std::vector<ReinforcementRow> run_reinforcement(const ReinforcementConfig& config,
                                                int workers = 1,
                                                const ProgressFn& progress = nullptr);

// ---------------------------------------------------------------------------
// Portfolio simulation: per instance, draw priors, a covariance, a realized
// return vector; build portfolios from the prior mean, the realized mean and
// the rank-conditioned mean; score each by certainty equivalent return.

struct SimulationConfig {
    std::vector<int> n_values{5, 15, 25, 75};
    std::vector<double> rho_values{0.0, 0.25, 0.50, 0.75};
    int instances = 100;
    double sigma_mu = 2.5e-7;        // SD of the prior means
    double sigma2_big_sigma = 1e-3;  // variance scale of the covariance diagonal
    double tau = 0.1;                // covariance scaling for the return draw
    double gamma = 4.0;              // risk aversion
    std::uint64_t master_seed = 0;
    QuadratureSpec quadrature;

    void validate() const;
};

struct InstanceResult {
    int n = 0;
    double rho = 0.0;
    int instance = 0;
    std::uint64_t seed = 0;
    double ceq_prior = 0.0;
    double ceq_clairvoyance = 0.0;
    double ceq_rank = 0.0;
    double runtime_prior_ms = 0.0;
    double runtime_clairvoyance_ms = 0.0;
    double runtime_rank_ms = 0.0;
};

struct FailureRecord {
    int n = 0;
    double rho = 0.0;
    int instance = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct AggregateRow {
    int n = 0;
    double rho = 0.0;
    double mean_prior = 0.0;
    double mean_clair = 0.0;
    double mean_rank = 0.0;
    double pct_diff_clair_rank = 0.0;  // 100*(mean_clair - mean_rank)/|mean_clair|
    int n_completed = 0;               // instances the averages cover
};

struct PortfolioStudyResult {
    std::vector<InstanceResult> instances;
    std::vector<FailureRecord> failures;
    std::vector<AggregateRow> aggregate;
};

// One simulated portfolio selection instance; deterministic given the seed.
InstanceResult simulate_instance(int n, double rho, const SimulationConfig& hyper, int instance,
                                 std::uint64_t seed);

// Full grid; instance jobs may run on `workers` threads but the output is
// independent of the worker count (results land in preassigned slots and are
// reduced in a fixed order). Failed instances are recorded, never dropped.
PortfolioStudyResult run_portfolio_study(const SimulationConfig& config, int workers = 1,
                                         const ProgressFn& progress = nullptr);

}  // namespace ranknorm::experiments
