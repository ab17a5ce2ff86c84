#pragma once

#include <cstdint>
#include <vector>

#include "ranknorm/model.hpp"

namespace ranknorm::oracle {

// A Monte Carlo point estimate with its standard error and sampling counts.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long n_accepted = 0;
    long long n_proposed = 0;
};

// Rank-conditioned means and variances estimated by plain rejection
// sampling; the independent ground truth the integration engine is checked
// against.
struct RejectionMoments {
    std::vector<McEstimate> mean;
    std::vector<McEstimate> variance;
    long long n_accepted = 0;
    long long n_proposed = 0;
};

// Samples the one-factor model, keeps draws inside the ranking cone, and
// returns per-component sample means/variances with standard errors (the
// variance SE uses the fourth-central-moment formula). Throws
// InsufficientAcceptanceError if max_proposed is exhausted first.
// Acceptance is ~1/n! for exchangeable models, so keep n <= 8.
RejectionMoments rejection_conditional_moments(const UniformCorrelationModel& model,
                                               const Ranking& ranking, long long target_accepted,
                                               long long max_proposed, std::uint64_t seed);

// Mean and variance of the k-th smallest of n iid N(0,1), by sorting iid
// draws (exchangeability makes rejection unnecessary here).
struct OrderStatMoments {
    McEstimate mean;
    McEstimate variance;
};

OrderStatMoments order_statistic_moments_mc(int n, int k, long long replications,
                                            std::uint64_t seed);

// E[Z_(k:n)] only; convenience wrapper over the above.
McEstimate expected_order_statistic_mc(int n, int k, long long replications, std::uint64_t seed);

// Reference values for the same moments through an entirely different route:
// one-dimensional quadrature of the order-statistic density
//   C * Phi(z)^{k-1} * (1-Phi(z))^{n-k} * phi(z),
// evaluated in log space. Accurate to ~1e-10; used to validate the MC oracle.
struct OrderStatExact {
    double mean = 0.0;
    double variance = 0.0;
};

OrderStatExact order_statistic_moments_exact(int n, int k);

// Two competing closed forms circulate for the large-n limit of the
// conditional mean of the p-quantile component: (1-rho)*PhiInv(p) (the
// "statement" variant) and sqrt(1-rho)*PhiInv(p) (the "proof" variant).
// Both are provided unreconciled; the acceptance suite decides empirically
// which one the engine tracks. Throws std::domain_error for p outside (0,1).
enum class LimitVariant { statement, proof };

double limit_mean(double p, double rho, LimitVariant variant);

// Limiting conditional variance of the p-quantile component: rho itself.
double limit_variance(double rho);

}  // namespace ranknorm::oracle
