#include "ranknorm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "ranknorm/errors.hpp"
#include "ranknorm/portfolio.hpp"

namespace ranknorm::experiments {

namespace {

// Static striped parallel-for: job i runs on worker i % workers, results are
// written to slot i by the job itself, so the outcome cannot depend on the
// schedule. The first exception thrown by any job is rethrown after join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += nw) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

int quantile_index(double q, int n) {
    if (!(q > 0.0 && q <= 1.0)) {
        throw std::domain_error("quantile_index: q must lie in (0,1], got " + std::to_string(q));
    }
    int idx = static_cast<int>(std::ceil(q * n - 1e-9));
    idx = std::max(1, std::min(n, idx));
    return idx;
}

std::uint64_t instance_seed(std::uint64_t master, int n, double rho, int instance) {
    return derive_seed(master, {static_cast<std::uint64_t>(n), double_bits(rho),
                                static_cast<std::uint64_t>(instance)});
}

// ---------------------------------------------------------------------------

void ConvergenceConfig::validate() const {
    quadrature.validate();
    if (n_values.empty() || rho_values.empty() || quantiles.empty()) {
        throw std::invalid_argument("ConvergenceConfig: empty sweep lists");
    }
    for (int n : n_values) {
        if (n < 2) throw std::invalid_argument("ConvergenceConfig: n values must be >= 2");
    }
    for (double q : quantiles) {
        if (!(q > 0.0 && q <= 1.0)) {
            throw std::invalid_argument("ConvergenceConfig: quantiles must lie in (0,1]");
        }
    }
}

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& config, int workers,
                                            const ProgressFn& progress) {
    config.validate();
    struct GridPoint {
        int n;
        double rho;
    };
    std::vector<GridPoint> grid;
    for (int n : config.n_values) {
        for (double rho : config.rho_values) grid.push_back({n, rho});
    }

    std::vector<ConditionalMoments> moments(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t g) {
        const auto [n, rho] = grid[g];
        try {
            const auto model = UniformCorrelationModel::standard(static_cast<std::size_t>(n), rho);
            moments[g] = conditional_moments(model, Ranking::identity(model.n()),
                                             config.quadrature);
            if (progress) {
                progress("convergence n=" + std::to_string(n) + " rho=" + std::to_string(rho));
            }
        } catch (const std::exception& e) {
            throw NumericalFailureError("convergence grid point (n=" + std::to_string(n) +
                                        ", rho=" + std::to_string(rho) + "): " + e.what());
        }
    });

    std::vector<ConvergenceRow> rows;
    rows.reserve(grid.size() * config.quantiles.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (double q : config.quantiles) {
            const int idx = quantile_index(q, grid[g].n);
            rows.push_back({grid[g].n, grid[g].rho, q, idx,
                            moments[g].sd[static_cast<std::size_t>(idx - 1)]});
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------

std::vector<double> ReinforcementConfig::default_r_values() {
    std::vector<double> r;
    r.reserve(21);
    for (int i = 0; i <= 20; ++i) r.push_back(-2.0 + 0.2 * i);
    return r;
}

void ReinforcementConfig::validate() const {
    quadrature.validate();
    if (n_values.empty() || rho_values.empty() || r_values.empty()) {
        throw std::invalid_argument("ReinforcementConfig: empty sweep lists");
    }
    for (int n : n_values) {
        if (n < 2) throw std::invalid_argument("ReinforcementConfig: n values must be >= 2");
    }
    if (!(quantile > 0.0 && quantile <= 1.0)) {
        throw std::invalid_argument("ReinforcementConfig: quantile must lie in (0,1]");
    }
}

std::vector<double> reinforcement_mu(int n, double r) {
    if (n < 2) throw std::domain_error("reinforcement_mu: need n >= 2");
    std::vector<double> nu(static_cast<std::size_t>(n));
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        nu[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (n - 1);
        norm_sq += nu[static_cast<std::size_t>(i)] * nu[static_cast<std::size_t>(i)];
    }
    const double scale = r / std::sqrt(norm_sq);
    for (double& v : nu) v *= scale;
    return nu;
}

std::vector<ReinforcementRow> run_reinforcement(const ReinforcementConfig& config, int workers,
                                                const ProgressFn& progress) {
    config.validate();
    std::vector<ReinforcementRow> rows;
    for (int n : config.n_values) {
        for (double rho : config.rho_values) {
            for (double r : config.r_values) rows.push_back({n, rho, r, 0.0});
        }
    }

    parallel_for(rows.size(), workers, [&](std::size_t g) {
        ReinforcementRow& row = rows[g];
        try {
            const UniformCorrelationModel model(
                reinforcement_mu(row.n, row.r),
                std::vector<double>(static_cast<std::size_t>(row.n), 1.0), row.rho);
            const auto cm =
                conditional_moments(model, Ranking::identity(model.n()), config.quadrature);
            const int idx = quantile_index(config.quantile, row.n);
            row.sd = cm.sd[static_cast<std::size_t>(idx - 1)];
            if (progress) {
                progress("reinforce n=" + std::to_string(row.n) + " rho=" + std::to_string(row.rho) +
                         " r=" + std::to_string(row.r));
            }
        } catch (const std::exception& e) {
            throw NumericalFailureError("reinforcement grid point (n=" + std::to_string(row.n) +
                                        ", rho=" + std::to_string(row.rho) +
                                        ", r=" + std::to_string(row.r) + "): " + e.what());
        }
    });
    return rows;
}

// ---------------------------------------------------------------------------

void SimulationConfig::validate() const {
    quadrature.validate();
    if (n_values.empty() || rho_values.empty()) {
        throw std::invalid_argument("SimulationConfig: empty sweep lists");
    }
    for (int n : n_values) {
        if (n < 2) throw std::invalid_argument("SimulationConfig: n values must be >= 2");
    }
    if (instances < 1) throw std::invalid_argument("SimulationConfig: instances must be >= 1");
    if (!(sigma_mu > 0.0 && sigma2_big_sigma > 0.0 && tau > 0.0 && gamma > 0.0)) {
        throw std::invalid_argument("SimulationConfig: scale parameters must be positive");
    }
}

InstanceResult simulate_instance(int n, double rho, const SimulationConfig& hyper, int instance,
                                 std::uint64_t seed) {
    Rng rng(seed);
    const auto un = static_cast<std::size_t>(n);

    // Step 1: prior means, iid N(0, sigma_mu^2).
    std::vector<double> mu(un);
    for (double& v : mu) v = hyper.sigma_mu * rng.normal();

    // Step 2: Xi = S D S with S_ii = sqrt(s_i sigma2) and D the uniform
    // correlation matrix.
    std::vector<double> diag_s(un);
    for (double& v : diag_s) v = std::sqrt(rng.chi_squared(n) * hyper.sigma2_big_sigma);
    Eigen::MatrixXd xi(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s = diag_s[static_cast<std::size_t>(i)] *
                             diag_s[static_cast<std::size_t>(j)];
            xi(i, j) = (i == j) ? s : rho * s;
        }
    }

    // Step 3: X ~ N(mu, tau*Xi). tau*Xi keeps the uniform correlation rho with
    // marginal SDs sqrt(tau)*S_ii, so the one-factor transform applies directly.
    std::vector<double> sigma(un);
    const double sqrt_tau = std::sqrt(hyper.tau);
    for (std::size_t i = 0; i < un; ++i) sigma[i] = sqrt_tau * diag_s[i];
    const UniformCorrelationModel return_model(mu, sigma, rho);
    const std::vector<double> x = one_factor_sample(return_model, rng);

    // Step 4: the qualitative input is the realized ranking.
    const Ranking ranking = extract_ranking(x);

    // Step 5: three estimates of the return vector, one portfolio each.
    const Eigen::VectorXd x_vec = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    const auto solve_and_score = [&](const Eigen::VectorXd& mu_hat) {
        const auto solution = portfolio::solve_mean_variance({mu_hat, xi, hyper.gamma});
        return portfolio::certainty_equivalent(solution.weights, x_vec, xi, hyper.gamma);
    };

    InstanceResult result;
    result.n = n;
    result.rho = rho;
    result.instance = instance;
    result.seed = seed;

    auto t0 = std::chrono::steady_clock::now();
    result.ceq_prior = solve_and_score(Eigen::Map<const Eigen::VectorXd>(mu.data(), n));
    result.runtime_prior_ms = elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    result.ceq_clairvoyance = solve_and_score(x_vec);
    result.runtime_clairvoyance_ms = elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    const auto cm = conditional_moments(return_model, ranking, hyper.quadrature);
    result.ceq_rank = solve_and_score(Eigen::Map<const Eigen::VectorXd>(cm.mean.data(), n));
    result.runtime_rank_ms = elapsed_ms(t0);

    return result;
}

PortfolioStudyResult run_portfolio_study(const SimulationConfig& config, int workers,
                                         const ProgressFn& progress) {
    config.validate();
    struct Job {
        int n;
        double rho;
        int instance;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (int n : config.n_values) {
        for (double rho : config.rho_values) {
            for (int k = 0; k < config.instances; ++k) {
                jobs.push_back({n, rho, k, instance_seed(config.master_seed, n, rho, k)});
            }
        }
    }

    std::vector<std::optional<InstanceResult>> slots(jobs.size());
    std::vector<std::optional<std::string>> errors(jobs.size());
    parallel_for(jobs.size(), workers, [&](std::size_t g) {
        const Job& job = jobs[g];
        try {
            slots[g] = simulate_instance(job.n, job.rho, config, job.instance, job.seed);
        } catch (const std::exception& e) {
            errors[g] = e.what();
        }
        if (progress) {
            progress("portfolio n=" + std::to_string(job.n) + " rho=" + std::to_string(job.rho) +
                     " instance=" + std::to_string(job.instance) +
                     (errors[g] ? " FAILED" : ""));
        }
    });

    PortfolioStudyResult out;
    std::size_t g = 0;
    for (int n : config.n_values) {
        for (double rho : config.rho_values) {
            AggregateRow agg;
            agg.n = n;
            agg.rho = rho;
            for (int k = 0; k < config.instances; ++k, ++g) {
                if (slots[g]) {
                    const InstanceResult& r = *slots[g];
                    out.instances.push_back(r);
                    agg.mean_prior += r.ceq_prior;
                    agg.mean_clair += r.ceq_clairvoyance;
                    agg.mean_rank += r.ceq_rank;
                    ++agg.n_completed;
                } else {
                    out.failures.push_back({n, rho, k, jobs[g].seed, *errors[g]});
                }
            }
            if (agg.n_completed > 0) {
                agg.mean_prior /= agg.n_completed;
                agg.mean_clair /= agg.n_completed;
                agg.mean_rank /= agg.n_completed;
                agg.pct_diff_clair_rank =
                    100.0 * (agg.mean_clair - agg.mean_rank) / std::abs(agg.mean_clair);
            }
            out.aggregate.push_back(agg);
        }
    }
    return out;
}

}  // namespace ranknorm::experiments
