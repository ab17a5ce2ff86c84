// ranknorm command-line interface: conditional-moment estimation for
// equicorrelated normal vectors under complete-ranking constraints, the three
// batch studies, and oracle cross-checks.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ranknorm/config.hpp"
#include "ranknorm/csv.hpp"
#include "ranknorm/errors.hpp"
#include "ranknorm/experiments.hpp"
#include "ranknorm/gauss.hpp"
#include "ranknorm/oracle.hpp"
#include "ranknorm/portfolio.hpp"
#include "ranknorm/recursive.hpp"
#include "ranknorm/version.hpp"

namespace {

using namespace ranknorm;

struct QuadOverrides {
    int m_nodes = 0;
    int x_nodes = 0;
    double m_halfwidth = 0.0;
    double x_padding = 0.0;

    void apply(QuadratureSpec& spec) const {
        if (m_nodes > 0) spec.m_nodes = m_nodes;
        if (x_nodes > 0) spec.x_nodes = x_nodes;
        if (m_halfwidth > 0.0) spec.m_halfwidth = m_halfwidth;
        if (x_padding > 0.0) spec.x_padding = x_padding;
    }
};

void add_quadrature_flags(CLI::App* cmd, QuadOverrides& q) {
    cmd->add_option("--m-nodes", q.m_nodes, "Override outer (factor) grid node count");
    cmd->add_option("--x-nodes", q.x_nodes, "Override inner grid node count");
    cmd->add_option("--m-halfwidth", q.m_halfwidth, "Override outer grid half-width");
    cmd->add_option("--x-padding", q.x_padding, "Override inner grid padding");
}

config::ConfigFile load_config_or_empty(const std::string& path) {
    if (path.empty()) return {};
    return config::ConfigFile::parse_file(path);
}

experiments::ProgressFn stderr_progress() {
    auto mutex = std::make_shared<std::mutex>();
    return [mutex](const std::string& msg) {
        std::lock_guard<std::mutex> lock(*mutex);
        std::cerr << msg << '\n';
    };
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string output_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

// ---------------------------------------------------------------------------

int cmd_estimate(const std::string& config_path, const std::string& ranking_text,
                 const std::string& out_path, const QuadOverrides& quad) {
    const auto cfg = config::ConfigFile::parse_file(config_path);
    const UniformCorrelationModel model = config::load_model(cfg);
    QuadratureSpec spec = config::load_quadrature(cfg, "model");
    quad.apply(spec);

    const Ranking ranking = config::parse_ranking(ranking_text, model.n());
    const ConditionalMoments moments = conditional_moments(model, ranking, spec);

    std::ostringstream csv_text;
    csv::write_estimate(csv_text, moments);
    if (out_path.empty()) {
        std::cout << csv_text.str();
    } else {
        write_file(out_path, csv_text.str());
    }
    return 0;
}

int cmd_convergence(const std::string& config_path, const std::string& out_dir, int workers,
                    const QuadOverrides& quad, bool dump_only) {
    auto cfg = load_config_or_empty(config_path);
    experiments::ConvergenceConfig c = config::load_convergence(cfg);
    quad.apply(c.quadrature);
    if (dump_only) {
        std::cout << config::dump_convergence(c);
        return 0;
    }

    csv::ManifestInfo manifest;
    manifest.subcommand = "convergence";
    manifest.version = kVersion;
    manifest.workers = workers;
    manifest.started_utc = csv::utc_timestamp();

    const auto rows = experiments::run_convergence(c, workers, stderr_progress());

    std::ostringstream csv_text;
    csv::write_convergence(csv_text, rows);
    const std::string csv_path = output_path(out_dir, "convergence.csv");
    write_file(csv_path, csv_text.str());

    manifest.finished_utc = csv::utc_timestamp();
    manifest.outputs = {csv_path};
    manifest.resolved_config = config::dump_convergence(c);
    std::ostringstream mtext;
    csv::write_manifest(mtext, manifest);
    write_file(output_path(out_dir, "convergence_manifest.txt"), mtext.str());
    return 0;
}

int cmd_reinforce(const std::string& config_path, const std::string& out_dir, int workers,
                  const QuadOverrides& quad, bool dump_only) {
    auto cfg = load_config_or_empty(config_path);
    experiments::ReinforcementConfig c = config::load_reinforcement(cfg);
    quad.apply(c.quadrature);
    if (dump_only) {
        std::cout << config::dump_reinforcement(c);
        return 0;
    }

    csv::ManifestInfo manifest;
    manifest.subcommand = "reinforce";
    manifest.version = kVersion;
    manifest.workers = workers;
    manifest.started_utc = csv::utc_timestamp();

    const auto rows = experiments::run_reinforcement(c, workers, stderr_progress());

    std::ostringstream csv_text;
    csv::write_reinforcement(csv_text, rows);
    const std::string csv_path = output_path(out_dir, "reinforce.csv");
    write_file(csv_path, csv_text.str());

    manifest.finished_utc = csv::utc_timestamp();
    manifest.outputs = {csv_path};
    manifest.resolved_config = config::dump_reinforcement(c);
    std::ostringstream mtext;
    csv::write_manifest(mtext, manifest);
    write_file(output_path(out_dir, "reinforce_manifest.txt"), mtext.str());
    return 0;
}

int cmd_portfolio(const std::string& config_path, const std::string& out_dir, int workers,
                  std::uint64_t seed_flag, bool seed_flag_set, const QuadOverrides& quad,
                  bool dump_only) {
    auto cfg = load_config_or_empty(config_path);
    experiments::SimulationConfig c = config::load_simulation(cfg);
    quad.apply(c.quadrature);

    // Every run must be reproducible: seed priority is flag > config > freshly
    // generated (and recorded in the manifest either way).
    bool generated = false;
    if (seed_flag_set) {
        c.master_seed = seed_flag;
    } else if (!cfg.has("portfolio", "master_seed")) {
        std::random_device rd;
        c.master_seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        generated = true;
    }
    if (dump_only) {
        std::cout << config::dump_simulation(c);
        return 0;
    }
    if (generated) {
        std::cerr << "no master_seed given; generated " << c.master_seed << '\n';
    }

    csv::ManifestInfo manifest;
    manifest.subcommand = "portfolio";
    manifest.version = kVersion;
    manifest.workers = workers;
    manifest.master_seed = c.master_seed;
    manifest.started_utc = csv::utc_timestamp();

    const auto study = experiments::run_portfolio_study(c, workers, stderr_progress());

    std::ostringstream instances_text;
    csv::write_portfolio_instances(instances_text, study.instances);
    const std::string instances_path = output_path(out_dir, "portfolio_instances.csv");
    write_file(instances_path, instances_text.str());

    std::ostringstream aggregate_text;
    csv::write_portfolio_aggregate(aggregate_text, study.aggregate);
    const std::string aggregate_path = output_path(out_dir, "portfolio_aggregate.csv");
    write_file(aggregate_path, aggregate_text.str());

    manifest.finished_utc = csv::utc_timestamp();
    manifest.outputs = {instances_path, aggregate_path};
    manifest.resolved_config = config::dump_simulation(c);
    manifest.notes.push_back("completed_instances = " + std::to_string(study.instances.size()));
    manifest.notes.push_back("failed_instances = " + std::to_string(study.failures.size()));
    for (const auto& f : study.failures) {
        std::cerr << "instance failed: n=" << f.n << " rho=" << f.rho
                  << " instance=" << f.instance << " seed=" << f.seed << ": " << f.message << '\n';
        manifest.notes.push_back("failure n=" + std::to_string(f.n) + " instance=" +
                                 std::to_string(f.instance) + ": " + f.message);
    }
    std::ostringstream mtext;
    csv::write_manifest(mtext, manifest);
    write_file(output_path(out_dir, "portfolio_manifest.txt"), mtext.str());

    return study.failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// oracle checks: each prints one machine-readable line per comparison and a
// final verdict line; exit 0 iff the verdict is pass.

struct OracleParams {
    int n = 0;
    int k = 0;
    double rho = 0.5;
    double p = 0.75;
    long long reps = 100000;
    std::uint64_t seed = 20260810;
};

int check_order_stat(const OracleParams& prm) {
    const int n = prm.n > 0 ? prm.n : 100;
    const int k = prm.k > 0 ? prm.k : 96;
    const auto mc = oracle::expected_order_statistic_mc(n, k, prm.reps, prm.seed);
    const auto exact = oracle::order_statistic_moments_exact(n, k);
    const double asymptotic = gauss::std_normal_quantile(static_cast<double>(k) / n);
    const double band = std::max(3.0 * mc.std_error, 1e-3);
    const bool pass = std::abs(mc.value - exact.mean) <= band;
    std::cout << "check=order-stat n=" << n << " k=" << k << " estimate="
              << csv::format_double(mc.value) << " se=" << csv::format_double(mc.std_error)
              << " exact=" << csv::format_double(exact.mean)
              << " asymptotic=" << csv::format_double(asymptotic)
              << " band=" << csv::format_double(band) << '\n';
    std::cout << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return pass ? 0 : 1;
}

int check_shift_invariance(const OracleParams& prm) {
    Rng rng(prm.seed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);  // 2..10
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
        }
        const Eigen::MatrixXd xi =
            a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd mu(n);
        for (int i = 0; i < n; ++i) mu(i) = rng.normal();

        const auto base = portfolio::solve_mean_variance({mu, xi, 4.0});
        for (double c : {-5.0, 0.1, 100.0}) {
            const Eigen::VectorXd shifted = mu.array() + c;
            const auto moved = portfolio::solve_mean_variance({shifted, xi, 4.0});
            worst = std::max(worst, (moved.weights - base.weights).cwiseAbs().maxCoeff());
        }
    }
    const bool pass = worst < 1e-10;
    std::cout << "check=shift-invariance trials=100 max_weight_delta="
              << csv::format_double(worst) << " tolerance=1e-10\n";
    std::cout << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return pass ? 0 : 1;
}

int check_engine_vs_rejection(const OracleParams& prm) {
    const int n = prm.n > 0 ? prm.n : 4;
    Rng rng(prm.seed);
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (double& v : mu) v = rng.uniform() - 0.5;
    const UniformCorrelationModel model(mu, std::vector<double>(mu.size(), 1.0), prm.rho);
    const Ranking ranking = Ranking::identity(model.n());

    const auto engine = conditional_moments(model, ranking, QuadratureSpec{});
    const auto mc = oracle::rejection_conditional_moments(model, ranking,
                                                          std::max<long long>(prm.reps, 100000),
                                                          400000000LL, derive_seed(prm.seed, {1}));
    bool pass = true;
    double worst_sigmas = 0.0;
    for (std::size_t i = 0; i < model.n(); ++i) {
        const double mean_sig = std::abs(engine.mean[i] - mc.mean[i].value) / mc.mean[i].std_error;
        const double sd_mc = std::sqrt(mc.variance[i].value);
        const double sd_se = mc.variance[i].std_error / (2.0 * sd_mc);
        const double sd_sig = std::abs(engine.sd[i] - sd_mc) / sd_se;
        worst_sigmas = std::max({worst_sigmas, mean_sig, sd_sig});
        if (mean_sig > 3.0 || sd_sig > 3.0) pass = false;
        std::cout << "check=engine-vs-rejection n=" << n << " rho=" << csv::format_double(prm.rho)
                  << " component=" << (i + 1) << " engine_mean="
                  << csv::format_double(engine.mean[i])
                  << " mc_mean=" << csv::format_double(mc.mean[i].value)
                  << " mean_sigmas=" << csv::format_double(mean_sig)
                  << " engine_sd=" << csv::format_double(engine.sd[i])
                  << " mc_sd=" << csv::format_double(sd_mc)
                  << " sd_sigmas=" << csv::format_double(sd_sig) << '\n';
    }
    std::cout << "accepted=" << mc.n_accepted << " proposed=" << mc.n_proposed
              << " worst_sigmas=" << csv::format_double(worst_sigmas) << '\n';
    std::cout << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return pass ? 0 : 1;
}

int check_limit_formulas(const OracleParams& prm) {
    const int n = prm.n > 0 ? prm.n : 75;
    const int k = experiments::quantile_index(prm.p, n);
    const auto model = UniformCorrelationModel::standard(static_cast<std::size_t>(n), prm.rho);
    const auto engine = conditional_moments(model, Ranking::identity(model.n()), QuadratureSpec{});
    const double engine_mean = engine.mean[static_cast<std::size_t>(k - 1)];

    const auto mc = oracle::expected_order_statistic_mc(n, k, prm.reps, prm.seed);
    const double anchored_proof = std::sqrt(1.0 - prm.rho) * mc.value;
    const double statement = oracle::limit_mean(prm.p, prm.rho, oracle::LimitVariant::statement);
    const double proof = oracle::limit_mean(prm.p, prm.rho, oracle::LimitVariant::proof);

    const double d_anchored = std::abs(engine_mean - anchored_proof);
    const double d_statement = std::abs(engine_mean - statement);
    const double d_proof = std::abs(engine_mean - proof);
    const bool pass = d_anchored <= 0.05;
    std::cout << "check=limit-formulas n=" << n << " k=" << k
              << " rho=" << csv::format_double(prm.rho) << " p=" << csv::format_double(prm.p)
              << " engine_mean=" << csv::format_double(engine_mean)
              << " anchored_proof=" << csv::format_double(anchored_proof)
              << " proof_limit=" << csv::format_double(proof)
              << " statement_limit=" << csv::format_double(statement)
              << " variant_matched=" << (d_proof <= d_statement ? "proof" : "statement") << '\n';
    std::cout << "limit_variance rho=" << csv::format_double(prm.rho)
              << " value=" << csv::format_double(oracle::limit_variance(prm.rho)) << '\n';
    std::cout << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return pass ? 0 : 1;
}

int check_exchangeability(const OracleParams& prm) {
    bool pass = true;
    for (int n = 2; n <= (prm.n > 0 ? prm.n : 8); ++n) {
        for (double rho : {0.0, 0.25, 0.5, 0.75}) {
            const auto model = UniformCorrelationModel::standard(static_cast<std::size_t>(n), rho);
            const double log_b = log_ranking_probability(model, QuadratureSpec{});
            double log_factorial = 0.0;
            for (int i = 2; i <= n; ++i) log_factorial += std::log(static_cast<double>(i));
            const double product = std::exp(log_b + log_factorial);
            const bool ok = std::abs(product - 1.0) <= 1e-3;
            if (!ok) pass = false;
            std::cout << "check=exchangeability n=" << n << " rho=" << csv::format_double(rho)
                      << " B_times_nfact=" << csv::format_double(product)
                      << " ok=" << (ok ? 1 : 0) << '\n';
        }
    }
    std::cout << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return pass ? 0 : 1;
}

int cmd_oracle(const std::string& check, const OracleParams& prm) {
    if (check == "order-stat") return check_order_stat(prm);
    if (check == "shift-invariance") return check_shift_invariance(prm);
    if (check == "engine-vs-rejection") return check_engine_vs_rejection(prm);
    if (check == "limit-formulas") return check_limit_formulas(prm);
    if (check == "exchangeability") return check_exchangeability(prm);
    std::cerr << "unknown check '" << check << "'; available: order-stat, shift-invariance, "
              << "engine-vs-rejection, limit-formulas, exchangeability\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-constrained conditional moments of equicorrelated normals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    std::string out_dir = ".";
    std::string ranking_text = "identity";
    std::string estimate_output;
    std::string oracle_check;
    int workers = 1;
    std::uint64_t seed_flag = 0;
    QuadOverrides quad;
    OracleParams oracle_params;

    auto* estimate = app.add_subcommand("estimate", "Conditional moments for one model");
    estimate->add_option("--config", config_path, "Model config file")->required();
    estimate->add_option("--ranking", ranking_text,
                         "Ranking: 'identity' or 1-based permutation like '2,1,3'");
    estimate->add_option("--output", estimate_output, "CSV output path (default stdout)");
    add_quadrature_flags(estimate, quad);

    bool dump_convergence = false;
    auto* convergence = app.add_subcommand("convergence", "Conditional-SD sweep over n and rho");
    convergence->add_option("--config", config_path, "Config file");
    convergence->add_option("--out-dir", out_dir, "Output directory");
    convergence->add_option("--workers", workers, "Worker thread cap");
    convergence->add_flag("--dump-config", dump_convergence, "Print resolved config and exit");
    add_quadrature_flags(convergence, quad);

    bool dump_reinforce = false;
    auto* reinforce = app.add_subcommand("reinforce", "Conditional SD versus reinforcement index");
    reinforce->add_option("--config", config_path, "Config file");
    reinforce->add_option("--out-dir", out_dir, "Output directory");
    reinforce->add_option("--workers", workers, "Worker thread cap");
    reinforce->add_flag("--dump-config", dump_reinforce, "Print resolved config and exit");
    add_quadrature_flags(reinforce, quad);

    bool dump_portfolio = false;
    auto* portfolio_cmd = app.add_subcommand("portfolio", "Mean-variance simulation study");
    portfolio_cmd->add_option("--config", config_path, "Config file");
    portfolio_cmd->add_option("--out-dir", out_dir, "Output directory");
    portfolio_cmd->add_option("--workers", workers, "Worker thread cap");
    auto* seed_opt = portfolio_cmd->add_option("--seed", seed_flag, "Master seed override");
    portfolio_cmd->add_flag("--dump-config", dump_portfolio, "Print resolved config and exit");
    add_quadrature_flags(portfolio_cmd, quad);

    auto* oracle_cmd = app.add_subcommand("oracle", "Cross-validation checks");
    oracle_cmd->add_option("check", oracle_check, "Check name")->required();
    oracle_cmd->add_option("--n", oracle_params.n, "Dimension");
    oracle_cmd->add_option("--k", oracle_params.k, "Order-statistic rank (1-based)");
    oracle_cmd->add_option("--rho", oracle_params.rho, "Correlation coefficient");
    oracle_cmd->add_option("--p", oracle_params.p, "Quantile");
    oracle_cmd->add_option("--reps", oracle_params.reps, "Monte Carlo replications");
    oracle_cmd->add_option("--seed", oracle_params.seed, "Seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (estimate->parsed()) {
            return cmd_estimate(config_path, ranking_text, estimate_output, quad);
        }
        if (convergence->parsed()) {
            return cmd_convergence(config_path, out_dir, workers, quad, dump_convergence);
        }
        if (reinforce->parsed()) {
            return cmd_reinforce(config_path, out_dir, workers, quad, dump_reinforce);
        }
        if (portfolio_cmd->parsed()) {
            return cmd_portfolio(config_path, out_dir, workers, seed_flag, seed_opt->count() > 0,
                                 quad, dump_portfolio);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(oracle_check, oracle_params);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
