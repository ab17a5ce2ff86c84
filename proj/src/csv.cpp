#include "ranknorm/csv.hpp"

#include <cstdio>
#include <ctime>

namespace ranknorm::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_convergence(std::ostream& out, const std::vector<experiments::ConvergenceRow>& rows) {
    out << "# n,rho,quantile,index,sd\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.rho) << ',' << format_double(r.quantile) << ','
            << r.index << ',' << format_double(r.sd) << '\n';
    }
}

void write_reinforcement(std::ostream& out,
                         const std::vector<experiments::ReinforcementRow>& rows) {
    out << "# n,rho,r,sd\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.rho) << ',' << format_double(r.r) << ','
            << format_double(r.sd) << '\n';
    }
}

void write_portfolio_instances(std::ostream& out,
                               const std::vector<experiments::InstanceResult>& rows) {
    out << "# n,rho,instance,seed,ceq_prior,ceq_clair,ceq_rank\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.rho) << ',' << r.instance << ',' << r.seed << ','
            << format_double(r.ceq_prior) << ',' << format_double(r.ceq_clairvoyance) << ','
            << format_double(r.ceq_rank) << '\n';
    }
}

void write_portfolio_aggregate(std::ostream& out,
                               const std::vector<experiments::AggregateRow>& rows) {
    out << "# n,rho,mean_prior,mean_clair,mean_rank,pct_diff_clair_rank\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.rho) << ',' << format_double(r.mean_prior) << ','
            << format_double(r.mean_clair) << ',' << format_double(r.mean_rank) << ','
            << format_double(r.pct_diff_clair_rank) << '\n';
    }
}

void write_estimate(std::ostream& out, const ConditionalMoments& moments) {
    out << "# index,mean,sd log_prob=" << format_double(moments.log_prob) << '\n';
    for (std::size_t i = 0; i < moments.mean.size(); ++i) {
        out << (i + 1) << ',' << format_double(moments.mean[i]) << ','
            << format_double(moments.sd[i]) << '\n';
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(std::ostream& out, const ManifestInfo& info) {
    out << "[manifest]\n";
    out << "subcommand = " << info.subcommand << '\n';
    out << "version = " << info.version << '\n';
    out << "master_seed = " << info.master_seed << '\n';
    out << "started_utc = " << info.started_utc << '\n';
    out << "finished_utc = " << info.finished_utc << '\n';
    out << "workers = " << info.workers << '\n';
    std::string outputs;
    for (std::size_t i = 0; i < info.outputs.size(); ++i) {
        if (i) outputs += ", ";
        outputs += info.outputs[i];
    }
    out << "outputs = " << outputs << '\n';
    for (const auto& note : info.notes) out << "note = " << note << '\n';
    out << '\n' << info.resolved_config;
}

}  // namespace ranknorm::csv
