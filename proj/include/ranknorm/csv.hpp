#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ranknorm/experiments.hpp"
#include "ranknorm/model.hpp"

namespace ranknorm::csv {

// Round-trippable double formatting: 17 significant digits, C locale.
std::string format_double(double v);

// Each writer emits one `# column,names` comment line documenting the fixed
// column order, then newline-terminated data rows.
void write_convergence(std::ostream& out, const std::vector<experiments::ConvergenceRow>& rows);
void write_reinforcement(std::ostream& out, const std::vector<experiments::ReinforcementRow>& rows);
void write_portfolio_instances(std::ostream& out,
                               const std::vector<experiments::InstanceResult>& rows);
void write_portfolio_aggregate(std::ostream& out,
                               const std::vector<experiments::AggregateRow>& rows);

// Per-component conditional moments; log B is carried on the header line.
void write_estimate(std::ostream& out, const ConditionalMoments& moments);

// ISO-8601 UTC timestamp of the current wall clock.
std::string utc_timestamp();

struct ManifestInfo {
    std::string subcommand;
    std::string version;
    std::uint64_t master_seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> outputs;
    int workers = 1;
    std::string resolved_config;  // dumped config sections, re-runnable as-is
    std::vector<std::string> notes;
};

// Written alongside every output; combined with the embedded resolved config
// it reproduces the run exactly.
void write_manifest(std::ostream& out, const ManifestInfo& info);

}  // namespace ranknorm::csv
