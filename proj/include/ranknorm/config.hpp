#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ranknorm/experiments.hpp"
#include "ranknorm/model.hpp"

namespace ranknorm::config {

// Flat `key = value` text with [section] headers, `#`/`;` comments and
// comma-separated lists. Parse errors carry file name and line number.
class ConfigFile {
public:
    ConfigFile() = default;

    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text,
                                   const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& section, const std::string& key,
                             std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                  const std::vector<int>& fallback) const;

private:
    // section -> key -> (value text, source line)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> values_;
    std::string origin_;

    const std::pair<std::string, int>* find(const std::string& section,
                                            const std::string& key) const;
};

// Typed loaders; absent keys resolve to the built-in defaults. Quadrature
// keys (m_nodes, x_nodes, m_halfwidth, x_padding) are read from the same
// section.
QuadratureSpec load_quadrature(const ConfigFile& cfg, const std::string& section,
                               const QuadratureSpec& base = {});
experiments::ConvergenceConfig load_convergence(const ConfigFile& cfg);
experiments::ReinforcementConfig load_reinforcement(const ConfigFile& cfg);
experiments::SimulationConfig load_simulation(const ConfigFile& cfg);

// Model description for the estimate subcommand ([model] section: n, rho,
// standard flag or explicit mu/sigma lists).
UniformCorrelationModel load_model(const ConfigFile& cfg);

// Resolved-config serialization (the exact text a manifest embeds).
std::string dump_convergence(const experiments::ConvergenceConfig& c);
std::string dump_reinforcement(const experiments::ReinforcementConfig& c);
std::string dump_simulation(const experiments::SimulationConfig& c);
std::string dump_model(const UniformCorrelationModel& model);

// Ranking text: "identity" or a comma-separated 1-based permutation such as
// "2,1,3" meaning X_2 <= X_1 <= X_3.
Ranking parse_ranking(const std::string& text, std::size_t n);

}  // namespace ranknorm::config
