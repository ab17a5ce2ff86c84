#include "ranknorm/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ranknorm/csv.hpp"

namespace ranknorm::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void parse_error(const std::string& origin, int line, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) parts.push_back(trim(item));
    return parts;
}

double to_double(const std::string& origin, int line, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        parse_error(origin, line, "expected a number, got '" + text + "'");
    }
    if (pos != text.size()) parse_error(origin, line, "trailing characters in number '" + text + "'");
    return v;
}

long long to_int(const std::string& origin, int line, const std::string& text) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &pos);
    } catch (const std::exception&) {
        parse_error(origin, line, "expected an integer, got '" + text + "'");
    }
    if (pos != text.size()) {
        parse_error(origin, line, "trailing characters in integer '" + text + "'");
    }
    return v;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') parse_error(origin, lineno, "unterminated section header");
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty()) parse_error(origin, lineno, "empty section name");
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            parse_error(origin, lineno, "expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) parse_error(origin, lineno, "empty key");
        cfg.values_[section][key] = {value, lineno};
    }
    return cfg;
}

const std::pair<std::string, int>* ConfigFile::find(const std::string& section,
                                                    const std::string& key) const {
    const auto sit = values_.find(section);
    if (sit == values_.end()) return nullptr;
    const auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    return &kit->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const auto* entry = find(section, key);
    return entry ? entry->first : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    const auto* entry = find(section, key);
    return entry ? to_double(origin_, entry->second, entry->first) : fallback;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    const auto* entry = find(section, key);
    return entry ? static_cast<int>(to_int(origin_, entry->second, entry->first)) : fallback;
}

std::uint64_t ConfigFile::get_uint64(const std::string& section, const std::string& key,
                                     std::uint64_t fallback) const {
    const auto* entry = find(section, key);
    if (!entry) return fallback;
    try {
        return std::stoull(entry->first);
    } catch (const std::exception&) {
        parse_error(origin_, entry->second, "expected an unsigned integer, got '" + entry->first +
                                                "'");
    }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    const auto* entry = find(section, key);
    if (!entry) return fallback;
    std::string v = entry->first;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    parse_error(origin_, entry->second, "expected a boolean, got '" + entry->first + "'");
}

std::vector<double> ConfigFile::get_double_list(const std::string& section, const std::string& key,
                                                const std::vector<double>& fallback) const {
    const auto* entry = find(section, key);
    if (!entry) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(entry->first)) {
        out.push_back(to_double(origin_, entry->second, item));
    }
    return out;
}

std::vector<int> ConfigFile::get_int_list(const std::string& section, const std::string& key,
                                          const std::vector<int>& fallback) const {
    const auto* entry = find(section, key);
    if (!entry) return fallback;
    std::vector<int> out;
    for (const auto& item : split_list(entry->first)) {
        out.push_back(static_cast<int>(to_int(origin_, entry->second, item)));
    }
    return out;
}

QuadratureSpec load_quadrature(const ConfigFile& cfg, const std::string& section,
                               const QuadratureSpec& base) {
    QuadratureSpec spec = base;
    spec.m_nodes = cfg.get_int(section, "m_nodes", spec.m_nodes);
    spec.x_nodes = cfg.get_int(section, "x_nodes", spec.x_nodes);
    spec.m_halfwidth = cfg.get_double(section, "m_halfwidth", spec.m_halfwidth);
    spec.x_padding = cfg.get_double(section, "x_padding", spec.x_padding);
    return spec;
}

experiments::ConvergenceConfig load_convergence(const ConfigFile& cfg) {
    experiments::ConvergenceConfig c;
    c.n_values = cfg.get_int_list("convergence", "n_values", c.n_values);
    c.rho_values = cfg.get_double_list("convergence", "rho_values", c.rho_values);
    c.quantiles = cfg.get_double_list("convergence", "quantiles", c.quantiles);
    c.quadrature = load_quadrature(cfg, "convergence", c.quadrature);
    return c;
}

experiments::ReinforcementConfig load_reinforcement(const ConfigFile& cfg) {
    experiments::ReinforcementConfig c;
    c.n_values = cfg.get_int_list("reinforce", "n_values", c.n_values);
    c.rho_values = cfg.get_double_list("reinforce", "rho_values", c.rho_values);
    c.r_values = cfg.get_double_list("reinforce", "r_values", c.r_values);
    c.quantile = cfg.get_double("reinforce", "quantile", c.quantile);
    c.quadrature = load_quadrature(cfg, "reinforce", c.quadrature);
    return c;
}

experiments::SimulationConfig load_simulation(const ConfigFile& cfg) {
    experiments::SimulationConfig c;
    c.n_values = cfg.get_int_list("portfolio", "n_values", c.n_values);
    c.rho_values = cfg.get_double_list("portfolio", "rho_values", c.rho_values);
    c.instances = cfg.get_int("portfolio", "instances", c.instances);
    c.sigma_mu = cfg.get_double("portfolio", "sigma_mu", c.sigma_mu);
    c.sigma2_big_sigma = cfg.get_double("portfolio", "sigma2_big_sigma", c.sigma2_big_sigma);
    c.tau = cfg.get_double("portfolio", "tau", c.tau);
    c.gamma = cfg.get_double("portfolio", "gamma", c.gamma);
    c.master_seed = cfg.get_uint64("portfolio", "master_seed", c.master_seed);
    c.quadrature = load_quadrature(cfg, "portfolio", c.quadrature);
    return c;
}

UniformCorrelationModel load_model(const ConfigFile& cfg) {
    const int n = cfg.get_int("model", "n", 0);
    const double rho = cfg.get_double("model", "rho", 0.0);
    const bool standard = cfg.get_bool("model", "standard", false);
    if (standard) {
        if (n < 2) throw std::runtime_error("[model] standard=true requires n >= 2");
        return UniformCorrelationModel::standard(static_cast<std::size_t>(n), rho);
    }
    if (!cfg.has("model", "mu") || !cfg.has("model", "sigma")) {
        throw std::runtime_error(
            "[model] needs either standard=true with n, or explicit mu and sigma lists");
    }
    std::vector<double> mu = cfg.get_double_list("model", "mu", {});
    std::vector<double> sigma = cfg.get_double_list("model", "sigma", {});
    if (n > 0 && static_cast<std::size_t>(n) != mu.size()) {
        throw std::runtime_error("[model] n does not match the length of mu");
    }
    return UniformCorrelationModel(std::move(mu), std::move(sigma), rho);
}

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += csv::format_double(v[i]);
    }
    return s;
}

std::string dump_quadrature(const QuadratureSpec& q) {
    std::string s;
    s += "m_nodes = " + std::to_string(q.m_nodes) + "\n";
    s += "x_nodes = " + std::to_string(q.x_nodes) + "\n";
    s += "m_halfwidth = " + csv::format_double(q.m_halfwidth) + "\n";
    s += "x_padding = " + csv::format_double(q.x_padding) + "\n";
    return s;
}

}  // namespace

std::string dump_convergence(const experiments::ConvergenceConfig& c) {
    std::string s = "[convergence]\n";
    s += "n_values = " + join_ints(c.n_values) + "\n";
    s += "rho_values = " + join_doubles(c.rho_values) + "\n";
    s += "quantiles = " + join_doubles(c.quantiles) + "\n";
    s += dump_quadrature(c.quadrature);
    return s;
}

std::string dump_reinforcement(const experiments::ReinforcementConfig& c) {
    std::string s = "[reinforce]\n";
    s += "n_values = " + join_ints(c.n_values) + "\n";
    s += "rho_values = " + join_doubles(c.rho_values) + "\n";
    s += "r_values = " + join_doubles(c.r_values) + "\n";
    s += "quantile = " + csv::format_double(c.quantile) + "\n";
    s += dump_quadrature(c.quadrature);
    return s;
}

std::string dump_simulation(const experiments::SimulationConfig& c) {
    std::string s = "[portfolio]\n";
    s += "n_values = " + join_ints(c.n_values) + "\n";
    s += "rho_values = " + join_doubles(c.rho_values) + "\n";
    s += "instances = " + std::to_string(c.instances) + "\n";
    s += "sigma_mu = " + csv::format_double(c.sigma_mu) + "\n";
    s += "sigma2_big_sigma = " + csv::format_double(c.sigma2_big_sigma) + "\n";
    s += "tau = " + csv::format_double(c.tau) + "\n";
    s += "gamma = " + csv::format_double(c.gamma) + "\n";
    s += "master_seed = " + std::to_string(c.master_seed) + "\n";
    s += dump_quadrature(c.quadrature);
    return s;
}

std::string dump_model(const UniformCorrelationModel& model) {
    std::string s = "[model]\n";
    s += "n = " + std::to_string(model.n()) + "\n";
    s += "rho = " + csv::format_double(model.rho) + "\n";
    if (model.is_standard()) {
        s += "standard = true\n";
    } else {
        s += "mu = " + join_doubles(model.mu) + "\n";
        s += "sigma = " + join_doubles(model.sigma) + "\n";
    }
    return s;
}

Ranking parse_ranking(const std::string& text, std::size_t n) {
    if (text.empty() || text == "identity") return Ranking::identity(n);
    std::vector<std::size_t> order;
    for (const auto& item : split_list(text)) {
        long long v = 0;
        try {
            v = std::stoll(item);
        } catch (const std::exception&) {
            throw std::runtime_error("ranking: expected 1-based indices, got '" + item + "'");
        }
        if (v < 1 || static_cast<std::size_t>(v) > n) {
            throw std::runtime_error("ranking: index " + std::to_string(v) +
                                     " out of range 1.." + std::to_string(n));
        }
        order.push_back(static_cast<std::size_t>(v - 1));
    }
    if (order.size() != n) {
        throw std::runtime_error("ranking: expected " + std::to_string(n) + " indices, got " +
                                 std::to_string(order.size()));
    }
    return Ranking(std::move(order));
}

}  // namespace ranknorm::config
