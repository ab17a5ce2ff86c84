#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>

#include "ranknorm/config.hpp"

using namespace ranknorm;
using namespace ranknorm::config;

TEST_CASE("config parsing") {
    const auto cfg = ConfigFile::parse_string(
        "# comment\n"
        "[portfolio]\n"
        "instances = 7\n"
        "tau = 0.25\n"
        "n_values = 5, 15\n"
        "; another comment\n"
        "[model]\n"
        "standard = true\n"
        "n = 4\n",
        "test.cfg");

    CHECK(cfg.has("portfolio", "instances"));
    CHECK_FALSE(cfg.has("portfolio", "gamma"));
    CHECK(cfg.get_int("portfolio", "instances", 0) == 7);
    CHECK(cfg.get_double("portfolio", "tau", 0.0) == 0.25);
    CHECK(cfg.get_double("portfolio", "gamma", 4.0) == 4.0);  // fallback
    CHECK(cfg.get_int_list("portfolio", "n_values", {}) == std::vector<int>{5, 15});
    CHECK(cfg.get_bool("model", "standard", false));
}

TEST_CASE("parse errors carry line numbers") {
    const auto expect_line = [](const std::string& text, const std::string& line_tag) {
        try {
            const auto cfg = ConfigFile::parse_string(text, "bad.cfg");
            (void)cfg.get_double("s", "k", 0.0);
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(line_tag) != std::string::npos);
        }
    };
    expect_line("[s]\nno equals sign here\n", "bad.cfg:2");
    expect_line("[unterminated\n", "bad.cfg:1");
    expect_line("[s]\n\nk = not-a-number\n", "bad.cfg:3");
}

TEST_CASE("typed value errors") {
    const auto cfg = ConfigFile::parse_string("[s]\nx = 1.5\nflag = maybe\n", "t.cfg");
    CHECK_THROWS_AS(cfg.get_int("s", "x", 0), std::runtime_error);
    CHECK_THROWS_AS(cfg.get_bool("s", "flag", false), std::runtime_error);
}

TEST_CASE("simulation defaults match the study hyperparameters") {
    const auto c = load_simulation(ConfigFile{});
    CHECK(c.n_values == std::vector<int>{5, 15, 25, 75});
    CHECK(c.rho_values == std::vector<double>{0.0, 0.25, 0.50, 0.75});
    CHECK(c.instances == 100);
    CHECK(c.sigma_mu == 2.5e-7);
    CHECK(c.sigma2_big_sigma == 1e-3);
    CHECK(c.tau == 0.1);
    CHECK(c.gamma == 4.0);
}

TEST_CASE("default convergence grid has 64 cells") {
    const auto c = load_convergence(ConfigFile{});
    CHECK(c.n_values.size() * c.rho_values.size() * c.quantiles.size() == 64);
}

TEST_CASE("dump and reload round-trips the resolved config") {
    experiments::SimulationConfig c;
    c.n_values = {5, 25};
    c.rho_values = {0.0, 0.75};
    c.instances = 13;
    c.sigma_mu = 3e-7;
    c.master_seed = 991;
    c.quadrature.x_nodes = 1001;

    const auto cfg = ConfigFile::parse_string(dump_simulation(c), "dump.cfg");
    const auto back = load_simulation(cfg);
    CHECK(back.n_values == c.n_values);
    CHECK(back.rho_values == c.rho_values);
    CHECK(back.instances == c.instances);
    CHECK(back.sigma_mu == c.sigma_mu);
    CHECK(back.master_seed == c.master_seed);
    CHECK(back.quadrature.x_nodes == c.quadrature.x_nodes);
    CHECK(back.gamma == c.gamma);

    experiments::ConvergenceConfig cc;
    cc.quantiles = {0.1, 0.9};
    const auto cc_back = load_convergence(ConfigFile::parse_string(dump_convergence(cc), "c.cfg"));
    CHECK(cc_back.quantiles == cc.quantiles);
    CHECK(cc_back.n_values == cc.n_values);
}

TEST_CASE("model loading") {
    const auto std_model = load_model(
        ConfigFile::parse_string("[model]\nn = 5\nrho = 0.25\nstandard = true\n", "m.cfg"));
    CHECK(std_model.n() == 5);
    CHECK(std_model.rho == 0.25);
    CHECK(std_model.is_standard());

    const auto explicit_model = load_model(ConfigFile::parse_string(
        "[model]\nrho = 0.5\nmu = 0.1, -0.2\nsigma = 1.0, 2.0\n", "m.cfg"));
    CHECK(explicit_model.mu == std::vector<double>{0.1, -0.2});
    CHECK(explicit_model.sigma == std::vector<double>{1.0, 2.0});

    CHECK_THROWS(load_model(ConfigFile::parse_string("[model]\nrho = 0.5\n", "m.cfg")));
    CHECK_THROWS(load_model(
        ConfigFile::parse_string("[model]\nn = 3\nrho = 0.5\nmu = 1, 2\nsigma = 1, 1\n", "m.cfg")));
}

TEST_CASE("ranking text") {
    CHECK(parse_ranking("identity", 3).is_identity());
    CHECK(parse_ranking("", 3).is_identity());
    CHECK(parse_ranking("2,1,3", 3).order == std::vector<std::size_t>{1, 0, 2});
    CHECK_THROWS(parse_ranking("2,1", 3));
    CHECK_THROWS(parse_ranking("2,1,4", 3));
    CHECK_THROWS(parse_ranking("2,1,1", 3));
    CHECK_THROWS(parse_ranking("a,b,c", 3));
}
