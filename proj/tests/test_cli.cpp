// End-to-end checks of the installed binary: exit codes, CSV schemas,
// manifest presence and byte-identical reruns.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef RANKNORM_CLI
#error "RANKNORM_CLI must point at the ranknorm binary"
#endif

namespace {

const std::string kCli = RANKNORM_CLI;

int run(const std::string& args) {
    const int rc = std::system((kCli + " " + args).c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string tmp_path(const std::string& name) {
    return std::string("cli_scratch_") + name;
}

}  // namespace

TEST_CASE("estimate emits per-component moments") {
    const std::string cfg = tmp_path("n2.cfg");
    write(cfg, "[model]\nn = 2\nrho = 0\nstandard = true\n");
    const std::string out = tmp_path("n2.csv");
    REQUIRE(run("estimate --config " + cfg + " --output " + out + " > /dev/null 2>&1") == 0);

    const std::string text = slurp(out);
    CHECK(text.find("# index,mean,sd log_prob=") == 0);

    // parse the two data rows
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    double m1 = 0.0, m2 = 0.0;
    char comma;
    int idx;
    std::getline(lines, line);
    std::istringstream(line) >> idx >> comma >> m1;
    std::getline(lines, line);
    std::istringstream(line) >> idx >> comma >> m2;
    CHECK(std::abs(m1 - (-0.5641895835477563)) < 2e-3);
    CHECK(std::abs(m2 - 0.5641895835477563) < 2e-3);
}

TEST_CASE("estimate on a standard n=5 model yields antisymmetric means") {
    const std::string cfg = tmp_path("n5.cfg");
    write(cfg, "[model]\nn = 5\nrho = 0\nstandard = true\n");
    const std::string out = tmp_path("n5.csv");
    REQUIRE(run("estimate --config " + cfg + " --output " + out + " > /dev/null 2>&1") == 0);

    std::istringstream lines(slurp(out));
    std::string line;
    std::getline(lines, line);  // header
    std::vector<double> means;
    while (std::getline(lines, line)) {
        int idx;
        char comma;
        double m;
        std::istringstream(line) >> idx >> comma >> m;
        means.push_back(m);
    }
    REQUIRE(means.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(means[k] + means[4 - k]) < 1e-6);
}

TEST_CASE("estimate rejects a degenerate model with nonzero status") {
    const std::string cfg = tmp_path("degen.cfg");
    write(cfg, "[model]\nn = 3\nrho = 1\nstandard = true\n");
    CHECK(run("estimate --config " + cfg + " > /dev/null 2>&1") != 0);
}

TEST_CASE("estimate honours an explicit ranking") {
    const std::string cfg = tmp_path("rank.cfg");
    write(cfg, "[model]\nrho = 0\nmu = 0, 0, 0\nsigma = 1, 1, 1\n");
    const std::string out = tmp_path("rank.csv");
    REQUIRE(run("estimate --config " + cfg + " --ranking 3,2,1 --output " + out +
                " > /dev/null 2>&1") == 0);
    // X3 <= X2 <= X1: component 1 now carries the largest conditional mean
    std::istringstream lines(slurp(out));
    std::string header, row1;
    std::getline(lines, header);
    std::getline(lines, row1);
    double m1 = 0.0;
    char comma;
    int idx;
    std::istringstream(row1) >> idx >> comma >> m1;
    CHECK(m1 > 0.5);
}

TEST_CASE("convergence run writes csv and manifest, bytes stable across reruns") {
    const std::string cfg = tmp_path("conv.cfg");
    write(cfg,
          "[convergence]\nn_values = 3, 5\nrho_values = 0, 0.5\nquantiles = 0.5, 1.0\n"
          "m_nodes = 41\nx_nodes = 801\n");
    REQUIRE(run("convergence --config " + cfg + " --out-dir . > /dev/null 2>&1") == 0);
    const std::string first = slurp("convergence.csv");
    CHECK(first.find("# n,rho,quantile,index,sd\n") == 0);
    // 2 n * 2 rho * 2 quantiles data rows + header
    int lines = 0;
    for (char c : first) lines += (c == '\n');
    CHECK(lines == 1 + 8);

    const std::string manifest = slurp("convergence_manifest.txt");
    CHECK(manifest.find("subcommand = convergence") != std::string::npos);
    CHECK(manifest.find("[convergence]") != std::string::npos);

    REQUIRE(run("convergence --config " + cfg + " --out-dir . --workers 3 > /dev/null 2>&1") == 0);
    CHECK(slurp("convergence.csv") == first);
}

TEST_CASE("portfolio run is reproducible from its seed across worker counts") {
    const std::string cfg = tmp_path("port.cfg");
    write(cfg,
          "[portfolio]\nn_values = 4\nrho_values = 0, 0.5\ninstances = 3\n"
          "master_seed = 321\nm_nodes = 41\nx_nodes = 801\n");
    REQUIRE(run("portfolio --config " + cfg + " --out-dir . > /dev/null 2>&1") == 0);
    const std::string inst = slurp("portfolio_instances.csv");
    const std::string agg = slurp("portfolio_aggregate.csv");
    CHECK(inst.find("# n,rho,instance,seed,ceq_prior,ceq_clair,ceq_rank\n") == 0);
    CHECK(agg.find("# n,rho,mean_prior,mean_clair,mean_rank,pct_diff_clair_rank\n") == 0);

    const std::string manifest = slurp("portfolio_manifest.txt");
    CHECK(manifest.find("master_seed = 321") != std::string::npos);
    CHECK(manifest.find("completed_instances = 6") != std::string::npos);

    REQUIRE(run("portfolio --config " + cfg + " --out-dir . --workers 4 > /dev/null 2>&1") == 0);
    CHECK(slurp("portfolio_instances.csv") == inst);
    CHECK(slurp("portfolio_aggregate.csv") == agg);

    // seed flag overrides the config and changes the draw
    REQUIRE(run("portfolio --config " + cfg + " --out-dir . --seed 99 > /dev/null 2>&1") == 0);
    CHECK(slurp("portfolio_instances.csv") != inst);
}

TEST_CASE("oracle subcommand") {
    CHECK(run("oracle no-such-check > /dev/null 2>&1") != 0);
    CHECK(run("oracle exchangeability --n 4 > /dev/null 2>&1") == 0);
    CHECK(run("oracle shift-invariance > /dev/null 2>&1") == 0);
    CHECK(run("oracle order-stat --n 10 --k 3 --reps 40000 > /dev/null 2>&1") == 0);
}

TEST_CASE("dump-config prints resolved defaults") {
    const std::string out = tmp_path("dump.txt");
    REQUIRE(run("portfolio --dump-config > " + out + " 2>/dev/null") == 0);
    const std::string text = slurp(out);
    CHECK(text.find("[portfolio]") != std::string::npos);
    CHECK(text.find("sigma_mu = 2.4999999999999999e-07") != std::string::npos);
    CHECK(text.find("gamma = 4") != std::string::npos);
    CHECK(text.find("instances = 100") != std::string::npos);
}
