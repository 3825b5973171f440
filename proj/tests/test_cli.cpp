#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bdist/chain.hpp"
#include "bdist/pmf.hpp"

using namespace bdist;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(BDIST_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        out.append(buffer.data(), got);
    const int status = pclose(pipe);
    return CliResult{WEXITSTATUS(status), out};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("cli pmf emits the full support") {
    const CliResult res = run_cli("pmf --parent fixed --n 20 --r1 0.8 --r2 0.8");
    CHECK(res.exit_code == 0);
    const std::vector<std::string> lines = lines_of(res.output);
    REQUIRE(lines.size() == 21);
    double total = 0.0;
    for (const std::string& line : lines) {
        long long i;
        double p;
        REQUIRE(std::sscanf(line.c_str(), "%lld\t%lg", &i, &p) == 2);
        total += p;
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("cli table matches the symbolic module") {
    const CliResult res = run_cli("table --N 2");
    CHECK(res.exit_code == 0);
    const std::vector<std::string> lines = lines_of(res.output);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "p0\t(1-r1)*r2");
    CHECK(lines[1] == "p1\t2*r1*r2");
    CHECK(lines[2] == "p2\tr1*(1-r2)");
}

TEST_CASE("cli sampling is deterministic") {
    const std::string args = "sample --seed 7 --draws 10 --parent poisson --mu0 10 --r1 0.5 --r2 0.5";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(lines_of(a.output).size() == 10);
}

TEST_CASE("cli pmf output round-trips as a custom parent") {
    const CliResult res = run_cli("pmf --parent fixed --n 8 --r1 0.6 --r2 0.7");
    REQUIRE(res.exit_code == 0);
    std::vector<double> probs;
    for (const std::string& line : lines_of(res.output)) {
        long long i;
        double p;
        REQUIRE(std::sscanf(line.c_str(), "%lld\t%lg", &i, &p) == 2);
        probs.push_back(p);
    }
    // feed the emitted pmf back in as the parent of a second layer
    const BDistSpec nested(ChainParams(0.4, 0.5), ParentDist::custom(probs));
    const PmfVector v = pmf(nested);
    double total = 0.0;
    for (double p : v.probs) total += p;
    CHECK(total == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("pmf --parent fixed --n 5").exit_code == 1);       // missing --r1/--r2
    CHECK(run_cli("nonsense").exit_code == 1);                       // unknown subcommand
    CHECK(run_cli("fit --data /nonexistent.csv --response y").exit_code == 2);
    CHECK(run_cli("pmf --parent fixed --n 5 --r1 0 --r2 0").exit_code == 1);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli dispersion emits bounds") {
    const CliResult res = run_cli("dispersion --mean 2.0 --grid 7");
    CHECK(res.exit_code == 0);
    double lo, hi;
    REQUIRE(std::sscanf(res.output.c_str(), "%lg\t%lg", &lo, &hi) == 2);
    CHECK(lo < 1.0);
    CHECK(hi > 1.0);
}
