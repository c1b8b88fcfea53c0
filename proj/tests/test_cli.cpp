// Exercises the installed CLI binary end to end: exit-code contract, report
// files, CSV tables. POSIX process plumbing via std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/stat.h>
#include <sys/wait.h>

#include "json.hpp"

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(DHOA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

} // namespace

TEST_CASE("exit 0 on a verified weight and the report lands on disk") {
    const std::string out = "/tmp/dhoa_cli_classical.json";
    std::remove(out.c_str());
    CHECK(run("analyze --family stretched_exp --k 1 --m 1 --nmax 32 --out " + out) == 0);
    auto j = read_json(out);
    CHECK(j["verdict"] == "constructible");
    CHECK(j["exit_status"] == 0);
}

TEST_CASE("exit 1 on a rejected weight") {
    CHECK(run("analyze --family power --sigma 1.5 --alpha 0 --beta 1 --quiet") == 1);
    // unbounded upper edge passes through the flag parser and is rejected
    CHECK(run("analyze --family power --sigma -3 --alpha 1 --beta inf --quiet") == 1);
}

TEST_CASE("exit 2 on configuration errors") {
    CHECK(run("analyze --family no_such_family --quiet") == 2);
    CHECK(run("analyze --family log_gaussian --sigma -3 --n 1 --quiet") == 2);
    CHECK(run("analyze --mode sideways --family power --sigma 0 --quiet") == 2);
    CHECK(run("analyze --config /nonexistent/path.json") == 2);
    CHECK(run("bogus-subcommand") == 2);
}

TEST_CASE("config file plus flag overrides") {
    const std::string cfg = "/tmp/dhoa_cli_config.json";
    {
        std::ofstream out(cfg);
        out << R"({"weight":{"family":"power","sigma":1.5,"alpha":0,"beta":1},"nmax":32})";
    }
    // the file alone is rejected (exit 1); overriding sigma makes it verify
    CHECK(run("analyze --config " + cfg + " --quiet") == 1);
    CHECK(run("analyze --config " + cfg + " --sigma 1 --quiet") == 0);
}

TEST_CASE("csv tables are emitted next to the report") {
    const std::string dir = "/tmp/dhoa_cli_csv";
    mkdir(dir.c_str(), 0755);
    CHECK(run("analyze --family power --sigma 0 --alpha 1 --beta 4 --quiet --csv " + dir) == 0);
    std::ifstream psi(dir + "/psi_samples.csv");
    REQUIRE(psi.good());
    std::string header;
    std::getline(psi, header);
    CHECK(header == "rho,psi");
    std::ifstream checks(dir + "/checks.csv");
    CHECK(checks.good());
}

TEST_CASE("exit 3 on a numerical failure, with a partial report") {
    const std::string cfg = "/tmp/dhoa_cli_budget.json";
    const std::string out = "/tmp/dhoa_cli_budget_report.json";
    {
        std::ofstream f(cfg);
        f << R"({"weight":{"family":"log_gaussian","sigma":1,"n":2},)"
          << R"("quadrature":{"max_panels":2}})";
    }
    std::remove(out.c_str());
    CHECK(run("analyze --config " + cfg + " --quiet --out " + out) == 3);
    auto j = read_json(out);
    CHECK(j["verdict"] == "numerical-failure");
}

TEST_CASE("reproduce-paper runs the battery and writes the suite report") {
    const std::string dir = "/tmp/dhoa_cli_rp";
    mkdir(dir.c_str(), 0755);
    CHECK(run("reproduce-paper --quiet --out " + dir) == 0);
    auto j = read_json(dir + "/reproduce_paper.json");
    CHECK(j["examples"].size() == 5);
    CHECK(j["exit_status"] == 0);
}
