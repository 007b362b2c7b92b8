#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

struct CommandResult {
    std::string out;
    int status = -1;
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + RETROQ_CLI_PATH + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, got);
    const int rc = pclose(pipe);
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    result.status = WEXITSTATUS(rc);
    return result;
}

std::vector<json> json_lines(const std::string& out) {
    std::vector<json> records;
    std::size_t start = 0;
    while (start < out.size()) {
        std::size_t end = out.find('\n', start);
        if (end == std::string::npos) end = out.size();
        const std::string line = out.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        records.push_back(json::parse(line));
    }
    return records;
}

std::filesystem::path write_temp(const std::string& stem, const std::string& content) {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / stem;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("verify exits by violation count") {
    const CommandResult clean = run_cli("verify --builtin vaa");
    REQUIRE(clean.status == 0);
    REQUIRE_THAT(clean.out, ContainsSubstring("protocol 'vaa': 0 violations, 0 warnings"));
    REQUIRE_THAT(clean.out, ContainsSubstring("errata audit for 'vaa':"));
    REQUIRE_THAT(clean.out, ContainsSubstring("note:"));

    const CommandResult dirty = run_cli("verify --builtin m3-nonorthogonal");
    REQUIRE(dirty.status == 1);
    REQUIRE_THAT(dirty.out, ContainsSubstring("protocol 'm3-nonorthogonal': 31 violations"));
}

TEST_CASE("verify usage errors exit with 2") {
    REQUIRE(run_cli("verify /no/such/file.protocol").status == 2);
    REQUIRE(run_cli("verify").status == 2);
    REQUIRE(run_cli("verify --builtin vaa --bogus-flag").status == 2);
    REQUIRE(run_cli("frobnicate").status == 2);
    REQUIRE(run_cli("").status == 2);
}

TEST_CASE("verify json records carry the errata permutation") {
    const CommandResult r = run_cli("--json verify --builtin singlet");
    REQUIRE(r.status == 0);
    const std::vector<json> records = json_lines(r.out);
    REQUIRE_FALSE(records.empty());
    bool saw_summary = false, saw_errata = false;
    for (const json& rec : records) {
        if (rec.at("record") == "verify-summary") {
            saw_summary = true;
            REQUIRE(rec.at("violations") == 0);
            REQUIRE(rec.at("passed") == true);
        }
        if (rec.at("record") == "errata-summary") {
            saw_errata = true;
            REQUIRE(rec.at("row_permutation") == json::array({1, 2, 4, 3}));
        }
    }
    REQUIRE(saw_summary);
    REQUIRE(saw_errata);
}

TEST_CASE("simulation is perfect, seeded, and reproducible") {
    const std::string args = "simulate --builtin vaa --seed 7 -n 10000";
    const CommandResult first = run_cli(args);
    REQUIRE(first.status == 0);
    REQUIRE_THAT(first.out, ContainsSubstring(
                                "protocol 'vaa': 10000/10000 correct retrodictions (seed 7, verified)"));
    REQUIRE_THAT(first.out, ContainsSubstring("axis 1: chosen 3421, correct 3421"));
    REQUIRE_THAT(first.out, ContainsSubstring("axis 2: chosen 3288, correct 3288"));
    REQUIRE_THAT(first.out, ContainsSubstring("axis 3: chosen 3291, correct 3291"));

    const CommandResult second = run_cli(args);
    REQUIRE(second.status == 0);
    REQUIRE(second.out == first.out);
}

TEST_CASE("a zero-round simulation still succeeds") {
    const CommandResult r = run_cli("simulate --builtin singlet -n 0");
    REQUIRE(r.status == 0);
    REQUIRE_THAT(r.out, ContainsSubstring("0/0 correct retrodictions (seed 1729, verified)"));
}

TEST_CASE("an unverified protocol cannot simulate successfully") {
    const CommandResult r = run_cli("simulate --builtin m3-nonorthogonal -n 50");
    REQUIRE(r.status == 1);
}

TEST_CASE("json trial records stream one line per round") {
    const CommandResult r = run_cli("--json simulate --builtin singlet -n 20 --records");
    REQUIRE(r.status == 0);
    const std::vector<json> records = json_lines(r.out);
    int trials = 0;
    bool saw_summary = false;
    for (const json& rec : records) {
        if (rec.at("record") == "trial-summary") {
            saw_summary = true;
            REQUIRE(rec.at("trials") == 20);
            REQUIRE(rec.at("successes") == 20);
            REQUIRE(rec.at("seed") == 1729);
            REQUIRE(rec.at("verified") == true);
        }
        if (rec.at("record") == "trial") {
            ++trials;
            REQUIRE(rec.at("correct") == true);
            const int axis = rec.at("axis");
            REQUIRE(axis >= 1);
            REQUIRE(axis <= 3);
        }
    }
    REQUIRE(saw_summary);
    REQUIRE(trials == 20);
}

TEST_CASE("network checks pass for both builtins") {
    for (const char* name : {"vaa-network", "singlet-network"}) {
        const CommandResult r = run_cli(std::string("circuit check --builtin ") + name);
        REQUIRE(r.status == 0);
        REQUIRE_THAT(r.out, ContainsSubstring("measurement mapping: bijective"));
        REQUIRE_THAT(r.out, ContainsSubstring("network/protocol consistency: agree"));
    }
}

TEST_CASE("running the full network leaves uniform magnitudes") {
    const CommandResult r = run_cli("--json circuit run --builtin vaa-network");
    REQUIRE(r.status == 0);
    const double expected_re[4] = {0.5, -0.5, 0.5, -0.5};
    int amps = 0;
    for (const json& rec : json_lines(r.out)) {
        if (rec.at("record") == "circuit-summary") {
            REQUIRE(rec.at("qubits") == 2);
            REQUIRE(rec.at("gates") == 6);
        }
        if (rec.at("record") == "amplitude") {
            const int index = rec.at("index");
            REQUIRE_THAT(double(rec.at("re")), WithinAbs(expected_re[index], 1e-9));
            REQUIRE_THAT(double(rec.at("im")), WithinAbs(0.0, 1e-9));
            ++amps;
        }
    }
    REQUIRE(amps == 4);
}

TEST_CASE("circuit files are checked from disk") {
    const auto good = write_temp("retroq_cli_good.qc", "qubits 2\nH 0\nCNOT 0 1\n");
    const CommandResult ok = run_cli(std::string("circuit check ") + good.string());
    REQUIRE(ok.status == 0);
    REQUIRE_THAT(ok.out, ContainsSubstring("canonical round trip ok"));

    const auto bad = write_temp("retroq_cli_bad.qc", "qubits 2\nWOBBLE 0\n");
    REQUIRE(run_cli(std::string("circuit check ") + bad.string()).status == 2);
    REQUIRE(run_cli("circuit dance --builtin vaa-network").status == 2);
}

TEST_CASE("construct recovers the six-outcome coefficients") {
    const CommandResult r = run_cli("construct --builtin m4-symmetric --audit m4-symmetric");
    REQUIRE(r.status == 0);
    REQUIRE_THAT(r.out, ContainsSubstring("feasibility: feasible"));
    REQUIRE_THAT(r.out, ContainsSubstring("b[1] = 0.408248290464"));
    REQUIRE_THAT(r.out, ContainsSubstring("b[6] = 0.408248290464"));
    REQUIRE_THAT(r.out, ContainsSubstring("constructed basis orthonormality residual 0.000000"));
    REQUIRE_THAT(r.out, ContainsSubstring("errata audit for 'm4-symmetric':"));
    REQUIRE_THAT(r.out, ContainsSubstring("amplitude at (6,2"));
}

TEST_CASE("construct reproduces the four-outcome basis from its table") {
    const CommandResult r = run_cli("construct --builtin vaa");
    REQUIRE(r.status == 0);
    REQUIRE_THAT(r.out, ContainsSubstring("b[1] = 0.500000000000"));
    REQUIRE_THAT(r.out, ContainsSubstring("phi[1] = +0.707106781"));
}

TEST_CASE("a five-axis request is refused as infeasible") {
    const auto table = write_temp("retroq_cli_five.tbl",
                                  "table 4 5\n"
                                  "+ + + + +\n"
                                  "+ - + - +\n"
                                  "- + - + -\n"
                                  "- - - - -\n");
    const auto axes = write_temp("retroq_cli_five.axes",
                                 "axes 5\n"
                                 "1 0 0\n"
                                 "0 1 0\n"
                                 "0 0 1\n"
                                 "0.577350269189626 0.577350269189626 0.577350269189626\n"
                                 "0.577350269189626 -0.577350269189626 -0.577350269189626\n");
    const CommandResult r =
        run_cli("construct --table " + table.string() + " --axes " + axes.string());
    REQUIRE(r.status == 1);
    REQUIRE_THAT(r.out, ContainsSubstring("feasibility: infeasible"));
    REQUIRE_THAT(r.out, ContainsSubstring("no protocol exists for five or more axes"));
    REQUIRE_THAT(r.out, ContainsSubstring("no solutions exist for this axis configuration"));
}

TEST_CASE("construct source flags are mutually exclusive") {
    REQUIRE(run_cli("construct").status == 2);
    REQUIRE(run_cli("construct --builtin vaa --table x.tbl").status == 2);
    const auto table = write_temp("retroq_cli_lonely.tbl", "table 2 1\n+\n-\n");
    REQUIRE(run_cli("construct --table " + table.string()).status == 2);
}
