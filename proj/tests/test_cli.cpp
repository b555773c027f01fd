#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "liouville/cli.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    RunResult result;
    result.code = liouville::cli::run(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::filesystem::path write_temp_model(const std::string& name,
                                       const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream file(path, std::ios::binary);
    file << text;
    return path;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& csv) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("steady prints a unit-trace solution for the builtin two-level") {
    const RunResult r = run_cli({"steady", "--builtin", "two-level", "--x", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("trace = 1 ") != std::string::npos);
    CHECK(r.out.find("Re(rho):") != std::string::npos);
    CHECK(r.out.find("residual = ") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("steady agrees between the two builders") {
    const RunResult fast =
        run_cli({"steady", "--builtin", "lambda3", "--x", "1.5", "--builder", "fast"});
    const RunResult naive =
        run_cli({"steady", "--builtin", "lambda3", "--x", "1.5", "--builder", "naive"});
    CHECK(fast.code == 0);
    CHECK(naive.code == 0);
    // Identical up to the builder label in the banner.
    std::string a = fast.out, b = naive.out;
    a = a.substr(a.find('\n'));
    b = b.substr(b.find('\n'));
    CHECK(a == b);
}

TEST_CASE("steady reports a non-unique steady state on the all-zero model") {
    const auto path = write_temp_model("liouville_zero.lvm", "levels 2\n");
    const RunResult r = run_cli({"steady", "--model", path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("steady state not unique") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("steady rejects missing and conflicting model sources") {
    CHECK(run_cli({"steady"}).code == 1);
    CHECK(run_cli({"steady", "--builtin", "two-level", "--model", "x.lvm"}).code == 1);
    CHECK(run_cli({"steady", "--builtin", "no-such-model"}).code == 1);
    CHECK(run_cli({"steady", "--model", "/nonexistent/nope.lvm"}).code == 1);
}

TEST_CASE("parse errors surface with file and line") {
    const auto path =
        write_temp_model("liouville_bad.lvm", "levels 2\nham 1 3 0.5\n");
    const RunResult r = run_cli({"steady", "--model", path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find(":2:") != std::string::npos);
    CHECK(r.err.find("index 3") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("sweep emits the two-level resonance curve") {
    const RunResult r = run_cli({"sweep", "--builtin", "two-level"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,pop2\n", 0) == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 401);

    // The curve peaks at zero detuning.
    double best_x = -1.0, best_pop = -1.0;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 2);
        if (row[1] > best_pop) {
            best_pop = row[1];
            best_x = row[0];
        }
    }
    CHECK(best_x == 0.0);
    CHECK(best_pop == doctest::Approx(25.0 / 4.0 / (0.25 + 12.5)).epsilon(1e-9));
}

TEST_CASE("sweep emits the CPT dip") {
    const RunResult r = run_cli({"sweep", "--builtin", "lambda3"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 401);
    double dip_x = -1.0, dip_pop = 2.0;
    for (const auto& row : rows) {
        if (row[1] < dip_pop) {
            dip_pop = row[1];
            dip_x = row[0];
        }
    }
    CHECK(dip_x == 0.0);
    CHECK(dip_pop <= 1e-10);
}

TEST_CASE("sweep output is deterministic byte for byte") {
    const RunResult a = run_cli({"sweep", "--builtin", "two-level"});
    const RunResult b = run_cli({"sweep", "--builtin", "two-level"});
    CHECK(a.out == b.out);

    // Worker count must not change the bytes.
    setenv("LIOUVILLE_THREADS", "1", 1);
    const RunResult serial = run_cli({"sweep", "--builtin", "two-level"});
    setenv("LIOUVILLE_THREADS", "4", 1);
    const RunResult parallel = run_cli({"sweep", "--builtin", "two-level"});
    unsetenv("LIOUVILLE_THREADS");
    CHECK(serial.out == a.out);
    CHECK(parallel.out == a.out);
}

TEST_CASE("waveplate sweeps emit the polarization columns") {
    const RunResult r = run_cli({"sweep", "--builtin", "rb87-waveplate", "--points", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,phi_plus,phi_minus,trans_plus,trans_minus,dphi\n", 0) == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 6);
        CHECK(std::abs(row[5] - (row[1] - row[2])) <= 1e-15);
    }
}

TEST_CASE("sweep honors range overrides and --out") {
    const auto out_path = std::filesystem::temp_directory_path() / "liouville_sweep.csv";
    const RunResult r = run_cli({"sweep", "--builtin", "two-level", "--from", "-1",
                                 "--to", "1", "--points", "5", "--out",
                                 out_path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out_path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream csv;
    csv << in.rdbuf();
    const auto rows = parse_csv_rows(csv.str());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][0] == -1.0);
    CHECK(rows[4][0] == 1.0);
    std::filesystem::remove(out_path);
}

TEST_CASE("failed sweep points become NaN cells and a summary") {
    // Im H(2,2) = -x: gain for x < 0, no dynamics at all at x = 0.
    const auto path = write_temp_model(
        "liouville_partial.lvm",
        "levels 2\nham 1 2 0 1\nham 2 1 0 1\nham 2 2 0 0:-1\nsrc 1 2 0 2\n"
        "sweep g -1 1 5\nobserve pop 2\n");
    const RunResult r = run_cli({"sweep", "--model", path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("3 of 5 points failed") != std::string::npos);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(std::isnan(rows[0][1]));
    CHECK(std::isnan(rows[2][1]));
    CHECK(!std::isnan(rows[4][1]));
    std::filesystem::remove(path);
}

TEST_CASE("evolve reproduces exponential decay from level 2") {
    // Undriven two-level atom: only decay moves population.
    const auto path = write_temp_model(
        "liouville_decay.lvm", "levels 2\nham 2 2 0:-0.5\nsrc 1 2 1\nobserve pop 2\n");
    const RunResult r = run_cli({"evolve", "--model", path.string(), "--init", "2",
                                 "--t-end", "2", "--dt", "0.01"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,pop2\n", 0) == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 201);
    for (const auto& row : rows)
        CHECK(std::abs(row[1] - std::exp(-row[0])) <= 1e-6);
    std::filesystem::remove(path);
}

TEST_CASE("evolve emits split columns for coherence observables") {
    const auto path = write_temp_model(
        "liouville_coh.lvm",
        "levels 2\nham 1 2 0.5\nham 2 1 0.5\nham 2 2 0:-0.5\nsrc 1 2 1\n"
        "observe coh 1 2\nobserve pop 1\n");
    const RunResult r = run_cli({"evolve", "--model", path.string(), "--t-end", "1",
                                 "--dt", "0.05"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t,coh1_2.re,coh1_2.im,pop1\n", 0) == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 21);
    CHECK(rows[0][3] == 1.0);  // starts fully in level 1
    std::filesystem::remove(path);
}

TEST_CASE("sweep with the naive builder matches the fast builder") {
    const std::vector<std::string> base = {"sweep", "--builtin", "lambda3",
                                           "--from", "-2", "--to", "2",
                                           "--points", "9"};
    std::vector<std::string> naive = base;
    naive.insert(naive.end(), {"--builder", "naive"});
    const RunResult a = run_cli(base);
    const RunResult b = run_cli(naive);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("a one-level model pins the whole population") {
    const auto path = write_temp_model("liouville_one.lvm", "levels 1\n");
    const RunResult r = run_cli({"steady", "--model", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("trace = 1 ") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("evolve converges to the steady state value") {
    const RunResult r = run_cli({"evolve", "--builtin", "two-level", "--x", "0",
                                 "--t-end", "50", "--dt", "0.02"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv_rows(r.out);
    const double expected = 25.0 / 4.0 / (0.25 + 12.5);
    CHECK(std::abs(rows.back()[1] - expected) <= 1e-6);
}

TEST_CASE("evolve rejects oversized steps with the computed bound") {
    const RunResult r = run_cli({"evolve", "--builtin", "two-level", "--x", "0",
                                 "--t-end", "1", "--dt", "0.05"});
    CHECK(r.code == 1);
    CHECK(r.err.find("stability guard") != std::string::npos);
    CHECK(r.err.find("0.04") != std::string::npos);
}

TEST_CASE("validate passes the builtin models") {
    for (const char* name : {"two-level", "lambda3", "rb87-waveplate"}) {
        const RunResult r = run_cli({"validate", "--builtin", name});
        CHECK(r.code == 0);
        CHECK(r.out.find("validation passed") != std::string::npos);
    }
}

TEST_CASE("validate reports closure violations") {
    const auto path = write_temp_model(
        "liouville_leaky.lvm",
        "levels 2\nham 2 2 0:-0.5\nsrc 1 2 0.5\n");
    const RunResult r = run_cli({"validate", "--model", path.string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("trace-closure") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("bench prints a timing table and verifies the builders") {
    const RunResult r =
        run_cli({"bench", "--sizes", "2,3", "--reps", "2", "--seed", "7"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n,naive_ms,fast_ms,ratio\n", 0) == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == 2.0);
    CHECK(rows[1][0] == 3.0);
    for (const auto& row : rows) {
        CHECK(row[1] > 0.0);
        CHECK(row[2] > 0.0);
    }
    // Tiny systems build in well under a millisecond.
    CHECK(rows[0][1] < 1.0);
    CHECK(rows[0][2] < 1.0);
}

TEST_CASE("bench rejects sizes below two") {
    CHECK(run_cli({"bench", "--sizes", "1,2"}).code == 1);
}

TEST_CASE("help exits cleanly") {
    const RunResult top = run_cli({"--help"});
    CHECK(top.code == 0);
    CHECK(top.out.find("steady") != std::string::npos);
    const RunResult sub = run_cli({"sweep", "--help"});
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--out") != std::string::npos);
}

TEST_CASE("unknown flags and missing subcommands exit with 1") {
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"steady", "--builtin", "two-level", "--bogus"}).code == 1);
}
