#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aliasfft/bench.hpp"

using namespace aliasfft;

namespace {

ExperimentConfig small_suite() {
    ExperimentConfig c;
    c.algos = {"ffast", "dt3", "dense"};
    c.n_list = {20, 1024};
    c.k_list = {5};
    c.snr_list = {std::nullopt, 20.0};
    c.trials = 2;
    c.seed_base = 40;
    c.threads = 3;
    return c;
}

std::string strip_runtime(const std::string& row) {
    std::stringstream in(row);
    std::string cell, out;
    for (int i = 0; std::getline(in, cell, ','); ++i) out += (i == 5 ? std::string() : cell) + ",";
    return out;
}

}  // namespace

TEST_CASE("csv header and formatting") {
    std::ostringstream os;
    write_csv(os, {});
    CHECK(os.str() == "algo,n,k,snr,seed,runtime_ns,samples_raw,samples_unique,sampled_pct,l0,l1,l2,success\n");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.1234567891234) == "0.123456789");
    CHECK(format_real(1e-17) == "1e-17");

    ExperimentRecord r;
    r.algo = "dense";
    r.n = 8;
    r.k = 1;
    r.seed = 3;
    r.samples_raw = r.samples_unique = 8;
    r.sampled_pct = 1.0;
    r.success = true;
    CHECK(to_csv_row(r) == "dense,8,1,exact,3,0,8,8,1,0,0,0,true");
    r.snr = -2.5;
    CHECK(to_csv_row(r).rfind("dense,8,1,-2.5,3,", 0) == 0);
}

TEST_CASE("ffast fixture-size cell") {
    const auto rows = run_cell({"ffast", 20, 5, std::nullopt}, 3, 0);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.samples_raw == 27);
        CHECK(r.skipped.empty());
    }
}

TEST_CASE("dense baseline reads everything") {
    for (const auto& r : run_cell({"dense", 512, 4, 10.0}, 3, 1)) {
        CHECK(r.sampled_pct == 1.0);
        CHECK(r.samples_unique == 512);
    }
}

TEST_CASE("dt3 at N=2^16, K=4 succeeds in most seeds") {
    std::size_t ok = 0;
    for (const auto& r : run_cell({"dt3", 1 << 16, 4, std::nullopt}, 10, 0, 4)) ok += r.success;
    CHECK(ok >= 9);
}

TEST_CASE("incompatible cells become skipped rows") {
    CHECK(!incompatibility({"dt1", 1000, 4, std::nullopt}).empty());
    CHECK(!incompatibility({"dsfft", 96, 4, std::nullopt}).empty());
    CHECK(!incompatibility({"ffast", 1024, 4, std::nullopt}).empty());
    CHECK(!incompatibility({"dense", 8, 9, std::nullopt}).empty());
    CHECK(incompatibility({"rffast", 4080, 4, 10.0}).empty());
    const auto rows = run_cell({"ffast", 64, 2, std::nullopt}, 2, 0);
    REQUIRE(rows.size() == 2);
    CHECK(!rows[0].skipped.empty());
    CHECK(to_csv_row(rows[0]).find("skipped") != std::string::npos);
}

TEST_CASE("suite validation") {
    auto c = small_suite();
    c.k_list.clear();
    CHECK_THROWS_AS(run_suite(c), std::invalid_argument);
    c = small_suite();
    c.trials = 0;
    CHECK_THROWS_AS(run_suite(c), std::invalid_argument);
    c = small_suite();
    c.algos = {"fftw"};
    CHECK_THROWS_AS(run_suite(c), std::invalid_argument);
}

TEST_CASE("suite rows are ordered and reproducible apart from runtime") {
    const auto c = small_suite();
    const auto a = run_suite(c);
    REQUIRE(a.size() == 3 * 2 * 2 * 2);
    CHECK(a.front().algo == "ffast");
    CHECK(a.back().algo == "dense");
    CHECK(a[0].seed == 40);
    CHECK(a[1].seed == 41);

    auto c1 = c;
    c1.threads = 1;
    const auto b = run_suite(c1);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(strip_runtime(to_csv_row(a[i])) == strip_runtime(to_csv_row(b[i])));
}

TEST_CASE("thread cap from the environment") {
    ::setenv("ALIASFFT_THREADS", "2", 1);
    CHECK(effective_threads(8) == 2);
    CHECK(effective_threads(1) == 1);
    ::setenv("ALIASFFT_THREADS", "junk", 1);
    CHECK(effective_threads(8) == 8);
    ::unsetenv("ALIASFFT_THREADS");
}

TEST_CASE("suite to file, and an unwritable path") {
    auto c = small_suite();
    c.algos = {"dense"};
    c.trials = 1;
    const auto path = std::filesystem::temp_directory_path() / "aliasfft_suite_test.csv";
    c.out_path = path.string();
    run_suite_to_file(c);
    std::ifstream f(path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(f, line)) ++lines;
    CHECK(lines == 1 + 4);
    std::filesystem::remove(path);

    c.out_path = "/nonexistent-dir/x.csv";
    CHECK_THROWS_AS(run_suite_to_file(c), std::runtime_error);
}
