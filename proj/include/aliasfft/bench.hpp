#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace aliasfft {

inline constexpr const char* kCsvHeader =
    "algo,n,k,snr,seed,runtime_ns,samples_raw,samples_unique,sampled_pct,l0,l1,l2,success";

/// Algorithms the harness knows: dt1 dt2 dt3 ffast rffast dsfft dense.
const std::vector<std::string>& known_algorithms();

struct ExperimentConfig {
    std::vector<std::string> algos;
    std::vector<std::size_t> n_list;
    std::vector<std::size_t> k_list;
    std::vector<std::optional<double>> snr_list;  // nullopt: exact
    std::size_t trials = 1;
    std::uint64_t seed_base = 0;
    std::string out_path;
    std::size_t threads = 0;  // 0: hardware concurrency, capped by ALIASFFT_THREADS
};

/// Throws std::invalid_argument for empty lists, trials == 0 or an unknown
/// algorithm name.
void validate(const ExperimentConfig& config);

struct ExperimentRecord {
    std::string algo;
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<double> snr;
    std::uint64_t seed = 0;
    std::uint64_t runtime_ns = 0;
    std::size_t samples_raw = 0;
    std::size_t samples_unique = 0;
    double sampled_pct = 0.0;
    std::size_t l0 = 0;
    double l1 = 0.0;
    double l2 = 0.0;
    bool success = false;
    std::string skipped;  // non-empty: the cell was not run, with the reason
};

struct Cell {
    std::string algo;
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<double> snr;
};

/// Empty when the algorithm can run on (n, k); the reason otherwise.
std::string incompatibility(const Cell& cell);

/// One trial of a cell at the given seed.
ExperimentRecord run_trial(const Cell& cell, std::uint64_t seed);

/// `trials` consecutive seeds starting at seed_base.
std::vector<ExperimentRecord> run_cell(const Cell& cell, std::size_t trials, std::uint64_t seed_base,
                                       std::size_t threads = 1);

/// Cartesian product algo × n × k × snr, rows in that order.
std::vector<ExperimentRecord> run_suite(const ExperimentConfig& config);

/// 9 significant digits.
std::string format_real(double v);

std::string to_csv_row(const ExperimentRecord& r);

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);

/// run_suite and write to config.out_path; throws std::runtime_error when the
/// file cannot be written.
void run_suite_to_file(const ExperimentConfig& config);

/// Worker count: requested (or hardware concurrency), capped by ALIASFFT_THREADS.
std::size_t effective_threads(std::size_t requested);

}  // namespace aliasfft
