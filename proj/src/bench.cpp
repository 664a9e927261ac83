#include "aliasfft/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "aliasfft/bucketize.hpp"
#include "aliasfft/dsfft.hpp"
#include "aliasfft/fft.hpp"
#include "aliasfft/oneshot.hpp"
#include "aliasfft/peeling.hpp"
#include "aliasfft/signals.hpp"

namespace aliasfft {

const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> algos{"dt1", "dt2", "dt3", "ffast", "rffast", "dsfft", "dense"};
    return algos;
}

void validate(const ExperimentConfig& c) {
    if (c.algos.empty()) throw std::invalid_argument("algo list is empty");
    if (c.n_list.empty()) throw std::invalid_argument("n list is empty");
    if (c.k_list.empty()) throw std::invalid_argument("k list is empty");
    if (c.snr_list.empty()) throw std::invalid_argument("snr list is empty");
    if (c.trials == 0) throw std::invalid_argument("trials must be at least 1");
    for (const auto& a : c.algos)
        if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end())
            throw std::invalid_argument("unknown algorithm: " + a);
    for (auto n : c.n_list)
        if (n == 0) throw std::invalid_argument("n must be positive");
    for (auto k : c.k_list)
        if (k == 0) throw std::invalid_argument("k must be positive");
}

namespace {

std::uint64_t name_hash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::optional<DtVariant> dt_variant(const std::string& algo) {
    if (algo == "dt1") return DtVariant::DT1;
    if (algo == "dt2") return DtVariant::DT2;
    if (algo == "dt3") return DtVariant::DT3;
    return std::nullopt;
}

}  // namespace

std::string incompatibility(const Cell& cell) {
    if (cell.k > cell.n) return "k exceeds n";
    if (dt_variant(cell.algo) || cell.algo == "dsfft") {
        if (!is_power_of_two(cell.n)) return "n is not a power of two";
        if (dt_variant(cell.algo)) {
            try {
                resolve_config(cell.n, std::max<std::size_t>(cell.k, 1), OneShotConfig{});
            } catch (const std::invalid_argument& e) {
                return e.what();
            }
        }
    }
    if (cell.algo == "ffast" || cell.algo == "rffast") {
        if (prime_power_factors(cell.n).size() < 2) return "n has fewer than two co-prime factors";
    }
    return {};
}

ExperimentRecord run_trial(const Cell& cell, std::uint64_t seed) {
    ExperimentRecord r;
    r.algo = cell.algo;
    r.n = cell.n;
    r.k = cell.k;
    r.snr = cell.snr;
    r.seed = seed;
    if (auto why = incompatibility(cell); !why.empty()) {
        r.skipped = why;
        return r;
    }

    const auto tc = generate_test_case(cell.n, cell.k, cell.snr, seed);
    const std::uint64_t algo_seed = mix_seed(seed, name_hash(cell.algo));
    SampleLedger ledger(cell.n);
    SparseSpectrum est(cell.n);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (auto v = dt_variant(cell.algo)) {
            OneShotConfig cfg;
            cfg.variant = *v;
            cfg.seed = algo_seed;
            est = sfft_dt(tc.signal, cell.k, cfg, ledger);
        } else if (cell.algo == "ffast") {
            est = ffast(tc.signal, cell.k, ledger, algo_seed);
        } else if (cell.algo == "rffast") {
            est = r_ffast(tc.signal, cell.k, cell.snr, ledger, algo_seed);
        } else if (cell.algo == "dsfft") {
            DsfftConfig cfg;
            cfg.seed = algo_seed;
            est = dsfft(tc.signal, cell.k, cfg, ledger, cell.snr.has_value());
        } else {
            // The baseline reads the whole signal.
            for (std::size_t i = 0; i < cell.n; ++i) ledger.record(i);
            est = top_k(fast_dft(tc.signal), cell.k);
        }
    } catch (const std::exception& e) {
        r.skipped = std::string("error: ") + e.what();
        return r;
    }
    const auto t1 = std::chrono::steady_clock::now();

    const auto m = evaluate(tc.truth, est);
    r.runtime_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    r.samples_raw = ledger.count();
    r.samples_unique = ledger.unique();
    r.sampled_pct = double(r.samples_unique) / double(cell.n);
    r.l0 = m.l0;
    r.l1 = m.l1;
    r.l2 = m.l2;
    r.success = m.l0 == 0;
    return r;
}

std::size_t effective_threads(std::size_t requested) {
    std::size_t t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ALIASFFT_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) t = std::min(t, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, t);
}

namespace {

struct Task {
    const Cell* cell;
    std::uint64_t seed;
};

std::vector<ExperimentRecord> run_tasks(const std::vector<Task>& tasks, std::size_t threads) {
    std::vector<ExperimentRecord> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = run_trial(*tasks[i].cell, tasks[i].seed);
    };
    const std::size_t w = std::min(threads, std::max<std::size_t>(1, tasks.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < w; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace

std::vector<ExperimentRecord> run_cell(const Cell& cell, std::size_t trials, std::uint64_t seed_base,
                                       std::size_t threads) {
    std::vector<Task> tasks;
    for (std::size_t t = 0; t < trials; ++t) tasks.push_back({&cell, seed_base + t});
    return run_tasks(tasks, effective_threads(threads));
}

std::vector<ExperimentRecord> run_suite(const ExperimentConfig& config) {
    validate(config);
    std::vector<Cell> cells;
    for (const auto& a : config.algos)
        for (auto n : config.n_list)
            for (auto k : config.k_list)
                for (const auto& s : config.snr_list) cells.push_back({a, n, k, s});
    std::vector<Task> tasks;
    for (const auto& c : cells)
        for (std::size_t t = 0; t < config.trials; ++t) tasks.push_back({&c, config.seed_base + t});
    return run_tasks(tasks, effective_threads(config.threads));
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string to_csv_row(const ExperimentRecord& r) {
    std::string s = r.algo + "," + std::to_string(r.n) + "," + std::to_string(r.k) + "," +
                    (r.snr ? format_real(*r.snr) : std::string("exact")) + "," + std::to_string(r.seed) + ",";
    if (!r.skipped.empty()) {
        std::string why = r.skipped;
        std::replace(why.begin(), why.end(), ',', ';');
        return s + ",,,,,,,skipped: " + why;
    }
    s += std::to_string(r.runtime_ns) + "," + std::to_string(r.samples_raw) + "," +
         std::to_string(r.samples_unique) + "," + format_real(r.sampled_pct) + "," + std::to_string(r.l0) + "," +
         format_real(r.l1) + "," + format_real(r.l2) + "," + (r.success ? "true" : "false");
    return s;
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) os << to_csv_row(r) << '\n';
}

void run_suite_to_file(const ExperimentConfig& config) {
    validate(config);
    std::ofstream f(config.out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + config.out_path);
    write_csv(f, run_suite(config));
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + config.out_path);
}

}  // namespace aliasfft
