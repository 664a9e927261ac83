#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "aliasfft/bench.hpp"

int main(int argc, char** argv) {
    using aliasfft::ExperimentConfig;
    CLI::App app{"Sparse FFT benchmark harness; writes one CSV row per trial."};
    std::vector<std::string> algos, snrs;
    std::vector<std::size_t> ns, ks;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::string out;
    app.add_option("--algo", algos, "dt1,dt2,dt3,ffast,rffast,dsfft,dense")->delimiter(',')->required();
    app.add_option("--n", ns, "signal lengths")->delimiter(',')->required();
    app.add_option("--k", ks, "sparsities")->delimiter(',')->required();
    app.add_option("--snr", snrs, "SNR values in dB, or exact")->delimiter(',')->required();
    app.add_option("--trials", trials, "seeds per cell")->required();
    app.add_option("--seed", seed, "first seed")->required();
    app.add_option("--out", out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ExperimentConfig cfg;
    cfg.algos = algos;
    cfg.n_list = ns;
    cfg.k_list = ks;
    cfg.trials = trials;
    cfg.seed_base = seed;
    cfg.out_path = out;
    try {
        for (const auto& s : snrs) {
            if (s == "exact") {
                cfg.snr_list.emplace_back(std::nullopt);
                continue;
            }
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad snr: " + s);
            cfg.snr_list.emplace_back(v);
        }
        aliasfft::validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    }

    try {
        aliasfft::run_suite_to_file(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
