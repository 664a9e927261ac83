#include "aliasfft/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "aliasfft/fft.hpp"

namespace aliasfft {

Signal::Signal(std::vector<cplx> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("Signal: length must be at least 1");
}

Signal Signal::zeros(std::size_t n) { return Signal(std::vector<cplx>(n)); }

SparseSpectrum::SparseSpectrum(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("SparseSpectrum: n must be at least 1");
}

void SparseSpectrum::set(std::size_t f, cplx v) {
    if (f >= n_) throw std::out_of_range("SparseSpectrum: position out of range");
    entries_[f] = v;
}

cplx SparseSpectrum::at(std::size_t f) const {
    auto it = entries_.find(f);
    return it == entries_.end() ? cplx{} : it->second;
}

SparseSpectrum SparseSpectrum::top_k(std::size_t k) const {
    std::vector<std::pair<std::size_t, cplx>> items(entries_.begin(), entries_.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        return std::abs(a.second) > std::abs(b.second);
    });
    SparseSpectrum out(n_);
    for (std::size_t i = 0; i < std::min(k, items.size()); ++i) out.set(items[i].first, items[i].second);
    return out;
}

cplx unit_root(std::size_t n, std::int64_t e) {
    const auto nn = static_cast<std::int64_t>(n);
    std::int64_t r = e % nn;
    if (r < 0) r += nn;
    return std::polar(1.0, -2.0 * std::numbers::pi * double(r) / double(n));
}

std::vector<cplx> dense_dft(const Signal& x) {
    const std::size_t n = x.size();
    std::vector<cplx> roots(n);
    for (std::size_t t = 0; t < n; ++t) roots[t] = unit_root(n, static_cast<std::int64_t>(t));
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) acc += x[j] * roots[(i * j) % n];
        out[i] = acc / double(n);
    }
    return out;
}

std::vector<cplx> fast_dft(const Signal& x) {
    auto out = fft(x.samples());
    const double scale = 1.0 / double(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

Signal inverse_dft(std::span<const cplx> spectrum) { return Signal(ifft(spectrum)); }

Signal inverse_dft(const SparseSpectrum& spectrum) {
    const std::size_t n = spectrum.n();
    // Direct synthesis is cheaper than a full inverse FFT for small supports.
    if (spectrum.size() * n > (std::size_t{1} << 22)) {
        std::vector<cplx> dense(n);
        for (const auto& [f, v] : spectrum) dense[f] = v;
        return inverse_dft(dense);
    }
    std::vector<cplx> x(n);
    for (const auto& [f, v] : spectrum) {
        for (std::size_t j = 0; j < n; ++j)
            x[j] += v * unit_root(n, -static_cast<std::int64_t>((f * j) % n));
    }
    return Signal(std::move(x));
}

SparseSpectrum top_k(std::span<const cplx> spectrum, std::size_t k) {
    std::vector<std::size_t> idx(spectrum.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double ma = std::abs(spectrum[a]), mb = std::abs(spectrum[b]);
                          return ma != mb ? ma > mb : a < b;
                      });
    SparseSpectrum out(spectrum.size());
    for (std::size_t i = 0; i < k; ++i) out.set(idx[i], spectrum[idx[i]]);
    return out;
}

namespace {

void add_noise(Signal& x, double snr_db, Rng& rng) {
    double power = 0.0;
    for (const auto& s : x.samples()) power += std::norm(s);
    power /= double(x.size());
    const double variance = power / std::pow(10.0, snr_db / 10.0);
    const double sd = std::sqrt(variance / 2.0);
    for (auto& s : x.samples()) s += cplx(sd * rng.normal(), sd * rng.normal());
}

}  // namespace

TestCase generate_test_case(std::size_t n, std::span<const std::size_t> positions,
                            std::optional<double> snr_db, std::uint64_t seed) {
    if (positions.size() > n) throw std::invalid_argument("generate_test_case: k > n");
    Rng rng(mix_seed(seed, 0x7068617365ULL));
    SparseSpectrum truth(n);
    for (std::size_t f : positions) {
        if (truth.contains(f)) throw std::invalid_argument("generate_test_case: duplicate position");
        truth.set(f, std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform()));
    }
    Signal signal = inverse_dft(truth);
    if (snr_db) add_noise(signal, *snr_db, rng);
    return TestCase{std::move(signal), std::move(truth), snr_db, seed};
}

TestCase generate_test_case(std::size_t n, std::size_t k, std::optional<double> snr_db,
                            std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_test_case: n must be at least 1");
    if (k > n) throw std::invalid_argument("generate_test_case: k > n");
    Rng rng(mix_seed(seed, 0x706f73ULL));
    std::vector<std::size_t> positions;
    if (2 * k > n) {
        // Dense draw: partial Fisher-Yates.
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
        positions.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
        std::set<std::size_t> seen;
        while (positions.size() < k) {
            const auto f = static_cast<std::size_t>(rng.below(n));
            if (seen.insert(f).second) positions.push_back(f);
        }
    }
    return generate_test_case(n, positions, snr_db, seed);
}

ErrorMetrics evaluate(const SparseSpectrum& truth, const SparseSpectrum& estimate, double tol) {
    if (truth.n() != estimate.n()) throw std::invalid_argument("evaluate: size mismatch");
    std::set<std::size_t> support;
    for (const auto& [f, v] : truth) support.insert(f);
    for (const auto& [f, v] : estimate) support.insert(f);
    ErrorMetrics m;
    double sq = 0.0;
    for (std::size_t f : support) {
        const double d = std::abs(truth.at(f) - estimate.at(f));
        m.l1 += d;
        sq += d * d;
        if (d > tol) ++m.l0;
    }
    m.l2 = std::sqrt(sq);
    return m;
}

double support_recovery(const SparseSpectrum& truth, const SparseSpectrum& estimate) {
    if (truth.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& [f, v] : truth)
        if (estimate.contains(f)) ++hit;
    return double(hit) / double(truth.size());
}

}  // namespace aliasfft
