#include "aliasfft/dsfft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aliasfft/fft.hpp"
#include "aliasfft/oneshot.hpp"
#include "aliasfft/peeling.hpp"

namespace aliasfft {

namespace {

std::size_t log2_exact(std::size_t n) {
    std::size_t d = 0;
    while ((std::size_t{1} << d) < n) ++d;
    return d;
}

constexpr double kActivityFloor = 1e-6;

}  // namespace

cplx direct_bucket(const Signal& x, std::size_t b, std::size_t i, SampleLedger& ledger) {
    const std::size_t n = x.size();
    if (b == 0 || n % b != 0) throw std::invalid_argument("direct_bucket: B must divide N");
    const std::size_t l = n / b;
    cplx acc{};
    for (std::size_t j = 0; j < b; ++j) {
        ledger.record(j * l);
        acc += x[j * l] * unit_root(b, static_cast<std::int64_t>((i * j) % b));
    }
    return acc / double(b);
}

TreeLayer full_layer(const Signal& x, std::size_t depth, double threshold, SampleLedger& ledger) {
    TreeLayer layer;
    layer.depth = depth;
    layer.b = std::size_t{1} << depth;
    layer.full = true;
    const auto fs = bucketize(x, layer.b, 0, ledger);
    for (std::size_t i = 0; i < layer.b; ++i) {
        layer.values[i] = fs.values[i];
        if (std::abs(fs.values[i]) > threshold) layer.active.push_back(i);
    }
    return layer;
}

TreeLayer expand_layer(const Signal& x, const TreeLayer& prev, double threshold,
                       SampleLedger& ledger) {
    const std::size_t d = prev.depth + 1;
    if ((std::size_t{1} << d) > x.size()) throw std::invalid_argument("expand_layer: depth exceeds log2 N");
    if (2 * prev.m() > d) return full_layer(x, d, threshold, ledger);

    TreeLayer layer;
    layer.depth = d;
    layer.b = std::size_t{1} << d;
    std::vector<std::size_t> cand;
    for (std::size_t i : prev.active) {
        cand.push_back(i);
        cand.push_back(i + prev.b);
    }
    std::sort(cand.begin(), cand.end());
    for (std::size_t i : cand) {
        const cplx v = direct_bucket(x, layer.b, i, ledger);
        layer.values[i] = v;
        if (std::abs(v) > threshold) layer.active.push_back(i);
    }
    return layer;
}

namespace {

// Per-sample time-domain noise variance from a fully computed layer: noise in
// ŷ_{B,0} has variance σ²/B, and with B >= 2k most buckets hold noise only, so
// the median |ŷ|² (an exponential variable, median σ²ln2/B) gives σ².
double estimate_noise_var(const TreeLayer& layer) {
    std::vector<double> e;
    for (const auto& [i, v] : layer.values) e.push_back(std::norm(v));
    std::nth_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(e.size() / 2), e.end());
    return e[e.size() / 2] / std::numbers::ln2 * double(layer.b);
}

double layer_threshold(double noise_var, std::size_t b) {
    return std::max(kActivityFloor, 3.0 * std::sqrt(noise_var / double(b)));
}

}  // namespace

DsfftReport dsfft_run(const Signal& x, std::size_t k, const DsfftConfig& config,
                      SampleLedger& ledger, bool noisy) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n)) throw unsupported_size("dsfft: N must be a power of two");
    DsfftReport rep;
    rep.recovered = SparseSpectrum(n);
    if (k == 0) return rep;
    const std::size_t max_depth = log2_exact(n);
    rep.start_depth = std::min(config.start_depth.value_or(log2_exact(k)), max_depth);

    double noise_var = 0.0;
    if (noisy) {
        // Calibrate on a layer wide enough that most buckets are noise only.
        const std::size_t cal = std::min(max_depth, std::max(rep.start_depth, log2_exact(4 * k)));
        noise_var = estimate_noise_var(full_layer(x, cal, 0.0, ledger));
    }

    TreeLayer layer = full_layer(x, rep.start_depth, layer_threshold(noise_var, std::size_t{1} << rep.start_depth), ledger);
    rep.layer_counts.push_back(layer.m());
    const double target = config.theta * double(k);
    while (double(layer.m()) < target && layer.depth < max_depth) {
        const std::size_t b_next = layer.b * 2;
        layer = expand_layer(x, layer, layer_threshold(noise_var, b_next), ledger);
        rep.layer_counts.push_back(layer.m());
    }
    rep.leaf_depth = layer.depth;
    const std::size_t b = layer.b;
    if (layer.active.empty()) return rep;

    std::vector<std::size_t> aliased;
    if (noisy) {
        aliased = layer.active;
    } else {
        const ShiftSet shifts{0, 1, 2};
        const auto rounds = bucketize_set(x, b, shifts, ledger);
        double energy = 0.0;
        for (const auto& v : rounds[0].values) energy += std::norm(v);
        const double eps = std::max(1e-12, 1e-6 * std::sqrt(energy));
        for (std::size_t i : layer.active) {
            BucketNode node;
            node.index = i;
            node.vec = {rounds[0].values[i], rounds[1].values[i], rounds[2].values[i]};
            node.residual = node.vec;
            const auto c = classify_exact(node, shifts, b, n, eps);
            if (c.state == BucketState::SingleTon) {
                rep.recovered.set(c.f, c.v);
                ++rep.singletons;
            } else if (c.state == BucketState::MultiTon) {
                aliased.push_back(i);
            }
        }
    }
    rep.aliased_leaves = aliased.size();

    if (!aliased.empty() && b < n) {
        OneShotConfig oc;
        oc.b = b;
        oc.a_m = std::min<std::size_t>(4, n / b);
        oc.p = std::max<std::size_t>(3 * oc.a_m, static_cast<std::size_t>(std::ceil(double(oc.a_m) * std::log10(double(n / b)))));
        oc.seed = config.seed;
        oc.variant = DtVariant::DT3;
        oc = resolve_config(n, k, oc);
        const auto ms = collect_moments(x, oc, ledger);
        std::vector<BucketMoments> sub;
        for (std::size_t i : aliased) sub.push_back(ms.buckets[i]);
        const std::size_t left = k > rep.recovered.size() ? k - rep.recovered.size() : 0;
        const std::size_t budget = std::max(left, aliased.size());
        const auto counts = detect_sparsity(sub, std::min(budget, sub.size() * oc.a_m));
        for (std::size_t j = 0; j < sub.size(); ++j) {
            if (counts[j] == 0) continue;
            const auto sol = solve_bucket(sub[j], counts[j], oc.variant, ms.random_shifts, b, n);
            for (std::size_t t = 0; t < sol.positions.size(); ++t) rep.recovered.set(sol.positions[t], sol.values[t]);
        }
    }
    return rep;
}

SparseSpectrum dsfft(const Signal& x, std::size_t k, const DsfftConfig& config,
                     SampleLedger& ledger, bool noisy) {
    return dsfft_run(x, k, config, ledger, noisy).recovered.top_k(k);
}

double non_aliasing_probability(std::size_t n, std::size_t k, std::size_t b) {
    if (b == 0 || n % b != 0) throw std::invalid_argument("non_aliasing_probability: B must divide N");
    if (k > b) return 0.0;
    const double l = double(n / b);
    double p = 1.0;
    for (std::size_t j = 1; j < k; ++j) p *= (double(n) - double(j) * l) / double(n - j);
    return p;
}

double non_aliasing_probability_limit(std::size_t k, std::size_t b) {
    if (k > b) return 0.0;
    double p = 1.0;
    for (std::size_t j = 1; j < k; ++j) p *= 1.0 - double(j) / double(b);
    return p;
}

}  // namespace aliasfft
