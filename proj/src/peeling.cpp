#include "aliasfft/peeling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "aliasfft/rng.hpp"

namespace aliasfft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double a) { return std::remainder(a, kTwoPi); }

double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t c = 0;
    while ((std::size_t{1} << c) < n) ++c;
    return c;
}

}  // namespace

const char* to_string(BucketState s) {
    switch (s) {
        case BucketState::ZeroTon: return "zero-ton";
        case BucketState::SingleTon: return "single-ton";
        case BucketState::MultiTon: return "multi-ton";
    }
    return "?";
}

std::vector<std::size_t> prime_power_factors(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        std::size_t q = 1;
        while (n % p == 0) {
            n /= p;
            q *= p;
        }
        out.push_back(q);
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

struct Candidate {
    std::vector<std::size_t> b;  // ascending
    std::size_t sum = 0;
    std::size_t min = 0;
};

// Every prime-power factor goes to exactly one cycle, so the cycles multiply
// to N. Prefers plans whose every cycle holds at least `target` buckets, and among
// those the fewest total buckets; otherwise the largest smallest cycle.
std::vector<std::size_t> choose_factors(const std::vector<std::size_t>& q, std::size_t target) {
    const std::size_t s = q.size();
    std::vector<Candidate> cands;
    for (std::size_t d = 2; d <= std::min<std::size_t>(3, s); ++d) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < s; ++i) total *= d;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<std::size_t> groups(d, 1);
            std::size_t c = code;
            for (std::size_t i = 0; i < s; ++i, c /= d) groups[c % d] *= q[i];
            if (std::any_of(groups.begin(), groups.end(), [](std::size_t g) { return g == 1; })) continue;
            std::sort(groups.begin(), groups.end());
            Candidate cand{groups, std::accumulate(groups.begin(), groups.end(), std::size_t{0}), groups.front()};
            cands.push_back(std::move(cand));
        }
    }
    auto better = [&](const Candidate& a, const Candidate& b) {
        const bool fa = a.min >= target, fb = b.min >= target;
        if (fa != fb) return fa;
        if (fa) {
            if (a.sum != b.sum) return a.sum < b.sum;
            if (a.b.size() != b.b.size()) return a.b.size() > b.b.size();
        } else {
            if (a.min != b.min) return a.min > b.min;
            if (a.sum != b.sum) return a.sum < b.sum;
        }
        return a.b < b.b;
    };
    return std::min_element(cands.begin(), cands.end(), better)->b;
}

}  // namespace

std::vector<double> kay_weights(std::size_t m) {
    if (m < 2) throw std::invalid_argument("kay_weights: m must be at least 2");
    const double md = double(m);
    std::vector<double> w(m - 1);
    for (std::size_t t = 0; t + 1 < m; ++t) {
        const double u = (2.0 * double(t) - md + 2.0) / (2.0 * md);
        w[t] = 3.0 * md / (2.0 * (md * md - 1.0)) * (1.0 - 4.0 * u * u);
    }
    return w;
}

ShiftSet search_shifts(const SearchPlan& plan) {
    ShiftSet s;
    s.reserve(plan.c * plan.m);
    for (std::size_t j = 0; j < plan.c; ++j)
        for (std::size_t t = 0; t < plan.m; ++t)
            s.push_back(plan.anchors[j] + (std::int64_t{1} << j) * static_cast<std::int64_t>(t));
    return s;
}

PeelingPlan plan_cycles(std::size_t n, std::size_t k, PeelMode mode, std::uint64_t seed,
                        std::optional<double> snr_hint_db) {
    const auto q = prime_power_factors(n);
    if (q.size() < 2) throw unsupported_size("peeling: N needs at least two co-prime factors");

    PeelingPlan plan;
    plan.n = n;
    plan.mode = mode;
    const std::size_t kk = std::max<std::size_t>(1, k);
    // The noisy estimator needs more per-bucket SNR, so it asks for larger cycles.
    const std::size_t target = mode == PeelMode::Exact ? kk : 2 * kk;
    plan.cycles.factors = choose_factors(q, target);
    if (double(k) * double(k) * double(k) >= double(n))
        plan.warning = "k >= n^(1/3): peeling success is not expected";

    if (mode == PeelMode::Exact) {
        plan.cycles.shifts = {0, 1, 2};
        return plan;
    }

    SearchPlan sp;
    sp.c = ceil_log2(n);
    sp.m = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::cbrt(double(sp.c)) - 1e-12)));
    if (snr_hint_db) {
        // Per-bucket SNR of the smallest cycle, assuming unit tones: the time
        // domain SNR gains B_min/K from aliasing L samples into each bucket.
        const double bucket_snr = *snr_hint_db + 10.0 * std::log10(double(plan.cycles.factors.front()) / double(kk));
        if (bucket_snr < 10.0) sp.m = std::max<std::size_t>(sp.m, 4);
        if (bucket_snr < 5.0) sp.m = std::max<std::size_t>(sp.m, 6);
    }
    Rng rng(mix_seed(seed, 0x616e63686f72ULL));
    for (std::size_t j = 0; j < sp.c; ++j) sp.anchors.push_back(static_cast<std::int64_t>(rng.below(n)));
    sp.weights = kay_weights(sp.m);
    plan.cycles.shifts = search_shifts(sp);
    plan.search = std::move(sp);
    return plan;
}

Classification classify_exact(const BucketNode& node, const ShiftSet& shifts, std::size_t b,
                              std::size_t n, double eps) {
    if (shifts.size() != 3 || shifts[1] != shifts[0] + 1 || shifts[2] != shifts[0] + 2)
        throw std::invalid_argument("classify_exact: needs three consecutive shifts");
    const auto& y = node.residual;
    Classification c;
    c.residual_norm = norm2(y);
    if (c.residual_norm <= eps) {
        c.state = BucketState::ZeroTon;
        return c;
    }
    c.state = BucketState::MultiTon;
    if (std::abs(y[0]) <= eps || std::abs(y[1]) <= eps) return c;
    const cplx r1 = y[1] / y[0], r2 = y[2] / y[1];
    if (std::abs(r1 - r2) > kRatioTolerance * std::max(1.0, std::abs(r1))) return c;

    double phase = std::arg(r1);
    if (phase < 0) phase += kTwoPi;
    const double pos = std::round(phase * (-double(n) / kTwoPi));
    auto f = static_cast<std::int64_t>(pos) % static_cast<std::int64_t>(n);
    if (f < 0) f += static_cast<std::int64_t>(n);
    const auto fu = static_cast<std::size_t>(f);
    if (fu % b != node.index) return c;

    const cplx v = y[0] * unit_root(n, -shifts[0] * f);
    double res = 0.0;
    for (std::size_t k = 0; k < 3; ++k) res += std::norm(y[k] - v * unit_root(n, shifts[k] * f));
    res = std::sqrt(res);
    if (res > eps) return c;
    c.state = BucketState::SingleTon;
    c.f = fu;
    c.v = v;
    c.residual_norm = res;
    return c;
}

SearchResult singleton_search_noisy(std::span<const cplx> y, const SearchPlan& plan,
                                    std::size_t bucket, std::size_t b, std::size_t n) {
    if (y.size() != plan.c * plan.m) throw std::invalid_argument("singleton_search_noisy: measurement count");
    const std::size_t l = n / b;

    // Phase estimates of ω^{2^j f}, one per iteration.
    std::vector<double> est(plan.c);
    for (std::size_t j = 0; j < plan.c; ++j) {
        const auto row = y.subspan(j * plan.m, plan.m);
        cplx coarse{};
        for (std::size_t t = 0; t + 1 < plan.m; ++t) coarse += row[t + 1] * std::conj(row[t]);
        const double ref = std::arg(coarse);
        // Differences are unwrapped around the coarse estimate before weighting,
        // so a true increment near ±π does not split across the branch cut.
        double acc = 0.0;
        for (std::size_t t = 0; t + 1 < plan.m; ++t)
            acc += plan.weights[t] * wrap_pi(std::arg(row[t + 1] * std::conj(row[t])) - ref);
        est[j] = ref + acc;
    }

    auto predicted = [&](std::size_t f, std::size_t j) {
        const std::size_t e = static_cast<std::size_t>((static_cast<unsigned __int128>(f) << j) % n);
        return -kTwoPi * double(e) / double(n);
    };

    std::vector<std::size_t> alive(l);
    for (std::size_t k = 0; k < l; ++k) alive[k] = bucket + k * b;
    const std::vector<std::size_t> all = alive;
    for (std::size_t j = 0; j < plan.c && alive.size() > 1; ++j) {
        std::vector<std::size_t> next;
        for (std::size_t f : alive)
            if (std::abs(wrap_pi(est[j] - predicted(f, j))) <= std::numbers::pi / 2) next.push_back(f);
        alive = std::move(next);
    }
    if (alive.empty()) alive = all;

    std::size_t best = alive.front();
    double best_score = 0.0;
    for (std::size_t idx = 0; idx < alive.size(); ++idx) {
        double s = 0.0;
        for (std::size_t j = 0; j < plan.c; ++j) {
            const double d = wrap_pi(est[j] - predicted(alive[idx], j));
            s += d * d;
        }
        if (idx == 0 || s < best_score) {
            best = alive[idx];
            best_score = s;
        }
    }

    const auto shifts = search_shifts(plan);
    const auto fb = static_cast<std::int64_t>(best);
    cplx v{};
    for (std::size_t k = 0; k < y.size(); ++k) v += y[k] * unit_root(n, -shifts[k] * fb);
    v /= double(y.size());
    double res = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) res += std::norm(y[k] - v * unit_root(n, shifts[k] * fb));
    return SearchResult{true, best, v, std::sqrt(res)};
}

NoisyThresholds noisy_thresholds(double sigma, std::size_t r) {
    const double rr = double(r);
    return NoisyThresholds{sigma * std::sqrt(rr + 3.0 * std::sqrt(rr)),
                           sigma * std::sqrt(rr + 4.0 * std::sqrt(rr))};
}

Classification classify_noisy(const BucketNode& node, const SearchPlan& plan,
                              const NoisyThresholds& th, std::size_t b, std::size_t n) {
    Classification c;
    c.residual_norm = norm2(node.residual);
    if (c.residual_norm <= th.t0) {
        c.state = BucketState::ZeroTon;
        return c;
    }
    const auto s = singleton_search_noisy(node.residual, plan, node.index, b, n);
    if (s.found && s.residual_norm <= th.t1) {
        c.state = BucketState::SingleTon;
        c.f = s.f;
        c.v = s.v;
        c.residual_norm = s.residual_norm;
        return c;
    }
    c.state = BucketState::MultiTon;
    return c;
}

void subtract(BucketNode& node, std::size_t f, cplx v, const ShiftSet& shifts, std::size_t b,
              std::size_t n) {
    if (f % b != node.index) throw std::logic_error("subtract: frequency not in this bucket");
    const auto fi = static_cast<std::int64_t>(f);
    for (std::size_t k = 0; k < shifts.size(); ++k) node.residual[k] -= v * unit_root(n, shifts[k] * fi);
}

PeelingGraph build_graph(const Signal& x, const PeelingPlan& plan, SampleLedger& ledger) {
    PeelingGraph g;
    g.n = x.size();
    if (plan.n != g.n) throw std::invalid_argument("build_graph: plan size differs from signal");
    g.factors = plan.cycles.factors;
    g.shifts = plan.cycles.shifts;
    g.recovered = SparseSpectrum(g.n);
    const std::size_t r = g.shifts.size();

    for (std::size_t c = 0; c < g.factors.size(); ++c) {
        const std::size_t b = g.factors[c];
        const auto rounds = bucketize_set(x, b, g.shifts, ledger);
        std::vector<BucketNode> nodes(b);
        for (std::size_t i = 0; i < b; ++i) {
            auto& node = nodes[i];
            node.cycle = c;
            node.index = i;
            node.vec.resize(r);
            for (std::size_t k = 0; k < r; ++k) node.vec[k] = rounds[k].values[i];
            node.residual = node.vec;
        }
        g.cycles.push_back(std::move(nodes));
    }

    if (plan.mode == PeelMode::Exact) {
        // Zero tolerance relative to the signal scale, estimated from the first
        // cycle's τ₀ round instead of reading the whole signal.
        double energy = 0.0;
        for (const auto& node : g.cycles.front()) energy += std::norm(node.vec[0]);
        g.eps = 1e-6 * std::sqrt(energy);
    } else {
        // Per-measurement noise level from the median bucket energy. Bucket
        // noise variance scales as 1/B, so each cycle gets its own estimate.
        for (const auto& cyc : g.cycles) {
            std::vector<double> e;
            for (const auto& node : cyc) e.push_back(std::pow(norm2(node.vec), 2) / double(r));
            const double mean = std::accumulate(e.begin(), e.end(), 0.0) / double(e.size());
            std::nth_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(e.size() / 2), e.end());
            g.thresholds.push_back(noisy_thresholds(std::max(std::sqrt(e[e.size() / 2]), 1e-7 * std::sqrt(mean)), r));
        }
    }
    return g;
}

PeelReport peel_decode(PeelingGraph& graph, const PeelingPlan& plan, std::size_t max_rounds) {
    PeelReport rep;
    rep.recovered = SparseSpectrum(graph.n);
    const bool exact = plan.mode == PeelMode::Exact;

    for (std::size_t round = 0; round < max_rounds; ++round) {
        ++rep.rounds;
        std::vector<std::pair<std::size_t, cplx>> found;
        rep.unresolved_multitons = 0;
        for (auto& cyc : graph.cycles) {
            for (auto& node : cyc) {
                if (node.resolved) continue;
                const std::size_t b = graph.factors[node.cycle];
                const auto c = exact ? classify_exact(node, graph.shifts, b, graph.n, graph.eps)
                                     : classify_noisy(node, *plan.search, graph.thresholds[node.cycle], b, graph.n);
                ++rep.identifications;
                node.state = c.state;
                if (c.state == BucketState::ZeroTon) {
                    node.resolved = true;
                } else if (c.state == BucketState::MultiTon) {
                    ++rep.unresolved_multitons;
                } else if (!graph.recovered.contains(c.f) &&
                           std::none_of(found.begin(), found.end(), [&](const auto& p) { return p.first == c.f; })) {
                    found.emplace_back(c.f, c.v);
                }
            }
        }
        if (found.empty()) break;
        // Synchronous peeling: every tone found this pass is removed from its
        // bucket in every cycle before the next pass.
        for (const auto& [f, v] : found) {
            graph.recovered.set(f, v);
            for (std::size_t c = 0; c < graph.cycles.size(); ++c) {
                const std::size_t b = graph.factors[c];
                auto& node = graph.cycles[c][f % b];
                subtract(node, f, v, graph.shifts, b, graph.n);
                node.resolved = false;
            }
        }
    }
    rep.recovered = graph.recovered;
    return rep;
}

SparseSpectrum ffast(const Signal& x, std::size_t k, SampleLedger& ledger, std::uint64_t seed) {
    if (k == 0) return SparseSpectrum(x.size());
    const auto plan = plan_cycles(x.size(), k, PeelMode::Exact, seed);
    auto graph = build_graph(x, plan, ledger);
    return peel_decode(graph, plan, default_max_rounds(k)).recovered.top_k(k);
}

SparseSpectrum r_ffast(const Signal& x, std::size_t k, std::optional<double> snr_hint_db,
                       SampleLedger& ledger, std::uint64_t seed) {
    if (k == 0) return SparseSpectrum(x.size());
    const auto plan = plan_cycles(x.size(), k, PeelMode::Noisy, seed, snr_hint_db);
    auto graph = build_graph(x, plan, ledger);
    return peel_decode(graph, plan, default_max_rounds(k)).recovered.top_k(k);
}

}  // namespace aliasfft
