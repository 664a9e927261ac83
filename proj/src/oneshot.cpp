#include "aliasfft/oneshot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>

#include "aliasfft/rng.hpp"
#include "aliasfft/smallnum.hpp"

namespace aliasfft {

const char* to_string(DtVariant v) {
    switch (v) {
        case DtVariant::DT1: return "dt1";
        case DtVariant::DT2: return "dt2";
        case DtVariant::DT3: return "dt3";
    }
    return "?";
}

std::size_t default_bucket_count(std::size_t n, std::size_t k) {
    const std::size_t target = std::min(n, std::max<std::size_t>(1, 32 * k));
    std::size_t b = n;
    for (std::size_t d = target; d <= n; ++d) {
        if (n % d == 0) {
            b = d;
            break;
        }
    }
    // The CS step needs P >= a_m·log10(L); keep L <= 1000.
    while (n / b > 1000) {
        std::size_t next = b + 1;
        while (n % next != 0) ++next;
        b = next;
    }
    return b;
}

OneShotConfig resolve_config(std::size_t n, std::size_t k, OneShotConfig cfg) {
    if (cfg.a_m < 1 || cfg.a_m > 4) throw std::invalid_argument("oneshot: a_m must be in [1, 4]");
    if (cfg.b == 0) cfg.b = default_bucket_count(n, k);
    if (cfg.p == 0) cfg.p = 3 * cfg.a_m;
    if (n % cfg.b != 0) throw std::invalid_argument("oneshot: B must divide N");
    const double l = double(n / cfg.b);
    if (double(cfg.p) + 1e-12 < double(cfg.a_m) * std::log10(l))
        throw std::invalid_argument("oneshot: P below the a_m·log10(L) measurement floor");
    return cfg;
}

ShiftSet structured_shifts(std::size_t a_m) {
    ShiftSet s;
    const auto am = static_cast<std::int64_t>(a_m);
    for (std::int64_t t = -am; t < 2 * am; ++t) s.push_back(t);
    return s;
}

ShiftSet random_shifts(std::size_t n, std::size_t a_m, std::size_t p, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x72616e64ULL));
    std::set<std::size_t> taken;
    const bool distinct = n >= 3 * a_m + p;
    if (distinct)
        for (auto t : structured_shifts(a_m)) taken.insert(wrap_shift(t, n));
    ShiftSet out;
    while (out.size() < p) {
        const auto r = static_cast<std::size_t>(rng.below(n));
        if (distinct && !taken.insert(r).second) continue;
        out.push_back(static_cast<std::int64_t>(r));
    }
    return out;
}

MomentSet collect_moments(const Signal& x, const OneShotConfig& cfg, SampleLedger& ledger) {
    const std::size_t n = x.size();
    MomentSet ms;
    ms.n = n;
    ms.b = cfg.b;
    ms.a_m = cfg.a_m;
    ms.random_shifts = random_shifts(n, cfg.a_m, cfg.p, cfg.seed);

    const auto structured = bucketize_set(x, cfg.b, structured_shifts(cfg.a_m), ledger);
    const auto random = bucketize_set(x, cfg.b, ms.random_shifts, ledger);

    ms.buckets.resize(cfg.b);
    for (std::size_t i = 0; i < cfg.b; ++i) {
        auto& bm = ms.buckets[i];
        bm.bucket = i;
        bm.a_m = cfg.a_m;
        for (const auto& fs : structured) bm.structured.push_back(fs.values[i]);
        for (const auto& fs : random) bm.random.push_back(fs.values[i]);
    }
    return ms;
}

SmallMatrix hankel(const BucketMoments& mom, std::size_t a) {
    const auto d = static_cast<Eigen::Index>(a);
    SmallMatrix h(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) h(r, c) = mom.m(r + c);
    return h;
}

std::vector<std::size_t> detect_sparsity(std::span<const BucketMoments> buckets, std::size_t k) {
    struct Vote {
        double sigma;
        std::size_t slot;
        std::size_t bucket;
    };
    std::vector<Vote> pool;
    for (std::size_t s = 0; s < buckets.size(); ++s) {
        const auto& bm = buckets[s];
        const auto sv = svd(hankel(bm, bm.a_m)).sigma;
        for (Eigen::Index j = 0; j < sv.size(); ++j) pool.push_back({sv(j), s, bm.bucket});
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Vote& a, const Vote& b) {
        if (std::abs(a.sigma - b.sigma) > 1e-12) return a.sigma > b.sigma;
        return a.bucket < b.bucket;
    });
    std::vector<std::size_t> a(buckets.size(), 0);
    for (std::size_t i = 0; i < std::min(k, pool.size()); ++i) {
        if (pool[i].sigma <= 0.0) break;
        ++a[pool[i].slot];
    }
    return a;
}

namespace {

double phase_distance(cplx z, std::size_t f, std::size_t n) {
    const double target = -2.0 * std::numbers::pi * double(f) / double(n);
    return std::abs(std::remainder(std::arg(z) - target, 2.0 * std::numbers::pi));
}

// Coefficients c_0..c_{a-1} of the monic moment polynomial from M_a C = M_s.
std::optional<std::vector<cplx>> moment_coefficients(const BucketMoments& mom, std::size_t a) {
    const SmallMatrix ma = hankel(mom, a);
    SmallVector ms(static_cast<Eigen::Index>(a));
    for (std::size_t r = 0; r < a; ++r) ms(static_cast<Eigen::Index>(r)) = -mom.m(static_cast<std::int64_t>(a + r));
    const auto sol = solve_linear(ma, ms);
    if (sol.ill_conditioned) return std::nullopt;
    return std::vector<cplx>(sol.x.data(), sol.x.data() + sol.x.size());
}

cplx eval_monic(std::span<const cplx> c, cplx z) {
    cplx acc = 1.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

}  // namespace

std::size_t snap_to_grid(cplx z, std::size_t bucket, std::size_t b, std::size_t n,
                         std::span<const std::size_t> used) {
    const std::size_t l = n / b;
    auto is_used = [&](std::size_t f) { return std::find(used.begin(), used.end(), f) != used.end(); };

    const double u = -std::arg(z) * double(n) / (2.0 * std::numbers::pi);
    double kr = std::fmod((u - double(bucket)) / double(b), double(l));
    if (kr < 0) kr += double(l);
    const auto k0 = static_cast<std::size_t>(std::floor(kr)) % l;

    std::size_t best = n;
    double best_d = 0.0;
    auto consider = [&](std::size_t f) {
        if (is_used(f)) return;
        const double d = phase_distance(z, f, n);
        if (best == n || d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && f < best)) {
            best = f;
            best_d = d;
        }
    };
    for (std::size_t k : {k0 + l - 1, k0, k0 + 1}) consider(bucket + (k % l) * b);
    if (best == n)
        for (std::size_t k = 0; k < l; ++k) consider(bucket + k * b);
    return best;
}

LocateResult locate(const BucketMoments& mom, std::size_t a, DtVariant method, std::size_t b,
                    std::size_t n) {
    if (a < 1 || a > mom.a_m) throw std::invalid_argument("locate: a must be in [1, a_m]");
    const std::size_t l = n / b;
    LocateResult out;
    if (a > l) {
        out.degenerate = true;
        return out;
    }

    if (method == DtVariant::DT3) {
        const auto d = static_cast<Eigen::Index>(a);
        SmallMatrix y1(d + 1, d), y2(d + 1, d);
        for (Eigen::Index r = 0; r <= d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                y1(r, c) = mom.m(r - c);
                y2(r, c) = mom.m(r - c - 1);
            }
        }
        const auto pencil = pencil_eigenvalues(y1, y2, a);
        if (pencil.nodes.size() < a) {
            out.degenerate = true;
            return out;
        }
        for (const cplx& z : pencil.nodes) out.positions.push_back(snap_to_grid(z, mom.bucket, b, n, out.positions));
        return out;
    }

    const auto coeffs = moment_coefficients(mom, a);
    if (!coeffs) {
        out.degenerate = true;
        return out;
    }

    if (method == DtVariant::DT1) {
        for (const cplx& z : poly_roots(*coeffs)) out.positions.push_back(snap_to_grid(z, mom.bucket, b, n, out.positions));
        return out;
    }

    // DT2: score every grid candidate against the polynomial.
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(l);
    for (std::size_t k = 0; k < l; ++k) {
        const std::size_t f = mom.bucket + k * b;
        scored.emplace_back(std::abs(eval_monic(*coeffs, unit_root(n, static_cast<std::int64_t>(f)))), f);
    }
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(a), scored.end());
    for (std::size_t j = 0; j < a; ++j) out.positions.push_back(scored[j].second);
    return out;
}

namespace {

struct Fit {
    std::vector<std::size_t> atoms;  // indices into the dictionary
    SmallVector coef;
    SmallVector residual;
    double error = 0.0;
};

Fit fit(const SmallMatrix& dict, const SmallVector& y, std::vector<std::size_t> atoms) {
    SmallMatrix phi(dict.rows(), static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t j = 0; j < atoms.size(); ++j)
        phi.col(static_cast<Eigen::Index>(j)) = dict.col(static_cast<Eigen::Index>(atoms[j]));
    const auto sol = least_squares(phi, y);
    Fit f;
    f.atoms = std::move(atoms);
    f.coef = sol.x;
    f.residual = y - phi * sol.x;
    f.error = f.residual.norm();
    return f;
}

// Indices of the `count` largest entries of `score` that are not in `exclude`.
std::vector<std::size_t> largest(const Eigen::VectorXd& score, std::size_t count,
                                 std::span<const std::size_t> exclude) {
    std::vector<std::size_t> idx;
    for (Eigen::Index i = 0; i < score.size(); ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (std::find(exclude.begin(), exclude.end(), u) == exclude.end()) idx.push_back(u);
    }
    count = std::min(count, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
                          return score(ia) != score(ib) ? score(ia) > score(ib) : a < b;
                      });
    idx.resize(count);
    return idx;
}

}  // namespace

BucketSolution estimate_values(const BucketMoments& mom, std::span<const std::int64_t> shifts,
                               std::span<const std::size_t> candidates, std::size_t b,
                               std::size_t n) {
    BucketSolution sol;
    sol.bucket = mom.bucket;
    const auto p = static_cast<Eigen::Index>(shifts.size());
    if (static_cast<std::size_t>(p) != mom.random.size())
        throw std::invalid_argument("estimate_values: shift count differs from measurements");
    SmallVector y(p);
    for (Eigen::Index r = 0; r < p; ++r) y(r) = mom.random[static_cast<std::size_t>(r)];
    if (candidates.empty() || y.norm() == 0.0) {
        sol.residual = y.norm();
        return sol;
    }

    // Dictionary: the candidates first, then their ±B grid neighbours.
    std::vector<std::size_t> positions;
    auto add = [&](std::size_t f) {
        if (std::find(positions.begin(), positions.end(), f) == positions.end()) positions.push_back(f);
    };
    for (auto f : candidates) add(f);
    for (auto f : candidates) add((f + b) % n);
    for (auto f : candidates) add((f + n - b) % n);

    const std::size_t a = std::min(candidates.size(), static_cast<std::size_t>(p));
    SmallMatrix dict(p, static_cast<Eigen::Index>(positions.size()));
    for (std::size_t c = 0; c < positions.size(); ++c)
        for (Eigen::Index r = 0; r < p; ++r)
            dict(r, static_cast<Eigen::Index>(c)) =
                unit_root(n, shifts[static_cast<std::size_t>(r)] * static_cast<std::int64_t>(positions[c]));

    std::vector<std::size_t> init(a);
    for (std::size_t j = 0; j < a; ++j) init[j] = j;
    Fit best = fit(dict, y, init);
    const double tol = 1e-10 * y.norm();

    for (int it = 0; it < kPursuitMaxIterations && best.error > tol; ++it) {
        const Eigen::VectorXd corr = (dict.adjoint() * best.residual).cwiseAbs();
        auto merged = best.atoms;
        const std::size_t room = static_cast<std::size_t>(p) - std::min<std::size_t>(static_cast<std::size_t>(p), merged.size());
        for (auto j : largest(corr, std::min(a, room), best.atoms)) merged.push_back(j);
        if (merged.size() == best.atoms.size()) break;
        const Fit wide = fit(dict, y, merged);
        const Eigen::VectorXd mag = wide.coef.cwiseAbs();
        std::vector<std::size_t> keep;
        for (auto j : largest(mag, a, {})) keep.push_back(merged[j]);
        std::sort(keep.begin(), keep.end());
        Fit next = fit(dict, y, keep);
        if (next.error >= best.error) break;
        best = std::move(next);
    }

    for (std::size_t j = 0; j < best.atoms.size(); ++j) {
        sol.positions.push_back(positions[best.atoms[j]]);
        sol.values.push_back(best.coef(static_cast<Eigen::Index>(j)));
    }
    sol.residual = best.error;
    return sol;
}

BucketSolution solve_bucket(const BucketMoments& mom, std::size_t a, DtVariant method,
                            std::span<const std::int64_t> shifts, std::size_t b, std::size_t n) {
    if (a == 0) return BucketSolution{mom.bucket, {}, {}, 0.0};
    const auto loc = locate(mom, a, method, b, n);
    if (loc.degenerate) return BucketSolution{mom.bucket, {}, {}, 0.0};
    return estimate_values(mom, shifts, loc.positions, b, n);
}

SparseSpectrum sfft_dt(const Signal& x, std::size_t k, const OneShotConfig& config,
                       SampleLedger& ledger) {
    const std::size_t n = x.size();
    SparseSpectrum out(n);
    if (k == 0) return out;
    const auto cfg = resolve_config(n, k, config);
    const auto ms = collect_moments(x, cfg, ledger);
    const auto a = detect_sparsity(ms.buckets, k);
    for (std::size_t i = 0; i < cfg.b; ++i) {
        if (a[i] == 0) continue;
        const auto sol = solve_bucket(ms.buckets[i], a[i], cfg.variant, ms.random_shifts, cfg.b, n);
        for (std::size_t j = 0; j < sol.positions.size(); ++j) out.set(sol.positions[j], sol.values[j]);
    }
    return out.top_k(k);
}

}  // namespace aliasfft
