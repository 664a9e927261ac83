#include <catch_amalgamated.hpp>

#include <numeric>

#include "aliasfft/peeling.hpp"
#include "helpers.hpp"

using namespace aliasfft;

namespace {

BucketNode node_of(const Signal& x, std::size_t b, std::size_t i, const ShiftSet& shifts) {
    SampleLedger led(x.size());
    const auto rounds = bucketize_set(x, b, shifts, led);
    BucketNode node;
    node.index = i;
    for (const auto& r : rounds) node.vec.push_back(r.values[i]);
    node.residual = node.vec;
    return node;
}

std::size_t count_state(const PeelingGraph& g, BucketState s) {
    std::size_t c = 0;
    for (const auto& cyc : g.cycles)
        for (std::size_t i = 0; i < cyc.size(); ++i)
            c += classify_exact(cyc[i], g.shifts, g.factors[cyc[i].cycle], g.n, g.eps).state == s;
    return c;
}

}  // namespace

TEST_CASE("prime power factors") {
    CHECK(prime_power_factors(20) == std::vector<std::size_t>{4, 5});
    CHECK(prime_power_factors(504) == std::vector<std::size_t>{8, 9, 7});
    CHECK(prime_power_factors(97) == std::vector<std::size_t>{97});
}

TEST_CASE("plan_cycles examples") {
    auto plan = plan_cycles(20, 5, PeelMode::Exact);
    CHECK(plan.cycles.factors == std::vector<std::size_t>{4, 5});
    CHECK(plan.cycles.shifts == ShiftSet{0, 1, 2});
    CHECK(!plan.search);

    plan = plan_cycles(504, 6, PeelMode::Exact);
    CHECK(plan.cycles.factors == std::vector<std::size_t>{7, 8, 9});

    CHECK_THROWS_AS(plan_cycles(97, 2, PeelMode::Exact), unsupported_size);
    CHECK_THROWS_AS(plan_cycles(1024, 2, PeelMode::Exact), unsupported_size);

    plan = plan_cycles(4080, 8, PeelMode::Noisy, 3);
    REQUIRE(plan.search);
    CHECK(plan.search->c == 12);
    CHECK(plan.search->m == 3);
    CHECK(plan.cycles.shifts.size() == 36);
    CHECK(plan.cycles.factors == std::vector<std::size_t>{51, 80});
    CHECK(std::accumulate(plan.cycles.factors.begin(), plan.cycles.factors.end(), std::size_t{1},
                          std::multiplies<>()) == 4080);
}

TEST_CASE("kay weights") {
    const auto w = kay_weights(3);
    REQUIRE(w.size() == 2);
    CHECK(std::abs(w[0] - 0.5) < 1e-15);
    CHECK(std::abs(w[1] - 0.5) < 1e-15);
    CHECK_THROWS_AS(kay_weights(1), std::invalid_argument);
}

TEST_CASE("search shifts layout") {
    SearchPlan sp;
    sp.c = 3;
    sp.m = 2;
    sp.anchors = {10, 20, 30};
    CHECK(search_shifts(sp) == ShiftSet{10, 11, 20, 22, 30, 34});
}

TEST_CASE("classify_exact on the N=20 peeling fixture, cycle B=4") {
    const auto tc = testing_util::peel_fixture();
    const ShiftSet sh{0, 1, 2};
    const double eps = 1e-9;
    CHECK(classify_exact(node_of(tc.signal, 4, 0, sh), sh, 4, 20, eps).state == BucketState::ZeroTon);
    CHECK(classify_exact(node_of(tc.signal, 4, 1, sh), sh, 4, 20, eps).state == BucketState::MultiTon);
    auto c = classify_exact(node_of(tc.signal, 4, 2, sh), sh, 4, 20, eps);
    CHECK(c.state == BucketState::SingleTon);
    CHECK(c.f == 10);
    CHECK(std::abs(c.v - tc.truth.at(10)) < 1e-9);
    c = classify_exact(node_of(tc.signal, 4, 3, sh), sh, 4, 20, eps);
    CHECK(c.state == BucketState::SingleTon);
    CHECK(c.f == 3);
}

TEST_CASE("classify_exact: zero vector, planted pair, shifted anchor") {
    BucketNode z;
    z.vec = z.residual = {0.0, 0.0, 0.0};
    CHECK(classify_exact(z, {0, 1, 2}, 4, 20, 1e-9).state == BucketState::ZeroTon);

    SparseSpectrum s(60);
    s.set(7, 1.0);
    s.set(19, cplx{0, 1});
    CHECK(classify_exact(node_of(inverse_dft(s), 12, 7, {0, 1, 2}), {0, 1, 2}, 12, 60, 1e-9).state ==
          BucketState::MultiTon);

    SparseSpectrum one(60);
    one.set(43, cplx{-0.6, 0.8});
    const ShiftSet sh{5, 6, 7};
    const auto c = classify_exact(node_of(inverse_dft(one), 12, 43 % 12, sh), sh, 12, 60, 1e-9);
    CHECK(c.state == BucketState::SingleTon);
    CHECK(c.f == 43);
    CHECK(std::abs(c.v - one.at(43)) < 1e-9);
    CHECK_THROWS_AS(classify_exact(z, {0, 2, 4}, 4, 20, 1e-9), std::invalid_argument);
}

TEST_CASE("exact phase identity for every tone position") {
    const std::size_t n = 210;
    for (std::size_t f = 0; f < n; ++f) {
        SparseSpectrum s(n);
        s.set(f, std::polar(1.0, 0.1 * double(f)));
        const auto c = classify_exact(node_of(inverse_dft(s), 10, f % 10, {0, 1, 2}), {0, 1, 2}, 10, n, 1e-9);
        REQUIRE(c.state == BucketState::SingleTon);
        CHECK(c.f == f);
    }
}

TEST_CASE("subtract") {
    const ShiftSet sh{0, 1, 2};
    SparseSpectrum s(20);
    s.set(1, 1.0);
    s.set(5, cplx{0, 1});
    auto node = node_of(inverse_dft(s), 4, 1, sh);
    subtract(node, 5, cplx{0, 1}, sh, 4, 20);
    SparseSpectrum rest(20);
    rest.set(1, 1.0);
    const auto want = node_of(inverse_dft(rest), 4, 1, sh);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(node.residual[k] - want.vec[k]) < 1e-12);
    const auto before = node.residual;
    subtract(node, 9, 0.0, sh, 4, 20);
    CHECK(node.residual == before);
    subtract(node, 1, 1.0, sh, 4, 20);
    for (auto v : node.residual) CHECK(std::abs(v) < 1e-12);
    CHECK_THROWS_AS(subtract(node, 2, 1.0, sh, 4, 20), std::logic_error);
}

TEST_CASE("peel_decode: N=20 peeling fixture") {
    const auto tc = testing_util::peel_fixture();
    const auto plan = plan_cycles(20, 5, PeelMode::Exact);
    SampleLedger led(20);
    auto g = build_graph(tc.signal, plan, led);
    CHECK(led.count() == 27);
    CHECK(count_state(g, BucketState::ZeroTon) == 3);
    CHECK(count_state(g, BucketState::SingleTon) == 3);
    CHECK(count_state(g, BucketState::MultiTon) == 3);
    const auto rep = peel_decode(g, plan, default_max_rounds(5));
    CHECK(rep.rounds <= 3);
    CHECK(rep.unresolved_multitons == 0);
    CHECK(evaluate(tc.truth, rep.recovered).l2 < 1e-9);
}

TEST_CASE("peel_decode: zero signal") {
    const auto plan = plan_cycles(20, 2, PeelMode::Exact);
    SampleLedger led(20);
    auto g = build_graph(Signal::zeros(20), plan, led);
    const auto rep = peel_decode(g, plan, 6);
    CHECK(rep.recovered.empty());
    CHECK(rep.rounds == 1);
    CHECK(count_state(g, BucketState::ZeroTon) == 9);
}

TEST_CASE("peel_decode: pair sharing a bucket in one cycle only") {
    // 504 = 7·8·9; 5 and 13 share residue 5 mod 8 only.
    const auto tc = generate_test_case(504, std::vector<std::size_t>{5, 13}, std::nullopt, 1);
    const auto plan = plan_cycles(504, 2, PeelMode::Exact);
    SampleLedger led(504);
    auto g = build_graph(tc.signal, plan, led);
    const auto rep = peel_decode(g, plan, 6);
    CHECK(rep.rounds <= 2);
    CHECK(evaluate(tc.truth, rep.recovered).l2 < 1e-9);
}

TEST_CASE("ffast and r_ffast wrappers") {
    SampleLedger led(20);
    CHECK(ffast(Signal::zeros(20), 0, led).empty());
    const auto tc = testing_util::peel_fixture();
    SampleLedger l2(20);
    const auto est = ffast(tc.signal, 5, l2);
    CHECK(evaluate(tc.truth, est).l2 < 1e-9);
    CHECK(l2.count() == 27);

    const auto plan = plan_cycles(4080, 4, PeelMode::Noisy, 9, 20.0);
    const auto ex = generate_test_case(4080, 4, std::nullopt, 9);
    SampleLedger l3(4080);
    const auto r = r_ffast(ex.signal, 4, 20.0, l3, 9);
    const std::size_t sum = std::accumulate(plan.cycles.factors.begin(), plan.cycles.factors.end(), std::size_t{0});
    CHECK(l3.count() == plan.search->c * plan.search->m * sum);
    CHECK(evaluate(ex.truth, r).l2 < 1e-6);
    CHECK_THROWS_AS(ffast(Signal::zeros(64), 2, led), unsupported_size);
}

TEST_CASE("noisy single-ton search: exact tone") {
    const std::size_t n = 4080;
    const auto plan = plan_cycles(n, 4, PeelMode::Noisy, 4);
    const auto& sp = *plan.search;
    for (std::size_t f : {0u, 1u, 77u, 2040u, 4079u}) {
        SparseSpectrum s(n);
        const cplx v = std::polar(1.0, 0.3 * double(f));
        s.set(f, v);
        const auto node = node_of(inverse_dft(s), 51, f % 51, plan.cycles.shifts);
        const auto r = singleton_search_noisy(node.vec, sp, f % 51, 51, n);
        CHECK(r.f == f);
        CHECK(std::abs(r.v - v) < 1e-9);
        CHECK(r.residual_norm < 1e-9);
    }
}

TEST_CASE("noisy single-ton search at 0 dB, N=512, C=9, m=3") {
    // 512 has a single prime factor, so the search is exercised on a
    // hand-built B=16 bucketization.
    const std::size_t n = 512, b = 16;
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SearchPlan sp;
        sp.c = 9;
        sp.m = 3;
        Rng rng(seed + 1000);
        for (std::size_t j = 0; j < sp.c; ++j) sp.anchors.push_back(static_cast<std::int64_t>(rng.below(n)));
        sp.weights = kay_weights(3);
        const auto tc = generate_test_case(n, 1, 0.0, seed);
        const std::size_t f = tc.truth.begin()->first;
        const auto node = node_of(tc.signal, b, f % b, search_shifts(sp));
        ok += singleton_search_noisy(node.vec, sp, f % b, b, n).f == f;
    }
    CHECK(ok >= 180);
}

TEST_CASE("classify_noisy") {
    const std::size_t n = 4080;
    const auto plan = plan_cycles(n, 4, PeelMode::Noisy, 4);
    const NoisyThresholds th{1e-6, 1e-6};
    BucketNode z;
    z.vec = z.residual = std::vector<cplx>(plan.cycles.shifts.size());
    CHECK(classify_noisy(z, *plan.search, th, 51, n).state == BucketState::ZeroTon);

    SparseSpectrum s(n);
    s.set(100, 1.0);
    auto node = node_of(inverse_dft(s), 51, 100 % 51, plan.cycles.shifts);
    auto c = classify_noisy(node, *plan.search, th, 51, n);
    CHECK(c.state == BucketState::SingleTon);
    CHECK(c.f == 100);

    s.set(100 + 51 * 3, 1.0);
    node = node_of(inverse_dft(s), 51, 100 % 51, plan.cycles.shifts);
    CHECK(classify_noisy(node, *plan.search, th, 51, n).state == BucketState::MultiTon);

    const auto t = noisy_thresholds(0.5, 16);
    CHECK(std::abs(t.t0 - 0.5 * std::sqrt(16.0 + 12.0)) < 1e-12);
    CHECK(t.t1 > t.t0);
}
