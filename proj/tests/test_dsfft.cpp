#include <catch_amalgamated.hpp>

#include "aliasfft/dsfft.hpp"
#include "helpers.hpp"

using namespace aliasfft;

namespace {

DsfftConfig from_root(double theta = 1.0) {
    DsfftConfig c;
    c.start_depth = 0;
    c.theta = theta;
    return c;
}

}  // namespace

TEST_CASE("N=64 tree fixture layers") {
    const auto tc = testing_util::tree_fixture();
    SampleLedger led(64);
    auto layer = full_layer(tc.signal, 0, 1e-6, led);
    CHECK(layer.m() == 1);
    layer = expand_layer(tc.signal, layer, 1e-6, led);
    CHECK(layer.active == std::vector<std::size_t>{0, 1});
    layer = expand_layer(tc.signal, layer, 1e-6, led);
    CHECK(layer.m() == 4);
    layer = expand_layer(tc.signal, layer, 1e-6, led);
    CHECK(layer.active == std::vector<std::size_t>{1, 3, 4, 5, 6});
}

TEST_CASE("N=64 tree fixture end to end") {
    const auto tc = testing_util::tree_fixture();
    SampleLedger led(64);
    const auto rep = dsfft_run(tc.signal, 5, from_root(), led);
    CHECK(rep.layer_counts == std::vector<std::size_t>{1, 2, 4, 5});
    CHECK(rep.leaf_depth == 3);
    CHECK(evaluate(tc.truth, rep.recovered).l2 < 1e-9);
}

TEST_CASE("default theta stops earlier and resolves the aliased leaf") {
    const auto tc = testing_util::tree_fixture();
    SampleLedger led(64);
    const auto rep = dsfft_run(tc.signal, 5, from_root(0.75), led);
    CHECK(rep.leaf_depth == 2);
    CHECK(rep.aliased_leaves == 1);
    CHECK(evaluate(tc.truth, rep.recovered).l2 < 1e-9);
}

TEST_CASE("single tone is found at the start depth") {
    for (std::size_t f : {0u, 3u, 511u, 1000u}) {
        const auto tc = generate_test_case(1024, std::vector<std::size_t>{f}, std::nullopt, f);
        SampleLedger led(1024);
        const auto rep = dsfft_run(tc.signal, 1, {}, led);
        CHECK(rep.leaf_depth <= 1);
        CHECK(evaluate(tc.truth, rep.recovered).l2 < 1e-9);
    }
}

TEST_CASE("eight consecutive tones stop at depth 3") {
    std::vector<std::size_t> pos;
    for (std::size_t f = 400; f < 408; ++f) pos.push_back(f);
    const auto tc = generate_test_case(1024, pos, std::nullopt, 5);
    SampleLedger led(1024);
    const auto rep = dsfft_run(tc.signal, 8, from_root(), led);
    CHECK(rep.leaf_depth == 3);
    CHECK(rep.layer_counts.back() == 8);
    CHECK(evaluate(tc.truth, rep.recovered).l2 < 1e-9);
}

TEST_CASE("direct sums equal the full layer") {
    const auto tc = generate_test_case(256, 3, std::nullopt, 8);
    SampleLedger led(256);
    const auto full = full_layer(tc.signal, 6, 1e-6, led);
    for (std::size_t i = 0; i < full.b; ++i) CHECK(std::abs(direct_bucket(tc.signal, 64, i, led) - full.values.at(i)) < 1e-9);
}

TEST_CASE("sparse expansion uses direct sums and records their reads") {
    const auto tc = generate_test_case(1 << 12, std::vector<std::size_t>{77}, std::nullopt, 2);
    SampleLedger led(1 << 12);
    auto layer = full_layer(tc.signal, 4, 1e-6, led);
    REQUIRE(layer.m() == 1);
    const auto before = led.count();
    const auto next = expand_layer(tc.signal, layer, 1e-6, led);
    CHECK(!next.full);
    CHECK(next.values.size() == 2);
    CHECK(led.count() - before == 2 * 32);
    CHECK(next.active == std::vector<std::size_t>{77 % 32});
}

TEST_CASE("errors") {
    SampleLedger led(48);
    CHECK_THROWS_AS(dsfft(Signal::zeros(48), 2, {}, led), unsupported_size);
    SampleLedger l8(8);
    const auto top = full_layer(Signal::zeros(8), 3, 1e-6, l8);
    CHECK_THROWS_AS(expand_layer(Signal::zeros(8), top, 1e-6, l8), std::invalid_argument);
    CHECK(dsfft(Signal::zeros(8), 0, {}, l8).empty());
}

TEST_CASE("non-aliasing probability") {
    CHECK(non_aliasing_probability(1024, 1, 16) == 1.0);
    CHECK(non_aliasing_probability_limit(1, 1) == 1.0);
    CHECK(std::abs(non_aliasing_probability_limit(2, 4) - 0.75) < 1e-15);
    const double want = (995.0 * 990 * 985 * 980) / (999.0 * 998 * 997 * 996);
    CHECK(std::abs(non_aliasing_probability(1000, 5, 200) - want) < 1e-15);
    CHECK(std::abs(non_aliasing_probability(1000, 5, 10) - (900.0 * 800 * 700 * 600) / (999.0 * 998 * 997 * 996)) < 1e-15);
    CHECK(non_aliasing_probability(64, 9, 8) == 0.0);
    CHECK(non_aliasing_probability_limit(9, 8) == 0.0);
    CHECK_THROWS_AS(non_aliasing_probability(100, 2, 7), std::invalid_argument);
}
