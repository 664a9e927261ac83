#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "aliasfft/oneshot.hpp"
#include "aliasfft/signals.hpp"

namespace testing_util {

using aliasfft::cplx;

inline const std::vector<std::size_t> kPeelSupport{1, 3, 5, 10, 13};
inline const std::vector<std::size_t> kTreeSupport{1, 6, 13, 20, 59};

inline aliasfft::TestCase peel_fixture() { return aliasfft::generate_test_case(20, kPeelSupport, std::nullopt, 3); }
inline aliasfft::TestCase tree_fixture() { return aliasfft::generate_test_case(64, kTreeSupport, std::nullopt, 6); }

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Right-hand side of the bucket identity from a dense spectrum.
inline std::vector<cplx> bucket_oracle(const std::vector<cplx>& spec, std::size_t b, std::int64_t tau) {
    const std::size_t n = spec.size();
    std::vector<cplx> out(b);
    for (std::size_t f = 0; f < n; ++f)
        out[f % b] += spec[f] * aliasfft::unit_root(n, tau * static_cast<std::int64_t>(f));
    return out;
}

/// Moments m_τ = Σ p_j z_j^τ for the structured shifts plus the given random ones.
inline aliasfft::BucketMoments planted_moments(const std::vector<cplx>& p, const std::vector<cplx>& z,
                                               std::size_t a_m, const std::vector<std::int64_t>& random = {}) {
    aliasfft::BucketMoments bm;
    bm.a_m = a_m;
    auto m = [&](std::int64_t t) {
        cplx s{};
        for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * std::pow(z[j], static_cast<double>(t));
        return s;
    };
    for (auto t : aliasfft::structured_shifts(a_m)) bm.structured.push_back(m(t));
    for (auto t : random) bm.random.push_back(m(t));
    return bm;
}

}  // namespace testing_util
