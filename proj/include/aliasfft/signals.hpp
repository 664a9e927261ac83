#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aliasfft/rng.hpp"

namespace aliasfft {

using cplx = std::complex<double>;

/// Unsupported transform size for a given algorithm (prime N for the peeling
/// decoder, non power-of-two N for the binary tree search, ...).
class unsupported_size : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Length-N complex time-domain vector.
class Signal {
public:
    explicit Signal(std::vector<cplx> samples);
    static Signal zeros(std::size_t n);

    std::size_t size() const noexcept { return samples_.size(); }
    const cplx& operator[](std::size_t i) const { return samples_[i]; }
    cplx& operator[](std::size_t i) { return samples_[i]; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    std::span<cplx> samples() noexcept { return samples_; }

private:
    std::vector<cplx> samples_;
};

/// Position -> coefficient map over a length-N spectrum. Positions are kept
/// ordered so iteration and serialization are deterministic.
class SparseSpectrum {
public:
    explicit SparseSpectrum(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    bool contains(std::size_t f) const { return entries_.count(f) != 0; }

    /// Inserts or overwrites. Throws std::out_of_range for f >= n.
    void set(std::size_t f, cplx v);
    void erase(std::size_t f) { entries_.erase(f); }
    /// Zero for positions not present.
    cplx at(std::size_t f) const;

    const std::map<std::size_t, cplx>& entries() const noexcept { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// Keeps the k largest-magnitude entries (ties toward smaller position).
    SparseSpectrum top_k(std::size_t k) const;

private:
    std::size_t n_;
    std::map<std::size_t, cplx> entries_;
};

struct ErrorMetrics {
    std::size_t l0 = 0;
    double l1 = 0.0;
    double l2 = 0.0;
};

struct TestCase {
    Signal signal;
    SparseSpectrum truth;
    std::optional<double> snr_db;  // nullopt: exactly sparse
    std::uint64_t seed = 0;
};

inline constexpr double kDefaultL0Tolerance = 0.1;

/// ω_N^{e} = exp(-2πi e / N) with the exponent reduced mod N first, so large
/// products f·τ keep full precision.
cplx unit_root(std::size_t n, std::int64_t e);

// DFT convention throughout the library: the forward transform carries the
// 1/N factor, x̂_i = (1/N) Σ_j x_j ω_N^{ij}, and the inverse has none. A
// K-sparse spectrum with unit coefficients therefore has unit-magnitude
// entries, unlike the unnormalized forward transform most FFT libraries use.

/// Direct O(N²) evaluation of the forward transform. Reference oracle.
std::vector<cplx> dense_dft(const Signal& x);

/// Forward transform through the FFT kernels; same convention as dense_dft.
std::vector<cplx> fast_dft(const Signal& x);

Signal inverse_dft(std::span<const cplx> spectrum);
Signal inverse_dft(const SparseSpectrum& spectrum);

/// Largest-k magnitudes of a dense spectrum as a sparse one.
SparseSpectrum top_k(std::span<const cplx> spectrum, std::size_t k);

/// Random K-sparse test signal: unit magnitudes, uniform phases, K distinct
/// uniform positions. With an SNR, circular white Gaussian noise of variance
/// P_sig / 10^(snr/10) per sample is added in the time domain, P_sig being the
/// mean power of the clean signal.
TestCase generate_test_case(std::size_t n, std::size_t k, std::optional<double> snr_db,
                            std::uint64_t seed);

/// Same, with positions fixed by the caller (phases still drawn from seed).
TestCase generate_test_case(std::size_t n, std::span<const std::size_t> positions,
                            std::optional<double> snr_db, std::uint64_t seed);

ErrorMetrics evaluate(const SparseSpectrum& truth, const SparseSpectrum& estimate,
                      double tol = kDefaultL0Tolerance);

/// Fraction of the true support present in the estimate.
double support_recovery(const SparseSpectrum& truth, const SparseSpectrum& estimate);

}  // namespace aliasfft
