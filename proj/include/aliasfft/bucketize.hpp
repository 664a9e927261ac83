#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aliasfft/signals.hpp"

namespace aliasfft {

/// Ordered time shifts τ. Negative values are allowed and reduced mod N.
using ShiftSet = std::vector<std::int64_t>;

/// Filtered spectrum ŷ_{B,τ} of one bucketization round.
struct FilteredSpectrum {
    std::size_t b = 0;
    std::int64_t tau = 0;
    std::vector<cplx> values;
};

/// Records every time-domain read made by an algorithm. `count` includes
/// repeated reads of the same index, `unique` does not.
class SampleLedger {
public:
    explicit SampleLedger(std::size_t n);

    void record(std::size_t index);

    std::size_t n() const noexcept { return touched_.size(); }
    std::size_t count() const noexcept { return count_; }
    std::size_t unique() const noexcept { return unique_; }
    bool touched(std::size_t index) const { return touched_.at(index) != 0; }
    std::vector<std::size_t> touched_indices() const;

private:
    std::vector<unsigned char> touched_;
    std::size_t count_ = 0;
    std::size_t unique_ = 0;
};

/// Reduces τ into [0, n).
std::size_t wrap_shift(std::int64_t tau, std::size_t n);

/// x'_i = x_{(i-τ) mod N}. Materializes the rotated signal.
Signal shift(const Signal& x, std::int64_t tau);

/// out_j = x_{jL}; B = N/L reads are recorded when a ledger is given.
Signal downsample(const Signal& x, std::size_t l, SampleLedger* ledger = nullptr);

/// ŷ_{B,τ} = F_B D_L S_τ x with the 1/B-normalized size-B DFT, so that
/// ŷ_{B,τ}[i] = Σ_{j<L} x̂_{jB+i} ω_N^{τ(jB+i)}. Reads x at (jL - τ) mod N,
/// j ∈ [0, B); exactly B reads are recorded. Throws std::invalid_argument when
/// B does not divide N.
FilteredSpectrum bucketize(const Signal& x, std::size_t b, std::int64_t tau, SampleLedger& ledger);

/// One bucketize round per shift, in order.
std::vector<FilteredSpectrum> bucketize_set(const Signal& x, std::size_t b, const ShiftSet& shifts,
                                            SampleLedger& ledger);

}  // namespace aliasfft
