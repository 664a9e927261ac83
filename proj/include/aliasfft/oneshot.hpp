#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aliasfft/bucketize.hpp"
#include "aliasfft/signals.hpp"
#include "aliasfft/smallnum.hpp"

namespace aliasfft {

/// Which localization method the one-shot pipeline uses:
/// DT1 roots the moment polynomial, DT2 enumerates the L grid candidates
/// against it, DT3 solves the matrix pencil.
enum class DtVariant { DT1, DT2, DT3 };

const char* to_string(DtVariant v);

struct OneShotConfig {
    std::size_t a_m = 4;   ///< max tones aliased into one bucket, 1..4
    std::size_t b = 0;     ///< bucket count; 0 picks the default for (N, K)
    std::size_t p = 0;     ///< random shift count; 0 means 3·a_m
    DtVariant variant = DtVariant::DT3;
    std::uint64_t seed = 0;
};

/// Smallest divisor of n that is >= 32k, raised further until n/B <= 1000.
std::size_t default_bucket_count(std::size_t n, std::size_t k);

/// Fills in defaults and validates: a_m in [1,4], B | N, P >= a_m·log10(N/B).
/// Throws std::invalid_argument on violation.
OneShotConfig resolve_config(std::size_t n, std::size_t k, OneShotConfig cfg);

/// One bucket's measurements: m_τ for the structured shifts τ ∈ [-a_m, 2a_m)
/// and for the random shifts.
struct BucketMoments {
    std::size_t bucket = 0;
    std::size_t a_m = 0;
    std::vector<cplx> structured;  // index τ + a_m
    std::vector<cplx> random;

    cplx m(std::int64_t tau) const {
        return structured.at(static_cast<std::size_t>(tau + static_cast<std::int64_t>(a_m)));
    }
};

struct MomentSet {
    std::size_t n = 0;
    std::size_t b = 0;
    std::size_t a_m = 0;
    ShiftSet random_shifts;
    std::vector<BucketMoments> buckets;
};

/// Structured shift set {-a_m, ..., 2a_m - 1}.
ShiftSet structured_shifts(std::size_t a_m);

/// P distinct random shifts in [0, N), disjoint from the structured set when
/// N leaves room for that.
ShiftSet random_shifts(std::size_t n, std::size_t a_m, std::size_t p, std::uint64_t seed);

/// Bucketizes over the structured and random shift sets; (3a_m + P)·B reads.
MomentSet collect_moments(const Signal& x, const OneShotConfig& cfg, SampleLedger& ledger);

/// Hankel matrix [m_{r+c}] of size a×a.
SmallMatrix hankel(const BucketMoments& mom, std::size_t a);

/// Pools the a_m singular values of every bucket's Hankel matrix and returns,
/// per bucket, how many of the k largest pooled values it owns. Ties on value
/// go to the lower bucket index.
std::vector<std::size_t> detect_sparsity(std::span<const BucketMoments> buckets, std::size_t k);

struct LocateResult {
    std::vector<std::size_t> positions;
    bool degenerate = false;  // moment system could not be solved
};

/// Nearest f ≡ bucket (mod B) to the phase of z, skipping `used` positions.
/// Ties go to the smaller f.
std::size_t snap_to_grid(cplx z, std::size_t bucket, std::size_t b, std::size_t n,
                         std::span<const std::size_t> used = {});

/// Candidate positions for the a tones of one bucket.
LocateResult locate(const BucketMoments& mom, std::size_t a, DtVariant method, std::size_t b,
                    std::size_t n);

struct BucketSolution {
    std::size_t bucket = 0;
    std::vector<std::size_t> positions;
    std::vector<cplx> values;
    double residual = 0.0;
};

/// Maximum subspace-pursuit iterations.
inline constexpr int kPursuitMaxIterations = 10;

/// Subspace pursuit over the 3a-atom dictionary {f, f+B, f-B} of the
/// candidates against the random-shift measurements.
BucketSolution estimate_values(const BucketMoments& mom, std::span<const std::int64_t> shifts,
                               std::span<const std::size_t> candidates, std::size_t b,
                               std::size_t n);

/// locate + estimate_values for one bucket; empty when degenerate or a = 0.
BucketSolution solve_bucket(const BucketMoments& mom, std::size_t a, DtVariant method,
                            std::span<const std::int64_t> shifts, std::size_t b, std::size_t n);

/// Full one-shot pipeline; output truncated to the k largest magnitudes.
SparseSpectrum sfft_dt(const Signal& x, std::size_t k, const OneShotConfig& cfg,
                       SampleLedger& ledger);

}  // namespace aliasfft
