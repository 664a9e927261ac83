#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "aliasfft/bucketize.hpp"
#include "aliasfft/signals.hpp"

namespace aliasfft {

/// One layer of the binary tree: ŷ_{2^d,0} on the buckets that were computed.
struct TreeLayer {
    std::size_t depth = 0;
    std::size_t b = 1;
    std::vector<std::size_t> active;  // ascending
    std::map<std::size_t, cplx> values;
    bool full = false;                // every bucket computed
    std::size_t m() const noexcept { return active.size(); }
};

/// Single bucket ŷ_{B,0}[i] by its direct B-term sum; B reads.
cplx direct_bucket(const Signal& x, std::size_t b, std::size_t i, SampleLedger& ledger);

/// Layer `depth` computed in full, with the buckets above `threshold` active.
TreeLayer full_layer(const Signal& x, std::size_t depth, double threshold, SampleLedger& ledger);

/// Children {i, i + 2^{d-1}} of each active parent. When 2·m_{d-1} <= d only
/// those candidates are evaluated by their direct sums; otherwise the whole
/// layer is bucketized. Throws std::invalid_argument past depth log₂N.
TreeLayer expand_layer(const Signal& x, const TreeLayer& prev, double threshold,
                       SampleLedger& ledger);

struct DsfftConfig {
    std::optional<std::size_t> start_depth;  // default ⌈log₂k⌉
    double theta = 0.75;
    std::uint64_t seed = 0;
};

struct DsfftReport {
    SparseSpectrum recovered{1};
    std::vector<std::size_t> layer_counts;  // m_d from the start depth on
    std::size_t start_depth = 0;
    std::size_t leaf_depth = 0;
    std::size_t singletons = 0;
    std::size_t aliased_leaves = 0;
};

/// Tree search with a report of every layer. N must be a power of two
/// (unsupported_size otherwise). `noisy` routes every leaf through the
/// moment solver instead of the 3-shift test.
DsfftReport dsfft_run(const Signal& x, std::size_t k, const DsfftConfig& config,
                      SampleLedger& ledger, bool noisy = false);

/// Output of dsfft_run truncated to the k largest.
SparseSpectrum dsfft(const Signal& x, std::size_t k, const DsfftConfig& config,
                     SampleLedger& ledger, bool noisy = false);

/// Probability that k uniform distinct positions in [0, n) fall in k distinct
/// residues mod b: Π_{j<k} (n - jL)/(n - j). 0 when k > b.
double non_aliasing_probability(std::size_t n, std::size_t k, std::size_t b);

/// N → ∞ limit Π_{j<k} (1 - j/b).
double non_aliasing_probability_limit(std::size_t k, std::size_t b);

}  // namespace aliasfft
