#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aliasfft/bucketize.hpp"
#include "aliasfft/signals.hpp"

namespace aliasfft {

enum class PeelMode { Exact, Noisy };

/// Bucket counts of the d subsampling cycles (pairwise co-prime divisors of
/// N) and the shift set every cycle is sampled at.
struct CyclePlan {
    std::vector<std::size_t> factors;
    ShiftSet shifts;
};

/// Binary-search parameters of the noisy single-ton estimator: C iterations
/// of m rounds, anchored at random offsets r_j, with stride 2^j.
struct SearchPlan {
    std::size_t c = 0;
    std::size_t m = 0;
    std::vector<std::int64_t> anchors;
    std::vector<double> weights;  // m - 1 phase-difference weights
};

struct PeelingPlan {
    std::size_t n = 0;
    PeelMode mode = PeelMode::Exact;
    CyclePlan cycles;
    std::optional<SearchPlan> search;
    std::string warning;  // set when k >= n^{1/3}
};

/// Prime-power factorization of n, ascending by prime.
std::vector<std::size_t> prime_power_factors(std::size_t n);

/// Chooses d ∈ {2, 3} pairwise co-prime bucket counts dividing n (each a
/// product of some of n's prime-power factors) and the shift schedule.
/// Exact mode samples at {0, 1, 2}. Noisy mode uses C = ⌈log₂N⌉ iterations of
/// m = max(2, ⌈(log₂N)^{1/3}⌉) rounds, raised when an SNR hint says the
/// per-bucket SNR is low. Throws unsupported_size when n has fewer than two
/// distinct prime factors.
PeelingPlan plan_cycles(std::size_t n, std::size_t k, PeelMode mode, std::uint64_t seed = 0,
                        std::optional<double> snr_hint_db = std::nullopt);

/// Kay's weighted phase-difference weights for m samples (m - 1 weights).
std::vector<double> kay_weights(std::size_t m);

/// {r_j + 2^j·t : j < C, t < m}, j-major.
ShiftSet search_shifts(const SearchPlan& plan);

enum class BucketState { ZeroTon, SingleTon, MultiTon };

const char* to_string(BucketState s);

struct BucketNode {
    std::size_t cycle = 0;
    std::size_t index = 0;
    std::vector<cplx> vec;       // measurements across the shift set
    std::vector<cplx> residual;  // vec minus every recovered tone in this bucket
    BucketState state = BucketState::MultiTon;
    bool resolved = false;
};

struct Classification {
    BucketState state = BucketState::MultiTon;
    std::size_t f = 0;
    cplx v{};
    double residual_norm = 0.0;
};

/// Ratio tolerance of the exact single-ton test: |ŷ₁/ŷ₀ - ŷ₂/ŷ₁| on unit-scale ratios.
inline constexpr double kRatioTolerance = 1e-6;

/// Exact-case test on three consecutive shifts τ₀, τ₀+1, τ₀+2: zero-ton when
/// ‖residual‖ <= eps; single-ton when the consecutive ratios agree, the phase
/// decodes to an f in this bucket's residue class, and the fitted tone leaves
/// a residual <= eps; multi-ton otherwise.
Classification classify_exact(const BucketNode& node, const ShiftSet& shifts, std::size_t b,
                              std::size_t n, double eps);

struct SearchResult {
    bool found = false;
    std::size_t f = 0;
    cplx v{};
    double residual_norm = 0.0;
};

/// Noisy single-ton estimator. Each iteration j forms the weighted phase
/// difference of its m measurements (an estimate of ∠ω^{2^j f}) and keeps the
/// candidates f ≡ bucket (mod B) whose predicted phase lies in the half circle
/// centred on it. The survivor that best fits all C estimates is returned,
/// with its least-squares value and the fit residual.
SearchResult singleton_search_noisy(std::span<const cplx> y, const SearchPlan& plan,
                                    std::size_t bucket, std::size_t b, std::size_t n);

struct NoisyThresholds {
    double t0 = 0.0;  // zero-ton energy bound on ‖y‖₂
    double t1 = 0.0;  // single-ton residual bound
};

/// Thresholds from a per-measurement noise level σ over R measurements:
/// zero-ton energy 3 standard deviations above Rσ², single-ton residual 4.
NoisyThresholds noisy_thresholds(double sigma, std::size_t r);

Classification classify_noisy(const BucketNode& node, const SearchPlan& plan,
                              const NoisyThresholds& th, std::size_t b, std::size_t n);

/// residual_k -= v·ω^{τ_k f}. Throws std::logic_error if f is not in the
/// node's residue class.
void subtract(BucketNode& node, std::size_t f, cplx v, const ShiftSet& shifts, std::size_t b,
              std::size_t n);

struct PeelingGraph {
    std::size_t n = 0;
    std::vector<std::size_t> factors;
    ShiftSet shifts;
    std::vector<std::vector<BucketNode>> cycles;
    SparseSpectrum recovered{1};
    double eps = 0.0;            // exact-mode zero tolerance
    std::vector<NoisyThresholds> thresholds;  // noisy mode, one per cycle
};

/// Bucketizes x for every cycle of the plan; R·ΣB_j reads.
PeelingGraph build_graph(const Signal& x, const PeelingPlan& plan, SampleLedger& ledger);

struct PeelReport {
    SparseSpectrum recovered{1};
    std::size_t rounds = 0;            // classification passes
    std::size_t identifications = 0;   // node classifications performed
    std::size_t unresolved_multitons = 0;
};

/// Genie-assisted peeling: classify all unresolved nodes, harvest the
/// single-tons, subtract each new tone from its bucket in every cycle, and
/// repeat until a pass finds nothing new or max_rounds passes ran.
PeelReport peel_decode(PeelingGraph& graph, const PeelingPlan& plan, std::size_t max_rounds);

inline std::size_t default_max_rounds(std::size_t k) { return k + 4; }

/// Exactly sparse FFAST: co-prime cycles sampled at {0,1,2}, peeled.
SparseSpectrum ffast(const Signal& x, std::size_t k, SampleLedger& ledger, std::uint64_t seed = 0);

/// Noise-robust variant with the binary-search single-ton estimator.
SparseSpectrum r_ffast(const Signal& x, std::size_t k, std::optional<double> snr_hint_db,
                       SampleLedger& ledger, std::uint64_t seed = 0);

}  // namespace aliasfft
