#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace aliasfft {

// Dense complex kernels for the per-bucket problems. Everything here is at
// most (2a_m+1)-dimensional with a_m <= 4, so Eigen's dense decompositions are
// used directly, without blocking or sparsity concerns.

using SmallMatrix = Eigen::MatrixXcd;
using SmallVector = Eigen::VectorXcd;

struct SvdResult {
    SmallMatrix u;
    Eigen::VectorXd sigma;  // descending
    SmallMatrix v;
};

/// Full SVD, A = U diag(σ) V*.
SvdResult svd(const SmallMatrix& a);

struct LinearSolution {
    SmallVector x;
    double residual = 0.0;          // ‖Ax - b‖₂
    std::size_t rank = 0;           // numerical rank used
    bool ill_conditioned = false;   // rank < cols
};

/// Relative singular-value cutoff below which directions are treated as null.
inline constexpr double kRankTolerance = 1e-10;

/// Square solve with pseudoinverse semantics: the least-norm minimizer of
/// ‖Ax - b‖₂, so near-singular systems degrade gracefully. The conditioning
/// flag reports whether any direction was dropped.
LinearSolution solve_linear(const SmallMatrix& a, const SmallVector& b);

/// argmin ‖Ax - b‖₂ for rows >= cols; least-norm and flagged when rank
/// deficient. Throws std::invalid_argument for wide matrices.
LinearSolution least_squares(const SmallMatrix& a, const SmallVector& b);

/// Roots of z^a + c_{a-1} z^{a-1} + ... + c_0 given coeffs = [c_0, ..., c_{a-1}].
/// Degrees 1 and 2 use the closed forms; 3 and 4 the companion matrix.
/// Throws std::invalid_argument for degree 0 or above 4.
std::vector<std::complex<double>> poly_roots(std::span<const std::complex<double>> coeffs);

struct PencilResult {
    std::vector<std::complex<double>> nodes;
    bool truncated = false;  // requested rank exceeded the numerical rank
};

/// Matrix-pencil node estimates from Y₁ (Y without its last column) and Y₂
/// (Y without its first column), both (a+1)×a, where Y[r][c] = m_{r-c} and
/// m_k = Σ p_j z_j^k. Y is rebuilt from the two halves, projected onto its top
/// `rank` right singular vectors, and the reduced pencil is solved as an
/// ordinary eigenproblem. Y₂ = Y₁·diag(z_j)^{-1} in the Vandermonde factors, so
/// the generalized eigenvalues of Y₂ - λY₁ are the z_j^{-1}; the returned
/// nodes are their reciprocals, the z_j themselves.
PencilResult pencil_eigenvalues(const SmallMatrix& y1, const SmallMatrix& y2, std::size_t rank);

}  // namespace aliasfft
