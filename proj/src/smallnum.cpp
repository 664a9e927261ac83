#include "aliasfft/smallnum.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace aliasfft {

using cplx = std::complex<double>;

SvdResult svd(const SmallMatrix& a) {
    Eigen::JacobiSVD<SmallMatrix> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return SvdResult{s.matrixU(), s.singularValues(), s.matrixV()};
}

namespace {

std::size_t numerical_rank(const Eigen::VectorXd& sigma) {
    if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
    const double cut = kRankTolerance * sigma(0);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cut) ++r;
    return r;
}

LinearSolution pinv_solve(const SmallMatrix& a, const SmallVector& b) {
    Eigen::JacobiSVD<SmallMatrix> s(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const std::size_t rank = numerical_rank(s.singularValues());
    SmallVector x = SmallVector::Zero(a.cols());
    for (std::size_t i = 0; i < rank; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const cplx coef = s.matrixU().col(k).dot(b) / s.singularValues()(k);
        x += coef * s.matrixV().col(k);
    }
    LinearSolution out;
    out.residual = (a * x - b).norm();
    out.x = std::move(x);
    out.rank = rank;
    out.ill_conditioned = rank < static_cast<std::size_t>(a.cols());
    return out;
}

}  // namespace

LinearSolution solve_linear(const SmallMatrix& a, const SmallVector& b) {
    if (a.rows() != a.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
    if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
    return pinv_solve(a, b);
}

LinearSolution least_squares(const SmallMatrix& a, const SmallVector& b) {
    if (a.rows() < a.cols()) throw std::invalid_argument("least_squares: needs rows >= cols");
    if (b.size() != a.rows()) throw std::invalid_argument("least_squares: dimension mismatch");
    return pinv_solve(a, b);
}

std::vector<cplx> poly_roots(std::span<const cplx> coeffs) {
    const std::size_t deg = coeffs.size();
    if (deg == 0 || deg > 4) throw std::invalid_argument("poly_roots: degree must be 1..4");
    if (deg == 1) return {-coeffs[0]};
    if (deg == 2) {
        const cplx c0 = coeffs[0], c1 = coeffs[1];
        const cplx disc = std::sqrt(c1 * c1 - 4.0 * c0);
        return {(-c1 - disc) / 2.0, (-c1 + disc) / 2.0};
    }
    const auto d = static_cast<Eigen::Index>(deg);
    SmallMatrix companion = SmallMatrix::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -coeffs[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<SmallMatrix> es(companion, false);
    std::vector<cplx> roots(deg);
    for (Eigen::Index i = 0; i < d; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return roots;
}

PencilResult pencil_eigenvalues(const SmallMatrix& y1, const SmallMatrix& y2, std::size_t rank) {
    if (y1.rows() != y2.rows() || y1.cols() != y2.cols())
        throw std::invalid_argument("pencil_eigenvalues: Y1 and Y2 must have the same shape");
    if (y1.rows() != y1.cols() + 1)
        throw std::invalid_argument("pencil_eigenvalues: expected (a+1) x a matrices");
    const Eigen::Index a = y1.cols();
    if (rank == 0) return {};
    if (rank > static_cast<std::size_t>(a)) throw std::invalid_argument("pencil_eigenvalues: rank > a");

    SmallMatrix y(a + 1, a + 1);
    y.leftCols(a) = y1;
    y.col(a) = y2.col(a - 1);

    Eigen::JacobiSVD<SmallMatrix> s(y, Eigen::ComputeFullV);
    PencilResult out;
    const std::size_t numeric = numerical_rank(s.singularValues());
    out.truncated = rank > numeric;
    const std::size_t r = out.truncated ? numeric : rank;
    if (r == 0) return out;

    const auto rr = static_cast<Eigen::Index>(r);
    const SmallMatrix vr = s.matrixV().leftCols(rr);
    // Column c of Y is U Σ conj(V(c, :)); Y₁ keeps rows 0..a-1 of V, Y₂ rows 1..a.
    const SmallMatrix v1h = vr.topRows(a).adjoint();
    const SmallMatrix v2h = vr.bottomRows(a).adjoint();
    const SmallMatrix v1h_pinv = v1h.completeOrthogonalDecomposition().pseudoInverse();
    const SmallMatrix reduced = v2h * v1h_pinv;  // r × r
    Eigen::ComplexEigenSolver<SmallMatrix> es(reduced, false);
    for (Eigen::Index i = 0; i < rr; ++i) {
        const cplx lambda = es.eigenvalues()(i);
        out.nodes.push_back(std::abs(lambda) > 0.0 ? 1.0 / lambda : cplx{});
    }
    return out;
}

}  // namespace aliasfft
