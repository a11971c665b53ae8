#pragma once

// Shared numerical kernels: Hermitian square roots, tolerance-aware
// pseudoinverse, Loewner-order comparison, numerical rank.  Dense complex
// linear algebra is delegated to Eigen; every decomposition used here is
// deterministic for a fixed input.

#include <algorithm>
#include <cmath>

#include "schur/types.hpp"

namespace schur {

inline double frobenius(const complex_matrix& a) { return a.norm(); }

// Largest singular value; zero for empty matrices.
inline double opnorm(const complex_matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return Eigen::JacobiSVD<complex_matrix>(a).singularValues()(0);
}

inline complex_matrix hermitian_part(const complex_matrix& a) {
    return 0.5 * (a + a.adjoint());
}

inline bool is_hermitian(const complex_matrix& a, const tolerance_policy& tol) {
    if (a.rows() != a.cols()) return false;
    if (a.rows() == 0) return true;
    return (a - a.adjoint()).norm() <= tol.residual_tol * (1.0 + a.norm());
}

// Eigenvalues are ascending per Eigen's convention.
inline Eigen::SelfAdjointEigenSolver<complex_matrix> hermitian_eig(const complex_matrix& a) {
    Eigen::SelfAdjointEigenSolver<complex_matrix> es(hermitian_part(a));
    if (a.rows() > 0 && es.info() != Eigen::Success)
        throw error("hermitian eigendecomposition failed");
    return es;
}

inline double smallest_eigenvalue(const complex_matrix& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    return hermitian_eig(hermitian).eigenvalues()(0);
}

inline double largest_eigenvalue(const complex_matrix& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    auto ev = hermitian_eig(hermitian).eigenvalues();
    return ev(ev.size() - 1);
}

// Hermitian PSD square root.  Negative eigenvalues within psd_tol are clamped
// to zero; anything below -psd_tol is rejected.
inline complex_matrix hermitian_sqrt(const complex_matrix& a, const tolerance_policy& tol) {
    if (a.rows() != a.cols())
        throw not_hermitian("hermitian_sqrt: matrix is not square");
    if (a.rows() == 0) return a;
    if (!is_hermitian(a, tol))
        throw not_hermitian("hermitian_sqrt: matrix is not Hermitian within tolerance");
    auto es = hermitian_eig(a);
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam(0) < -tol.psd_tol)
        throw not_psd("hermitian_sqrt: eigenvalue below -psd_tol");
    Eigen::VectorXd root = lam.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

// Moore-Penrose pseudoinverse; singular values below rank_tol * sigma_max are
// treated as exact zeros.
inline complex_matrix pinv_tol(const complex_matrix& a, const tolerance_policy& tol) {
    if (a.rows() == 0 || a.cols() == 0)
        return complex_matrix::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<complex_matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sig = svd.singularValues();
    const double cut = tol.rank_tol * (sig.size() > 0 ? sig(0) : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sig.size());
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) > cut && sig(i) > 0.0) inv(i) = 1.0 / sig(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// True iff A <= B in the Loewner order, within psd_tol.
inline bool loewner_leq(const complex_matrix& a, const complex_matrix& b,
                        const tolerance_policy& tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw size_mismatch("loewner_leq: operands must be Hermitian of equal size");
    if (a.rows() == 0) return true;
    return smallest_eigenvalue(hermitian_part(b - a)) >= -tol.psd_tol;
}

inline int numerical_rank(const complex_matrix& a, double rank_tol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    auto sig = Eigen::JacobiSVD<complex_matrix>(a).singularValues();
    if (sig.size() == 0 || sig(0) <= 0.0) return 0;
    const double cut = rank_tol * sig(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) > cut) ++r;
    return r;
}

// Rank of a Hermitian PSD matrix by eigenvalue cutoff relative to the largest
// eigenvalue, with unit floor (near-zero matrices report rank 0).
inline int numerical_rank_psd(const complex_matrix& a, double rank_tol) {
    if (a.rows() == 0) return 0;
    auto lam = hermitian_eig(a).eigenvalues();
    const double top = lam(lam.size() - 1);
    const double cut = rank_tol * std::max(top, 1.0);
    int r = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > cut) ++r;
    return r;
}

namespace detail {

// Multiplies each column by a unimodular factor making its largest-modulus
// entry real and positive; ties break at the smallest row index.
inline complex_matrix fix_column_phases(complex_matrix u) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            double m = std::abs(u(i, j));
            if (m > best + 1e-14) { best = m; imax = i; }
        }
        if (best > 0.0) {
            complex ph = u(imax, j) / std::abs(u(imax, j));
            u.col(j) *= std::conj(ph);
        }
    }
    return u;
}

}  // namespace detail

// Orthonormal basis of range(A), deterministic up to column phases which are
// then fixed explicitly.
inline complex_matrix range_basis(const complex_matrix& a, double rank_tol) {
    if (a.rows() == 0 || a.cols() == 0) return complex_matrix::Zero(a.rows(), 0);
    Eigen::JacobiSVD<complex_matrix> svd(a, Eigen::ComputeFullU);
    const auto& sig = svd.singularValues();
    const double cut = (sig.size() > 0 ? rank_tol * sig(0) : 0.0);
    int r = 0;
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) > cut && sig(i) > 0.0) ++r;
    return detail::fix_column_phases(svd.matrixU().leftCols(r));
}

// Orthonormal basis of ker(A).
inline complex_matrix nullspace_basis(const complex_matrix& a, double rank_tol) {
    if (a.cols() == 0) return complex_matrix::Zero(0, 0);
    if (a.rows() == 0) return complex_matrix::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<complex_matrix> svd(a, Eigen::ComputeFullV);
    const auto& sig = svd.singularValues();
    const double cut = (sig.size() > 0 ? rank_tol * sig(0) : 0.0);
    int r = 0;
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) > cut && sig(i) > 0.0) ++r;
    return detail::fix_column_phases(svd.matrixV().rightCols(a.cols() - r));
}

// Orthonormal basis of the orthogonal complement of span(u); u is assumed to
// have orthonormal columns.
inline complex_matrix complement_basis(const complex_matrix& u) {
    if (u.rows() == 0) return complex_matrix::Zero(0, 0);
    if (u.cols() == 0) return complex_matrix::Identity(u.rows(), u.rows());
    return nullspace_basis(u.adjoint(), 1e-12);
}

// Orthonormal basis of range(P1) ∩ range(P2) for orthonormal-column bases
// u1, u2, via the null space of the stacked complement projectors.
inline complex_matrix intersection_basis(const complex_matrix& u1, const complex_matrix& u2,
                                         double rank_tol) {
    const Eigen::Index m = u1.rows();
    if (m == 0) return complex_matrix::Zero(0, 0);
    complex_matrix stack(2 * m, m);
    stack.topRows(m) = complex_matrix::Identity(m, m) - u1 * u1.adjoint();
    stack.bottomRows(m) = complex_matrix::Identity(m, m) - u2 * u2.adjoint();
    Eigen::JacobiSVD<complex_matrix> svd(stack, Eigen::ComputeFullV);
    const auto& sig = svd.singularValues();
    int k = 0;  // count of near-zero singular values
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) <= rank_tol * std::max(1.0, sig(0))) ++k;
    return detail::fix_column_phases(svd.matrixV().rightCols(k));
}

}  // namespace schur
