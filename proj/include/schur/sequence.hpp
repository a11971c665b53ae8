#pragma once

// Interpolation data model: coefficient sequences, the lower-triangular block
// Toeplitz solvability matrix, solvability classification, and the
// Schwarz-Pick positivity tests.

#include <functional>
#include <vector>

#include "schur/linalg.hpp"
#include "schur/series.hpp"
#include "schur/types.hpp"

namespace schur {

// Taylor coefficients c_0..c_n of a candidate p x q Schur function.
struct schur_sequence {
    int p = 0;
    int q = 0;
    std::vector<complex_matrix> coeffs;

    schur_sequence() = default;
    schur_sequence(int p_, int q_, std::vector<complex_matrix> coeffs_)
        : p(p_), q(q_), coeffs(std::move(coeffs_)) {
        if (coeffs.empty()) throw shape_mismatch("schur_sequence: needs at least c_0");
        for (const auto& ck : coeffs)
            if (ck.rows() != p || ck.cols() != q)
                throw shape_mismatch("schur_sequence: coefficient shape mismatch");
    }

    static schur_sequence scalar(std::initializer_list<complex> values) {
        std::vector<complex_matrix> cs;
        for (complex v : values) {
            complex_matrix m(1, 1);
            m(0, 0) = v;
            cs.push_back(m);
        }
        return schur_sequence(1, 1, std::move(cs));
    }

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    schur_sequence prefix(int n) const {
        return schur_sequence(p, q, {coeffs.begin(), coeffs.begin() + n + 1});
    }
};

struct toeplitz_block {
    int n = 0;
    complex_matrix matrix;  // (n+1)p x (n+1)q, block (i,j) = c_{i-j} for i >= j
};

inline toeplitz_block block_toeplitz(const schur_sequence& s) {
    const int n = s.order();
    complex_matrix m = complex_matrix::Zero((n + 1) * s.p, (n + 1) * s.q);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j)
            m.block(i * s.p, j * s.q, s.p, s.q) = s.coeffs[i - j];
    return {n, std::move(m)};
}

enum class solvability { nondegenerate, degenerate, infeasible };

struct solvability_verdict {
    solvability kind = solvability::infeasible;
    double margin = 0.0;  // smallest eigenvalue of I - C_n C_n*
};

inline solvability_verdict classify(const schur_sequence& s, const tolerance_policy& tol) {
    tol.validate();
    const complex_matrix c = block_toeplitz(s).matrix;
    const complex_matrix gap =
        complex_matrix::Identity(c.rows(), c.rows()) - c * c.adjoint();
    const double margin = smallest_eigenvalue(gap);
    solvability kind = solvability::degenerate;
    if (margin > tol.psd_tol) kind = solvability::nondegenerate;
    else if (margin < -tol.psd_tol) kind = solvability::infeasible;
    return {kind, margin};
}

inline void require_nondegenerate(const schur_sequence& s, const tolerance_policy& tol) {
    const auto v = classify(s, tol);
    if (v.kind == solvability::infeasible)
        throw infeasible_data("sequence data is infeasible (margin " +
                              std::to_string(v.margin) + ")");
    if (v.kind == solvability::degenerate)
        throw degenerate_data("sequence data is degenerate (margin " +
                              std::to_string(v.margin) + ")", s.order());
}

// theta~(zeta) := theta(conj(zeta))*: dimensions swap and coefficients adjoint.
inline schur_sequence associate(const schur_sequence& s) {
    std::vector<complex_matrix> cs;
    cs.reserve(s.coeffs.size());
    for (const auto& ck : s.coeffs) cs.push_back(ck.adjoint());
    return schur_sequence(s.q, s.p, std::move(cs));
}

inline complex_matrix evaluate(const schur_sequence& s, complex zeta) {
    complex_matrix v = complex_matrix::Zero(s.p, s.q);
    complex zk = 1.0;
    for (const auto& ck : s.coeffs) { v += zk * ck; zk *= zeta; }
    return v;
}

inline truncated_series to_series(const schur_sequence& s) {
    truncated_series t(s.p, s.q, s.order());
    t.c = s.coeffs;
    return t;
}

inline schur_sequence from_series(const truncated_series& t) {
    return schur_sequence(t.p, t.q, t.c);
}

enum class pick_variant { direct, dual };

struct schwarz_pick_result {
    complex_matrix matrix;
    bool psd = false;
};

// Assembles the Schwarz-Pick block matrix for the given evaluator over the
// points and reports positive semidefiniteness within psd_tol.  In the dual
// variant the last point plays the distinguished role in the difference
// quotients, so all points must be pairwise distinct.
inline schwarz_pick_result schwarz_pick_matrix(
    const std::function<complex_matrix(complex)>& theta, const std::vector<complex>& points,
    pick_variant variant, const tolerance_policy& tol) {
    if (points.empty()) throw shape_mismatch("schwarz_pick_matrix: no points");
    const int m = static_cast<int>(points.size());
    std::vector<complex_matrix> values;
    values.reserve(points.size());
    for (complex z : points) values.push_back(theta(z));
    const int p = static_cast<int>(values[0].rows());
    const int q = static_cast<int>(values[0].cols());

    complex_matrix out;
    if (variant == pick_variant::direct) {
        out.resize(m * p, m * p);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const complex den = 1.0 - points[i] * std::conj(points[j]);
                out.block(i * p, j * p, p, p) =
                    (complex_matrix::Identity(p, p) - values[i] * values[j].adjoint()) / den;
            }
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (std::abs(points[i] - points[j]) < 1e-14)
                    throw coincident_points("schwarz_pick_matrix: dual variant needs distinct points");
        const int k = m - 1;  // corner rows/cols use the last point
        out.resize(k * p + q, k * p + q);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const complex den = 1.0 - points[i] * std::conj(points[j]);
                out.block(i * p, j * p, p, p) =
                    (complex_matrix::Identity(p, p) - values[i] * values[j].adjoint()) / den;
            }
        for (int i = 0; i < k; ++i) {
            complex_matrix dq = (values[k] - values[i]) / (points[k] - points[i]);
            out.block(i * p, k * p, p, q) = dq;
            out.block(k * p, i * p, q, p) = dq.adjoint();
        }
        out.block(k * p, k * p, q, q) =
            (complex_matrix::Identity(q, q) - values[k].adjoint() * values[k]) /
            (1.0 - std::norm(points[k]));
    }
    const bool psd = smallest_eigenvalue(hermitian_part(out)) >= -tol.psd_tol;
    return {std::move(out), psd};
}

}  // namespace schur
