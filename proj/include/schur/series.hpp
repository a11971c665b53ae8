#pragma once

// Truncated matrix power series.  Arithmetic is exact through the stored
// order and silently discards higher terms; binary operations truncate to the
// shorter operand.

#include <vector>

#include "schur/types.hpp"

namespace schur {

struct truncated_series {
    int p = 0;  // rows of each coefficient
    int q = 0;  // cols of each coefficient
    std::vector<complex_matrix> c;

    truncated_series() = default;
    truncated_series(int p_, int q_, int order)
        : p(p_), q(q_), c(static_cast<size_t>(order) + 1, complex_matrix::Zero(p_, q_)) {}

    int order() const { return static_cast<int>(c.size()) - 1; }

    static truncated_series constant(const complex_matrix& c0, int order) {
        truncated_series s(static_cast<int>(c0.rows()), static_cast<int>(c0.cols()), order);
        s.c[0] = c0;
        return s;
    }

    static truncated_series identity(int n, int order) {
        return constant(complex_matrix::Identity(n, n), order);
    }

    const complex_matrix& coeff(int k) const { return c[static_cast<size_t>(k)]; }

    complex_matrix eval(complex zeta) const {
        complex_matrix v = complex_matrix::Zero(p, q);
        complex zk = 1.0;
        for (const auto& ck : c) { v += zk * ck; zk *= zeta; }
        return v;
    }

    truncated_series truncated(int new_order) const {
        truncated_series s(p, q, new_order);
        for (int k = 0; k <= new_order && k <= order(); ++k) s.c[k] = c[k];
        return s;
    }

    // Division by zeta^k; the caller is responsible for the discarded low
    // coefficients being (numerically) zero.
    truncated_series shifted_down(int k) const {
        truncated_series s(p, q, order() - k);
        for (int j = 0; j + k <= order(); ++j) s.c[j] = c[j + k];
        return s;
    }

    truncated_series shifted_up(int k) const {
        truncated_series s(p, q, order() + k);
        for (int j = 0; j <= order(); ++j) s.c[j + k] = c[j];
        return s;
    }

    // Coefficient-wise adjoint: the series of theta~(zeta) := theta(conj(zeta))*.
    truncated_series adjoint() const {
        truncated_series s(q, p, order());
        for (int k = 0; k <= order(); ++k) s.c[k] = c[k].adjoint();
        return s;
    }

    double max_coeff_norm() const {
        double m = 0.0;
        for (const auto& ck : c) m = std::max(m, ck.norm());
        return m;
    }
};

inline truncated_series operator+(const truncated_series& a, const truncated_series& b) {
    if (a.p != b.p || a.q != b.q) throw shape_mismatch("series addition: shape mismatch");
    truncated_series s(a.p, a.q, std::min(a.order(), b.order()));
    for (int k = 0; k <= s.order(); ++k) s.c[k] = a.c[k] + b.c[k];
    return s;
}

inline truncated_series operator-(const truncated_series& a, const truncated_series& b) {
    if (a.p != b.p || a.q != b.q) throw shape_mismatch("series subtraction: shape mismatch");
    truncated_series s(a.p, a.q, std::min(a.order(), b.order()));
    for (int k = 0; k <= s.order(); ++k) s.c[k] = a.c[k] - b.c[k];
    return s;
}

inline truncated_series operator*(const truncated_series& a, const truncated_series& b) {
    if (a.q != b.p) throw shape_mismatch("series product: inner dimension mismatch");
    truncated_series s(a.p, b.q, std::min(a.order(), b.order()));
    for (int k = 0; k <= s.order(); ++k)
        for (int j = 0; j <= k; ++j) s.c[k] += a.c[j] * b.c[k - j];
    return s;
}

inline truncated_series operator*(const complex_matrix& m, const truncated_series& a) {
    truncated_series s(static_cast<int>(m.rows()), a.q, a.order());
    for (int k = 0; k <= a.order(); ++k) s.c[k] = m * a.c[k];
    return s;
}

inline truncated_series operator*(const truncated_series& a, const complex_matrix& m) {
    truncated_series s(a.p, static_cast<int>(m.cols()), a.order());
    for (int k = 0; k <= a.order(); ++k) s.c[k] = a.c[k] * m;
    return s;
}

inline truncated_series operator*(complex lambda, const truncated_series& a) {
    truncated_series s = a;
    for (auto& ck : s.c) ck *= lambda;
    return s;
}

// Solves A * X = B through the common order; requires invertible A(0).
inline truncated_series series_solve_left(const truncated_series& a, const truncated_series& b) {
    if (a.p != a.q) throw shape_mismatch("series_solve_left: leading series must be square");
    if (a.q != b.p) throw shape_mismatch("series_solve_left: inner dimension mismatch");
    const int n = std::min(a.order(), b.order());
    Eigen::FullPivLU<complex_matrix> lu(a.c[0]);
    if (a.p > 0 && !lu.isInvertible())
        throw singular_denominator("series_solve_left: constant term is singular");
    truncated_series x(a.q, b.q, n);
    for (int k = 0; k <= n; ++k) {
        complex_matrix rhs = b.c[k];
        for (int j = 1; j <= k; ++j) rhs -= a.c[j] * x.c[k - j];
        x.c[k] = lu.solve(rhs);
    }
    return x;
}

inline truncated_series series_inverse(const truncated_series& a) {
    return series_solve_left(a, truncated_series::identity(a.p, a.order()));
}

// A * B^{-1} through the common order; requires invertible B(0).
inline truncated_series series_solve_right(const truncated_series& a, const truncated_series& b) {
    return series_solve_left(b.adjoint(), a.adjoint()).adjoint();
}

}  // namespace schur
