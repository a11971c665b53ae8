#pragma once

// Signature operators, information matrices, J-elementary resolvent matrices
// and binomial factors, J-form verification, and the linear fractional
// solution maps of the fundamental matrix inequalities.
//
// The resolvent with the pole at zero is constructed from the information
// matrix directly; the polynomial resolvent is derived from it through the
// flip conjugation B~(t) = Q* B(t)* Q on the unit circle followed by exact
// trigonometric interpolation.  The printed closed form of the polynomial
// factor fails the zero-data consistency check, so it is not used anywhere.

#include <random>
#include <vector>

#include "schur/fft.hpp"
#include "schur/recursion.hpp"
#include "schur/sequence.hpp"

namespace schur {

enum class signature_kind { j, j_tilde };

// j = diag(-I_F, I_G) on F (+) G; j~ = diag(-I_G, I_F) on G (+) F.
inline complex_matrix signature_operator(signature_kind kind, int p, int q) {
    const int a = (kind == signature_kind::j) ? q : p;
    const int b = (kind == signature_kind::j) ? p : q;
    complex_matrix m = complex_matrix::Zero(a + b, a + b);
    m.topLeftCorner(a, a) = -complex_matrix::Identity(a, a);
    m.bottomRightCorner(b, b) = complex_matrix::Identity(b, b);
    return m;
}

// Flip operator Q : G (+) F -> F (+) G.
inline complex_matrix flip_operator(int p, int q) {
    complex_matrix m = complex_matrix::Zero(q + p, p + q);
    m.topRightCorner(q, q) = complex_matrix::Identity(q, q);
    m.bottomLeftCorner(p, p) = complex_matrix::Identity(p, p);
    return m;
}

// (I, zeta I, ..., zeta^n I) as an m x (n+1)m row of blocks.
inline complex_matrix vandermonde_row(int m, int n, complex zeta) {
    complex_matrix out(m, (n + 1) * m);
    complex zk = 1.0;
    for (int k = 0; k <= n; ++k) {
        out.block(0, k * m, m, m) = zk * complex_matrix::Identity(m, m);
        zk *= zeta;
    }
    return out;
}

enum class info_kind { h, h_tilde };

struct information_matrix_t {
    info_kind kind = info_kind::h;
    int n = 0;
    complex_matrix matrix;
};

// H_n  = col(C*, I) (I - CC*)^{-1} row(C, I)   on F^{n+1} (+) G^{n+1};
// H~_n = col(I, C*) (I - CC*)^{-1} row(I, C)   on G^{n+1} (+) F^{n+1}.
inline information_matrix_t information_matrix(const schur_sequence& seq, info_kind kind,
                                               const tolerance_policy& tol) {
    require_nondegenerate(seq, tol);
    const int n = seq.order();
    const complex_matrix c = block_toeplitz(seq).matrix;
    const Eigen::Index ng = c.rows(), nf = c.cols();
    const complex_matrix gap = complex_matrix::Identity(ng, ng) - c * c.adjoint();
    Eigen::LLT<complex_matrix> llt(gap);
    if (llt.info() != Eigen::Success)
        throw degenerate_data("information_matrix: I - C C* is not positive definite", n);
    complex_matrix wide(ng, nf + ng);
    if (kind == info_kind::h) {
        wide.leftCols(nf) = c;
        wide.rightCols(ng) = complex_matrix::Identity(ng, ng);
    } else {
        wide.leftCols(ng) = complex_matrix::Identity(ng, ng);
        wide.rightCols(nf) = c;
    }
    const complex_matrix solved = llt.solve(wide);
    return {kind, n, wide.adjoint() * solved};
}

enum class resolvent_kind { pole_at_zero, pole_at_infinity };

// A J-elementary resolvent matrix.  kind pole_at_zero acts on F (+) G and is
// rational in 1/zeta; kind pole_at_infinity acts on G (+) F and is a matrix
// polynomial of degree n+1.  Both are normalized to the identity at zeta = 1.
class resolvent_matrix {
  public:
    resolvent_kind kind = resolvent_kind::pole_at_zero;
    int n = 0;
    int p = 0;
    int q = 0;
    information_matrix_t info;                // kind-matching information matrix
    complex_matrix lead;                      // j * blockdiag(Lambda_F(1), Lambda_G(1)) * H
    std::vector<complex_matrix> poly;         // coefficients (pole_at_infinity only)

    int dim() const { return p + q; }

    complex_matrix eval(complex zeta) const {
        if (kind == resolvent_kind::pole_at_zero) {
            if (std::abs(zeta) < 1e-14)
                throw out_of_domain("resolvent has a pole at zeta = 0");
            complex_matrix right((n + 1) * dim(), dim());
            right.setZero();
            const complex inv = 1.0 / zeta;
            complex zk = 1.0;
            for (int k = 0; k <= n; ++k) {
                right.block(k * q, 0, q, q) = zk * complex_matrix::Identity(q, q);
                right.block((n + 1) * q + k * p, q, p, p) = zk * complex_matrix::Identity(p, p);
                zk *= inv;
            }
            return complex_matrix::Identity(dim(), dim()) + ((1.0 - zeta) / zeta) * lead * right;
        }
        complex_matrix v = complex_matrix::Zero(dim(), dim());
        complex zk = 1.0;
        for (const auto& d : poly) { v += zk * d; zk *= zeta; }
        return v;
    }

    // Block partition: [[a, b], [c, d]] with a the top-left square block of
    // size q (pole_at_zero, space F (+) G) or p (pole_at_infinity, G (+) F).
    complex_matrix block(char which, complex zeta) const {
        const complex_matrix v = eval(zeta);
        const int a = (kind == resolvent_kind::pole_at_zero) ? q : p;
        const int b = dim() - a;
        switch (which) {
            case 'a': return v.topLeftCorner(a, a);
            case 'b': return v.topRightCorner(a, b);
            case 'c': return v.bottomLeftCorner(b, a);
            case 'd': return v.bottomRightCorner(b, b);
        }
        throw error("resolvent_matrix::block: unknown block");
    }

    // Polynomial block as a truncated series (pole_at_infinity only).
    truncated_series block_series(char which, int order) const {
        if (kind != resolvent_kind::pole_at_infinity)
            throw error("block_series requires the polynomial resolvent");
        const int a = p, b = q;
        auto pick = [&](const complex_matrix& v) -> complex_matrix {
            switch (which) {
                case 'a': return v.topLeftCorner(a, a);
                case 'b': return v.topRightCorner(a, b);
                case 'c': return v.bottomLeftCorner(b, a);
                case 'd': return v.bottomRightCorner(b, b);
            }
            throw error("resolvent_matrix::block_series: unknown block");
        };
        const complex_matrix sample = pick(poly[0]);
        truncated_series s(static_cast<int>(sample.rows()), static_cast<int>(sample.cols()), order);
        for (int k = 0; k <= order && k < static_cast<int>(poly.size()); ++k)
            s.c[k] = pick(poly[k]);
        return s;
    }
};

inline resolvent_matrix resolvent_b(const schur_sequence& seq, const tolerance_policy& tol) {
    resolvent_matrix r;
    r.kind = resolvent_kind::pole_at_zero;
    r.n = seq.order();
    r.p = seq.p;
    r.q = seq.q;
    r.info = information_matrix(seq, info_kind::h, tol);
    const int n = r.n;
    complex_matrix left(r.dim(), (n + 1) * r.dim());
    left.setZero();
    left.block(0, 0, r.q, (n + 1) * r.q) = vandermonde_row(r.q, n, 1.0);
    left.block(r.q, (n + 1) * r.q, r.p, (n + 1) * r.p) = vandermonde_row(r.p, n, 1.0);
    r.lead = signature_operator(signature_kind::j, r.p, r.q) * left * r.info.matrix;
    return r;
}

inline resolvent_matrix resolvent_btilde(const schur_sequence& seq, const tolerance_policy& tol) {
    const resolvent_matrix b = resolvent_b(seq, tol);
    resolvent_matrix r;
    r.kind = resolvent_kind::pole_at_infinity;
    r.n = b.n;
    r.p = b.p;
    r.q = b.q;
    r.info = information_matrix(seq, info_kind::h_tilde, tol);

    // Sample B~(t) = Q* B(t)* Q on the circle and interpolate the degree-n+1
    // polynomial exactly.
    int m = 8;
    while (m < 2 * (r.n + 2)) m *= 2;
    const complex_matrix qf = flip_operator(r.p, r.q);
    std::vector<complex_matrix> samples(m);
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < m; ++k) {
        const complex t = std::polar(1.0, 2.0 * pi * k / m);
        samples[k] = qf.adjoint() * b.eval(t).adjoint() * qf;
    }
    auto coeff = detail::matrix_fourier(samples);
    r.poly.assign(coeff.begin(), coeff.begin() + r.n + 2);
    return r;
}

enum class binomial_kind { b, b_tilde };

// Degree-one J-elementary factor attached to one strictly contractive Schur
// parameter; value I at zeta = 1.
struct binomial_factor {
    binomial_kind kind = binomial_kind::b;
    int p = 0;
    int q = 0;
    complex_matrix parameter;
    complex_matrix core;  // j X for kind b; Q* X j Q for kind b_tilde

    complex_matrix eval(complex zeta) const {
        const int d = (kind == binomial_kind::b) ? q + p : p + q;
        if (kind == binomial_kind::b) {
            if (std::abs(zeta) < 1e-14)
                throw out_of_domain("binomial factor has a pole at zeta = 0");
            return complex_matrix::Identity(d, d) + ((1.0 - zeta) / zeta) * core;
        }
        return complex_matrix::Identity(d, d) + (zeta - 1.0) * core;
    }
};

inline binomial_factor binomial(const complex_matrix& parameter, binomial_kind kind,
                                const tolerance_policy& tol) {
    const int p = static_cast<int>(parameter.rows());
    const int q = static_cast<int>(parameter.cols());
    const complex_matrix gap =
        complex_matrix::Identity(p, p) - parameter * parameter.adjoint();
    if (smallest_eigenvalue(gap) <= tol.psd_tol)
        throw noncontractive_parameter("binomial: parameter is not strictly contractive");
    const complex_matrix d = gap.inverse();
    complex_matrix x(q + p, q + p);
    x.topLeftCorner(q, q) = parameter.adjoint() * d * parameter;
    x.topRightCorner(q, p) = parameter.adjoint() * d;
    x.bottomLeftCorner(p, q) = d * parameter;
    x.bottomRightCorner(p, p) = d;
    binomial_factor f;
    f.kind = kind;
    f.p = p;
    f.q = q;
    f.parameter = parameter;
    if (kind == binomial_kind::b) {
        f.core = signature_operator(signature_kind::j, p, q) * x;
    } else {
        const complex_matrix qf = flip_operator(p, q);
        f.core = qf.adjoint() * x * signature_operator(signature_kind::j, p, q) * qf;
    }
    return f;
}

struct product_report {
    double residual_b = 0.0;
    double residual_btilde = 0.0;
};

// Compares the left-ordered product of b_k and the right-ordered product of
// b~_k against the one-step resolvents at random interior points.
inline product_report product_check(const schur_sequence& seq, const tolerance_policy& tol,
                                    int npoints = 20, unsigned long long seed = 20240901ull) {
    const auto pars = schur_parameters_of(seq, tol);
    const auto rb = resolvent_b(seq, tol);
    const auto rbt = resolvent_btilde(seq, tol);
    std::vector<binomial_factor> fb, fbt;
    for (const auto& c : pars.params) {
        fb.push_back(binomial(c, binomial_kind::b, tol));
        fbt.push_back(binomial(c, binomial_kind::b_tilde, tol));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rad(0.3, 0.9), ang(0.0, 2.0 * 3.14159265358979323846);
    product_report rep;
    for (int i = 0; i < npoints; ++i) {
        const complex zeta = std::polar(rad(rng), ang(rng));
        complex_matrix prod_b = complex_matrix::Identity(rb.dim(), rb.dim());
        for (const auto& f : fb) prod_b = f.eval(zeta) * prod_b;  // b_n ... b_1 b_0
        complex_matrix prod_bt = complex_matrix::Identity(rbt.dim(), rbt.dim());
        for (const auto& f : fbt) prod_bt = prod_bt * f.eval(zeta);  // b~_0 b~_1 ... b~_n
        rep.residual_b = std::max(rep.residual_b, (prod_b - rb.eval(zeta)).norm());
        rep.residual_btilde = std::max(rep.residual_btilde, (prod_bt - rbt.eval(zeta)).norm());
    }
    return rep;
}

// Difference between the normalized J-form of the resolvent and the
// information-matrix right-hand side; zero (up to residual_tol) off |zeta|=1.
inline complex_matrix jform_defect(const resolvent_matrix& r, complex zeta,
                                   const tolerance_policy& tol) {
    (void)tol;
    const double az = std::abs(zeta);
    if (std::abs(az - 1.0) < 1e-12)
        throw on_circle("jform_defect: normalized quotient undefined on |zeta| = 1");
    const double denom = 1.0 - az * az;
    if (r.kind == resolvent_kind::pole_at_zero) {
        const complex w = 1.0 / std::conj(zeta);
        const complex_matrix jj = signature_operator(signature_kind::j, r.p, r.q);
        const complex_matrix bv = r.eval(zeta);
        const complex_matrix lhs = (bv.adjoint() * jj * bv - jj) / denom;
        complex_matrix d1(r.dim(), (r.n + 1) * r.dim());
        d1.setZero();
        d1.block(0, 0, r.q, (r.n + 1) * r.q) = vandermonde_row(r.q, r.n, w);
        d1.block(r.q, (r.n + 1) * r.q, r.p, (r.n + 1) * r.p) = vandermonde_row(r.p, r.n, w);
        const complex_matrix rhs = (d1 * r.info.matrix * d1.adjoint()) / (az * az);
        return lhs - rhs;
    }
    const complex_matrix jt = signature_operator(signature_kind::j_tilde, r.p, r.q);
    const complex_matrix bv = r.eval(zeta);
    const complex_matrix lhs = (bv * jt * bv.adjoint() - jt) / denom;
    complex_matrix d2(r.dim(), (r.n + 1) * r.dim());
    d2.setZero();
    d2.block(0, 0, r.p, (r.n + 1) * r.p) = vandermonde_row(r.p, r.n, zeta);
    d2.block(r.p, (r.n + 1) * r.p, r.q, (r.n + 1) * r.q) = vandermonde_row(r.q, r.n, zeta);
    const complex_matrix rhs = d2 * r.info.matrix * d2.adjoint();
    return lhs - rhs;
}

// theta(zeta) = (a w + b)(c w + d)^{-1} with the blocks of the polynomial
// resolvent.
inline complex_matrix lft_apply(const resolvent_matrix& r, const complex_matrix& w,
                                complex zeta) {
    if (r.kind != resolvent_kind::pole_at_infinity)
        throw error("lft_apply expects the polynomial resolvent");
    if (w.rows() != r.p || w.cols() != r.q)
        throw shape_mismatch("lft_apply: parameter must be p x q");
    const complex_matrix num = r.block('a', zeta) * w + r.block('b', zeta);
    const complex_matrix den = r.block('c', zeta) * w + r.block('d', zeta);
    Eigen::FullPivLU<complex_matrix> lu(den);
    if (!lu.isInvertible())
        throw singular_denominator("lft_apply: c w + d is singular");
    return num * lu.inverse();
}

inline complex_matrix lft_apply(const resolvent_matrix& r, const truncated_series& w,
                                complex zeta) {
    return lft_apply(r, w.eval(zeta), zeta);
}

// Mirror map theta = (w b + d)^{-1} (w a + c) with the blocks of the
// pole-at-zero resolvent.
inline complex_matrix lft_apply_left(const resolvent_matrix& r, const complex_matrix& w,
                                     complex zeta) {
    if (r.kind != resolvent_kind::pole_at_zero)
        throw error("lft_apply_left expects the pole-at-zero resolvent");
    if (w.rows() != r.p || w.cols() != r.q)
        throw shape_mismatch("lft_apply_left: parameter must be p x q");
    const complex_matrix num = w * r.block('a', zeta) + r.block('c', zeta);
    const complex_matrix den = w * r.block('b', zeta) + r.block('d', zeta);
    Eigen::FullPivLU<complex_matrix> lu(den);
    if (!lu.isInvertible())
        throw singular_denominator("lft_apply_left: w b + d is singular");
    return lu.inverse() * num;
}

// Taylor series of the solution attached to a parameter series.
inline truncated_series lft_solution_series(const resolvent_matrix& r, const truncated_series& w,
                                            int order) {
    if (r.kind != resolvent_kind::pole_at_infinity)
        throw error("lft_solution_series expects the polynomial resolvent");
    const truncated_series ws = w.truncated(order);
    const truncated_series num = r.block_series('a', order) * ws + r.block_series('b', order);
    const truncated_series den = r.block_series('c', order) * ws + r.block_series('d', order);
    return series_solve_right(num, den);
}

// Recovers the parameter of a solution: w = (a - theta c)^{-1} (theta d - b),
// where both series vanish to order n+1 exactly when theta solves the data.
inline truncated_series lft_invert(const resolvent_matrix& r, const truncated_series& theta,
                                   const tolerance_policy& tol) {
    if (r.kind != resolvent_kind::pole_at_infinity)
        throw error("lft_invert expects the polynomial resolvent");
    if (theta.p != r.p || theta.q != r.q)
        throw shape_mismatch("lft_invert: solution series must be p x q");
    const int shift = r.n + 1;
    if (theta.order() < shift)
        throw not_a_solution("lft_invert: solution series order must exceed the data order");
    const int order = theta.order();
    const truncated_series den =
        r.block_series('a', order) - theta * r.block_series('c', order);
    const truncated_series num =
        theta * r.block_series('d', order) - r.block_series('b', order);
    const double scale = 1.0 + theta.max_coeff_norm();
    for (int k = 0; k < shift; ++k)
        if (den.c[k].norm() > tol.residual_tol * scale ||
            num.c[k].norm() > tol.residual_tol * scale)
            throw not_a_solution("lft_invert: series does not match the interpolation data");
    try {
        return series_solve_left(den.shifted_down(shift), num.shifted_down(shift));
    } catch (const singular_denominator&) {
        throw not_a_solution("lft_invert: series division impossible");
    }
}

}  // namespace schur
