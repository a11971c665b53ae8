#pragma once

// Weyl operator functions, ball geometry (center and semi-radii), the
// normalized left semi-radius, duality and determinant identities, limit
// semi-radii and defect numbers.
//
// The W blocks are computed from the information-matrix form, which is
// polynomial in (zeta, conj zeta) and therefore valid at zeta = 0 where the
// resolvent itself has its pole.

#include <cmath>
#include <optional>

#include "schur/resolvent.hpp"
#include "schur/sequence.hpp"

namespace schur {

enum class weyl_kind { w, w_tilde };

struct weyl_matrix_t {
    weyl_kind kind = weyl_kind::w;
    int n = 0;
    complex zeta;
    // Blocks of [[-R, S*], [S, -T]] (kind w) or [[-R~, S~], [S~*, -T~]] (kind w_tilde).
    complex_matrix r, s, t;

    complex_matrix full() const {
        const Eigen::Index a = r.rows(), b = t.rows();
        complex_matrix m(a + b, a + b);
        if (kind == weyl_kind::w) {
            m.topLeftCorner(a, a) = -r;
            m.topRightCorner(a, b) = s.adjoint();
            m.bottomLeftCorner(b, a) = s;
            m.bottomRightCorner(b, b) = -t;
        } else {
            m.topLeftCorner(a, a) = -r;
            m.topRightCorner(a, b) = s;
            m.bottomLeftCorner(b, a) = s.adjoint();
            m.bottomRightCorner(b, b) = -t;
        }
        return m;
    }
};

inline weyl_matrix_t weyl_matrix(const schur_sequence& seq, complex zeta, weyl_kind kind,
                                 const tolerance_policy& tol) {
    require_nondegenerate(seq, tol);
    const double az = std::abs(zeta);
    if (az >= 1.0) throw out_of_domain("weyl_matrix: zeta must lie in the open disk");
    if (kind == weyl_kind::w_tilde && az < 1e-14)
        throw out_of_domain("weyl_matrix: the tilde blocks are undefined at zeta = 0");

    const int n = seq.order();
    const int p = seq.p, q = seq.q;
    const complex_matrix c = block_toeplitz(seq).matrix;
    const complex_matrix gap =
        complex_matrix::Identity(c.rows(), c.rows()) - c * c.adjoint();
    Eigen::LLT<complex_matrix> llt(gap);
    if (llt.info() != Eigen::Success)
        throw degenerate_data("weyl_matrix: I - C C* is not positive definite", n);
    const complex_matrix y = llt.solve(c);                                   // (I-CC*)^{-1} C
    const complex_matrix z = llt.solve(complex_matrix::Identity(c.rows(), c.rows()));
    const complex_matrix cy = c.adjoint() * y;                               // C*(I-CC*)^{-1}C

    weyl_matrix_t out;
    out.kind = kind;
    out.n = n;
    out.zeta = zeta;
    if (kind == weyl_kind::w) {
        const double scale = 1.0 - az * az;
        const complex_matrix lf = vandermonde_row(q, n, zeta);
        const complex_matrix lg = vandermonde_row(p, n, zeta);
        out.r = complex_matrix::Identity(q, q) + scale * (lf * cy * lf.adjoint());
        out.s = scale * (lg * y * lf.adjoint());
        out.t = -complex_matrix::Identity(p, p) + scale * (lg * z * lg.adjoint());
    } else {
        const complex w = 1.0 / std::conj(zeta);
        const double scale = (1.0 - az * az) / (az * az);
        const complex_matrix lfw = vandermonde_row(q, n, w);
        const complex_matrix lgw = vandermonde_row(p, n, w);
        out.r = complex_matrix::Identity(p, p) + scale * (lgw * z * lgw.adjoint());
        out.s = scale * (lgw * y * lfw.adjoint());
        out.t = -complex_matrix::Identity(q, q) + scale * (lfw * cy * lfw.adjoint());
    }
    out.r = hermitian_part(out.r);
    out.t = hermitian_part(out.t);
    return out;
}

struct weyl_ball_t {
    complex zeta;
    int n = 0;
    complex_matrix center;                // p x q
    complex_matrix rho_left;              // p x p
    complex_matrix rho_right;             // q x q
    complex_matrix rho_left_normalized;   // p x p
};

// The normalized left semi-radius rho_l / |zeta|^{2n+2} computed through its
// inverse |zeta|^{2n+2} R~, with the Vandermonde growth absorbed before any
// arithmetic: the division form cancels catastrophically once |zeta|^{2n+2}
// falls under the roundoff floor, while the scaled entries
// |zeta|^{n-k} e^{i k arg zeta} stay bounded at every point of the disk
// including the origin (where the associate convention is recovered as the
// limit).
inline complex_matrix normalized_left_semiradius(const schur_sequence& pre, complex zeta,
                                                 const tolerance_policy& tol) {
    const int n = pre.order();
    const int p = pre.p;
    const complex_matrix c = block_toeplitz(pre).matrix;
    const complex_matrix gap =
        complex_matrix::Identity(c.rows(), c.rows()) - c * c.adjoint();
    Eigen::LLT<complex_matrix> llt(gap);
    if (llt.info() != Eigen::Success)
        throw degenerate_data("weyl_ball: I - C C* is not positive definite", n);
    const complex_matrix z = llt.solve(complex_matrix::Identity(c.rows(), c.rows()));

    const double az = std::abs(zeta);
    complex_matrix vhat(p, (n + 1) * p);
    for (int k = 0; k <= n; ++k) {
        complex w;
        if (az < 1e-300)
            w = (k == n) ? 1.0 : 0.0;
        else
            w = std::polar(std::pow(az, n - k), k * std::arg(zeta));
        vhat.block(0, k * p, p, p) = w * complex_matrix::Identity(p, p);
    }
    const complex_matrix inv = std::pow(az, 2 * n + 2) * complex_matrix::Identity(p, p) +
                               (1.0 - az * az) * (vhat * z * vhat.adjoint());
    Eigen::LLT<complex_matrix> rho(hermitian_part(inv));
    if (rho.info() != Eigen::Success)
        throw error("weyl_ball: normalized semi-radius inverse failed to factor");
    return hermitian_part(rho.solve(complex_matrix::Identity(p, p)));
}

inline weyl_ball_t weyl_ball(const schur_sequence& seq, complex zeta, int n,
                             const tolerance_policy& tol) {
    if (n > seq.order())
        throw shape_mismatch("weyl_ball: order exceeds the data length");
    const schur_sequence pre = seq.prefix(n);
    const auto wm = weyl_matrix(pre, zeta, weyl_kind::w, tol);
    Eigen::LLT<complex_matrix> llt(wm.r);  // R >= I, so PD
    if (llt.info() != Eigen::Success)
        throw error("weyl_ball: R block failed to factor");
    weyl_ball_t ball;
    ball.zeta = zeta;
    ball.n = n;
    ball.rho_right = hermitian_part(llt.solve(complex_matrix::Identity(wm.r.rows(), wm.r.rows())));
    ball.center = (llt.solve(wm.s.adjoint())).adjoint();  // S R^{-1}
    ball.rho_left = hermitian_part(ball.center * wm.s.adjoint() - wm.t);
    ball.rho_left_normalized = normalized_left_semiradius(pre, zeta, tol);
    return ball;
}

// True iff value = M + rho_l^{1/2} u rho_r^{1/2} for some contraction u,
// within psd_tol, including the range-inclusion conditions on both sides.
inline bool member(const weyl_ball_t& ball, const complex_matrix& value,
                   const tolerance_policy& tol) {
    if (value.rows() != ball.center.rows() || value.cols() != ball.center.cols())
        throw shape_mismatch("member: value shape mismatch");
    const complex_matrix diff = value - ball.center;
    const complex_matrix rl = hermitian_sqrt(ball.rho_left, tol);
    const complex_matrix rr = hermitian_sqrt(ball.rho_right, tol);
    const complex_matrix pl = range_basis(rl, tol.rank_tol);
    const complex_matrix pr = range_basis(rr, tol.rank_tol);
    const double scale = 1.0 + diff.norm();
    const complex_matrix off_left =
        diff - pl * (pl.adjoint() * diff);
    if (off_left.norm() > tol.residual_tol * scale) return false;
    const complex_matrix off_right = diff - (diff * pr) * pr.adjoint();
    if (off_right.norm() > tol.residual_tol * scale) return false;
    const complex_matrix u = pinv_tol(rl, tol) * diff * pinv_tol(rr, tol);
    return opnorm(u) <= 1.0 + tol.psd_tol;
}

// || rho_{r,n}(zeta, theta~) - rho^_{l,n}(conj zeta, theta) ||.
inline double duality_residual(const schur_sequence& seq, complex zeta, int n,
                               const tolerance_policy& tol) {
    if (std::abs(zeta) < 1e-14)
        throw out_of_domain("duality_residual: zeta must be nonzero");
    const auto assoc_ball = weyl_ball(associate(seq), zeta, n, tol);
    const auto ball = weyl_ball(seq, std::conj(zeta), n, tol);
    return (assoc_ball.rho_right - ball.rho_left_normalized).norm();
}

// | det rho_{r,n} - det rho^_{l,n} | at the same point.
inline double det_residual(const schur_sequence& seq, complex zeta, int n,
                           const tolerance_policy& tol) {
    const auto ball = weyl_ball(seq, zeta, n, tol);
    const complex dr = ball.rho_right.determinant();
    const complex dl = ball.rho_left_normalized.determinant();
    return std::abs(dr - dl);
}

struct weyl_limit_t {
    complex zeta;
    complex_matrix center;
    complex_matrix rho_right;
    complex_matrix rho_left_normalized;
    int n_reached = 0;
    bool converged = false;
    int defect_rank_right = 0;   // delta_theta
    int defect_rank_left = 0;    // delta_{theta~}
    bool rank_right_stable = true;
    bool rank_left_stable = true;
    double rho_left_norm = 0.0;   // || rho_{l,n} || at the last level
    double rho_left_bound = 0.0;  // |zeta|^{2n+2} at the last level
};

// Iterates the ball over increasing order until both semi-radii settle
// (absolute change below residual_tol on two consecutive levels) or the data
// or n_max is exhausted.
inline weyl_limit_t weyl_limit(const schur_sequence& seq, complex zeta,
                               const tolerance_policy& tol, int n_max = 64) {
    const int top = std::min(n_max, seq.order());
    weyl_limit_t lim;
    lim.zeta = zeta;
    std::optional<complex_matrix> prev_r, prev_l;
    int settled = 0;
    for (int n = 0; n <= top; ++n) {
        const auto verdict = classify(seq.prefix(n), tol);
        if (verdict.kind != solvability::nondegenerate)
            throw degenerate_data("weyl_limit: data prefix is not nondegenerate at level " +
                                  std::to_string(n), n);
        const auto ball = weyl_ball(seq, zeta, n, tol);
        if (prev_r) {
            const double dr = (ball.rho_right - *prev_r).norm();
            const double dl = (ball.rho_left_normalized - *prev_l).norm();
            settled = (dr < tol.residual_tol && dl < tol.residual_tol) ? settled + 1 : 0;
        }
        prev_r = ball.rho_right;
        prev_l = ball.rho_left_normalized;
        lim.center = ball.center;
        lim.rho_right = ball.rho_right;
        lim.rho_left_normalized = ball.rho_left_normalized;
        lim.n_reached = n;
        lim.rho_left_norm = ball.rho_left.norm();
        lim.rho_left_bound = std::pow(std::abs(zeta), 2 * n + 2);
        if (settled >= 2) {
            lim.converged = true;
            break;
        }
    }
    lim.defect_rank_right = numerical_rank_psd(lim.rho_right, tol.rank_tol);
    lim.defect_rank_left = numerical_rank_psd(lim.rho_left_normalized, tol.rank_tol);
    lim.rank_right_stable =
        lim.defect_rank_right == numerical_rank_psd(lim.rho_right, 10.0 * tol.rank_tol);
    lim.rank_left_stable =
        lim.defect_rank_left == numerical_rank_psd(lim.rho_left_normalized, 10.0 * tol.rank_tol);
    return lim;
}

}  // namespace schur
