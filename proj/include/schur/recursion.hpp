#pragma once

// Stepwise Schur algorithm at the Taylor-coefficient level.  Each step of the
// recursion inverts one linear fractional factor; the factor used here is the
// Q-conjugated binomial normalized to the identity at 1 (its zero-parameter
// specialization is diag(zeta*I, I), which is what the exact zero-data
// solution set requires).

#include <vector>

#include "schur/sequence.hpp"
#include "schur/series.hpp"

namespace schur {

// Constant terms c_0^(0)..c_0^(n) of the recursion iterates.
struct schur_parameters {
    int p = 0;
    int q = 0;
    std::vector<complex_matrix> params;

    int count() const { return static_cast<int>(params.size()); }
};

namespace detail {

// zeta-linear blocks of the step factor for a strictly contractive parameter.
struct step_blocks {
    truncated_series a, b, c, d;
};

inline complex_matrix contraction_gap(const complex_matrix& c) {
    return complex_matrix::Identity(c.rows(), c.rows()) - c * c.adjoint();
}

inline void require_strict_contraction(const complex_matrix& c, const tolerance_policy& tol,
                                       int level) {
    if (smallest_eigenvalue(contraction_gap(c)) <= tol.psd_tol)
        throw degenerate_data("schur parameter at level " + std::to_string(level) +
                              " is not strictly contractive", level);
}

inline step_blocks make_step(const complex_matrix& c, int order) {
    const int p = static_cast<int>(c.rows());
    const int q = static_cast<int>(c.cols());
    const complex_matrix d = contraction_gap(c).inverse();  // (I - cc*)^{-1}
    step_blocks s{truncated_series(p, p, order), truncated_series(p, q, order),
                  truncated_series(q, p, order), truncated_series(q, q, order)};
    // a(z) = I + (z-1)D, b(z) = (1-z)Dc, c(z) = (z-1)c*D, d(z) = I - (z-1)c*Dc
    s.a.c[0] = complex_matrix::Identity(p, p) - d;
    s.b.c[0] = d * c;
    s.c.c[0] = -c.adjoint() * d;
    s.d.c[0] = complex_matrix::Identity(q, q) + c.adjoint() * d * c;
    if (order >= 1) {
        s.a.c[1] = d;
        s.b.c[1] = -d * c;
        s.c.c[1] = c.adjoint() * d;
        s.d.c[1] = -c.adjoint() * d * c;
    }
    return s;
}

}  // namespace detail

// Schur parameters of nondegenerate data.  params[0] = c_0; params[k] is the
// constant term of the k-th recursion iterate.
inline schur_parameters schur_parameters_of(const schur_sequence& seq,
                                            const tolerance_policy& tol) {
    tol.validate();
    require_nondegenerate(seq, tol);
    const int n = seq.order();
    truncated_series theta = to_series(seq);
    schur_parameters out{seq.p, seq.q, {theta.c[0]}};
    for (int k = 1; k <= n; ++k) {
        const complex_matrix& c = out.params.back();
        detail::require_strict_contraction(c, tol, k - 1);
        const auto step = detail::make_step(c, theta.order());
        truncated_series num = theta * step.d - step.b;   // divisible by zeta
        truncated_series den = step.a - theta * step.c;   // divisible by zeta
        const double scale = 1.0 + theta.max_coeff_norm();
        if (num.c[0].norm() > tol.residual_tol * scale ||
            den.c[0].norm() > tol.residual_tol * scale)
            throw degenerate_data("schur recursion step lost divisibility at level " +
                                  std::to_string(k), k);
        theta = series_solve_left(den.shifted_down(1), num.shifted_down(1));
        out.params.push_back(theta.c[0]);
    }
    detail::require_strict_contraction(out.params.back(), tol, n);
    return out;
}

// Exact inverse of schur_parameters_of: composes the step factors forward.
inline schur_sequence taylor_from_parameters(const schur_parameters& pars,
                                             const tolerance_policy& tol) {
    tol.validate();
    if (pars.params.empty()) throw shape_mismatch("taylor_from_parameters: empty parameter list");
    const int n = pars.count() - 1;
    for (int k = 0; k <= n; ++k) {
        if (pars.params[k].rows() != pars.p || pars.params[k].cols() != pars.q)
            throw shape_mismatch("taylor_from_parameters: parameter shape mismatch");
        if (smallest_eigenvalue(detail::contraction_gap(pars.params[k])) <= tol.psd_tol)
            throw noncontractive_parameter("parameter " + std::to_string(k) +
                                           " is not strictly contractive");
    }
    truncated_series theta = truncated_series::constant(pars.params[n], n);
    for (int k = n - 1; k >= 0; --k) {
        const auto step = detail::make_step(pars.params[k], n);
        theta = series_solve_right(step.a * theta + step.b, step.c * theta + step.d);
    }
    return from_series(theta);
}

}  // namespace schur
