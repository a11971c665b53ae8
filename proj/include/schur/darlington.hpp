#pragma once

// Internal-scattering suboperator, regular up-leftward extensions, Darlington
// feasibility and synthesis, loss metric, scalar multiples and rational
// pseudocontinuation checks.

#include <optional>
#include <string>
#include <vector>

#include "schur/boundary.hpp"
#include "schur/colligation.hpp"

namespace schur {

struct internal_scattering_t {
    int dim_g0 = 0;               // rows of phi (channel of the defect function)
    int dim_f0 = 0;               // cols of psi (channel of the *-defect function)
    boundary_samples chi;         // dim_g0 x dim_f0
    boundary_samples omega0;      // dim_g0 x q
    boundary_samples upsilon0;    // p x dim_f0
    boundary_samples xi0;         // assembled [[chi, phi], [psi, theta]]
    double xi0_max_singular_value = 0.0;
    double omega_residual = 0.0;    // max || omega0 omega0* - I || off flagged points
    double upsilon_residual = 0.0;  // max || upsilon0* upsilon0 - I || off flagged points
    int range_violations = 0;
    int flagged_points = 0;   // grid points where the pointwise pseudoinverse lost rank
    int repaired_points = 0;  // flagged points repaired by local extrapolation
};

namespace detail {

// Replaces values at isolated flagged points by Lagrange extrapolation from
// the nearest unflagged neighbors; flagged stretches without enough close
// neighbors are left as they are.
inline int repair_flagged_samples(std::vector<complex_matrix>& vals,
                                  const std::vector<char>& flagged) {
    const int m = static_cast<int>(vals.size());
    int repaired = 0;
    std::vector<complex_matrix> fixed = vals;
    for (int i = 0; i < m; ++i) {
        if (!flagged[i]) continue;
        std::vector<int> nodes;   // signed circular offsets of donor points
        for (int d = 1; d <= 8 && static_cast<int>(nodes.size()) < 6; ++d) {
            if (!flagged[(i + d) % m]) nodes.push_back(d);
            if (static_cast<int>(nodes.size()) < 6 && !flagged[(i - d + m) % m])
                nodes.push_back(-d);
        }
        if (nodes.size() < 6) continue;
        complex_matrix acc = complex_matrix::Zero(vals[i].rows(), vals[i].cols());
        for (size_t a = 0; a < nodes.size(); ++a) {
            double w = 1.0;
            for (size_t b = 0; b < nodes.size(); ++b)
                if (a != b) w *= (0.0 - nodes[b]) / static_cast<double>(nodes[a] - nodes[b]);
            acc += w * vals[(i + nodes[a] + m) % m];
        }
        fixed[i] = acc;
        ++repaired;
    }
    vals = std::move(fixed);
    return repaired;
}

}  // namespace detail

// chi = -omega0 theta^* upsilon0 with omega0 = phi Pi^+, upsilon0 = Sigma^+ psi,
// computed pointwise on the grid.  At grid points where Pi or Sigma drops rank
// the pseudoinverse forgets part of the channel; such points are flagged,
// excluded from the residual suprema, and chi is repaired there by local
// extrapolation (the suboperator extends by continuity for rational data).
inline internal_scattering_t internal_scattering(const boundary_samples& theta,
                                                 const outer_factor_t& phi,
                                                 const outer_factor_t& psi,
                                                 const tolerance_policy& tol) {
    if (phi.samples.grid.size != theta.grid.size || psi.samples.grid.size != theta.grid.size)
        throw shape_mismatch("internal_scattering: grids disagree");
    if (phi.samples.q != theta.q || psi.samples.p != theta.p)
        throw shape_mismatch("internal_scattering: factor shapes disagree with theta");
    const int m = theta.grid.size;
    const auto [pi_s, sigma_s] = defect_pointwise(theta, tol);

    internal_scattering_t out;
    out.dim_g0 = phi.rank;
    out.dim_f0 = psi.samples.q;
    out.chi.grid = out.omega0.grid = out.upsilon0.grid = out.xi0.grid = theta.grid;
    out.chi.p = out.dim_g0; out.chi.q = out.dim_f0;
    out.omega0.p = out.dim_g0; out.omega0.q = theta.q;
    out.upsilon0.p = theta.p; out.upsilon0.q = out.dim_f0;
    out.xi0.p = out.dim_g0 + theta.p;
    out.xi0.q = out.dim_f0 + theta.q;

    const double scale = 1.0 + theta.max_norm();
    std::vector<char> flagged(m, 0);
    for (int i = 0; i < m; ++i) {
        const complex_matrix pi_pinv = pinv_tol(pi_s.values[i], tol);
        const complex_matrix sg_pinv = pinv_tol(sigma_s.values[i], tol);
        const complex_matrix& phv = phi.samples.values[i];
        const complex_matrix& psv = psi.samples.values[i];

        const double incl_left = (phv - phv * pi_pinv * pi_s.values[i]).norm();
        const double incl_right = (psv - sigma_s.values[i] * sg_pinv * psv).norm();
        if (incl_left > tol.residual_tol * scale || incl_right > tol.residual_tol * scale)
            ++out.range_violations;

        complex_matrix om = phv * pi_pinv;
        complex_matrix up = sg_pinv * psv;
        const double om_gap =
            (om * om.adjoint() - complex_matrix::Identity(out.dim_g0, out.dim_g0)).norm();
        const double up_gap =
            (up.adjoint() * up - complex_matrix::Identity(out.dim_f0, out.dim_f0)).norm();
        if (om_gap > std::sqrt(tol.residual_tol) || up_gap > std::sqrt(tol.residual_tol))
            flagged[i] = 1;
        else {
            out.omega_residual = std::max(out.omega_residual, om_gap);
            out.upsilon_residual = std::max(out.upsilon_residual, up_gap);
        }
        out.omega0.values.push_back(std::move(om));
        out.upsilon0.values.push_back(std::move(up));
        out.chi.values.push_back(-out.omega0.values.back() * theta.values[i].adjoint() *
                                 out.upsilon0.values.back());
    }
    for (int i = 0; i < m; ++i) out.flagged_points += flagged[i];
    if (out.dim_g0 > 0 && out.dim_f0 > 0)
        out.repaired_points = detail::repair_flagged_samples(out.chi.values, flagged);

    for (int i = 0; i < m; ++i) {
        complex_matrix xi(out.xi0.p, out.xi0.q);
        xi.topLeftCorner(out.dim_g0, out.dim_f0) = out.chi.values[i];
        xi.topRightCorner(out.dim_g0, theta.q) = phi.samples.values[i];
        xi.bottomLeftCorner(theta.p, out.dim_f0) = psi.samples.values[i];
        xi.bottomRightCorner(theta.p, theta.q) = theta.values[i];
        out.xi0.values.push_back(std::move(xi));
        if (!flagged[i])
            out.xi0_max_singular_value =
                std::max(out.xi0_max_singular_value, opnorm(out.xi0.values.back()));
    }
    if (out.range_violations > m / 5)
        throw range_inclusion_violated(
            "internal_scattering: range inclusions fail on a large part of the grid");
    return out;
}

struct extension_blocks_t {
    truncated_series theta12;                   // omega * phi
    truncated_series theta21;                   // psi * upsilon
    boundary_samples theta11;                   // omega chi upsilon on the grid
    std::optional<truncated_series> theta11_series;
    boundary_samples xi;                        // assembled extension samples
    double contraction_margin = 0.0;            // max singular value of xi - 1
    double theta11_tail = 0.0;
};

// Builds the regular up-leftward extension attached to a *-inner omega and an
// inner upsilon; raises if omega chi upsilon fails to be analytic, since the
// assembled function is then not a Schur extension.
inline extension_blocks_t regular_extension(const boundary_samples& theta,
                                            const truncated_series& omega,
                                            const truncated_series& upsilon,
                                            const tolerance_policy& tol) {
    const auto phi = defect_function(theta, defect_side::right, tol);
    const auto psi = defect_function(theta, defect_side::left, tol);
    const auto is = internal_scattering(theta, phi, psi, tol);

    if (omega.q != is.dim_g0)
        throw shape_mismatch("regular_extension: omega must act on the phi channel");
    if (upsilon.p != is.dim_f0)
        throw shape_mismatch("regular_extension: upsilon must act on the psi channel");
    const auto om_samples = sample(omega, theta.grid);
    const auto up_samples = sample(upsilon, theta.grid);
    if (inner_check(om_samples, inner_side::star_inner, tol).combined > tol.residual_tol)
        throw not_inner("regular_extension: omega is not *-inner");
    if (inner_check(up_samples, inner_side::inner, tol).combined > tol.residual_tol)
        throw not_inner("regular_extension: upsilon is not inner");

    extension_blocks_t out;
    const int order = std::max(
        {omega.order() + phi.coeffs.order(), upsilon.order() + psi.coeffs.order(), 1});
    out.theta12 = omega.truncated(order) * phi.coeffs.truncated(order);
    out.theta21 = psi.coeffs.truncated(order) * upsilon.truncated(order);

    const int m = theta.grid.size;
    out.theta11.grid = theta.grid;
    out.theta11.p = omega.p;
    out.theta11.q = upsilon.q;
    for (int i = 0; i < m; ++i)
        out.theta11.values.push_back(om_samples.values[i] * is.chi.values[i] *
                                     up_samples.values[i]);
    const auto rep = analyticity_report(out.theta11, tol);
    out.theta11_tail = rep.negative_tail;
    if (out.theta11_tail > tol.residual_tol)
        throw analyticity_violated("regular_extension: omega chi upsilon has a negative "
                                   "Fourier tail of " + std::to_string(out.theta11_tail));
    truncated_series t11(out.theta11.p, out.theta11.q, m / 2 - 1);
    for (int k = 0; k < m / 2; ++k) t11.c[k] = rep.table.at(k);
    out.theta11_series = std::move(t11);

    out.xi.grid = theta.grid;
    out.xi.p = omega.p + theta.p;
    out.xi.q = upsilon.q + theta.q;
    for (int i = 0; i < m; ++i) {
        complex_matrix x(out.xi.p, out.xi.q);
        x.topLeftCorner(omega.p, upsilon.q) = out.theta11.values[i];
        x.topRightCorner(omega.p, theta.q) = out.theta12.eval(theta.grid.point(i));
        x.bottomLeftCorner(theta.p, upsilon.q) = out.theta21.eval(theta.grid.point(i));
        x.bottomRightCorner(theta.p, theta.q) = theta.values[i];
        out.contraction_margin = std::max(out.contraction_margin, opnorm(x) - 1.0);
        out.xi.values.push_back(std::move(x));
    }
    return out;
}

struct feasibility_report_t {
    double residual_right = 0.0;  // || phi^* phi - Pi^2 || over the grid
    double residual_left = 0.0;   // || psi psi^* - Sigma^2 || over the grid
    int delay_omega = -1;
    int delay_upsilon = -1;
    std::string verdict;  // feasible | infeasible_factorization | no_inner_pair_found
    double inner_residual = 0.0;
    std::optional<extension_blocks_t> extension;
};

namespace detail {

inline truncated_series monomial_delay(int channel_dim, int power) {
    truncated_series s(channel_dim, channel_dim, std::max(power, 1));
    s.c[power] = complex_matrix::Identity(channel_dim, channel_dim);
    return s;
}

}  // namespace detail

// Tests the two factorization identities, then searches monomial delay pairs
// omega = zeta^a I, upsilon = zeta^b I with a + b <= delay_bound for
// analyticity of omega chi upsilon.  The verdict never claims infeasibility
// beyond the factorization test: a missing pair within the bound is reported
// as such.
inline feasibility_report_t darlington_feasibility(const boundary_samples& theta,
                                                   int delay_bound,
                                                   const tolerance_policy& tol) {
    const auto phi = defect_function(theta, defect_side::right, tol);
    const auto psi = defect_function(theta, defect_side::left, tol);
    const auto [pi_s, sigma_s] = defect_pointwise(theta, tol);
    const int m = theta.grid.size;

    feasibility_report_t rep;
    for (int i = 0; i < m; ++i) {
        const complex_matrix& phv = phi.samples.values[i];
        const complex_matrix& psv = psi.samples.values[i];
        rep.residual_right = std::max(
            rep.residual_right,
            (phv.adjoint() * phv - pi_s.values[i] * pi_s.values[i]).norm());
        rep.residual_left = std::max(
            rep.residual_left,
            (psv * psv.adjoint() - sigma_s.values[i] * sigma_s.values[i]).norm());
    }
    const double scale = 1.0 + theta.max_norm();
    if (rep.residual_right > tol.residual_tol * scale ||
        rep.residual_left > tol.residual_tol * scale) {
        rep.verdict = "infeasible_factorization";
        return rep;
    }

    const auto is = internal_scattering(theta, phi, psi, tol);
    const auto chi_fourier = fourier_coefficients(is.chi);
    auto tail_beyond = [&](int s) {
        double t = 0.0;
        for (int k = s + 1; k < m / 2; ++k)
            t = std::max(t, chi_fourier.at(-k).norm());
        return t;
    };
    int delay = -1;
    for (int s = 0; s <= delay_bound; ++s)
        if (tail_beyond(s) <= tol.residual_tol) { delay = s; break; }
    if (delay < 0) {
        rep.verdict = "no_inner_pair_found";
        return rep;
    }
    rep.delay_omega = delay;
    rep.delay_upsilon = 0;
    rep.verdict = "feasible";
    auto ext = regular_extension(theta, detail::monomial_delay(is.dim_g0, delay),
                                 detail::monomial_delay(is.dim_f0, 0), tol);
    rep.inner_residual = inner_check(ext.xi, inner_side::two_sided, tol).combined;
    rep.extension = std::move(ext);
    return rep;
}

struct loss_metric_t {
    double pi_norm = 0.0;
    double sigma_norm = 0.0;
    double loss = 0.0;
};

inline loss_metric_t loss_metric(const boundary_samples& theta, const tolerance_policy& tol) {
    const auto [pi_s, sigma_s] = defect_pointwise(theta, tol);
    loss_metric_t lm;
    for (int i = 0; i < theta.grid.size; ++i) {
        lm.pi_norm = std::max(lm.pi_norm, opnorm(pi_s.values[i]));
        lm.sigma_norm = std::max(lm.sigma_norm, opnorm(sigma_s.values[i]));
    }
    lm.loss = std::max(lm.pi_norm, lm.sigma_norm);
    return lm;
}

struct scalar_multiple_t {
    truncated_series delta;  // det theta, a Blaschke product of degree <= dim H
    truncated_series nu;     // delta * theta^{-1}
    int delta_degree = 0;    // winding number of det theta on the circle
    double identity_residual = 0.0;
    double nu_inner_residual = 0.0;
};

// Scalar multiple of the (inner, square) characteristic function: delta is
// recovered from determinant samples by the discrete transform, its Blaschke
// degree from the winding number; no root finding.
inline scalar_multiple_t scalar_multiple(const unitary_colligation& d,
                                         const boundary_grid& grid,
                                         const tolerance_policy& tol) {
    if (d.p != d.q) throw not_square("scalar_multiple: characteristic function must be square");
    const int m = grid.size;
    const auto theta = sample(d, grid);
    std::vector<complex_matrix> dets(m, complex_matrix(1, 1));
    double det_max = 0.0;
    for (int i = 0; i < m; ++i) {
        dets[i](0, 0) = theta.values[i].determinant();
        det_max = std::max(det_max, std::abs(dets[i](0, 0)));
    }
    if (det_max < tol.residual_tol)
        throw determinant_vanishes("scalar_multiple: det theta vanishes identically");

    auto det_coeff = detail::matrix_fourier(dets);
    scalar_multiple_t out;
    out.delta = truncated_series(1, 1, m / 2 - 1);
    for (int k = 0; k < m / 2; ++k) out.delta.c[k] = det_coeff[k];
    double winding = 0.0;
    for (int i = 0; i < m; ++i)
        winding += std::arg(dets[(i + 1) % m](0, 0) / dets[i](0, 0));
    out.delta_degree =
        static_cast<int>(std::lround(winding / (2.0 * 3.14159265358979323846)));

    std::vector<complex_matrix> nu_vals(m);
    for (int i = 0; i < m; ++i) {
        Eigen::PartialPivLU<complex_matrix> lu(theta.values[i]);
        nu_vals[i] = dets[i](0, 0) *
                     lu.solve(complex_matrix::Identity(d.p, d.p));
    }
    auto nu_coeff = detail::matrix_fourier(nu_vals);
    out.nu = truncated_series(d.q, d.p, m / 2 - 1);
    for (int k = 0; k < m / 2; ++k) out.nu.c[k] = nu_coeff[k];

    // Residual of theta nu = delta I and nu theta = delta I with both factors
    // rebuilt from their truncated series.
    for (int i = 0; i < m; ++i) {
        const complex t = grid.point(i);
        const complex dv = out.delta.eval(t)(0, 0);
        const complex_matrix nv = out.nu.eval(t);
        const complex_matrix lhs1 =
            theta.values[i] * nv - dv * complex_matrix::Identity(d.p, d.p);
        const complex_matrix lhs2 =
            nv * theta.values[i] - dv * complex_matrix::Identity(d.q, d.q);
        out.identity_residual =
            std::max({out.identity_residual, lhs1.norm(), lhs2.norm()});
    }
    boundary_samples nu_samples;
    nu_samples.grid = grid;
    nu_samples.p = d.q;
    nu_samples.q = d.p;
    nu_samples.values = std::move(nu_vals);
    out.nu_inner_residual = inner_check(nu_samples, inner_side::two_sided, tol).combined;
    return out;
}

struct pseudocontinuation_result {
    double residual = 0.0;              // boundary match at the radial limit
    std::vector<double> approach;       // residuals along radii decreasing to 1
};

// Evaluates the rational witness N/d on circles |zeta| = R > 1 approaching the
// boundary and compares its radial limit with the reference boundary values of
// theta.  Rational functions are their own pseudocontinuation, so a genuine
// witness drives the residual to zero.
inline pseudocontinuation_result pseudocontinuation_check(
    const truncated_series& numerator, const std::vector<complex>& denominator,
    const boundary_samples& reference, const tolerance_policy& tol) {
    if (denominator.empty() || std::abs(denominator.back()) < 1e-300)
        throw denominator_vanishes("pseudocontinuation_check: empty denominator");
    if (denominator.size() > 1) {
        const auto roots = detail::companion_roots(denominator);
        for (complex z : roots)
            if (std::abs(z) <= 1.0 + tol.psd_tol)
                throw denominator_vanishes(
                    "pseudocontinuation_check: denominator has a zero in the closed disk");
    }
    auto den_eval = [&](complex z) {
        complex v = 0.0, zk = 1.0;
        for (complex c : denominator) { v += c * zk; zk *= z; }
        return v;
    };
    const int m = reference.grid.size;
    pseudocontinuation_result out;
    for (int j = 0; j <= 8; ++j) {
        const double radius = (j < 8) ? 1.0 + std::pow(4.0, -j) : 1.0;
        double resid = 0.0;
        for (int i = 0; i < m; ++i) {
            const complex z = radius * reference.grid.point(i);
            const complex_matrix w = numerator.eval(z) / den_eval(z);
            resid = std::max(resid, (w - reference.values[i]).norm());
        }
        out.approach.push_back(resid);
    }
    out.residual = out.approach.back();
    return out;
}

}  // namespace schur
