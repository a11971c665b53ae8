#pragma once

// Unit-circle sampling, defect functions of a boundary function, largest
// minorants (outer factors) and *-minorants, analyticity and inner checks.
//
// Outer factorization routes:
//   - scalar densities that are trigonometric polynomials of modest degree are
//     factored exactly from the roots of the associated algebraic polynomial
//     (boundary zeros of even multiplicity are halved onto the circle);
//   - other scalar densities use the exponential of the analytic projection of
//     (1/2) log N^2, with log-divergent grid points flagged and floored;
//   - matrix densities use the Wilson-Newton iteration on the trigonometric
//     interpolant, evaluated on a half-step staggered grid (boundary zeros of
//     the sampled densities sit on standard grid nodes).

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "schur/colligation.hpp"
#include "schur/fft.hpp"
#include "schur/linalg.hpp"
#include "schur/sequence.hpp"
#include "schur/series.hpp"

namespace schur {

struct boundary_grid {
    int size = 1024;

    static boundary_grid of_size(int m) {
        if (!detail::is_power_of_two(m) || m < 4)
            throw malformed_input("boundary_grid: size must be a power of two >= 4");
        return {m};
    }

    complex point(int m) const {
        const double pi = 3.14159265358979323846;
        return std::polar(1.0, 2.0 * pi * m / size);
    }
};

struct boundary_samples {
    int p = 0;
    int q = 0;
    boundary_grid grid;
    std::vector<complex_matrix> values;

    double max_norm() const {
        double r = 0.0;
        for (const auto& v : values) r = std::max(r, v.norm());
        return r;
    }
};

inline boundary_samples sample(const std::function<complex_matrix(complex)>& f,
                               const boundary_grid& grid) {
    boundary_samples s;
    s.grid = grid;
    s.values.reserve(grid.size);
    for (int m = 0; m < grid.size; ++m) s.values.push_back(f(grid.point(m)));
    s.p = static_cast<int>(s.values[0].rows());
    s.q = static_cast<int>(s.values[0].cols());
    return s;
}

inline boundary_samples sample(const schur_sequence& seq, const boundary_grid& grid) {
    return sample([&](complex t) { return evaluate(seq, t); }, grid);
}

inline boundary_samples sample(const truncated_series& ts, const boundary_grid& grid) {
    return sample([&](complex t) { return ts.eval(t); }, grid);
}

inline boundary_samples sample(const unitary_colligation& d, const boundary_grid& grid) {
    return sample([&](complex t) { return char_function(d, t); }, grid);
}

namespace detail {

inline int signed_index(int k, int m) { return k <= m / 2 ? k : k - m; }

}  // namespace detail

struct fourier_table {
    int grid_size = 0;
    std::vector<complex_matrix> coeff;  // index 0..M-1; k > M/2 means k - M

    const complex_matrix& at(int k) const {  // signed index
        const int idx = k >= 0 ? k : k + grid_size;
        return coeff[static_cast<size_t>(idx)];
    }
};

inline fourier_table fourier_coefficients(const boundary_samples& s) {
    return {s.grid.size, detail::matrix_fourier(s.values)};
}

struct analyticity_result {
    double negative_tail = 0.0;  // max over k < 0 of ||coefficient_k||
    fourier_table table;
};

inline analyticity_result analyticity_report(const boundary_samples& s,
                                             const tolerance_policy&) {
    analyticity_result r;
    r.table = fourier_coefficients(s);
    for (int k = 1; k < s.grid.size / 2; ++k)
        r.negative_tail = std::max(r.negative_tail, r.table.at(-k).norm());
    return r;
}

enum class inner_side { inner, star_inner, two_sided };

struct inner_report {
    double defect_residual = 0.0;
    double tail = 0.0;
    double combined = 0.0;
};

inline inner_report inner_check(const boundary_samples& s, inner_side side,
                                const tolerance_policy& tol) {
    inner_report rep;
    for (const auto& v : s.values) {
        if (side == inner_side::inner || side == inner_side::two_sided) {
            const complex_matrix g =
                complex_matrix::Identity(s.q, s.q) - v.adjoint() * v;
            rep.defect_residual = std::max(rep.defect_residual, g.norm());
        }
        if (side == inner_side::star_inner || side == inner_side::two_sided) {
            const complex_matrix g =
                complex_matrix::Identity(s.p, s.p) - v * v.adjoint();
            rep.defect_residual = std::max(rep.defect_residual, g.norm());
        }
    }
    rep.tail = analyticity_report(s, tol).negative_tail;
    rep.combined = std::max(rep.defect_residual, rep.tail);
    return rep;
}

// Pointwise Hermitian PSD square roots of I - v*v and I - vv*.
inline std::pair<boundary_samples, boundary_samples> defect_pointwise(
    const boundary_samples& s, const tolerance_policy& tol) {
    boundary_samples pi, sigma;
    pi.grid = sigma.grid = s.grid;
    pi.p = pi.q = s.q;
    sigma.p = sigma.q = s.p;
    for (const auto& v : s.values) {
        if (opnorm(v) > 1.0 + tol.psd_tol)
            throw not_contractive_on_circle("defect_pointwise: sample exceeds unit norm");
        pi.values.push_back(
            hermitian_sqrt(complex_matrix::Identity(s.q, s.q) - v.adjoint() * v, tol));
        sigma.values.push_back(
            hermitian_sqrt(complex_matrix::Identity(s.p, s.p) - v * v.adjoint(), tol));
    }
    return {std::move(pi), std::move(sigma)};
}

struct outer_factor_t {
    int rank = 0;                       // rows of the factor
    truncated_series coeffs;            // rank x q Taylor coefficients
    boundary_samples samples;           // factor values on the grid
    double factorization_residual = 0;  // max_m || phi^* phi - N^2 || off excluded points
    bool exact = false;                 // residual within residual_tol
    int excluded_points = 0;            // grid points with deviating pointwise rank
    int flagged_log_points = 0;         // scalar route: N^2 below the log floor
};

namespace detail {

inline std::vector<complex> companion_roots(const std::vector<complex>& poly) {
    // poly[k] multiplies z^k; leading coefficient nonzero.
    const int deg = static_cast<int>(poly.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -poly[i] / poly[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    if (es.info() != Eigen::Success) throw factorization_diverged("root finding failed");
    std::vector<complex> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](complex a, complex b) {
        if (std::arg(a) != std::arg(b)) return std::arg(a) < std::arg(b);
        return std::abs(a) < std::abs(b);
    });
    return roots;
}

// Zero set of an outer polynomial factor of the scalar density with Laurent
// coefficients a_{-d}..a_d: the roots of z^d N^2(z) outside the circle plus
// half of each boundary cluster, snapped onto the circle.
inline std::vector<complex> outer_zero_set(const std::vector<complex>& laurent, int d) {
    std::vector<complex> poly(laurent.begin(), laurent.end());
    auto roots = companion_roots(poly);
    const double band = 1e-5;
    std::vector<complex> outside, boundary, inside;
    for (complex z : roots) {
        const double az = std::abs(z);
        if (az > 1.0 + band) outside.push_back(z);
        else if (az < 1.0 - band) inside.push_back(z);
        else boundary.push_back(z);
    }
    // Boundary zeros of a nonnegative density have even multiplicity; keep
    // half of each argument cluster, projected onto the circle.
    std::sort(boundary.begin(), boundary.end(),
              [](complex a, complex b) { return std::arg(a) < std::arg(b); });
    std::vector<complex> halved;
    size_t i = 0;
    while (i < boundary.size()) {
        size_t j = i + 1;
        while (j < boundary.size() &&
               std::abs(std::arg(boundary[j]) - std::arg(boundary[j - 1])) < 1e-4)
            ++j;
        const size_t take = (j - i + 1) / 2;
        double arg_sum = 0.0;
        for (size_t k = i; k < j; ++k) arg_sum += std::arg(boundary[k]);
        const complex snapped = std::polar(1.0, arg_sum / static_cast<double>(j - i));
        for (size_t k = 0; k < take; ++k) halved.push_back(snapped);
        i = j;
    }
    std::vector<complex> zeros = outside;
    zeros.insert(zeros.end(), halved.begin(), halved.end());
    // Safety nets for marginally classified roots.
    std::sort(inside.begin(), inside.end(),
              [](complex a, complex b) { return std::abs(a) > std::abs(b); });
    size_t next_inside = 0;
    while (static_cast<int>(zeros.size()) < d && next_inside < inside.size())
        zeros.push_back(1.0 / std::conj(inside[next_inside++]));
    while (static_cast<int>(zeros.size()) > d) {
        auto worst = std::max_element(zeros.begin(), zeros.end(), [](complex a, complex b) {
            return std::abs(std::abs(a) - 1.0) > std::abs(std::abs(b) - 1.0);
        });
        zeros.erase(worst);
    }
    return zeros;
}

// QL-type gauge: A = u L with L lower triangular, nonnegative real diagonal;
// returns u.
inline complex_matrix ql_unitary(const complex_matrix& a) {
    const Eigen::Index n = a.rows();
    complex_matrix rev = complex_matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) rev(i, n - 1 - i) = 1.0;
    const complex_matrix flipped = rev * a * rev;
    Eigen::HouseholderQR<complex_matrix> qr(flipped);
    complex_matrix qm = qr.householderQ();
    complex_matrix rm = qm.adjoint() * flipped;
    for (Eigen::Index i = 0; i < n; ++i) {
        const complex rii = rm(i, i);
        const complex ph = std::abs(rii) > 1e-300 ? rii / std::abs(rii) : complex(1.0);
        qm.col(i) *= ph;
    }
    return rev * qm * rev;
}

struct scalar_factor_result {
    std::vector<complex> coeffs;  // Taylor coefficients, length M/2
    int flagged = 0;
};

// Exponential of the analytic projection of (1/2) log n2 on the grid.
inline scalar_factor_result scalar_cepstrum_factor(const std::vector<double>& n2,
                                                   double log_floor) {
    const int m = static_cast<int>(n2.size());
    scalar_factor_result out;
    std::vector<complex> u(m);
    for (int i = 0; i < m; ++i) {
        double v = n2[i];
        if (v < log_floor) { v = log_floor; ++out.flagged; }
        u[i] = 0.5 * std::log(v);
    }
    fft_inplace(u, false);
    for (auto& x : u) x /= static_cast<double>(m);
    std::vector<complex> proj(m, complex(0.0));
    proj[0] = u[0];
    for (int k = 1; k < m / 2; ++k) proj[k] = 2.0 * u[k];
    proj[m / 2] = u[m / 2];
    fft_inplace(proj, true);
    for (auto& x : proj) x *= static_cast<double>(m);
    std::vector<complex> phi(m);
    for (int i = 0; i < m; ++i) phi[i] = std::exp(proj[i]);
    fft_inplace(phi, false);
    out.coeffs.assign(m / 2, complex(0.0));
    for (int k = 0; k < m / 2; ++k) out.coeffs[k] = phi[k] / static_cast<double>(m);
    return out;
}

}  // namespace detail

// Largest outer minorant phi of the PSD density N^2: phi has r rows (the a.e.
// rank of N^2) and phi^* phi equals N^2 up to the reported residual.  The
// left unitary gauge is fixed by making the first nonzero coefficient of the
// compressed square factor lower triangular with nonnegative real diagonal.
inline outer_factor_t outer_factor(const boundary_samples& nsq, const tolerance_policy& tol) {
    if (nsq.p != nsq.q) throw shape_mismatch("outer_factor: density must be square");
    const int m = nsq.grid.size;
    const int q = nsq.q;

    complex_matrix mean = complex_matrix::Zero(q, q);
    double max_scale = 0.0;
    for (const auto& v : nsq.values) {
        if (smallest_eigenvalue(hermitian_part(v)) < -tol.psd_tol)
            throw not_psd("outer_factor: density sample is not PSD within tolerance");
        mean += hermitian_part(v);
        max_scale = std::max(max_scale, v.norm());
    }
    mean /= static_cast<double>(m);

    // a.e. rank = the most frequent pointwise rank, measured against the
    // global scale; it must be insensitive to scaling the cutoff by 10.
    auto rank_mode = [&](double cut_scale) {
        std::vector<int> counts(q + 1, 0);
        const double cut = cut_scale * std::max(1.0, max_scale);
        for (const auto& v : nsq.values) {
            int local = 0;
            auto lam = hermitian_eig(hermitian_part(v)).eigenvalues();
            for (Eigen::Index j = 0; j < lam.size(); ++j)
                if (lam(j) > cut) ++local;
            ++counts[local];
        }
        int best = 0;
        for (int k = 0; k <= q; ++k)
            if (counts[k] > counts[best]) best = k;
        return std::pair<int, int>(best, counts[best]);
    };
    const auto [r, mode_count] = rank_mode(tol.rank_tol);
    if (r != rank_mode(10.0 * tol.rank_tol).first || 2 * mode_count < m)
        throw rank_unstable("outer_factor: a.e. rank is not stable under tolerance scaling");

    outer_factor_t out;
    out.rank = r;
    out.samples.grid = nsq.grid;
    out.samples.p = r;
    out.samples.q = q;
    if (r == 0) {
        out.coeffs = truncated_series(0, q, 0);
        out.samples.values.assign(m, complex_matrix::Zero(0, q));
        out.factorization_residual = max_scale;
        out.exact = out.factorization_residual <= tol.residual_tol * (1.0 + max_scale);
        return out;
    }

    // Deterministic basis of the a.e. range; full-rank densities skip the
    // compression and the gauge lands on the actual leading coefficient.
    complex_matrix basis;
    if (r == q) {
        basis = complex_matrix::Identity(q, q);
    } else {
        auto es = hermitian_eig(mean);
        basis.resize(q, r);
        for (int k = 0; k < r; ++k) basis.col(k) = es.eigenvectors().col(q - 1 - k);
        basis = detail::fix_column_phases(basis);
    }

    const double rank_cut = tol.rank_tol * std::max(1.0, max_scale);
    std::vector<complex_matrix> comp(m);
    for (int i = 0; i < m; ++i) {
        comp[i] = hermitian_part(basis.adjoint() * nsq.values[i] * basis);
        int local = 0;
        auto lam = hermitian_eig(hermitian_part(nsq.values[i])).eigenvalues();
        for (Eigen::Index j = 0; j < lam.size(); ++j)
            if (lam(j) > rank_cut) ++local;
        if (local != r) ++out.excluded_points;
    }

    // Laurent coefficients of the compressed density; effective degree.
    auto laurent = detail::matrix_fourier(comp);
    double cmax = 0.0;
    for (const auto& c : laurent) cmax = std::max(cmax, c.norm());
    int degree = 0;
    for (int k = 1; k < m / 2; ++k) {
        if (laurent[k].norm() > 1e-12 * cmax || laurent[m - k].norm() > 1e-12 * cmax)
            degree = k;
    }

    std::vector<complex_matrix> phi_c;  // compressed factor coefficients (r x r)
    constexpr int root_degree_cap = 200;
    if (r == 1 && degree <= root_degree_cap && cmax > 0.0) {
        // Exact polynomial route.
        if (degree == 0) {
            phi_c.assign(1, complex_matrix::Constant(1, 1, std::sqrt(std::max(
                                 0.0, laurent[0](0, 0).real()))));
        } else {
            std::vector<complex> lc(2 * degree + 1);
            for (int k = -degree; k <= degree; ++k)
                lc[k + degree] = laurent[(k + m) % m](0, 0);
            const auto zeros = detail::outer_zero_set(lc, degree);
            std::vector<complex> pc{1.0};
            for (complex z : zeros) {
                std::vector<complex> next(pc.size() + 1, complex(0.0));
                for (size_t i = 0; i < pc.size(); ++i) {
                    next[i] += pc[i];
                    next[i + 1] -= pc[i] / z;
                }
                pc = std::move(next);
            }
            // Scale at the best-conditioned grid point.
            int best = 0;
            double best_val = -1.0;
            for (int i = 0; i < m; ++i)
                if (comp[i](0, 0).real() > best_val) { best_val = comp[i](0, 0).real(); best = i; }
            complex pval = 0.0, tk = 1.0;
            for (size_t k = 0; k < pc.size(); ++k) { pval += pc[k] * tk; tk *= nsq.grid.point(best); }
            const double gamma = std::sqrt(std::max(0.0, best_val) / std::norm(pval));
            phi_c.resize(pc.size());
            for (size_t k = 0; k < pc.size(); ++k)
                phi_c[k] = complex_matrix::Constant(1, 1, gamma * pc[k]);
        }
    } else if (r == 1) {
        std::vector<double> n2(m);
        for (int i = 0; i < m; ++i) n2[i] = std::max(0.0, comp[i](0, 0).real());
        const auto res = detail::scalar_cepstrum_factor(n2, rank_cut);
        out.flagged_log_points = res.flagged;
        phi_c.resize(res.coeffs.size());
        for (size_t k = 0; k < res.coeffs.size(); ++k)
            phi_c[k] = complex_matrix::Constant(1, 1, res.coeffs[k]);
    } else {
        // Wilson-Newton iteration on the transposed compressed density,
        // evaluated on the half-step staggered grid.
        const double pi = 3.14159265358979323846;
        std::vector<complex_matrix> twist(m);
        for (int k = 0; k < m; ++k) {
            const int sk = detail::signed_index(k, m);
            twist[k] = std::polar(1.0, pi * sk / m) * laurent[k].transpose();
        }
        auto sdens = detail::matrix_unfourier(twist);  // S(tau_m) = comp(tau_m)^T
        complex_matrix s0 = complex_matrix::Zero(r, r);
        for (const auto& v : sdens) s0 += hermitian_part(v);
        s0 /= static_cast<double>(m);
        Eigen::LLT<complex_matrix> llt(s0 + 1e-14 * std::max(1.0, max_scale) *
                                                complex_matrix::Identity(r, r));
        if (llt.info() != Eigen::Success)
            throw factorization_diverged("outer_factor: density mean is not positive definite");
        std::vector<complex_matrix> psi(m, complex_matrix(llt.matrixL()));

        const double target = 1e-13 * (1.0 + max_scale);
        double res = 0.0;
        bool converged = false;
        for (int iter = 0; iter < 500; ++iter) {
            std::vector<complex_matrix> gvals(m);
            res = 0.0;
            for (int i = 0; i < m; ++i) {
                Eigen::PartialPivLU<complex_matrix> lu(psi[i]);
                const complex_matrix b = lu.solve(hermitian_part(sdens[i]));
                gvals[i] = lu.solve(b.adjoint()).adjoint() +
                           complex_matrix::Identity(r, r);
                res = std::max(res, (psi[i] * psi[i].adjoint() - hermitian_part(sdens[i])).norm());
            }
            if (res < target) { converged = true; break; }
            auto gc = detail::matrix_fourier(gvals);
            gc[0] *= 0.5;
            for (int k = m / 2 + 1; k < m; ++k) gc[k].setZero();
            auto plus = detail::matrix_unfourier(gc);
            for (int i = 0; i < m; ++i) psi[i] = psi[i] * plus[i];
        }
        if (!converged && res > 1e-9 * (1.0 + max_scale))
            throw factorization_diverged("outer_factor: Wilson iteration did not converge");

        auto psic = detail::matrix_fourier(psi);
        phi_c.assign(m / 2, complex_matrix::Zero(r, r));
        for (int k = 0; k < m / 2; ++k) {
            const complex untwist = std::polar(1.0, -pi * k / m);
            phi_c[k] = (untwist * psic[k]).transpose();
        }
    }

    // Gauge: first nonzero coefficient becomes lower triangular with
    // nonnegative real diagonal.
    double coeff_max = 0.0;
    for (const auto& c : phi_c) coeff_max = std::max(coeff_max, c.norm());
    int first = -1;
    for (size_t k = 0; k < phi_c.size(); ++k)
        if (phi_c[k].norm() > 1e-10 * coeff_max) { first = static_cast<int>(k); break; }
    if (first >= 0) {
        const complex_matrix u = detail::ql_unitary(phi_c[first]);
        for (auto& c : phi_c) c = u.adjoint() * c;
    }

    // Expand out of the compression and assemble samples; coefficients are
    // padded to a uniform order of M/2 - 1 regardless of the route taken.
    out.coeffs = truncated_series(r, q, m / 2 - 1);
    for (size_t k = 0; k < phi_c.size() && k < static_cast<size_t>(m / 2); ++k)
        out.coeffs.c[k] = phi_c[k] * basis.adjoint();
    std::vector<complex_matrix> padded(m, complex_matrix::Zero(r, q));
    for (size_t k = 0; k < phi_c.size() && k < static_cast<size_t>(m); ++k)
        padded[k] = out.coeffs.c[k];
    out.samples.values = detail::matrix_unfourier(padded);

    double resid = 0.0;
    int counted = 0;
    for (int i = 0; i < m; ++i) {
        int local = 0;
        auto lam = hermitian_eig(hermitian_part(nsq.values[i])).eigenvalues();
        for (Eigen::Index j = 0; j < lam.size(); ++j)
            if (lam(j) > rank_cut) ++local;
        if (local != r) continue;
        ++counted;
        resid = std::max(resid, (out.samples.values[i].adjoint() * out.samples.values[i] -
                                 hermitian_part(nsq.values[i]))
                                    .norm());
    }
    out.factorization_residual = counted > 0 ? resid : max_scale;
    out.exact = out.excluded_points == 0 &&
                out.factorization_residual <= tol.residual_tol * (1.0 + max_scale);
    return out;
}

// Largest *-minorant psi with psi psi^* below N^2: the associate data is
// factored and the result re-associated.
inline outer_factor_t star_outer_factor(const boundary_samples& nsq,
                                        const tolerance_policy& tol) {
    const int m = nsq.grid.size;
    boundary_samples assoc;
    assoc.grid = nsq.grid;
    assoc.p = nsq.p;
    assoc.q = nsq.q;
    assoc.values.resize(m);
    for (int i = 0; i < m; ++i)
        assoc.values[i] = nsq.values[(m - i) % m].transpose();
    outer_factor_t inner = outer_factor(assoc, tol);

    outer_factor_t out;
    out.rank = inner.rank;
    out.factorization_residual = inner.factorization_residual;
    out.exact = inner.exact;
    out.excluded_points = inner.excluded_points;
    out.flagged_log_points = inner.flagged_log_points;
    out.coeffs = inner.coeffs.adjoint();  // psi_k = (phi'_k)^*
    out.samples.grid = nsq.grid;
    out.samples.p = nsq.p;
    out.samples.q = inner.rank;
    out.samples.values.resize(m);
    for (int i = 0; i < m; ++i)
        out.samples.values[i] = inner.samples.values[(m - i) % m].adjoint();
    return out;
}

enum class defect_side { right, left };

// Right: largest minorant of (I - theta^* theta)^{1/2}; left: largest
// *-minorant of (I - theta theta^*)^{1/2}.
inline outer_factor_t defect_function(const boundary_samples& theta, defect_side side,
                                      const tolerance_policy& tol) {
    const int m = theta.grid.size;
    boundary_samples nsq;
    nsq.grid = theta.grid;
    nsq.values.resize(m);
    if (side == defect_side::right) {
        nsq.p = nsq.q = theta.q;
        for (int i = 0; i < m; ++i)
            nsq.values[i] = complex_matrix::Identity(theta.q, theta.q) -
                            theta.values[i].adjoint() * theta.values[i];
        return outer_factor(nsq, tol);
    }
    nsq.p = nsq.q = theta.p;
    for (int i = 0; i < m; ++i)
        nsq.values[i] = complex_matrix::Identity(theta.p, theta.p) -
                        theta.values[i] * theta.values[i].adjoint();
    return star_outer_factor(nsq, tol);
}

// Applies defect_function along the word (letters 'r' and 'l'), feeding each
// factor's samples into the next step; returns the whole chain.  A collapsed
// channel (zero-dimensional factor) stays empty for the rest of the word.
inline std::vector<outer_factor_t> iterated_defect(const boundary_samples& theta,
                                                   const std::string& word,
                                                   const tolerance_policy& tol) {
    std::vector<outer_factor_t> chain;
    const boundary_samples* cur = &theta;
    for (char ch : word) {
        if (ch != 'r' && ch != 'l')
            throw malformed_input("iterated_defect: word must be over {r, l}");
        if (cur->p == 0 || cur->q == 0) {
            outer_factor_t empty;
            empty.coeffs = truncated_series(0, 0, 0);
            empty.samples.grid = cur->grid;
            empty.samples.values.assign(cur->grid.size, complex_matrix::Zero(0, 0));
            empty.exact = true;
            chain.push_back(std::move(empty));
        } else {
            chain.push_back(defect_function(
                *cur, ch == 'r' ? defect_side::right : defect_side::left, tol));
        }
        cur = &chain.back().samples;
    }
    return chain;
}

}  // namespace schur
