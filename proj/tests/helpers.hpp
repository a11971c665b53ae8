#pragma once

// Shared fixtures: fixed-seed generators for random matrices, contractions,
// nondegenerate interpolation data and unitary colligations.

#include <random>

#include "schur/colligation.hpp"
#include "schur/recursion.hpp"
#include "schur/sequence.hpp"

namespace testgen {

using schur::complex;
using schur::complex_matrix;

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline complex random_unit(std::mt19937_64& g) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(1.0, ang(g));
}

inline complex random_in_disk(std::mt19937_64& g, double rmin = 0.0, double rmax = 0.95) {
    std::uniform_real_distribution<double> rad(rmin, rmax);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(rad(g), ang(g));
}

inline complex_matrix random_matrix(std::mt19937_64& g, int rows, int cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    complex_matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = complex(n(g), n(g));
    return m;
}

// Random matrix scaled to operator norm at most rho.
inline complex_matrix random_contraction(std::mt19937_64& g, int rows, int cols,
                                         double rho = 0.8) {
    complex_matrix m = random_matrix(g, rows, cols);
    const double nrm = schur::opnorm(m);
    if (nrm > 0.0) m *= rho / nrm;
    return m;
}

// Nondegenerate data synthesized from strictly contractive Schur parameters.
inline schur::schur_sequence random_nondegenerate(std::mt19937_64& g, int p, int q, int n,
                                                  const schur::tolerance_policy& tol,
                                                  double rho = 0.6) {
    schur::schur_parameters pars;
    pars.p = p;
    pars.q = q;
    for (int k = 0; k <= n; ++k) pars.params.push_back(random_contraction(g, p, q, rho));
    return schur::taylor_from_parameters(pars, tol);
}

// Haar-like random unitary via QR of a Gaussian matrix.
inline complex_matrix random_unitary(std::mt19937_64& g, int n) {
    const complex_matrix a = random_matrix(g, n, n);
    Eigen::HouseholderQR<complex_matrix> qr(a);
    complex_matrix q = qr.householderQ();
    const complex_matrix r = q.adjoint() * a;
    for (int i = 0; i < n; ++i) {
        const complex d = r(i, i);
        if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

// Random unitary colligation with square external spaces of dimension p.
inline schur::unitary_colligation random_colligation(std::mt19937_64& g, int dim_h, int p) {
    const complex_matrix y = random_unitary(g, dim_h + p);
    schur::unitary_colligation d;
    d.dim_h = dim_h;
    d.p = p;
    d.q = p;
    d.t = y.topLeftCorner(dim_h, dim_h);
    d.f = y.topRightCorner(dim_h, p);
    d.g = y.bottomLeftCorner(p, dim_h);
    d.s = y.bottomRightCorner(p, p);
    return d;
}

// Random colligation redrawn until the fundamental operator's spectral radius
// stays below rho_max, so realized Taylor/Fourier tails decay fast.
inline schur::unitary_colligation random_colligation_bounded(std::mt19937_64& g, int dim_h,
                                                             int p, double rho_max = 0.8) {
    for (;;) {
        const auto d = random_colligation(g, dim_h, p);
        Eigen::ComplexEigenSolver<complex_matrix> es(d.t);
        double radius = 0.0;
        for (int i = 0; i < dim_h; ++i)
            radius = std::max(radius, std::abs(es.eigenvalues()(i)));
        if (radius <= rho_max) return d;
    }
}

inline complex_matrix scalar1(complex v) { return complex_matrix::Constant(1, 1, v); }

}  // namespace testgen
