#pragma once

// Unitary colligations as finite-dimensional system realizations: embedding
// contractions, characteristic functions, Taylor coefficients, products and
// factorizations, open-system simulation, and invariant-subspace analysis.

#include <utility>
#include <vector>

#include "schur/linalg.hpp"
#include "schur/sequence.hpp"

namespace schur {

// 7-tuple (H, F, G; T, F, G, S) stored as four matrices.  The block matrix
// Y = [[T, F], [G, S]] is unitary, which forces p = q in finite dimensions.
struct unitary_colligation {
    int dim_h = 0;
    int p = 0;  // dim G (output)
    int q = 0;  // dim F (input)
    complex_matrix t, f, g, s;

    complex_matrix block_matrix() const {
        complex_matrix y(dim_h + p, dim_h + q);
        y.topLeftCorner(dim_h, dim_h) = t;
        y.topRightCorner(dim_h, q) = f;
        y.bottomLeftCorner(p, dim_h) = g;
        y.bottomRightCorner(p, q) = s;
        return y;
    }
};

struct validation_report {
    double gram_residual = 0.0;    // ||Y*Y - I||
    double cogram_residual = 0.0;  // ||YY* - I||
};

inline validation_report validate(const unitary_colligation& d) {
    const complex_matrix y = d.block_matrix();
    const complex_matrix iy = complex_matrix::Identity(y.cols(), y.cols());
    const complex_matrix ix = complex_matrix::Identity(y.rows(), y.rows());
    return {(y.adjoint() * y - iy).norm(), (y * y.adjoint() - ix).norm()};
}

struct defect_data {
    complex_matrix d_t, d_t_star;          // Hermitian PSD defect operators
    complex_matrix basis_d_t;               // dim_h x defect_rank_t, orthonormal
    complex_matrix basis_d_t_star;          // dim_h x defect_rank_t_star
    int defect_rank_t = 0;
    int defect_rank_t_star = 0;
};

namespace detail {

// Defect operator sqrt(I - A) together with a deterministic orthonormal basis
// of its range; the rank decision happens on the eigenvalues of I - A, before
// the square root spreads roundoff.
inline void defect_of(const complex_matrix& gap, double rank_tol, complex_matrix& d,
                      complex_matrix& basis, int& rank) {
    auto es = hermitian_eig(gap);
    const Eigen::Index m = gap.rows();
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const double cut = rank_tol * std::max(1.0, lam.size() ? lam(m - 1) : 0.0);
    d = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    rank = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        if (lam(i) > cut) ++rank;
    // descending eigenvalue order for the basis columns
    complex_matrix b(m, rank);
    for (int k = 0; k < rank; ++k) b.col(k) = es.eigenvectors().col(m - 1 - k);
    basis = fix_column_phases(b);
}

}  // namespace detail

inline defect_data defect_operators(const complex_matrix& t, const tolerance_policy& tol) {
    const Eigen::Index m = t.rows();
    defect_data dd;
    detail::defect_of(complex_matrix::Identity(m, m) - t.adjoint() * t, tol.rank_tol,
                      dd.d_t, dd.basis_d_t, dd.defect_rank_t);
    detail::defect_of(complex_matrix::Identity(m, m) - t * t.adjoint(), tol.rank_tol,
                      dd.d_t_star, dd.basis_d_t_star, dd.defect_rank_t_star);
    return dd;
}

// Canonical embedding with external spaces carried by the defect spaces:
// F = D_{T*}|_{D_{T*}-basis}, G = basis_{D_T}* D_T, S = -basis_{D_T}* T* basis_{D_{T*}}.
inline unitary_colligation embed_contraction(const complex_matrix& t,
                                             const tolerance_policy& tol) {
    if (t.rows() != t.cols()) throw not_a_contraction("embed_contraction: T must be square");
    if (opnorm(t) > 1.0 + tol.psd_tol)
        throw not_a_contraction("embed_contraction: ||T|| exceeds 1");
    const auto dd = defect_operators(t, tol);
    unitary_colligation c;
    c.dim_h = static_cast<int>(t.rows());
    c.q = dd.defect_rank_t_star;
    c.p = dd.defect_rank_t;
    c.t = t;
    c.f = dd.d_t_star * dd.basis_d_t_star;
    c.g = dd.basis_d_t.adjoint() * dd.d_t;
    c.s = -dd.basis_d_t.adjoint() * t.adjoint() * dd.basis_d_t_star;
    return c;
}

// theta(zeta) = S + zeta G (I - zeta T)^{-1} F.
inline complex_matrix char_function(const unitary_colligation& d, complex zeta) {
    if (d.dim_h == 0) return d.s;
    const complex_matrix a =
        complex_matrix::Identity(d.dim_h, d.dim_h) - zeta * d.t;
    Eigen::FullPivLU<complex_matrix> lu(a);
    if (!lu.isInvertible())
        throw singular_resolvent("char_function: I - zeta T is singular");
    return d.s + zeta * d.g * lu.solve(d.f);
}

// c_0 = S, c_k = G T^{k-1} F.
inline schur_sequence taylor_coeffs(const unitary_colligation& d, int n) {
    std::vector<complex_matrix> cs;
    cs.reserve(n + 1);
    cs.push_back(d.s);
    complex_matrix power = d.f;  // T^{k-1} F
    for (int k = 1; k <= n; ++k) {
        cs.push_back(d.g * power);
        power = d.t * power;
    }
    return schur_sequence(d.p, d.q, std::move(cs));
}

inline unitary_colligation associate_colligation(const unitary_colligation& d) {
    unitary_colligation a;
    a.dim_h = d.dim_h;
    a.p = d.q;
    a.q = d.p;
    a.t = d.t.adjoint();
    a.f = d.g.adjoint();
    a.g = d.f.adjoint();
    a.s = d.s.adjoint();
    return a;
}

// Cascade: the input space of d1 must be the output space of d2; the
// characteristic function multiplies as theta_1 * theta_2.
inline unitary_colligation product(const unitary_colligation& d1,
                                   const unitary_colligation& d2) {
    if (d1.q != d2.p)
        throw dimension_mismatch("product: input space of the first factor must match "
                                 "the output space of the second");
    unitary_colligation c;
    c.dim_h = d1.dim_h + d2.dim_h;
    c.p = d1.p;
    c.q = d2.q;
    c.t = complex_matrix::Zero(c.dim_h, c.dim_h);
    c.t.topLeftCorner(d1.dim_h, d1.dim_h) = d1.t;
    c.t.topRightCorner(d1.dim_h, d2.dim_h) = d1.f * d2.g;
    c.t.bottomRightCorner(d2.dim_h, d2.dim_h) = d2.t;
    c.f = complex_matrix(c.dim_h, c.q);
    c.f.topRows(d1.dim_h) = d1.f * d2.s;
    c.f.bottomRows(d2.dim_h) = d2.f;
    c.g = complex_matrix(c.p, c.dim_h);
    c.g.leftCols(d1.dim_h) = d1.g;
    c.g.rightCols(d2.dim_h) = d1.s * d2.g;
    c.s = d1.s * d2.s;
    return c;
}

// Splits a colligation along a T-invariant subspace.  The off-corner block of
// Y restricted to (H1 (+) G) x (H2 (+) F) is a partial isometry of rank p;
// its rank factorization supplies the two bordered unitaries of the split.
inline std::pair<unitary_colligation, unitary_colligation> factor_colligation(
    const unitary_colligation& d, const complex_matrix& basis_h1,
    const tolerance_policy& tol) {
    if (d.p != d.q)
        throw not_square("factor_colligation: external spaces must have equal dimension");
    if (basis_h1.rows() != d.dim_h)
        throw shape_mismatch("factor_colligation: subspace basis has wrong height");
    const complex_matrix u1 = basis_h1.cols() == 0
                                  ? complex_matrix::Zero(d.dim_h, 0)
                                  : range_basis(basis_h1, tol.rank_tol);
    const complex_matrix u2 = complement_basis(u1);
    const int s1 = static_cast<int>(u1.cols());
    const int s2 = static_cast<int>(u2.cols());
    const double tscale = 1.0 + d.t.norm();
    if ((u2.adjoint() * d.t * u1).norm() > tol.residual_tol * tscale)
        throw not_invariant("factor_colligation: subspace is not T-invariant");

    const complex_matrix t11 = u1.adjoint() * d.t * u1;
    const complex_matrix x12 = u1.adjoint() * d.t * u2;
    const complex_matrix t22 = u2.adjoint() * d.t * u2;
    const complex_matrix f1 = u1.adjoint() * d.f;
    const complex_matrix f2 = u2.adjoint() * d.f;
    const complex_matrix g1 = d.g * u1;
    const complex_matrix g2 = d.g * u2;

    complex_matrix k(s1 + d.p, s2 + d.q);
    k.topLeftCorner(s1, s2) = x12;
    k.topRightCorner(s1, d.q) = f1;
    k.bottomLeftCorner(d.p, s2) = g2;
    k.bottomRightCorner(d.p, d.q) = d.s;
    Eigen::JacobiSVD<complex_matrix> svd(k, Eigen::ComputeFullU);
    const auto& sig = svd.singularValues();
    for (int i = 0; i < d.p; ++i)
        if (i >= sig.size() || std::abs(sig(i) - 1.0) > 1e-6)
            throw not_invariant("factor_colligation: off-corner block is not a rank-p "
                                "partial isometry; input is not a unitary colligation");
    const complex_matrix cl = detail::fix_column_phases(svd.matrixU().leftCols(d.p));
    const complex_matrix rr = cl.adjoint() * k;  // orthonormal rows

    unitary_colligation left;   // (H1, E, G)
    left.dim_h = s1;
    left.p = d.p;
    left.q = d.p;
    left.t = t11;
    left.f = cl.topRows(s1);
    left.g = g1;
    left.s = cl.bottomRows(d.p);

    unitary_colligation right;  // (H2, F, E)
    right.dim_h = s2;
    right.p = d.p;
    right.q = d.q;
    right.t = t22;
    right.f = f2;
    right.g = rr.leftCols(s2);
    right.s = rr.rightCols(d.q);
    return {left, right};
}

struct system_trace {
    std::vector<complex_vector> states;   // h(0..N+1)
    std::vector<complex_vector> inputs;   // f(0..N)
    std::vector<complex_vector> outputs;  // g(0..N)
    std::vector<double> energy_residuals;
};

// Open-system recurrence h(n+1) = T h(n) + F f(n), g(n) = G h(n) + S f(n);
// energy residuals are reported, never corrected.
inline system_trace simulate(const unitary_colligation& d, const complex_vector& h0,
                             const std::vector<complex_vector>& inputs) {
    if (h0.size() != d.dim_h)
        throw dimension_mismatch("simulate: initial state has wrong dimension");
    system_trace tr;
    tr.states.push_back(h0);
    for (const auto& fin : inputs) {
        if (fin.size() != d.q)
            throw dimension_mismatch("simulate: input vector has wrong dimension");
        const complex_vector& h = tr.states.back();
        complex_vector hn = d.t * h + d.f * fin;
        complex_vector gn = d.g * h + d.s * fin;
        const double before = h.squaredNorm() + fin.squaredNorm();
        const double after = hn.squaredNorm() + gn.squaredNorm();
        tr.energy_residuals.push_back(std::abs(after - before));
        tr.states.push_back(std::move(hn));
        tr.inputs.push_back(fin);
        tr.outputs.push_back(std::move(gn));
    }
    return tr;
}

struct subspace_report {
    complex_matrix basis_hf, basis_hg;          // controllable / observable spans
    complex_matrix basis_hf_perp, basis_hg_perp;
    complex_matrix basis_unitary_part;
    bool is_simple = false;
    bool is_cnu = false;
    int shift_multiplicity = 0;    // dim L0
    int coshift_multiplicity = 0;  // dim L0~
    complex_matrix basis_l0, basis_l0_tilde;
    double kernel_crosscheck_residual = 0.0;  // H_G-perp vs kernel intersection
};

namespace detail {

// Smallest T-invariant subspace containing range(seed).
inline complex_matrix krylov_span(const complex_matrix& t, const complex_matrix& seed,
                                  double rank_tol) {
    const Eigen::Index m = t.rows();
    if (seed.cols() == 0) return complex_matrix::Zero(m, 0);
    complex_matrix basis = range_basis(seed, rank_tol);
    for (Eigen::Index it = 0; it < m; ++it) {
        complex_matrix grown(m, basis.cols() * 2);
        grown.leftCols(basis.cols()) = basis;
        grown.rightCols(basis.cols()) = t * basis;
        complex_matrix next = range_basis(grown, rank_tol);
        if (next.cols() == basis.cols()) break;
        basis = std::move(next);
    }
    return basis;
}

// Wandering part W-span minus T * W-span inside the span of w.
inline complex_matrix wandering_part(const complex_matrix& t, const complex_matrix& w,
                                     double rank_tol) {
    if (w.cols() == 0) return w;
    const complex_matrix tw = t * w;
    const complex_matrix y = nullspace_basis(tw.adjoint() * w, rank_tol);
    return w * y;
}

}  // namespace detail

inline subspace_report subspace_analysis(const unitary_colligation& d,
                                         const tolerance_policy& tol) {
    const int m = d.dim_h;
    subspace_report rep;
    rep.basis_hf = detail::krylov_span(d.t, d.f, tol.rank_tol);
    rep.basis_hg = detail::krylov_span(d.t.adjoint(), d.g.adjoint(), tol.rank_tol);
    rep.basis_hf_perp = complement_basis(rep.basis_hf);
    rep.basis_hg_perp = complement_basis(rep.basis_hg);
    rep.basis_unitary_part =
        intersection_basis(rep.basis_hf_perp, rep.basis_hg_perp, tol.rank_tol);
    rep.is_simple = rep.basis_unitary_part.cols() == 0;
    rep.is_cnu = rep.is_simple;

    // Direct cross-check: H_G-perp equals the intersection of ker(D_T T^k).
    const auto dd = defect_operators(d.t, tol);
    complex_matrix stack(m * std::max(m, 1), m);
    stack.setZero();
    complex_matrix power = complex_matrix::Identity(m, m);
    for (int k = 0; k < m; ++k) {
        stack.middleRows(k * m, m) = dd.d_t * power;
        power = d.t * power;
    }
    const complex_matrix alt = (m == 0) ? complex_matrix::Zero(0, 0)
                                        : nullspace_basis(stack, tol.rank_tol);
    const complex_matrix p1 = rep.basis_hg_perp * rep.basis_hg_perp.adjoint();
    const complex_matrix p2 = alt * alt.adjoint();
    rep.kernel_crosscheck_residual = (p1 - p2).norm();

    rep.basis_l0 = detail::wandering_part(d.t, rep.basis_hg_perp, tol.rank_tol);
    rep.basis_l0_tilde = detail::wandering_part(d.t.adjoint(), rep.basis_hf_perp, tol.rank_tol);
    rep.shift_multiplicity = static_cast<int>(rep.basis_l0.cols());
    rep.coshift_multiplicity = static_cast<int>(rep.basis_l0_tilde.cols());
    return rep;
}

// Realized defect functions theta_r(zeta) = P_{L0}(I - zeta T)^{-1} F and
// theta_l(zeta) = G (I - zeta T)^{-1}|_{L0~}; zero-dimensional whenever the
// multiplicities vanish (always, at finite dimension).
inline std::pair<complex_matrix, complex_matrix> defect_functions_realized(
    const unitary_colligation& d, complex zeta, const tolerance_policy& tol) {
    const auto rep = subspace_analysis(d, tol);
    if (!rep.is_simple)
        throw not_simple("defect_functions_realized: colligation is not simple");
    const complex_matrix a =
        complex_matrix::Identity(d.dim_h, d.dim_h) - zeta * d.t;
    Eigen::FullPivLU<complex_matrix> lu(a);
    if (!lu.isInvertible())
        throw singular_resolvent("defect_functions_realized: I - zeta T is singular");
    const complex_matrix right = rep.basis_l0.adjoint() * lu.solve(d.f);
    const complex_matrix left = d.g * lu.solve(rep.basis_l0_tilde);
    return {right, left};
}

}  // namespace schur
