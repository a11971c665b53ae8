#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "schur/boundary.hpp"

using namespace schur;
using testgen::scalar1;

namespace {

const tolerance_policy tol;
const boundary_grid grid256 = boundary_grid::of_size(256);

boundary_samples constant_samples(complex v, const boundary_grid& g) {
    return sample([&](complex) { return scalar1(v); }, g);
}

boundary_samples scalar_poly_samples(std::initializer_list<complex> coeffs,
                                     const boundary_grid& g) {
    truncated_series ts(1, 1, static_cast<int>(coeffs.size()) - 1);
    int k = 0;
    for (complex c : coeffs) ts.c[k++] = scalar1(c);
    return sample(ts, g);
}

}  // namespace

TEST_CASE("sampling sources agree") {
    const auto ids = scalar_poly_samples({0.0, 1.0}, grid256);
    for (int m = 0; m < grid256.size; ++m)
        CHECK(std::abs(ids.values[m](0, 0) - grid256.point(m)) < 1e-14);

    const auto consts = constant_samples(0.5, grid256);
    CHECK(consts.max_norm() == 0.5);

    const auto d = embed_contraction(testgen::scalar1(0.5), tol);
    const auto from_collig = sample(d, grid256);
    const auto series = to_series(taylor_coeffs(d, 40));
    const auto from_series = sample(series, grid256);
    double diff = 0.0;
    for (int m = 0; m < grid256.size; ++m)
        diff = std::max(diff,
                        (from_collig.values[m] - from_series.values[m]).norm());
    CHECK(diff < std::pow(0.5, 39));  // truncation error of the geometric tail
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(boundary_grid::of_size(100), malformed_input);
    CHECK_THROWS_AS(boundary_grid::of_size(2), malformed_input);
}

TEST_CASE("pointwise defects") {
    const auto inner = scalar_poly_samples({0.0, 1.0}, grid256);
    const auto [pi1, sg1] = defect_pointwise(inner, tol);
    // the square root spreads the 1e-16 roundoff of |t|^2 to 1e-8
    CHECK(pi1.max_norm() < 1e-7);
    CHECK(sg1.max_norm() < 1e-7);

    const auto half = constant_samples(0.5, grid256);
    const auto [pi2, sg2] = defect_pointwise(half, tol);
    for (const auto& v : pi2.values)
        CHECK(std::abs(v(0, 0) - std::sqrt(3.0) / 2.0) < 1e-13);
    for (const auto& v : sg2.values)
        CHECK(std::abs(v(0, 0) - std::sqrt(3.0) / 2.0) < 1e-13);

    const auto zero = constant_samples(0.0, grid256);
    const auto [pi3, sg3] = defect_pointwise(zero, tol);
    for (const auto& v : pi3.values) CHECK(std::abs(v(0, 0) - complex(1.0)) < 1e-14);

    const auto big = constant_samples(1.5, grid256);
    CHECK_THROWS_AS(defect_pointwise(big, tol), not_contractive_on_circle);
}

TEST_CASE("analyticity report on single harmonics") {
    const auto fwd = scalar_poly_samples({0.0, 1.0}, grid256);
    CHECK(analyticity_report(fwd, tol).negative_tail < 1e-13);

    const auto bwd = sample([](complex t) { return scalar1(std::conj(t)); }, grid256);
    const auto rep = analyticity_report(bwd, tol);
    CHECK(std::abs(rep.negative_tail - 1.0) < 1e-12);
    CHECK(std::abs(rep.table.at(-1)(0, 0) - complex(1.0)) < 1e-12);

    const double amp = std::sqrt(3.0) / 2.0;
    const auto one = scalar_poly_samples({0.0, amp}, grid256);
    const auto rep2 = analyticity_report(one, tol);
    CHECK(rep2.negative_tail < 1e-13);
    CHECK(std::abs(rep2.table.at(1)(0, 0) - complex(amp)) < 1e-13);
}

TEST_CASE("inner checks") {
    const auto ids = scalar_poly_samples({0.0, 1.0}, grid256);
    CHECK(inner_check(ids, inner_side::two_sided, tol).combined < 1e-12);

    const auto half = constant_samples(0.5, grid256);
    CHECK(std::abs(inner_check(half, inner_side::inner, tol).defect_residual - 0.75) < 1e-13);
}

TEST_CASE("outer factor of a constant density") {
    const auto nsq = constant_samples(0.75, grid256);
    const auto f = outer_factor(nsq, tol);
    CHECK(f.rank == 1);
    CHECK(std::abs(f.coeffs.c[0](0, 0) - std::sqrt(3.0) / 2.0) < 1e-12);
    for (int k = 1; k <= f.coeffs.order(); ++k) CHECK(f.coeffs.c[k].norm() < 1e-12);
    CHECK(f.exact);
    CHECK(f.factorization_residual < 1e-12);
}

TEST_CASE("outer factor with a boundary zero") {
    const auto nsq = sample([](complex t) { return scalar1(std::norm(1.0 - t)); },
                            boundary_grid::of_size(1024));
    const auto f = outer_factor(nsq, tol);
    REQUIRE(f.rank == 1);
    CHECK(std::abs(f.coeffs.c[0](0, 0) - complex(1.0)) < 1e-6);
    CHECK(std::abs(f.coeffs.c[1](0, 0) + complex(1.0)) < 1e-6);
    for (int k = 2; k <= std::min(8, f.coeffs.order()); ++k)
        CHECK(f.coeffs.c[k].norm() < 1e-6);
}

TEST_CASE("outer factor of the zero density is empty") {
    const auto nsq = constant_samples(0.0, grid256);
    const auto f = outer_factor(nsq, tol);
    CHECK(f.rank == 0);
    CHECK(f.samples.values[0].rows() == 0);
    CHECK(f.exact);
}

TEST_CASE("star outer factor mirrors the outer factor") {
    const auto nsq = constant_samples(0.75, grid256);
    const auto f = star_outer_factor(nsq, tol);
    CHECK(f.rank == 1);
    CHECK(std::abs(f.coeffs.c[0](0, 0) - std::sqrt(3.0) / 2.0) < 1e-12);

    const auto zero = constant_samples(0.0, grid256);
    CHECK(star_outer_factor(zero, tol).rank == 0);

    const auto nz = sample([](complex t) { return scalar1(std::norm(1.0 - t)); },
                           boundary_grid::of_size(1024));
    const auto fs = star_outer_factor(nz, tol);
    CHECK(std::abs(fs.coeffs.c[0](0, 0) - complex(1.0)) < 1e-6);
    CHECK(std::abs(fs.coeffs.c[1](0, 0) + complex(1.0)) < 1e-6);
}

TEST_CASE("defect functions of simple contractions") {
    const double amp = std::sqrt(3.0) / 2.0;
    const auto half = constant_samples(0.5, grid256);
    const auto fr = defect_function(half, defect_side::right, tol);
    const auto fl = defect_function(half, defect_side::left, tol);
    CHECK(std::abs(fr.coeffs.c[0](0, 0) - amp) < 1e-12);
    CHECK(std::abs(fl.coeffs.c[0](0, 0) - amp) < 1e-12);

    const auto halfz = scalar_poly_samples({0.0, 0.5}, grid256);
    const auto fr2 = defect_function(halfz, defect_side::right, tol);
    CHECK(std::abs(fr2.coeffs.c[0](0, 0) - amp) < 1e-10);
    for (int k = 1; k <= std::min(6, fr2.coeffs.order()); ++k)
        CHECK(fr2.coeffs.c[k].norm() < 1e-10);

    const auto affine = scalar_poly_samples({0.5, 0.5}, boundary_grid::of_size(1024));
    const auto fr3 = defect_function(affine, defect_side::right, tol);
    CHECK(std::abs(fr3.coeffs.c[0](0, 0) - complex(0.5)) < 1e-8);
    CHECK(std::abs(fr3.coeffs.c[1](0, 0) + complex(0.5)) < 1e-8);
}

TEST_CASE("defect inequality holds pointwise") {
    const auto affine = scalar_poly_samples({0.5, 0.5}, grid256);
    const auto fr = defect_function(affine, defect_side::right, tol);
    const auto fl = defect_function(affine, defect_side::left, tol);
    for (int m = 0; m < grid256.size; ++m) {
        const complex_matrix v = affine.values[m];
        const complex_matrix gap_r =
            complex_matrix::Identity(1, 1) - v.adjoint() * v -
            fr.samples.values[m].adjoint() * fr.samples.values[m];
        CHECK(smallest_eigenvalue(hermitian_part(gap_r)) > -1e-8);
        const complex_matrix gap_l =
            complex_matrix::Identity(1, 1) - v * v.adjoint() -
            fl.samples.values[m] * fl.samples.values[m].adjoint();
        CHECK(smallest_eigenvalue(hermitian_part(gap_l)) > -1e-8);
    }
}

TEST_CASE("minorant maximality against competitors") {
    // competitors alpha with alpha^* alpha <= 1 - |theta|^2 for theta = (1+t)/2
    const auto affine = scalar_poly_samples({0.5, 0.5}, grid256);
    const auto fr = defect_function(affine, defect_side::right, tol);
    auto g = testgen::rng(701);
    for (int trial = 0; trial < 10; ++trial) {
        // scale a random low-degree polynomial below the defect density
        truncated_series alpha(1, 1, 3);
        for (int k = 0; k <= 3; ++k)
            alpha.c[k] = scalar1(testgen::random_in_disk(g, 0.0, 0.5));
        const auto alpha_s = sample(alpha, grid256);
        double scale = 1.0;
        for (int m = 0; m < grid256.size; ++m) {
            const double bound =
                1.0 - std::norm(affine.values[m](0, 0));
            const double val = std::norm(alpha_s.values[m](0, 0));
            if (val > 1e-30) scale = std::min(scale, std::sqrt(bound / val));
        }
        for (int m = 0; m < grid256.size; ++m) {
            const double a2 = std::norm(scale * alpha_s.values[m](0, 0));
            const double f2 = std::norm(fr.samples.values[m](0, 0));
            CHECK(a2 <= f2 + 1e-9);
        }
    }
}

TEST_CASE("scalar outer certification via the geometric mean") {
    // density |1 - 0.5 t|^2, bounded away from zero: the outer factor has
    // unit geometric mean matched by |phi(0)| = 1
    const auto nsq = sample([](complex t) { return scalar1(std::norm(1.0 - 0.5 * t)); },
                            boundary_grid::of_size(1024));
    const auto fr = outer_factor(nsq, tol);
    double logsum = 0.0;
    for (const auto& v : fr.samples.values)
        logsum += std::log(std::max(1e-300, std::abs(v(0, 0))));
    const double geo = std::exp(logsum / static_cast<double>(fr.samples.grid.size));
    CHECK(std::abs(std::abs(fr.coeffs.c[0](0, 0)) - geo) < 1e-6);
    CHECK(std::abs(fr.coeffs.c[0](0, 0) - complex(1.0)) < 1e-9);
    CHECK(std::abs(fr.coeffs.c[1](0, 0) + complex(0.5)) < 1e-9);
}

TEST_CASE("gauge stability: repeated factorization is bit-stable") {
    const auto affine = scalar_poly_samples({0.5, 0.5}, grid256);
    const auto f1 = defect_function(affine, defect_side::right, tol);
    const auto f2 = defect_function(affine, defect_side::right, tol);
    for (int k = 0; k <= f1.coeffs.order(); ++k)
        CHECK((f1.coeffs.c[k] - f2.coeffs.c[k]).norm() == 0.0);
}

TEST_CASE("grid refinement stabilizes the coefficients") {
    for (int m : {512, 1024}) {
        const auto s1 = scalar_poly_samples({0.5, 0.5}, boundary_grid::of_size(m));
        const auto s2 = scalar_poly_samples({0.5, 0.5}, boundary_grid::of_size(2 * m));
        const auto f1 = defect_function(s1, defect_side::right, tol);
        const auto f2 = defect_function(s2, defect_side::right, tol);
        for (int k = 0; k <= 4; ++k)
            CHECK((f1.coeffs.c[k] - f2.coeffs.c[k]).norm() < 1e-6);
    }
}

TEST_CASE("matrix outer factorization through the Wilson route") {
    // 2x2 density with full rank: N^2(t) = A + B t + B* conj(t), PD on the circle.
    complex_matrix a(2, 2), b(2, 2);
    a << 2.0, 0.3, 0.3, 1.5;
    b << 0.2, complex(0.1, 0.05), complex(-0.05, 0.02), 0.1;
    auto density = [&](complex t) {
        return complex_matrix(a + b * t + b.adjoint() * std::conj(t));
    };
    const auto nsq = sample(density, grid256);
    const auto f = outer_factor(nsq, tol);
    REQUIRE(f.rank == 2);
    CHECK(f.exact);
    double resid = 0.0;
    for (int m = 0; m < grid256.size; ++m)
        resid = std::max(resid, (f.samples.values[m].adjoint() * f.samples.values[m] -
                                 nsq.values[m]).norm());
    CHECK(resid < 1e-8);
    CHECK(analyticity_report(f.samples, tol).negative_tail < 1e-9);
    // gauge: leading coefficient lower triangular with real nonnegative diagonal
    CHECK(std::abs(f.coeffs.c[0](0, 1)) < 1e-9);
    CHECK(f.coeffs.c[0](0, 0).imag() < 1e-9);
    CHECK(f.coeffs.c[0](0, 0).real() >= 0.0);
}

TEST_CASE("rank-deficient matrix density factors through its range") {
    // rank-1 density with a constant range: |0.6 + 0.3 t|^2 v0 v0^*
    complex_matrix v0(2, 1);
    v0 << 0.8, 0.6;
    auto density = [&](complex t) {
        return complex_matrix(std::norm(0.6 + 0.3 * t) * (v0 * v0.adjoint()));
    };
    const auto nsq = sample(density, grid256);
    const auto f = outer_factor(nsq, tol);
    REQUIRE(f.rank == 1);
    double resid = 0.0;
    for (int m = 0; m < grid256.size; ++m)
        resid = std::max(resid, (f.samples.values[m].adjoint() * f.samples.values[m] -
                                 nsq.values[m]).norm());
    CHECK(resid < 1e-9);
    CHECK(f.exact);
    // the factor is outer: no zeros inside the disk, here |phi(0)| is the
    // geometric mean of |0.6 + 0.3 t|, which is 0.6
    CHECK(std::abs(std::abs(f.coeffs.c[0].norm()) - 0.6) < 1e-9);
}

TEST_CASE("iterated defect words reach the fixed point") {
    // chain for "rrr" is phi, phi_r, phi_rr; the defect of a defect function
    // returns it (phi_rr = phi).
    const auto half = constant_samples(0.5, grid256);
    const auto chain = iterated_defect(half, "rrr", tol);
    REQUIRE(chain.size() == 3);
    const double amp = std::sqrt(3.0) / 2.0;
    CHECK(std::abs(chain[0].coeffs.c[0](0, 0) - amp) < 1e-10);
    CHECK(std::abs(chain[1].coeffs.c[0](0, 0) - 0.5) < 1e-10);
    CHECK(std::abs(chain[2].coeffs.c[0](0, 0) - amp) < 1e-10);

    const auto inner = scalar_poly_samples({0.0, 1.0}, grid256);
    const auto ichain = iterated_defect(inner, "rr", tol);
    CHECK(ichain[0].rank == 0);
    CHECK(ichain[1].rank == 0);

    const auto halfz = scalar_poly_samples({0.0, 0.5}, grid256);
    const auto zchain = iterated_defect(halfz, "rrr", tol);
    for (int k = 0; k <= 4; ++k)
        CHECK((zchain[2].coeffs.c[k] - zchain[0].coeffs.c[k]).norm() < 1e-6);
}

TEST_CASE("rank decisions that flip under tolerance scaling are rejected") {
    const double marginal = 5.0 * tol.rank_tol;
    auto density = [&](complex) {
        complex_matrix d = complex_matrix::Zero(2, 2);
        d(0, 0) = 1.0;
        d(1, 1) = marginal;
        return d;
    };
    CHECK_THROWS_AS(outer_factor(sample(density, grid256), tol), rank_unstable);
}
