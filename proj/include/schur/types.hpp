#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace schur {

using complex = std::complex<double>;
using complex_matrix = Eigen::MatrixXcd;
using complex_vector = Eigen::VectorXcd;

// One tolerance policy travels through every operation; no hidden globals.
struct tolerance_policy {
    double rank_tol = 1e-9;      // relative singular-value cutoff
    double psd_tol = 1e-9;       // eigenvalue slack for semidefiniteness
    double residual_tol = 1e-8;  // identity-verification slack

    void validate() const {
        if (rank_tol <= 0.0 || psd_tol <= 0.0 || residual_tol <= 0.0)
            throw std::invalid_argument("tolerance_policy: tolerances must be positive");
    }
};

class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class not_hermitian : public error { public: using error::error; };
class not_psd : public error { public: using error::error; };
class size_mismatch : public error { public: using error::error; };
class shape_mismatch : public error { public: using error::error; };
class dimension_mismatch : public error { public: using error::error; };

// Degenerate interpolation data; `level` is the first prefix length at which
// strict positivity fails (-1 when not applicable).
class degenerate_data : public error {
  public:
    explicit degenerate_data(const std::string& what, int level_ = -1)
        : error(what), level(level_) {}
    int level;
};
class infeasible_data : public error { public: using error::error; };
class noncontractive_parameter : public error { public: using error::error; };
class coincident_points : public error { public: using error::error; };
class on_circle : public error { public: using error::error; };
class out_of_domain : public error { public: using error::error; };
class singular_denominator : public error { public: using error::error; };
class not_a_solution : public error { public: using error::error; };
class not_a_contraction : public error { public: using error::error; };
class singular_resolvent : public error { public: using error::error; };
class not_invariant : public error { public: using error::error; };
class not_square : public error { public: using error::error; };
class not_simple : public error { public: using error::error; };
class not_contractive_on_circle : public error { public: using error::error; };
class rank_unstable : public error { public: using error::error; };
class factorization_diverged : public error { public: using error::error; };
class not_inner : public error { public: using error::error; };
class analyticity_violated : public error { public: using error::error; };
class range_inclusion_violated : public error { public: using error::error; };
class denominator_vanishes : public error { public: using error::error; };
class determinant_vanishes : public error { public: using error::error; };
class malformed_input : public error { public: using error::error; };

}  // namespace schur
