// Command-line frontend: data ingestion, pipeline orchestration, and
// table/CSV/JSON emission.
//
// Exit codes: 0 success, 2 infeasible data, 3 degenerate data, 4 numerical
// contract violation, 5 malformed input.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schur/schur.hpp"

namespace {

using namespace schur;

constexpr int exit_ok = 0;
constexpr int exit_infeasible = 2;
constexpr int exit_degenerate = 3;
constexpr int exit_numerical = 4;
constexpr int exit_malformed = 5;

struct run_config {
    tolerance_policy tol;
    std::string emit = "table";
    std::string out_path;
    int grid_size = 1024;
    unsigned long long seed = 20240901ull;
};

void write_output(const run_config& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw malformed_input("cannot open output file: " + cfg.out_path);
    out << text;
}

complex parse_complex(const std::string& s) {
    std::istringstream is(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re)) throw malformed_input("cannot parse complex value: " + s);
    if (is >> comma) {
        if (comma != ',' || !(is >> im))
            throw malformed_input("cannot parse complex value: " + s);
    }
    return {re, im};
}

std::vector<complex> parse_complex_list(const std::string& s) {
    // semicolon-separated complex values, each "re" or "re,im"
    std::vector<complex> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ';'))
        if (!item.empty()) out.push_back(parse_complex(item));
    if (out.empty()) throw malformed_input("empty value list: " + s);
    return out;
}

std::vector<complex> parse_complex_args(const std::vector<std::string>& args) {
    // each occurrence is "re,im" or a semicolon-separated list of them
    std::vector<complex> out;
    for (const auto& a : args) {
        const auto part = parse_complex_list(a);
        out.insert(out.end(), part.begin(), part.end());
    }
    if (out.empty()) throw malformed_input("no evaluation points given");
    return out;
}

std::string format_complex_table(complex z, int digits = 10) {
    std::string s = format_double(z.real(), digits);
    if (z.imag() != 0.0) {
        s += (z.imag() < 0 ? " - " : " + ");
        s += format_double(std::abs(z.imag()), digits) + "i";
    }
    return s;
}

std::string matrix_to_table(const complex_matrix& m, int digits = 10) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ", ";
            os << format_complex_table(m(i, j), digits);
        }
        os << "]\n";
    }
    return os.str();
}

std::string samples_to_csv(const boundary_samples& s) {
    std::ostringstream os;
    os << "m,t_re,t_im";
    for (int i = 0; i < s.p; ++i)
        for (int j = 0; j < s.q; ++j)
            os << ",v" << i << j << "_re,v" << i << j << "_im";
    os << "\n";
    for (int m = 0; m < s.grid.size; ++m) {
        const complex t = s.grid.point(m);
        os << m << "," << format_double(t.real()) << "," << format_double(t.imag());
        for (int i = 0; i < s.p; ++i)
            for (int j = 0; j < s.q; ++j) {
                const complex v = s.values[m](i, j);
                os << "," << format_double(v.real()) << "," << format_double(v.imag());
            }
        os << "\n";
    }
    return os.str();
}

std::string series_to_json(const truncated_series& ts, int max_order = -1) {
    const int top = max_order < 0 ? ts.order() : std::min(max_order, ts.order());
    std::ostringstream os;
    os << "{\"p\":" << ts.p << ",\"q\":" << ts.q << ",\"coeffs\":[";
    for (int k = 0; k <= top; ++k) {
        if (k) os << ",";
        os << matrix_to_json(ts.c[k]);
    }
    os << "]}";
    return os.str();
}

// theta sources shared by the boundary and darlington commands.
struct theta_source {
    std::string seq_path, collig_path, const_value, poly_values;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--seq", seq_path, "SchurSequence JSON file (partial sum source)");
        cmd->add_option("--collig", collig_path, "colligation JSON file (transfer-function source)");
        cmd->add_option("--const", const_value, "constant scalar value re[,im]");
        cmd->add_option("--poly", poly_values,
                        "scalar polynomial coefficients c0;c1;... (each re[,im])");
    }

    boundary_samples resolve(const boundary_grid& grid) const {
        const int given = (!seq_path.empty()) + (!collig_path.empty()) +
                          (!const_value.empty()) + (!poly_values.empty());
        if (given != 1)
            throw malformed_input("exactly one of --seq/--collig/--const/--poly is required");
        if (!seq_path.empty())
            return sample(sequence_from_json(parse_json_file(seq_path)), grid);
        if (!collig_path.empty())
            return sample(colligation_from_json(parse_json_file(collig_path)), grid);
        if (!const_value.empty()) {
            const complex v = parse_complex(const_value);
            return sample([&](complex) { return complex_matrix::Constant(1, 1, v); }, grid);
        }
        const auto cs = parse_complex_list(poly_values);
        truncated_series ts(1, 1, static_cast<int>(cs.size()) - 1);
        for (size_t k = 0; k < cs.size(); ++k) ts.c[k] = complex_matrix::Constant(1, 1, cs[k]);
        return sample(ts, grid);
    }
};

int cmd_check(const run_config& cfg, const std::string& path) {
    const auto seq = sequence_from_json(parse_json_file(path));
    const auto verdict = classify(seq, cfg.tol);
    const char* name = verdict.kind == solvability::nondegenerate ? "nondegenerate"
                       : verdict.kind == solvability::degenerate  ? "degenerate"
                                                                  : "infeasible";
    if (cfg.emit == "json") {
        write_output(cfg, std::string("{\"class\":\"") + name +
                              "\",\"margin\":" + format_double(verdict.margin) + "}");
    } else {
        write_output(cfg, std::string("class: ") + name +
                              "\nmargin: " + format_double(verdict.margin, 10));
    }
    if (verdict.kind == solvability::degenerate) return exit_degenerate;
    if (verdict.kind == solvability::infeasible) return exit_infeasible;
    return exit_ok;
}

int cmd_params(const run_config& cfg, const std::string& path) {
    const auto seq = sequence_from_json(parse_json_file(path));
    const auto pars = schur_parameters_of(seq, cfg.tol);
    std::ostringstream os;
    os << "{\"p\":" << pars.p << ",\"q\":" << pars.q << ",\"params\":[";
    for (size_t k = 0; k < pars.params.size(); ++k) {
        if (k) os << ",";
        os << matrix_to_json(pars.params[k]);
    }
    os << "]}";
    write_output(cfg, os.str());
    return exit_ok;
}

int cmd_solve(const run_config& cfg, const std::string& path,
              const std::vector<std::string>& zetas, const std::string& param_const,
              const std::string& param_file) {
    const auto seq = sequence_from_json(parse_json_file(path));
    const auto rbt = resolvent_btilde(seq, cfg.tol);
    complex_matrix w;
    if (!param_file.empty()) {
        w = matrix_from_json(parse_json_file(param_file));
        if (w.rows() != seq.p || w.cols() != seq.q)
            throw malformed_input("solve: parameter matrix must be p x q");
    } else {
        const complex v = param_const.empty() ? complex(0.0) : parse_complex(param_const);
        w = complex_matrix::Zero(seq.p, seq.q);
        for (int i = 0; i < std::min(seq.p, seq.q); ++i) w(i, i) = v;
    }
    if (opnorm(w) > 1.0 + cfg.tol.psd_tol)
        throw noncontractive_parameter("solve: parameter is not contractive");

    const truncated_series sol =
        lft_solution_series(rbt, truncated_series::constant(w, seq.order()), seq.order());
    double residual = 0.0;
    for (int k = 0; k <= seq.order(); ++k)
        residual = std::max(residual, (sol.c[k] - seq.coeffs[k]).norm());

    std::vector<complex> pts;
    if (!zetas.empty()) pts = parse_complex_args(zetas);
    std::ostringstream os;
    if (cfg.emit == "json") {
        os << "{\"residual\":" << format_double(residual) << ",\"values\":[";
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i) os << ",";
            os << "{\"zeta\":" << complex_to_json(pts[i])
               << ",\"theta\":" << matrix_to_json(lft_apply(rbt, w, pts[i])) << "}";
        }
        os << "]}";
    } else {
        os << "coefficient residual: " << format_double(residual, 10) << "\n";
        for (complex z : pts) {
            os << "theta(" << format_complex_table(z) << ") =\n"
               << matrix_to_table(lft_apply(rbt, w, z));
        }
    }
    write_output(cfg, os.str());
    return residual > cfg.tol.residual_tol ? exit_numerical : exit_ok;
}

int cmd_weyl(const run_config& cfg, const std::string& path,
             const std::vector<std::string>& zetas, int n_max) {
    const auto seq = sequence_from_json(parse_json_file(path));
    const auto pts = zetas.empty() ? std::vector<complex>{0.0} : parse_complex_args(zetas);
    const int top = std::min(n_max, seq.order());
    std::ostringstream os;
    os << "zeta_re,zeta_im,n";
    for (int i = 0; i < seq.p; ++i)
        for (int j = 0; j < seq.q; ++j) os << ",center" << i << j << "_re,center" << i << j << "_im";
    for (int i = 0; i < seq.p; ++i) os << ",rho_left_ev" << i;
    for (int j = 0; j < seq.q; ++j) os << ",rho_right_ev" << j;
    for (int i = 0; i < seq.p; ++i) os << ",rho_left_norm_ev" << i;
    os << "\n";
    for (complex z : pts) {
        for (int n = 0; n <= top; ++n) {
            const auto ball = weyl_ball(seq, z, n, cfg.tol);
            os << format_double(z.real()) << "," << format_double(z.imag()) << "," << n;
            for (int i = 0; i < seq.p; ++i)
                for (int j = 0; j < seq.q; ++j) {
                    os << "," << format_double(ball.center(i, j).real()) << ","
                       << format_double(ball.center(i, j).imag());
                }
            const auto evl = hermitian_eig(ball.rho_left).eigenvalues();
            const auto evr = hermitian_eig(ball.rho_right).eigenvalues();
            const auto evn = hermitian_eig(ball.rho_left_normalized).eigenvalues();
            for (int i = 0; i < seq.p; ++i) os << "," << format_double(evl(i));
            for (int j = 0; j < seq.q; ++j) os << "," << format_double(evr(j));
            for (int i = 0; i < seq.p; ++i) os << "," << format_double(evn(i));
            os << "\n";
        }
        const auto lim = weyl_limit(seq, z, cfg.tol, n_max);
        os << "# limit zeta=" << format_double(z.real()) << "," << format_double(z.imag())
           << " n_reached=" << lim.n_reached << " converged=" << (lim.converged ? 1 : 0)
           << " defect_right=" << lim.defect_rank_right
           << " defect_left=" << lim.defect_rank_left
           << " rank_stable=" << ((lim.rank_right_stable && lim.rank_left_stable) ? 1 : 0)
           << "\n";
    }
    write_output(cfg, os.str());
    return exit_ok;
}

std::string opt_str(CLI::App* cmd, const std::string& name) {
    auto* o = cmd->get_option(name);
    if (o->count() == 0)
        throw malformed_input("missing option " + name + " for subcommand " + cmd->get_name());
    return o->as<std::string>();
}

int opt_int(CLI::App* cmd, const std::string& name, int fallback) {
    auto* o = cmd->get_option(name);
    return o->count() == 0 ? fallback : o->as<int>();
}

int cmd_collig(const run_config& cfg, CLI::App* cmd, const std::string& sub) {
    if (sub == "embed") {
        const auto t = matrix_from_json(parse_json_file(opt_str(cmd, "--matrix")));
        const auto d = embed_contraction(t, cfg.tol);
        write_output(cfg, colligation_to_json(d));
        return exit_ok;
    }
    const auto d = colligation_from_json(parse_json_file(opt_str(cmd, "--collig")));
    if (sub == "char") {
        const auto pts = parse_complex_list(opt_str(cmd, "--zeta"));
        std::ostringstream os;
        if (cfg.emit == "json") {
            os << "[";
            for (size_t i = 0; i < pts.size(); ++i) {
                if (i) os << ",";
                os << "{\"zeta\":" << complex_to_json(pts[i])
                   << ",\"theta\":" << matrix_to_json(char_function(d, pts[i])) << "}";
            }
            os << "]";
        } else {
            for (complex z : pts)
                os << "theta(" << format_complex_table(z) << ") =\n"
                   << matrix_to_table(char_function(d, z));
        }
        write_output(cfg, os.str());
        return exit_ok;
    }
    if (sub == "taylor") {
        const int n = opt_int(cmd, "--n", 8);
        write_output(cfg, sequence_to_json(taylor_coeffs(d, n)));
        return exit_ok;
    }
    if (sub == "product") {
        const auto rhs = colligation_from_json(parse_json_file(opt_str(cmd, "--right")));
        write_output(cfg, colligation_to_json(product(d, rhs)));
        return exit_ok;
    }
    if (sub == "factor") {
        const auto basis = matrix_from_json(parse_json_file(opt_str(cmd, "--subspace")));
        const auto [left, right] = factor_colligation(d, basis, cfg.tol);
        write_output(cfg, "{\"left\":" + colligation_to_json(left) +
                              ",\"right\":" + colligation_to_json(right) + "}");
        return exit_ok;
    }
    if (sub == "simulate") {
        const auto h0m = matrix_from_json(parse_json_file(opt_str(cmd, "--state")));
        const auto fm = matrix_from_json(parse_json_file(opt_str(cmd, "--inputs")));
        if (h0m.cols() != 1 || h0m.rows() != d.dim_h)
            throw malformed_input("simulate: state must be a dimH x 1 matrix");
        if (fm.rows() != d.q)
            throw malformed_input("simulate: inputs must be a q x steps matrix");
        std::vector<complex_vector> inputs;
        for (Eigen::Index k = 0; k < fm.cols(); ++k) inputs.push_back(fm.col(k));
        const auto tr = simulate(d, h0m.col(0), inputs);
        std::ostringstream os;
        os << "step,state_energy,input_energy,output_energy,energy_residual\n";
        for (size_t k = 0; k < tr.outputs.size(); ++k) {
            os << k << "," << format_double(tr.states[k].squaredNorm()) << ","
               << format_double(tr.inputs[k].squaredNorm()) << ","
               << format_double(tr.outputs[k].squaredNorm()) << ","
               << format_double(tr.energy_residuals[k]) << "\n";
        }
        write_output(cfg, os.str());
        return exit_ok;
    }
    throw malformed_input("unknown collig subcommand: " + sub);
}

int cmd_boundary(const run_config& cfg, const theta_source& src, const std::string& sub,
                 const std::string& which, const std::string& nsq_const,
                 const std::string& nsq_poly) {
    const auto grid = boundary_grid::of_size(cfg.grid_size);
    if (sub == "defects") {
        const auto theta = src.resolve(grid);
        const auto [pi_s, sigma_s] = defect_pointwise(theta, cfg.tol);
        write_output(cfg, samples_to_csv(which == "sigma" ? sigma_s : pi_s));
        return exit_ok;
    }
    if (sub == "outer") {
        boundary_samples nsq;
        if (!nsq_const.empty()) {
            const complex v = parse_complex(nsq_const);
            nsq = sample([&](complex) { return complex_matrix::Constant(1, 1, v); }, grid);
        } else if (!nsq_poly.empty()) {
            const auto cs = parse_complex_list(nsq_poly);
            truncated_series ts(1, 1, static_cast<int>(cs.size()) - 1);
            for (size_t k = 0; k < cs.size(); ++k)
                ts.c[k] = complex_matrix::Constant(1, 1, cs[k]);
            nsq = sample([&](complex t) {
                const complex v = ts.eval(t)(0, 0);
                return complex_matrix::Constant(1, 1, std::norm(v));
            }, grid);
        } else {
            // defect density of a theta source
            const auto theta = src.resolve(grid);
            nsq.grid = grid;
            nsq.p = nsq.q = theta.q;
            for (const auto& v : theta.values)
                nsq.values.push_back(complex_matrix::Identity(theta.q, theta.q) -
                                     v.adjoint() * v);
        }
        const auto fac =
            which == "star" ? star_outer_factor(nsq, cfg.tol) : outer_factor(nsq, cfg.tol);
        std::ostringstream os;
        os << "{\"rank\":" << fac.rank
           << ",\"residual\":" << format_double(fac.factorization_residual)
           << ",\"exact\":" << (fac.exact ? "true" : "false")
           << ",\"excluded_points\":" << fac.excluded_points
           << ",\"coeffs\":" << series_to_json(fac.coeffs, 16) << "}";
        write_output(cfg, os.str());
        return exit_ok;
    }
    if (sub == "innercheck") {
        const auto theta = src.resolve(grid);
        const inner_side side = which == "star"      ? inner_side::star_inner
                                : which == "two_sided" ? inner_side::two_sided
                                                       : inner_side::inner;
        const auto rep = inner_check(theta, side, cfg.tol);
        write_output(cfg, "{\"defect_residual\":" + format_double(rep.defect_residual) +
                              ",\"tail\":" + format_double(rep.tail) +
                              ",\"combined\":" + format_double(rep.combined) + "}");
        return exit_ok;
    }
    throw malformed_input("unknown boundary subcommand: " + sub);
}

int cmd_darlington(const run_config& cfg, const theta_source& src, const std::string& sub,
                   const std::string& collig_path, int omega_delay, int upsilon_delay,
                   int delay_bound) {
    const auto grid = boundary_grid::of_size(cfg.grid_size);
    if (sub == "scalarmultiple") {
        const auto d = colligation_from_json(parse_json_file(collig_path));
        const auto sm = scalar_multiple(d, grid, cfg.tol);
        std::ostringstream os;
        os << "{\"identity_residual\":" << format_double(sm.identity_residual)
           << ",\"nu_inner_residual\":" << format_double(sm.nu_inner_residual)
           << ",\"delta\":" << series_to_json(sm.delta)
           << ",\"nu\":" << series_to_json(sm.nu, std::max(8, sm.delta.order())) << "}";
        write_output(cfg, os.str());
        return sm.identity_residual > cfg.tol.residual_tol ? exit_numerical : exit_ok;
    }
    const auto theta = src.resolve(grid);
    if (sub == "chi") {
        const auto phi = defect_function(theta, defect_side::right, cfg.tol);
        const auto psi = defect_function(theta, defect_side::left, cfg.tol);
        const auto is = internal_scattering(theta, phi, psi, cfg.tol);
        if (cfg.emit == "csv") {
            write_output(cfg, samples_to_csv(is.chi));
            return exit_ok;
        }
        std::ostringstream os;
        os << "{\"dimG0\":" << is.dim_g0 << ",\"dimF0\":" << is.dim_f0
           << ",\"xi0_max_singular_value\":" << format_double(is.xi0_max_singular_value)
           << ",\"omega_residual\":" << format_double(is.omega_residual)
           << ",\"upsilon_residual\":" << format_double(is.upsilon_residual)
           << ",\"range_violations\":" << is.range_violations << "}";
        write_output(cfg, os.str());
        return exit_ok;
    }
    if (sub == "extend") {
        const auto phi = defect_function(theta, defect_side::right, cfg.tol);
        const auto psi = defect_function(theta, defect_side::left, cfg.tol);
        const auto ext = regular_extension(
            theta,
            schur::detail::monomial_delay(phi.rank, omega_delay),
            schur::detail::monomial_delay(psi.samples.q, upsilon_delay), cfg.tol);
        const auto xi_inner = inner_check(ext.xi, inner_side::two_sided, cfg.tol);
        // Assemble the extension as one coefficient sequence.
        const auto xi_fourier = fourier_coefficients(ext.xi);
        std::ostringstream os;
        os << "{\"inner_residual\":" << format_double(xi_inner.combined)
           << ",\"contraction_margin\":" << format_double(ext.contraction_margin)
           << ",\"theta11_tail\":" << format_double(ext.theta11_tail) << ",\"xi\":";
        std::vector<complex_matrix> cs;
        const int top = std::min(16, ext.xi.grid.size / 2 - 1);
        for (int k = 0; k <= top; ++k) cs.push_back(xi_fourier.at(k));
        os << sequence_to_json(schur_sequence(ext.xi.p, ext.xi.q, cs)) << "}";
        write_output(cfg, os.str());
        return exit_ok;
    }
    if (sub == "feasibility") {
        const auto rep = darlington_feasibility(theta, delay_bound, cfg.tol);
        std::ostringstream os;
        os << "{\"residual_right\":" << format_double(rep.residual_right)
           << ",\"residual_left\":" << format_double(rep.residual_left) << ",\"delays\":[";
        os << rep.delay_omega << "," << rep.delay_upsilon << "]";
        os << ",\"verdict\":\"" << rep.verdict << "\""
           << ",\"inner_residual\":" << format_double(rep.inner_residual) << "}";
        write_output(cfg, os.str());
        return exit_ok;
    }
    throw malformed_input("unknown darlington subcommand: " + sub);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix Schur interpolation, Weyl balls, system realization and "
                 "Darlington synthesis"};
    app.require_subcommand(1);

    run_config cfg;
    app.add_option("--tol-rank", cfg.tol.rank_tol, "relative singular-value cutoff");
    app.add_option("--tol-psd", cfg.tol.psd_tol, "semidefiniteness slack");
    app.add_option("--tol-residual", cfg.tol.residual_tol, "identity-verification slack");
    app.add_option("--emit", cfg.emit, "output format: table, json, csv");
    app.add_option("--out", cfg.out_path, "write output to a file instead of stdout");
    app.add_option("--grid", cfg.grid_size, "unit-circle grid size (power of two)");
    app.add_option("--seed", cfg.seed, "seed for randomized sampling");

    std::string seq_path, param_const, param_file;
    std::vector<std::string> zetas;
    int n_max = 64;

    auto* c_check = app.add_subcommand("check", "classify interpolation data");
    c_check->add_option("data", seq_path, "SchurSequence JSON file")->required();

    auto* c_params = app.add_subcommand("params", "Schur parameters of the data");
    c_params->add_option("data", seq_path, "SchurSequence JSON file")->required();

    auto* c_solve = app.add_subcommand("solve", "solution values for a parameter");
    c_solve->add_option("data", seq_path)->required();
    c_solve->add_option("--zeta", zetas, "evaluation point re,im (repeatable)");
    c_solve->add_option("--param-const", param_const, "constant diagonal parameter re[,im]");
    c_solve->add_option("--param-file", param_file, "parameter matrix JSON");

    auto* c_weyl = app.add_subcommand("weyl", "Weyl ball sweep and limit");
    c_weyl->add_option("data", seq_path)->required();
    c_weyl->add_option("--zeta", zetas, "evaluation point re,im (repeatable)");
    c_weyl->add_option("--n-max", n_max, "largest order (default 64)");

    auto* c_collig = app.add_subcommand("collig", "colligation operations");
    c_collig->require_subcommand(1);
    std::vector<CLI::App*> collig_subs;
    for (const char* name : {"embed", "char", "taylor", "product", "factor", "simulate"}) {
        auto* sc = c_collig->add_subcommand(name);
        for (const char* opt : {"--matrix", "--collig", "--right", "--subspace", "--state",
                                "--inputs", "--zeta", "--n"})
            sc->add_option(opt);
        collig_subs.push_back(sc);
    }

    theta_source bsrc;
    std::string bwhich = "pi", nsq_const, nsq_poly;
    auto* c_boundary = app.add_subcommand("boundary", "boundary-function operations");
    c_boundary->require_subcommand(1);
    std::vector<CLI::App*> boundary_subs;
    for (const char* name : {"defects", "outer", "innercheck"}) {
        auto* sc = c_boundary->add_subcommand(name);
        boundary_subs.push_back(sc);
    }
    bsrc.add_options(boundary_subs[0]);
    bsrc.add_options(boundary_subs[1]);
    bsrc.add_options(boundary_subs[2]);
    boundary_subs[0]->add_option("--which", bwhich, "pi or sigma (defects)");
    boundary_subs[1]->add_option("--which", bwhich, "outer or star (outer)");
    boundary_subs[1]->add_option("--nsq-const", nsq_const, "constant density value");
    boundary_subs[1]->add_option("--nsq-poly", nsq_poly,
                                 "density |c0 + c1 t + ...|^2 from coefficients c0;c1;...");
    boundary_subs[2]->add_option("--which", bwhich, "inner, star or two_sided");

    theta_source dsrc;
    std::string dcollig;
    int omega_delay = 0, upsilon_delay = 0, delay_bound = 8;
    auto* c_darl = app.add_subcommand("darlington", "lossless embedding operations");
    c_darl->require_subcommand(1);
    std::vector<CLI::App*> darl_subs;
    for (const char* name : {"chi", "extend", "feasibility", "scalarmultiple"}) {
        auto* sc = c_darl->add_subcommand(name);
        darl_subs.push_back(sc);
    }
    for (size_t i = 0; i + 1 < darl_subs.size(); ++i) dsrc.add_options(darl_subs[i]);
    darl_subs[1]->add_option("--omega-delay", omega_delay, "monomial delay on the phi channel");
    darl_subs[1]->add_option("--upsilon-delay", upsilon_delay, "monomial delay on the psi channel");
    darl_subs[2]->add_option("--delay-bound", delay_bound, "largest total delay searched");
    darl_subs[3]->add_option("--collig", dcollig, "colligation JSON")->required();

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
        sc->fallthrough();
        for (auto* s2 : sc->get_subcommands([](const CLI::App*) { return true; }))
            s2->fallthrough();
    }

    try {
        app.parse(argc, argv);
        cfg.tol.validate();

        if (*c_check) return cmd_check(cfg, seq_path);
        if (*c_params) return cmd_params(cfg, seq_path);
        if (*c_solve) return cmd_solve(cfg, seq_path, zetas, param_const, param_file);
        if (*c_weyl) return cmd_weyl(cfg, seq_path, zetas, n_max);
        if (*c_collig) {
            for (size_t i = 0; i < collig_subs.size(); ++i)
                if (collig_subs[i]->parsed())
                    return cmd_collig(cfg, collig_subs[i], collig_subs[i]->get_name());
        }
        if (*c_boundary) {
            for (auto* sc : boundary_subs)
                if (sc->parsed())
                    return cmd_boundary(cfg, bsrc, sc->get_name(), bwhich, nsq_const, nsq_poly);
        }
        if (*c_darl) {
            for (auto* sc : darl_subs)
                if (sc->parsed())
                    return cmd_darlington(cfg, dsrc, sc->get_name(), dcollig, omega_delay,
                                          upsilon_delay, delay_bound);
        }
        return exit_malformed;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_malformed;
    } catch (const malformed_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_malformed;
    } catch (const degenerate_data& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const infeasible_data& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_infeasible;
    } catch (const schur::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}
