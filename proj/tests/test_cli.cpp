// End-to-end checks of the command-line frontend: exit-code contract, output
// schemas, and byte-level determinism.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "schur/json_io.hpp"

using namespace schur;

namespace {

struct run_result {
    int exit_code = -1;
    std::string output;
};

run_result run_cli(const std::string& args) {
    const std::string cmd = std::string(SCHUR_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    run_result res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = std::string("/tmp/schur_cli_test_") + name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::string scalar_seq_json(std::initializer_list<double> values) {
    std::vector<complex_matrix> cs;
    for (double v : values) cs.push_back(complex_matrix::Constant(1, 1, v));
    return sequence_to_json(schur_sequence(1, 1, cs));
}

}  // namespace

TEST_CASE("check command exit codes") {
    const auto good = write_temp("good.json", scalar_seq_json({0.5}));
    CHECK(run_cli("check " + good).exit_code == 0);

    const auto degen = write_temp("degen.json", scalar_seq_json({1.0}));
    CHECK(run_cli("check " + degen).exit_code == 3);

    const auto degen2 = write_temp("degen2.json", scalar_seq_json({0.0, 1.0}));
    CHECK(run_cli("check " + degen2).exit_code == 3);

    const auto infeas = write_temp("infeas.json", scalar_seq_json({2.0}));
    CHECK(run_cli("check " + infeas).exit_code == 2);
}

TEST_CASE("malformed input exits with code 5") {
    const auto bad = write_temp("bad.json", "{\"p\": 1, \"q\": ");
    CHECK(run_cli("check " + bad).exit_code == 5);
    CHECK(run_cli("check /tmp/schur_cli_does_not_exist.json").exit_code == 5);
    const auto wrong = write_temp("wrong.json", "{\"p\":1,\"q\":1,\"coeffs\":[]}");
    CHECK(run_cli("check " + wrong).exit_code == 5);
    CHECK(run_cli("frobnicate").exit_code == 5);
}

TEST_CASE("params command emits the recursion output") {
    const auto data = write_temp("params.json", scalar_seq_json({0.5, 0.0}));
    const auto res = run_cli("params " + data + " --emit json");
    CHECK(res.exit_code == 0);
    const auto j = parse_json_text(res.output);
    CHECK(j.at("params").size() == 2);
    CHECK(std::abs(j.at("params").at(1).at("data").at(0).at(0).get<double>() - 0.5) < 1e-12);
}

TEST_CASE("solve command reports values and residual") {
    const auto zero = write_temp("zero.json", scalar_seq_json({0.0}));
    const auto res = run_cli("solve " + zero + " --param-const 0.3 --zeta 0.5 --emit json");
    CHECK(res.exit_code == 0);
    const auto j = parse_json_text(res.output);
    CHECK(j.at("residual").get<double>() < 1e-12);
    const double re = j.at("values").at(0).at("theta").at("data").at(0).at(0).get<double>();
    CHECK(std::abs(re - 0.15) < 1e-12);  // theta(zeta) = 0.3 zeta at 0.5

    const auto half = write_temp("half.json", scalar_seq_json({0.5}));
    const auto res2 = run_cli("solve " + half + " --param-const 0.5 --zeta 0.2 --emit json");
    const auto j2 = parse_json_text(res2.output);
    CHECK(std::abs(j2.at("values").at(0).at("theta").at("data").at(0).at(0).get<double>() -
                   0.5) < 1e-10);
}

TEST_CASE("weyl command emits a csv sweep with a limit summary") {
    const auto data = write_temp("weyl.json", scalar_seq_json({0.0, 0.5, 0.0, 0.0}));
    const auto res = run_cli("weyl " + data + " --zeta 0,0 --emit csv");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("zeta_re,zeta_im,n") == 0);
    CHECK(res.output.find("# limit") != std::string::npos);
    CHECK(res.output.find("defect_right=1") != std::string::npos);

    const auto degen = write_temp("weyl_degen.json", scalar_seq_json({0.0, 1.0}));
    CHECK(run_cli("weyl " + degen + " --zeta 0.3,0").exit_code == 3);
}

TEST_CASE("colligation pipeline through the CLI") {
    const auto tmat = write_temp("T.json", matrix_to_json(complex_matrix::Zero(1, 1)));
    const auto emb = run_cli("collig embed --matrix " + tmat);
    CHECK(emb.exit_code == 0);
    const auto cpath = write_temp("collig.json", emb.output);

    const auto ch = run_cli("collig char --collig " + cpath + " --zeta 0.7,0 --emit json");
    CHECK(ch.exit_code == 0);
    const auto j = parse_json_text(ch.output);
    CHECK(std::abs(j.at(0).at("theta").at("data").at(0).at(0).get<double>() - 0.7) < 1e-12);

    const auto prod = run_cli("collig product --collig " + cpath + " --right " + cpath);
    CHECK(prod.exit_code == 0);
    const auto ppath = write_temp("prod.json", prod.output);
    const auto tay = run_cli("collig taylor --collig " + ppath + " --n 4");
    const auto seq = sequence_from_json(parse_json_text(tay.output));
    CHECK(std::abs(seq.coeffs[2](0, 0) - complex(1.0)) < 1e-12);  // zeta^2

    const auto h0 = write_temp("h0.json", matrix_to_json(complex_matrix::Zero(1, 1)));
    complex_matrix impulse = complex_matrix::Zero(1, 3);
    impulse(0, 0) = 1.0;
    const auto fin = write_temp("f.json", matrix_to_json(impulse));
    const auto sim = run_cli("collig simulate --collig " + cpath + " --state " + h0 +
                             " --inputs " + fin);
    CHECK(sim.exit_code == 0);
    CHECK(sim.output.find("step,state_energy,input_energy,output_energy,energy_residual") == 0);
}

TEST_CASE("boundary and darlington commands") {
    const auto outer = run_cli("boundary outer --nsq-poly '1;-1' --grid 1024 --emit json");
    CHECK(outer.exit_code == 0);
    const auto j = parse_json_text(outer.output);
    CHECK(j.at("rank").get<int>() == 1);
    CHECK(std::abs(j.at("coeffs").at("coeffs").at(0).at("data").at(0).at(0).get<double>() -
                   1.0) < 1e-6);
    CHECK(std::abs(j.at("coeffs").at("coeffs").at(1).at("data").at(0).at(0).get<double>() +
                   1.0) < 1e-6);

    const auto inner = run_cli("boundary innercheck --poly '0;1' --grid 256 --emit json");
    CHECK(parse_json_text(inner.output).at("combined").get<double>() < 1e-10);

    const auto feas = run_cli("darlington feasibility --poly '0;0.5' --grid 256 --emit json");
    CHECK(feas.exit_code == 0);
    const auto fj = parse_json_text(feas.output);
    CHECK(fj.at("verdict").get<std::string>() == "feasible");
    CHECK(fj.at("delays").at(0).get<int>() == 1);
    CHECK(fj.at("delays").at(1).get<int>() == 0);
    CHECK(fj.at("inner_residual").get<double>() < 1e-10);
}

TEST_CASE("fixed seed runs are byte identical") {
    const auto data = write_temp("det.json", scalar_seq_json({0.2, 0.4}));
    const auto a = run_cli("weyl " + data + " --zeta 0.31,0.12 --seed 7 --emit csv");
    const auto b = run_cli("weyl " + data + " --zeta 0.31,0.12 --seed 7 --emit csv");
    CHECK(a.output == b.output);
    const auto c = run_cli("params " + data + " --seed 7 --emit json");
    const auto d = run_cli("params " + data + " --seed 7 --emit json");
    CHECK(c.output == d.output);
}

TEST_CASE("colligation factor through the CLI") {
    // embed the 2x2 nilpotent shift and split along span(e2)
    complex_matrix t = complex_matrix::Zero(2, 2);
    t(1, 0) = 1.0;
    const auto tpath = write_temp("jordan.json", matrix_to_json(t));
    const auto emb = run_cli("collig embed --matrix " + tpath);
    const auto cpath = write_temp("jordan_collig.json", emb.output);
    complex_matrix e2 = complex_matrix::Zero(2, 1);
    e2(1, 0) = 1.0;
    const auto bpath = write_temp("subspace.json", matrix_to_json(e2));
    const auto res = run_cli("collig factor --collig " + cpath + " --subspace " + bpath);
    CHECK(res.exit_code == 0);
    const auto j = parse_json_text(res.output);
    CHECK(j.at("left").at("dimH").get<int>() == 1);
    CHECK(j.at("right").at("dimH").get<int>() == 1);
}

TEST_CASE("boundary defects and darlington chi through the CLI") {
    const auto d = run_cli("boundary defects --const 0.5 --grid 256");
    CHECK(d.exit_code == 0);
    CHECK(d.output.find("m,t_re,t_im,v00_re,v00_im") == 0);
    // second csv row carries sqrt(3)/2
    const auto pos = d.output.find("\n0,");
    CHECK(d.output.substr(pos + 1, 64).find("0.86602540378443") != std::string::npos);

    const auto chi = run_cli("darlington chi --const 0.5 --grid 256 --emit json");
    CHECK(chi.exit_code == 0);
    const auto cj = parse_json_text(chi.output);
    CHECK(cj.at("dimG0").get<int>() == 1);
    CHECK(std::abs(cj.at("xi0_max_singular_value").get<double>() - 1.0) < 1e-8);

    // an inner source has empty channels
    const auto inner = run_cli("boundary outer --poly '0;1' --grid 256 --emit json");
    CHECK(parse_json_text(inner.output).at("rank").get<int>() == 0);
}

TEST_CASE("numerical contract violations exit with code 4") {
    const auto data = write_temp("nc.json", scalar_seq_json({0.5}));
    CHECK(run_cli("solve " + data + " --param-const 1.5 --zeta 0.1,0").exit_code == 4);
}
