#pragma once

// JSON schemas shared repo-wide.  Parsing goes through nlohmann::json;
// emission uses a hand-rolled writer: every floating value is printed with a
// fixed number of significant digits (17 by default) and output is
// byte-identical across runs.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "schur/colligation.hpp"
#include "schur/sequence.hpp"

namespace schur {

inline std::string format_double(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string complex_to_json(complex z, int digits = 17) {
    return "[" + format_double(z.real(), digits) + "," + format_double(z.imag(), digits) + "]";
}

// {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
inline std::string matrix_to_json(const complex_matrix& m, int digits = 17) {
    std::ostringstream os;
    os << "{\"rows\":" << m.rows() << ",\"cols\":" << m.cols() << ",\"data\":[";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != 0 || j != 0) os << ",";
            os << complex_to_json(m(i, j), digits);
        }
    os << "]}";
    return os.str();
}

inline std::string sequence_to_json(const schur_sequence& s, int digits = 17) {
    std::ostringstream os;
    os << "{\"p\":" << s.p << ",\"q\":" << s.q << ",\"coeffs\":[";
    for (size_t k = 0; k < s.coeffs.size(); ++k) {
        if (k) os << ",";
        os << matrix_to_json(s.coeffs[k], digits);
    }
    os << "]}";
    return os.str();
}

inline std::string colligation_to_json(const unitary_colligation& d, int digits = 17) {
    std::ostringstream os;
    os << "{\"dimH\":" << d.dim_h << ",\"p\":" << d.p << ",\"q\":" << d.q
       << ",\"T\":" << matrix_to_json(d.t, digits) << ",\"F\":" << matrix_to_json(d.f, digits)
       << ",\"G\":" << matrix_to_json(d.g, digits) << ",\"S\":" << matrix_to_json(d.s, digits)
       << "}";
    return os.str();
}

inline nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw malformed_input(std::string("invalid JSON: ") + e.what());
    }
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw malformed_input("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

inline complex_matrix matrix_from_json(const nlohmann::json& j) {
    try {
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        if (rows < 0 || cols < 0) throw malformed_input("matrix: negative dimensions");
        const auto& data = j.at("data");
        if (!data.is_array() || static_cast<int>(data.size()) != rows * cols)
            throw malformed_input("matrix: data length must equal rows*cols");
        complex_matrix m(rows, cols);
        int idx = 0;
        for (int i = 0; i < rows; ++i)
            for (int jj = 0; jj < cols; ++jj, ++idx) {
                const auto& cell = data.at(idx);
                if (!cell.is_array() || cell.size() != 2)
                    throw malformed_input("matrix: each entry must be [re, im]");
                m(i, jj) = complex(cell.at(0).get<double>(), cell.at(1).get<double>());
            }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw malformed_input(std::string("matrix schema: ") + e.what());
    }
}

inline schur_sequence sequence_from_json(const nlohmann::json& j) {
    try {
        const int p = j.at("p").get<int>();
        const int q = j.at("q").get<int>();
        const auto& coeffs = j.at("coeffs");
        if (!coeffs.is_array() || coeffs.empty())
            throw malformed_input("sequence: coeffs must be a nonempty array");
        std::vector<complex_matrix> cs;
        for (const auto& cj : coeffs) cs.push_back(matrix_from_json(cj));
        return schur_sequence(p, q, std::move(cs));
    } catch (const nlohmann::json::exception& e) {
        throw malformed_input(std::string("sequence schema: ") + e.what());
    } catch (const shape_mismatch& e) {
        throw malformed_input(std::string("sequence schema: ") + e.what());
    }
}

inline unitary_colligation colligation_from_json(const nlohmann::json& j) {
    try {
        unitary_colligation d;
        d.dim_h = j.at("dimH").get<int>();
        d.p = j.at("p").get<int>();
        d.q = j.at("q").get<int>();
        d.t = matrix_from_json(j.at("T"));
        d.f = matrix_from_json(j.at("F"));
        d.g = matrix_from_json(j.at("G"));
        d.s = matrix_from_json(j.at("S"));
        if (d.t.rows() != d.dim_h || d.t.cols() != d.dim_h || d.f.rows() != d.dim_h ||
            d.f.cols() != d.q || d.g.rows() != d.p || d.g.cols() != d.dim_h ||
            d.s.rows() != d.p || d.s.cols() != d.q)
            throw malformed_input("colligation: block dimensions disagree with dimH/p/q");
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw malformed_input(std::string("colligation schema: ") + e.what());
    }
}

}  // namespace schur
