#pragma once

// Iterative radix-2 FFT for power-of-two lengths, plus helpers for matrix-
// valued sample sequences on the uniform unit-circle grid.

#include <vector>

#include "schur/types.hpp"

namespace schur::detail {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline void fft_inplace(std::vector<complex>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    if (!is_power_of_two(n)) throw error("fft: length must be a power of two");
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846;
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / len * (inverse ? 1.0 : -1.0);
        const complex wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            complex w = 1.0;
            for (int k = 0; k < len / 2; ++k) {
                complex u = a[i + k];
                complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Discrete Fourier coefficients of matrix samples v_m at t_m = exp(2*pi*i*m/M):
// out[k] = (1/M) * sum_m v_m t_m^{-k}.  Index k runs 0..M-1; k > M/2
// represents the negative frequency k - M.
inline std::vector<complex_matrix> matrix_fourier(const std::vector<complex_matrix>& values) {
    const int m = static_cast<int>(values.size());
    const int rows = static_cast<int>(values[0].rows());
    const int cols = static_cast<int>(values[0].cols());
    std::vector<complex_matrix> out(m, complex_matrix::Zero(rows, cols));
    std::vector<complex> buf(m);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            for (int k = 0; k < m; ++k) buf[k] = values[k](i, j);
            fft_inplace(buf, false);
            for (int k = 0; k < m; ++k) out[k](i, j) = buf[k] / static_cast<double>(m);
        }
    return out;
}

// Values v_m = sum_k coeff[k] t_m^k from coefficients indexed as above.
inline std::vector<complex_matrix> matrix_unfourier(const std::vector<complex_matrix>& coeff) {
    const int m = static_cast<int>(coeff.size());
    const int rows = static_cast<int>(coeff[0].rows());
    const int cols = static_cast<int>(coeff[0].cols());
    std::vector<complex_matrix> out(m, complex_matrix::Zero(rows, cols));
    std::vector<complex> buf(m);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            for (int k = 0; k < m; ++k) buf[k] = coeff[k](i, j);
            fft_inplace(buf, true);
            for (int k = 0; k < m; ++k) out[k](i, j) = buf[k] * static_cast<double>(m);
        }
    return out;
}

}  // namespace schur::detail
