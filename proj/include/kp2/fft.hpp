#pragma once

#include <complex>
#include <vector>

#include "kp2/types.hpp"

// Thin FFTW wrappers. All plans use FFTW_ESTIMATE (deterministic plan choice)
// and FFTW_UNALIGNED so they can execute on any buffer. Inverse transforms
// include the 1/n normalization.

namespace kp2::fft {

using cplx = std::complex<double>;

/// Signed integer frequency index of mode k in an n-point DFT.
inline int freq_index(int k, int n) { return k <= n / 2 ? k : k - n; }

/// Continuum frequency xi_k = freq_index/L.
inline double xi(int k, int n, double L) { return freq_index(k, n) / L; }

/// One-row real transform, length n; out has n/2+1 modes.
void r2c(int n, const double* in, cplx* out);
void c2r(int n, const cplx* in, double* out);

/// Batch transform of every row of a field (x direction).
/// spectrum layout: row-major, ny rows of (nx/2+1) modes.
void rows_r2c(const Grid2D& g, const double* in, cplx* spec);
void rows_c2r(const Grid2D& g, const cplx* spec, double* out);

/// Batch transform of every column (y direction), nx columns of ny/2+1 modes,
/// stored column-major contiguously per column.
void cols_r2c(const Grid2D& g, const double* in, cplx* spec);
void cols_c2r(const Grid2D& g, const cplx* spec, double* out);

/// Full 2D transform: (ny, nx) real -> ny x (nx/2+1) complex, x fastest.
void fft2_r2c(const Grid2D& g, const double* in, cplx* spec);
void fft2_c2r(const Grid2D& g, const cplx* spec, double* out);

/// Spectral d^order/dx^order of each row of a decaying field.
std::vector<double> x_derivative(const Grid2D& g, const std::vector<double>& v, int order = 1);
/// Spectral d^order/dy^order of each column.
std::vector<double> y_derivative(const Grid2D& g, const std::vector<double>& v, int order = 1);

/// Spectral translation f(x - shift) per row (exact for band-limited data).
std::vector<double> x_translate(const Grid2D& g, const std::vector<double>& v, double shift);

} // namespace kp2::fft
