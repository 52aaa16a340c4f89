#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace phaselab::fft {

using cplx = std::complex<double>;

/// Batched in-place complex DFT of `howmany` lines of length n. Element m of
/// line r sits at data[r*dist + m*stride]. sign = -1 forward, +1 backward;
/// unnormalized. Plans are cached and created with FFTW_ESTIMATE so results
/// are bit-reproducible between runs.
void c2c(cplx* data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist, int sign);

/// Batched real lines -> n/2+1 complex coefficients (contiguous output,
/// line r at out[r*(n/2+1)]). Input lines laid out as for c2c.
void r2c(const double* in, cplx* out, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist);
/// Inverse of r2c (unnormalized). `in` is clobbered.
void c2r(cplx* in, double* out, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist);

/// Periodic bandlimited translation of real lines: line r becomes
/// x -> line_r(x - shift(r)), with node spacing `h`. The Nyquist mode is
/// translated by its cosine so the output stays real.
void shift_real_lines(double* data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist,
                      double h, const std::function<double(std::size_t)>& shift);

/// Spectral derivative d^order/dx^order of one periodic complex line.
std::vector<cplx> derivative(const std::vector<cplx>& line, double h, int order);
std::vector<double> derivative(const std::vector<double>& line, double h, int order);

/// Wave number of FFT mode m for a length-n line with spacing h.
double wavenumber(std::size_t m, std::size_t n, double h) noexcept;

}  // namespace phaselab::fft
