#pragma once

#include <complex>
#include <vector>

// Thin wrappers around FFTW r2r/c2c transforms with cached plans.
// All plans use FFTW_ESTIMATE so planning is deterministic.

namespace scatlab::fft {

// DST-I of length m (FFTW RODFT00, unnormalized):
//   out[k] = 2 * sum_{j=0}^{m-1} in[j] * sin(pi*(j+1)*(k+1)/(m+1))
void dst_i(const double* in, double* out, int m);

// Evaluates the cosine series sum_{k=1}^{m} b[k-1] * cos(pi*j*k/(m+1))
// at j = 1..m+1 (out has m+1 entries, last one at the Dirichlet wall).
void cosine_eval(const double* b, double* out, int m);

// In-place complex FFT of length n (forward: negative exponent).
void cfft(std::complex<double>* data, int n, bool forward);

}  // namespace scatlab::fft
