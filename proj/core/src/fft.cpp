#include "scatlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace scatlab::fft {

namespace {

std::mutex plan_mutex;

fftw_plan dst_plan(int m) {
    static std::map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<double> buf(m);
    fftw_plan p = fftw_plan_r2r_1d(m, buf.data(), buf.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    cache.emplace(m, p);
    return p;
}

fftw_plan dct_plan(int n) {  // REDFT00 of length n
    static std::map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> buf(n);
    fftw_plan p = fftw_plan_r2r_1d(n, buf.data(), buf.data(), FFTW_REDFT00, FFTW_ESTIMATE);
    cache.emplace(n, p);
    return p;
}

fftw_plan cfft_plan(int n, bool forward) {
    static std::map<std::pair<int, bool>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, forward);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<fftw_complex> buf(n);
    fftw_plan p = fftw_plan_dft_1d(n, buf.data(), buf.data(),
                                   forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    cache.emplace(key, p);
    return p;
}

}  // namespace

void dst_i(const double* in, double* out, int m) {
    if (m <= 0) throw std::invalid_argument("dst_i: length must be positive");
    fftw_plan p = dst_plan(m);
    if (in == out) {
        fftw_execute_r2r(p, const_cast<double*>(in), out);
    } else {
        std::memcpy(out, in, sizeof(double) * m);
        fftw_execute_r2r(p, out, out);
    }
}

void cosine_eval(const double* b, double* out, int m) {
    // REDFT00 of length N: Y_j = X_0 + (-1)^j X_{N-1} + 2 sum_{k=1}^{N-2} X_k cos(pi j k/(N-1)).
    // With X_0 = X_{N-1} = 0 and X_k = b[k-1]/2 this is exactly the cosine series at j = 0..N-1.
    const int N = m + 2;
    std::vector<double> buf(N, 0.0);
    for (int k = 1; k <= m; ++k) buf[k] = 0.5 * b[k - 1];
    fftw_plan p = dct_plan(N);
    fftw_execute_r2r(p, buf.data(), buf.data());
    for (int j = 1; j <= m + 1; ++j) out[j - 1] = buf[j];
}

void cfft(std::complex<double>* data, int n, bool forward) {
    fftw_plan p = cfft_plan(n, forward);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

}  // namespace scatlab::fft
