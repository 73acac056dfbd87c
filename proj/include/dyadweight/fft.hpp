#pragma once

#include <bit>
#include <complex>
#include <numbers>
#include <vector>

#include "dyadweight/errors.hpp"

namespace dyadweight {

// In-place iterative radix-2 FFT. Size must be a power of two.
inline void fft(std::vector<std::complex<double>>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw size_error("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= double(n);
}

// out[i] = sum_d kernel[d] * signal[(i + d) mod n]  (circular cross-correlation)
inline std::vector<double> circular_correlate(const std::vector<double>& signal,
                                              const std::vector<double>& kernel) {
    const std::size_t n = signal.size();
    if (kernel.size() != n) throw size_error("circular_correlate: length mismatch");
    std::vector<std::complex<double>> fs(n), fk(n);
    for (std::size_t i = 0; i < n; ++i) { fs[i] = signal[i]; fk[i] = kernel[i]; }
    fft(fs);
    fft(fk);
    for (std::size_t i = 0; i < n; ++i) fs[i] = fs[i] * std::conj(fk[i]);
    fft(fs, true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fs[i].real();
    return out;
}

// out[i] = sum_j kernel[i - j] * f[j], kernel given for offsets
// -(n-1)..(n-1) as kernel[offset + n - 1]; computed through a 2n-point FFT.
class ToeplitzOperator {
  public:
    ToeplitzOperator(std::vector<double> kernel_by_offset, std::size_t n) : n_(n) {
        if (kernel_by_offset.size() != 2 * n - 1)
            throw size_error("ToeplitzOperator: kernel must have 2n-1 entries");
        m_ = std::bit_ceil(2 * n);
        spectrum_.assign(m_, {0.0, 0.0});
        // embed as circulant of size m_: c[k] = kernel[k] for k = 0..n-1,
        // c[m_-k] = kernel[-k] for k = 1..n-1
        for (std::size_t k = 0; k < n; ++k) spectrum_[k] = kernel_by_offset[k + n - 1];
        for (std::size_t k = 1; k < n; ++k) spectrum_[m_ - k] = kernel_by_offset[n - 1 - k];
        fft(spectrum_);
    }

    std::vector<double> apply(const std::vector<double>& f) const {
        if (f.size() != n_) throw size_error("ToeplitzOperator: input length mismatch");
        std::vector<std::complex<double>> buf(m_, {0.0, 0.0});
        for (std::size_t i = 0; i < n_; ++i) buf[i] = f[i];
        fft(buf);
        for (std::size_t i = 0; i < m_; ++i) buf[i] *= spectrum_[i];
        fft(buf, true);
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = buf[i].real();
        return out;
    }

  private:
    std::size_t n_, m_;
    std::vector<std::complex<double>> spectrum_;
};

} // namespace dyadweight
