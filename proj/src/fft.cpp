#include "aliasfft/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace aliasfft {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && std::has_single_bit(n); }

namespace {

// In-place radix-2, sign = -1 forward, +1 inverse. data.size() is a power of two.
void radix2(std::vector<cplx>& data, int sign) {
    const std::size_t n = data.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        // Twiddles computed directly per index; repeated multiplication drifts
        // for the larger transforms the dense baseline runs.
        std::vector<cplx> tw(half);
        for (std::size_t k = 0; k < half; ++k)
            tw[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(k) / double(len));
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + half] * tw[k];
                data[i + k] = u + v;
                data[i + k + half] = u - v;
            }
        }
    }
}

std::vector<cplx> bluestein(std::span<const cplx> in, int sign) {
    const std::size_t n = in.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    // chirp[k] = exp(sign·πi·k²/n); k² reduced mod 2n to keep the angle small.
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = (k * k) % (2 * n);
        chirp[k] = std::polar(1.0, sign * std::numbers::pi * double(k2) / double(n));
    }

    std::vector<cplx> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

    radix2(a, -1);
    radix2(b, -1);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    radix2(a, +1);

    std::vector<cplx> out(n);
    const double scale = 1.0 / double(m);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
    return out;
}

std::vector<cplx> transform(std::span<const cplx> in, int sign) {
    if (in.size() <= 1) return {in.begin(), in.end()};
    if (is_power_of_two(in.size())) {
        std::vector<cplx> data(in.begin(), in.end());
        radix2(data, sign);
        return data;
    }
    return bluestein(in, sign);
}

}  // namespace

std::vector<cplx> fft(std::span<const cplx> in) { return transform(in, -1); }

std::vector<cplx> ifft(std::span<const cplx> in) { return transform(in, +1); }

}  // namespace aliasfft
