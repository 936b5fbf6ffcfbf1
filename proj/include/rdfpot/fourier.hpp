#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rdfpot/errors.hpp"
#include "rdfpot/grid.hpp"

namespace rdfpot {

namespace detail {

inline constexpr double pi = std::numbers::pi;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 FFT. Twiddles come from one trig table per
/// call so repeated transforms stay reentrant without shared state.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<std::complex<double>> tw(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = tw[k * stride];
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

/// FFT of arbitrary length: radix-2 when possible, else Bluestein's
/// chirp-z reduction to a power-of-two convolution.
inline void fft_any(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    if (is_pow2(n)) {
        fft_pow2(a, inverse);
        return;
    }
    const double sign = inverse ? 1.0 : -1.0;
    const std::size_t m = next_pow2(2 * n - 1);
    // chirp phases; j^2 mod 2n keeps the argument small and exact
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t q = (j * j) % (2 * n);
        const double ang = sign * pi * static_cast<double>(q) / static_cast<double>(n);
        chirp[j] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<std::complex<double>> fa(m, {0.0, 0.0}), fb(m, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) fa[j] = a[j] * chirp[j];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) fb[j] = fb[m - j] = std::conj(chirp[j]);
    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t j = 0; j < m; ++j) fa[j] *= fb[j];
    fft_pow2(fa, true);
    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * chirp[k];
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

/// Type-I discrete sine transform: s_l = sum_{j=1}^{m} x_j sin(pi j l/(m+1)),
/// computed through its odd extension with a length-2(m+1) FFT.
inline std::vector<double> dst_i(const std::vector<double>& x) {
    const std::size_t m = x.size();
    const std::size_t K = 2 * (m + 1);
    std::vector<std::complex<double>> y(K, {0.0, 0.0});
    for (std::size_t j = 1; j <= m; ++j) {
        y[j] = {x[j - 1], 0.0};
        y[K - j] = {-x[j - 1], 0.0};
    }
    fft_any(y, false);
    std::vector<double> s(m);
    for (std::size_t l = 1; l <= m; ++l) s[l - 1] = -0.5 * y[l].imag();
    return s;
}

} // namespace detail

/// Values of a radial 3D Fourier transform on the frequency ladder
/// omega_l = l/(2(m+1)dr), l = 1..m, of the originating grid, plus the
/// separately stored omega = 0 limit.
struct SpectralField {
    RadialGrid grid;
    std::vector<double> values;
    double zero_limit = 0.0;

    double domega() const { return 1.0 / (2.0 * static_cast<double>(grid.m + 1) * grid.dr); }
    double omega(int l) const { return static_cast<double>(l) * domega(); }
    double omega_star() const { return 1.0 / (2.0 * grid.dr); }
};

/// Trapezoidal sine-transform of a radial function sampled on the full
/// grid (f treated as zero beyond r_m):
///   fhat(omega_l) = (2 dr/omega_l) sum_j r_j f(r_j) sin(2 pi omega_l r_j).
/// The singular prefactor at omega = 0 is replaced by the analytic limit
/// 4 pi dr sum_j r_j^2 f(r_j), stored in zero_limit.
inline SpectralField radial_fft_forward(const Tabulated& f) {
    const std::size_t m = static_cast<std::size_t>(f.grid.m);
    if (f.values.size() != m)
        throw ConfigError("radial_fft_forward: table must cover the full grid");
    const double dr = f.grid.dr;
    std::vector<double> x(m);
    double sum0 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = f.grid.r_at(i);
        x[i] = r * f.values[i];
        sum0 += r * x[i];
    }
    std::vector<double> s = detail::dst_i(x);
    SpectralField out{f.grid, std::move(s), 4.0 * detail::pi * dr * sum0};
    const double domega = out.domega();
    for (std::size_t l = 1; l <= m; ++l)
        out.values[l - 1] *= 2.0 * dr / (static_cast<double>(l) * domega);
    return out;
}

/// Inverse of radial_fft_forward on the same frequency ladder:
///   f(r_j) = (2 domega/r_j) sum_l omega_l F(omega_l) sin(2 pi r_j omega_l).
/// The discrete pair is exactly inverse (sine-transform orthogonality).
inline Tabulated radial_fft_inverse(const SpectralField& F) {
    const std::size_t m = static_cast<std::size_t>(F.grid.m);
    if (F.values.size() != m)
        throw ConfigError("radial_fft_inverse: field must cover the frequency ladder");
    const double domega = F.domega();
    std::vector<double> y(m);
    for (std::size_t l = 1; l <= m; ++l)
        y[l - 1] = static_cast<double>(l) * domega * F.values[l - 1];
    std::vector<double> s = detail::dst_i(y);
    Tabulated out{F.grid, std::move(s), Kind::generic};
    for (std::size_t i = 0; i < m; ++i) out.values[i] *= 2.0 * domega / F.grid.r_at(i);
    return out;
}

} // namespace rdfpot
