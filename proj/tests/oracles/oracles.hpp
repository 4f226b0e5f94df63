#pragma once

// Independent reference models used only by the tests. They share no code with the
// library beyond its plain data types.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "dbfrx/adc_model.hpp"
#include "dbfrx/dbf_core.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_int;
using cld = std::complex<long double>;
constexpr long double kPi = std::numbers::pi_v<long double>;

inline big floor_div_pow2(const big& v, int shift) {
    const big d = big(1) << shift;
    big q = v / d;
    if (v < 0 && q * d != v) q -= 1;
    return q;
}

inline big wrap(const big& v, int bits) {
    const big m = big(1) << bits;
    big r = v % m;
    if (r < 0) r += m;
    if (r >= m / 2) r -= m;
    return r;
}

inline bool fits(const big& v, int bits) {
    const big lim = big(1) << (bits - 1);
    return v >= -lim && v < lim;
}

struct Sliced {
    std::int64_t value;
    bool overflow;
};

/// Bit-slice of an exact accumulator: floor(v / 2^lsb) wrapped to `width` bits.
inline Sliced slice(const big& acc, int lsb, int width) {
    const big s = floor_div_pow2(acc, lsb);
    return {wrap(s, width).convert_to<std::int64_t>(), !fits(s, width)};
}

struct BeamSample {
    std::int64_t i, q;
    std::uint64_t overflows;
};

/// Arbitrary-precision weighted sum for one parallel slot of a frame.
inline BeamSample beamform_slot(const dbfrx::ChannelFrame& frame, const dbfrx::ComplexWeightSet& w, int slot,
                                int lsb, int width) {
    big re = 0, im = 0;
    for (std::size_t c = 0; c < w.size(); ++c) {
        const big x = frame.channels[c][static_cast<std::size_t>(slot)];
        re += x * big(w.weights[c].re);
        im += x * big(w.weights[c].im);
    }
    const auto a = slice(re, lsb, width);
    const auto b = slice(im, lsb, width);
    return {a.value, b.value, std::uint64_t(a.overflow) + std::uint64_t(b.overflow)};
}

/// Complex mix by exp(-j*pi*n/2) through long-double trigonometry, rounded back to
/// integers and saturated to `width` bits.
inline std::pair<std::int64_t, std::int64_t> explicit_mix(std::int64_t re, std::int64_t im, std::uint64_t n, int width,
                                                         std::uint64_t* saturations = nullptr) {
    const cld lo = std::polar(1.0L, -kPi * static_cast<long double>(n % 4) / 2.0L);
    const cld y = cld(static_cast<long double>(re), static_cast<long double>(im)) * lo;
    const auto hi = (std::int64_t{1} << (width - 1)) - 1;
    const auto lo_lim = -(std::int64_t{1} << (width - 1));
    auto sat = [&](long double v) {
        auto r = static_cast<std::int64_t>(std::llround(v));
        if (r > hi) {
            if (saturations) ++*saturations;
            r = hi;
        }
        if (r < lo_lim) r = lo_lim;
        return r;
    };
    return {sat(y.real()), sat(y.imag())};
}

/// One-shot direct convolution from zero initial state, exact.
inline std::vector<big> convolve(const std::vector<std::int64_t>& x, const std::vector<std::int32_t>& h) {
    std::vector<big> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        big acc = 0;
        for (std::size_t t = 0; t < h.size() && t <= k; ++t) acc += big(h[t]) * big(x[k - t]);
        y[k] = acc;
    }
    return y;
}

/// |H(f)| in dB of real taps by direct DTFT summation.
template <typename T>
long double dtft_db(const std::vector<T>& h, long double f_hz, long double fs_hz) {
    cld acc = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        acc += static_cast<long double>(h[k]) * std::polar(1.0L, -2.0L * kPi * f_hz * static_cast<long double>(k) / fs_hz);
    }
    return 20.0L * std::log10(std::abs(acc));
}

/// 1-based Nyquist zone containing frequency f.
inline long long zone_of(long double f_hz, long double fs_hz) {
    return static_cast<long long>(std::floor(f_hz / (fs_hz / 2.0L))) + 1;
}

inline bool band_in_single_zone(long double lo_hz, long double hi_hz, long double fs_hz) {
    return zone_of(lo_hz, fs_hz) == zone_of(hi_hz, fs_hz) &&
           zone_of(lo_hz, fs_hz) == zone_of(std::nextafter(hi_hz, lo_hz), fs_hz);
}

/// round(2047 * exp(j*phase)) components in long double.
inline dbfrx::ComplexWeight weight(long double phase) {
    return {static_cast<std::int16_t>(std::llround(2047.0L * std::cos(phase))),
            static_cast<std::int16_t>(std::llround(2047.0L * std::sin(phase)))};
}

/// Array factor magnitude in dB for complex weights w.
inline long double array_factor_db(const std::vector<cld>& w, long double spacing_m, long double speed,
                                   long double fc_hz, long double theta) {
    cld acc = 0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        const long double tau = static_cast<long double>(n) * spacing_m * std::sin(theta) / speed;
        acc += w[n] * std::polar(1.0L, -2.0L * kPi * fc_hz * tau);
    }
    return 20.0L * std::log10(std::abs(acc));
}

/// Ideal quantization SNR of a full-scale sine.
inline double ideal_sqnr_db(int bits) { return 6.02 * bits + 1.76; }

/// Mid-tread round-half-away quantizer written out independently.
inline int quantize_code(long double v) {
    const long double s = v * 2048.0L;
    long long r = s >= 0 ? static_cast<long long>(std::floor(s + 0.5L)) : -static_cast<long long>(std::floor(-s + 0.5L));
    if (r > 2047) r = 2047;
    if (r < -2048) r = -2048;
    return static_cast<int>(r);
}

}  // namespace oracle
