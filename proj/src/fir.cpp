#include "dbfrx/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dbfrx/error.hpp"

namespace dbfrx {
namespace {

double window_value(FirWindow window, int k, int num_taps) {
    if (num_taps == 1) return 1.0;
    const double x = 2.0 * std::numbers::pi * k / (num_taps - 1);
    switch (window) {
        case FirWindow::hamming:
            return 0.54 - 0.46 * std::cos(x);
        case FirWindow::blackman:
            return 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
        case FirWindow::rectangular:
            return 1.0;
    }
    return 1.0;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

bool is_symmetric(std::span<const double> c) {
    const double tol = 1e-12 * std::abs(*std::max_element(c.begin(), c.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
    }));
    for (std::size_t k = 0; k < c.size() / 2; ++k) {
        if (std::abs(c[k] - c[c.size() - 1 - k]) > tol) return false;
    }
    return true;
}

double max_abs(std::span<const double> c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

std::int64_t coeff_limit(int coeff_bits) { return signed_max(coeff_bits); }

void check_stream_widths(const std::vector<IqFrame>& in) {
    for (const auto& f : in) {
        if (f.bit_width < 2 || f.bit_width > 40) throw ValidationError("fir input width out of range");
    }
}

// y[n] = sum_k h[k] x[n-k] over a history-extended buffer where x[n] sits at
// offset (taps - 1) + n.
template <bool kCount>
std::int64_t convolve_at(const std::vector<std::int32_t>& h, const std::int64_t* x_end, OpCounts& ops) {
    std::int64_t acc = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        acc += static_cast<std::int64_t>(h[k]) * *(x_end - static_cast<std::ptrdiff_t>(k));
        if constexpr (kCount) {
            ++ops.multiplies;
            if (k > 0) ++ops.additions;
        }
    }
    return acc;
}

}  // namespace

const char* to_string(FirWindow w) {
    switch (w) {
        case FirWindow::hamming:
            return "hamming";
        case FirWindow::blackman:
            return "blackman";
        case FirWindow::rectangular:
            return "rectangular";
    }
    return "?";
}

std::vector<double> design_lowpass(int num_taps, double cutoff_hz, double fs_hz, FirWindow window) {
    if (num_taps < 1) throw std::domain_error("num_taps must be >= 1");
    if (!(fs_hz > 0.0)) throw std::domain_error("sample rate must be positive");
    if (!(cutoff_hz > 0.0 && cutoff_hz < fs_hz / 2.0)) throw std::domain_error("cutoff must be in (0, fs/2)");

    const double fc = cutoff_hz / fs_hz;
    const double center = (num_taps - 1) / 2.0;
    std::vector<double> h(static_cast<std::size_t>(num_taps));
    for (int k = 0; k < num_taps; ++k) {
        h[static_cast<std::size_t>(k)] = 2.0 * fc * sinc(2.0 * fc * (k - center)) * window_value(window, k, num_taps);
    }
    // Enforce exact symmetry before normalizing.
    for (int k = 0; k < num_taps / 2; ++k) h[static_cast<std::size_t>(num_taps - 1 - k)] = h[static_cast<std::size_t>(k)];
    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    for (double& v : h) v /= sum;
    return h;
}

std::vector<double> scale_coeffs(std::span<const double> coeffs, int coeff_bits) {
    if (coeffs.empty()) throw std::domain_error("coefficient list is empty");
    const double peak = max_abs(coeffs);
    if (peak == 0.0) throw std::domain_error("coefficients are all zero");
    const double scale = static_cast<double>(coeff_limit(coeff_bits)) / peak;
    std::vector<double> out(coeffs.begin(), coeffs.end());
    for (double& v : out) v *= scale;
    return out;
}

std::vector<std::int32_t> quantize_coeffs(std::span<const double> coeffs, int coeff_bits) {
    if (coeff_bits < 2 || coeff_bits > 24) throw std::domain_error("coeff_bits must be in [2, 24]");
    const std::vector<double> scaled = scale_coeffs(coeffs, coeff_bits);
    const auto limit = coeff_limit(coeff_bits);
    std::vector<std::int32_t> out(scaled.size());
    for (std::size_t k = 0; k < scaled.size(); ++k) {
        out[k] = static_cast<std::int32_t>(std::clamp<double>(std::round(scaled[k]), -static_cast<double>(limit) - 1,
                                                              static_cast<double>(limit)));
    }
    if (is_symmetric(coeffs)) {
        for (std::size_t k = 0; k < out.size() / 2; ++k) out[out.size() - 1 - k] = out[k];
    }
    return out;
}

FirSpec FirSpec::design(double fs_hz, double cutoff_hz, int num_taps, int coeff_bits, FirWindow window) {
    FirSpec spec;
    spec.num_taps = num_taps;
    spec.coeff_bits = coeff_bits;
    spec.cutoff_hz = cutoff_hz > 0.0 ? cutoff_hz : fs_hz / 8.0;
    spec.design_window = window;
    const auto h = design_lowpass(num_taps, spec.cutoff_hz, fs_hz, window);
    spec.coeffs_q = quantize_coeffs(h, coeff_bits);
    return spec;
}

FirSpec FirSpec::from_coefficients(std::vector<std::int32_t> coeffs, int coeff_bits) {
    FirSpec spec;
    spec.num_taps = static_cast<int>(coeffs.size());
    spec.coeff_bits = coeff_bits;
    spec.cutoff_hz = 0.0;
    spec.coeffs_q = std::move(coeffs);
    spec.validate();
    return spec;
}

void FirSpec::validate() const {
    if (num_taps < 1) throw ValidationError("num_taps must be >= 1");
    if (coeff_bits < 2 || coeff_bits > 24) throw ValidationError("coeff_bits must be in [2, 24]");
    if (coeffs_q.size() != static_cast<std::size_t>(num_taps)) {
        throw ValidationError("expected " + std::to_string(num_taps) + " coefficients, got " +
                              std::to_string(coeffs_q.size()));
    }
    for (auto c : coeffs_q) {
        if (!fits_signed(c, coeff_bits)) throw ValidationError("coefficient outside signed coeff_bits range");
    }
}

int FirSpec::growth_bits() const { return coeff_bits + ceil_log2(static_cast<std::uint64_t>(num_taps)); }

std::int64_t FirSpec::dc_gain() const {
    return std::accumulate(coeffs_q.begin(), coeffs_q.end(), std::int64_t{0});
}

FirState FirState::zeros(const FirSpec& spec) {
    const auto len = static_cast<std::size_t>(spec.num_taps - 1);
    return FirState{std::vector<std::int64_t>(len, 0), std::vector<std::int64_t>(len, 0)};
}

IqFrame filter_frame(FirState& state, const IqFrame& in, const FirSpec& spec, FirStats* stats) {
    spec.validate();
    const auto hist = static_cast<std::size_t>(spec.num_taps - 1);
    if (state.i_history.size() != hist || state.q_history.size() != hist) {
        throw ValidationError("fir state does not match the filter length");
    }
    IqFrame out;
    out.frame_index = in.frame_index;
    out.bit_width = in.bit_width + spec.growth_bits();

    std::vector<std::int64_t> xi(state.i_history);
    std::vector<std::int64_t> xq(state.q_history);
    xi.insert(xi.end(), in.i.begin(), in.i.end());
    xq.insert(xq.end(), in.q.begin(), in.q.end());

    FirStats local;
    for (std::size_t p = 0; p < kParallel; ++p) {
        out.i[p] = convolve_at<true>(spec.coeffs_q, xi.data() + hist + p, local.ops);
        out.q[p] = convolve_at<true>(spec.coeffs_q, xq.data() + hist + p, local.ops);
        if (!fits_signed(out.i[p], out.bit_width)) ++local.overflows;
        if (!fits_signed(out.q[p], out.bit_width)) ++local.overflows;
    }
    std::copy(xi.end() - static_cast<std::ptrdiff_t>(hist), xi.end(), state.i_history.begin());
    std::copy(xq.end() - static_cast<std::ptrdiff_t>(hist), xq.end(), state.q_history.begin());
    if (stats) {
        stats->overflows += local.overflows;
        stats->ops += local.ops;
    }
    return out;
}

std::vector<IqFrame> filter_stream(const std::vector<IqFrame>& in, const FirSpec& spec, FirStats* stats) {
    spec.validate();
    check_stream_widths(in);
    const auto hist = static_cast<std::size_t>(spec.num_taps - 1);
    const std::size_t total = in.size() * kParallel;
    std::vector<std::int64_t> xi(hist + total, 0);
    std::vector<std::int64_t> xq(hist + total, 0);
    for (std::size_t f = 0; f < in.size(); ++f) {
        std::copy(in[f].i.begin(), in[f].i.end(), xi.begin() + static_cast<std::ptrdiff_t>(hist + f * kParallel));
        std::copy(in[f].q.begin(), in[f].q.end(), xq.begin() + static_cast<std::ptrdiff_t>(hist + f * kParallel));
    }

    std::vector<IqFrame> out(in.size());
    std::uint64_t overflows = 0;
    const auto num_frames = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) reduction(+ : overflows)
    for (std::ptrdiff_t f = 0; f < num_frames; ++f) {
        const auto fu = static_cast<std::size_t>(f);
        IqFrame& o = out[fu];
        o.frame_index = in[fu].frame_index;
        o.bit_width = in[fu].bit_width + spec.growth_bits();
        OpCounts unused;
        for (std::size_t p = 0; p < kParallel; ++p) {
            const std::size_t n = hist + fu * kParallel + p;
            o.i[p] = convolve_at<false>(spec.coeffs_q, xi.data() + n, unused);
            o.q[p] = convolve_at<false>(spec.coeffs_q, xq.data() + n, unused);
            if (!fits_signed(o.i[p], o.bit_width)) ++overflows;
            if (!fits_signed(o.q[p], o.bit_width)) ++overflows;
        }
    }
    if (stats) {
        stats->overflows += overflows;
        const std::uint64_t taps = static_cast<std::uint64_t>(spec.num_taps);
        stats->ops.multiplies += total * 2 * taps;
        stats->ops.additions += total * 2 * (taps - 1);
    }
    return out;
}

namespace serial {
std::vector<IqFrame> filter_stream(const std::vector<IqFrame>& in, const FirSpec& spec, FirStats* stats) {
    check_stream_widths(in);
    FirState state = FirState::zeros(spec);
    std::vector<IqFrame> out;
    out.reserve(in.size());
    for (const auto& frame : in) out.push_back(filter_frame(state, frame, spec, stats));
    return out;
}
}  // namespace serial

}  // namespace dbfrx
