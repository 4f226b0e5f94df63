#include "dbfrx/dbf_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dbfrx/error.hpp"

namespace dbfrx {
namespace {

std::int16_t quantize_weight_component(double v) {
    const double scaled = std::round(v * kWeightScale);
    return static_cast<std::int16_t>(std::clamp(scaled, double{signed_min(kWeightBits)},
                                                double{signed_max(kWeightBits)}));
}

void check_shapes(std::size_t frame_channels, const ComplexWeightSet& w) {
    if (frame_channels != w.size()) {
        throw ValidationError("frame has " + std::to_string(frame_channels) + " channels but " +
                              std::to_string(w.size()) + " weights were supplied");
    }
}

template <bool kCount>
IqFrame beamform_kernel(const ChannelFrame& frame, const ComplexWeightSet& w, const TruncationWindow& win,
                        BeamformStats& stats) {
    IqFrame out;
    out.frame_index = frame.frame_index;
    out.bit_width = win.width;
    const std::size_t n = w.size();
    for (int p = 0; p < kParallel; ++p) {
        std::int64_t acc_re = 0;
        std::int64_t acc_im = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const std::int64_t s = frame.channels[c][static_cast<std::size_t>(p)];
            acc_re += s * w.weights[c].re;
            acc_im += s * w.weights[c].im;
            if constexpr (kCount) {
                stats.ops.multiplies += 2;
                if (c > 0) stats.ops.additions += 2;
            }
        }
        const std::int64_t re = acc_re >> win.lsb_offset;
        const std::int64_t im = acc_im >> win.lsb_offset;
        if (!fits_signed(re, win.width)) ++stats.window_overflows;
        if (!fits_signed(im, win.width)) ++stats.window_overflows;
        out.i[static_cast<std::size_t>(p)] = wrap_signed(re, win.width);
        out.q[static_cast<std::size_t>(p)] = wrap_signed(im, win.width);
    }
    return out;
}

void check_inputs(const Capture& cap, const ComplexWeightSet& w, const TruncationWindow& win) {
    w.validate();
    win.validate();
    check_shapes(static_cast<std::size_t>(cap.num_channels), w);
}

}  // namespace

void ComplexWeightSet::validate() const {
    if (weights.empty()) throw ValidationError("weight set is empty");
    for (const auto& wt : weights) {
        if (!fits_signed(wt.re, kWeightBits) || !fits_signed(wt.im, kWeightBits)) {
            throw ValidationError("weight component outside 12-bit signed range");
        }
    }
}

std::vector<std::complex<double>> ComplexWeightSet::dequantized() const {
    std::vector<std::complex<double>> out;
    out.reserve(weights.size());
    for (const auto& wt : weights) out.emplace_back(wt.re / kWeightScale, wt.im / kWeightScale);
    return out;
}

int TruncationWindow::accumulator_width_for(int num_channels) {
    if (num_channels < 1) throw ValidationError("channel count must be >= 1");
    return kAdcBits + kWeightBits + ceil_log2(static_cast<std::uint64_t>(num_channels)) + 1;
}

TruncationWindow TruncationWindow::msb_aligned(int num_channels) {
    const int acc = accumulator_width_for(num_channels);
    return TruncationWindow{kBeamformWidth, acc - kBeamformWidth, acc};
}

TruncationWindow TruncationWindow::with_offset(int num_channels, int lsb_offset) {
    TruncationWindow win{kBeamformWidth, lsb_offset, accumulator_width_for(num_channels)};
    win.validate();
    return win;
}

void TruncationWindow::validate() const {
    if (width != kBeamformWidth) throw ValidationError("truncation window width must be 20");
    if (lsb_offset < 0) throw ValidationError("lsb_offset must be >= 0");
    if (lsb_offset + width > accumulator_width) {
        throw ValidationError("lsb_offset " + std::to_string(lsb_offset) + " + 20 exceeds accumulator width " +
                              std::to_string(accumulator_width));
    }
}

bool IqFrame::in_range() const {
    return std::all_of(i.begin(), i.end(), [&](std::int64_t v) { return fits_signed(v, bit_width); }) &&
           std::all_of(q.begin(), q.end(), [&](std::int64_t v) { return fits_signed(v, bit_width); });
}

ComplexWeightSet quantize_weights(const SteeringVector& sv) {
    ComplexWeightSet out;
    out.weights.reserve(sv.size());
    for (const auto& p : sv.phasors) {
        out.weights.push_back({quantize_weight_component(p.real()), quantize_weight_component(p.imag())});
    }
    return out;
}

ComplexWeightSet steering_weights(const ArrayConfig& cfg, double theta_rad, SpectrumOrientation orientation) {
    const SteeringVector sv = steering_vector(cfg, theta_rad);
    return quantize_weights(orientation == SpectrumOrientation::direct ? sv.conjugate() : sv);
}

ComplexWeightSet unit_weights(int num_channels) {
    if (num_channels < 1) throw ValidationError("channel count must be >= 1");
    return ComplexWeightSet{std::vector<ComplexWeight>(static_cast<std::size_t>(num_channels), {2047, 0})};
}

IqFrame beamform_frame(const ChannelFrame& frame, const ComplexWeightSet& w, const TruncationWindow& win,
                       BeamformStats* stats) {
    w.validate();
    win.validate();
    check_shapes(frame.channels.size(), w);
    BeamformStats local;
    IqFrame out = beamform_kernel<true>(frame, w, win, local);
    if (stats) {
        stats->window_overflows += local.window_overflows;
        stats->ops += local.ops;
    }
    return out;
}

std::vector<IqFrame> beamform_frames(const Capture& cap, const ComplexWeightSet& w, const TruncationWindow& win,
                                     BeamformStats* stats) {
    check_inputs(cap, w, win);
    std::vector<IqFrame> out(cap.frames.size());
    std::uint64_t overflows = 0;
    const auto num_frames = static_cast<std::ptrdiff_t>(cap.frames.size());
#pragma omp parallel for schedule(static) reduction(+ : overflows)
    for (std::ptrdiff_t f = 0; f < num_frames; ++f) {
        BeamformStats local;
        out[static_cast<std::size_t>(f)] = beamform_kernel<false>(cap.frames[static_cast<std::size_t>(f)], w, win, local);
        overflows += local.window_overflows;
    }
    if (stats) {
        stats->window_overflows += overflows;
        // Same dataflow as the reference kernel; the count is fixed by the shape.
        const std::uint64_t n = w.size();
        stats->ops.multiplies += cap.frames.size() * kParallel * n * 2;
        stats->ops.additions += cap.frames.size() * kParallel * (n - 1) * 2;
    }
    return out;
}

namespace serial {
std::vector<IqFrame> beamform_frames(const Capture& cap, const ComplexWeightSet& w, const TruncationWindow& win,
                                     BeamformStats* stats) {
    check_inputs(cap, w, win);
    BeamformStats local;
    std::vector<IqFrame> out;
    out.reserve(cap.frames.size());
    for (const auto& frame : cap.frames) out.push_back(beamform_kernel<true>(frame, w, win, local));
    if (stats) {
        stats->window_overflows += local.window_overflows;
        stats->ops += local.ops;
    }
    return out;
}
}  // namespace serial

}  // namespace dbfrx
