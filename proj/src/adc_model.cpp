#include "dbfrx/adc_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dbfrx/error.hpp"

namespace dbfrx {
namespace {

void check_streams(const ChannelStreams& streams) {
    if (streams.empty()) throw ValidationError("capture needs at least one channel");
    const std::size_t len = streams.front().size();
    if (len == 0) throw ValidationError("capture streams are empty");
    for (const auto& s : streams) {
        if (s.size() != len) throw ValidationError("capture streams differ in length");
    }
}

Capture make_frames(const ChannelStreams& streams, const AdcConfig& cfg) {
    Capture cap;
    cap.fs_hz = cfg.fs_hz;
    cap.num_channels = static_cast<int>(streams.size());
    const std::size_t len = streams.front().size();
    const std::size_t num_frames = (len + kParallel - 1) / kParallel;
    cap.padded_samples = num_frames * kParallel - len;
    cap.frames.resize(num_frames);
    for (std::size_t f = 0; f < num_frames; ++f) {
        cap.frames[f].frame_index = f;
        cap.frames[f].channels.assign(streams.size(), {});
    }
    return cap;
}

void quantize_frame(Capture& cap, const ChannelStreams& streams, const AdcConfig& cfg, double gain,
                    std::size_t f) {
    const std::size_t len = streams.front().size();
    for (std::size_t c = 0; c < streams.size(); ++c) {
        auto& slots = cap.frames[f].channels[c];
        for (int p = 0; p < kParallel; ++p) {
            const std::size_t k = f * kParallel + static_cast<std::size_t>(p);
            slots[static_cast<std::size_t>(p)] = k < len ? quantize(streams[c][k] * gain, cfg) : AdcSample{0};
        }
    }
}

double frontend_gain(const AdcConfig& cfg, double carrier_hz) {
    if (cfg.frontend_curve.empty()) return 1.0;
    return std::pow(10.0, cfg.attenuation_db(carrier_hz) / 20.0);
}

}  // namespace

void AdcConfig::validate() const {
    if (!(fs_hz > 0.0)) throw ValidationError("adc fs_hz must be positive");
    if (bits != kAdcBits) throw ValidationError("adc bits must be 12");
    if (parallel_factor != kParallel) throw ValidationError("adc parallel_factor must be 8");
    for (std::size_t i = 1; i < frontend_curve.size(); ++i) {
        if (!(frontend_curve[i].frequency_hz > frontend_curve[i - 1].frequency_hz)) {
            throw ValidationError("frontend_curve frequencies must be strictly increasing");
        }
    }
}

double AdcConfig::attenuation_db(double freq_hz) const {
    if (frontend_curve.empty()) return 0.0;
    if (freq_hz <= frontend_curve.front().frequency_hz) return frontend_curve.front().attenuation_db;
    if (freq_hz >= frontend_curve.back().frequency_hz) return frontend_curve.back().attenuation_db;
    auto hi = std::upper_bound(frontend_curve.begin(), frontend_curve.end(), freq_hz,
                               [](double f, const FrontendPoint& p) { return f < p.frequency_hz; });
    auto lo = hi - 1;
    const double t = (freq_hz - lo->frequency_hz) / (hi->frequency_hz - lo->frequency_hz);
    return lo->attenuation_db + t * (hi->attenuation_db - lo->attenuation_db);
}

std::vector<AdcSample> Capture::channel(int c) const {
    std::vector<AdcSample> out;
    out.reserve(samples_per_channel());
    for (const auto& frame : frames) {
        const auto& slots = frame.channels.at(static_cast<std::size_t>(c));
        out.insert(out.end(), slots.begin(), slots.end());
    }
    return out;
}

AdcSample quantize(double value, const AdcConfig& /*cfg*/) {
    if (std::isnan(value)) throw std::domain_error("cannot quantize NaN");
    const double scaled = std::round(value * 2048.0);
    return static_cast<AdcSample>(std::clamp(scaled, double{kAdcMinCode}, double{kAdcMaxCode}));
}

Capture capture(const ChannelStreams& streams, const AdcConfig& cfg, double carrier_hz) {
    cfg.validate();
    check_streams(streams);
    Capture cap = make_frames(streams, cfg);
    const double gain = frontend_gain(cfg, carrier_hz);
    const auto num_frames = static_cast<std::ptrdiff_t>(cap.frames.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t f = 0; f < num_frames; ++f) {
        quantize_frame(cap, streams, cfg, gain, static_cast<std::size_t>(f));
    }
    return cap;
}

namespace serial {
Capture capture(const ChannelStreams& streams, const AdcConfig& cfg, double carrier_hz) {
    cfg.validate();
    check_streams(streams);
    Capture cap = make_frames(streams, cfg);
    const double gain = frontend_gain(cfg, carrier_hz);
    for (std::size_t f = 0; f < cap.frames.size(); ++f) quantize_frame(cap, streams, cfg, gain, f);
    return cap;
}
}  // namespace serial

}  // namespace dbfrx
