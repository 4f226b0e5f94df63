#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dbfrx/array_signal.hpp"

namespace dbfrx {

inline constexpr int kAdcBits = 12;
inline constexpr int kParallel = 8;
inline constexpr int kAdcMaxCode = 2047;
inline constexpr int kAdcMinCode = -2048;

struct FrontendPoint {
    double frequency_hz;
    double attenuation_db;
};

/// Quad-channel 12-bit converter in four-channel mode. Full scale is 1.0.
struct AdcConfig {
    double fs_hz = 1.6e9;
    int bits = kAdcBits;
    int parallel_factor = kParallel;
    /// Optional analog-bandwidth response in dB (negative is loss), sorted by frequency.
    /// Empty means flat.
    std::vector<FrontendPoint> frontend_curve;

    void validate() const;
    double frame_clock_hz() const { return fs_hz / parallel_factor; }
    /// Response in dB at `freq_hz`, linearly interpolated and held flat outside the table.
    double attenuation_db(double freq_hz) const;
};

using AdcSample = std::int16_t;

/// One frame-clock tick: P parallel samples for each channel.
struct ChannelFrame {
    std::uint64_t frame_index = 0;
    std::vector<std::array<AdcSample, kParallel>> channels;
};

struct Capture {
    double fs_hz = 0.0;
    int num_channels = 0;
    std::vector<ChannelFrame> frames;
    /// Zero samples appended per channel to complete the last frame.
    std::size_t padded_samples = 0;

    std::size_t samples_per_channel() const { return frames.size() * kParallel; }
    /// Contiguous view of one channel's codes (including padding).
    std::vector<AdcSample> channel(int c) const;
};

/// Mid-tread quantizer: round-half-away(value * 2048), clamped to [-2048, 2047].
/// Throws std::domain_error for NaN.
AdcSample quantize(double value, const AdcConfig& cfg = {});

/// Quantizes equal-length streams into frames. `carrier_hz` selects the front-end
/// attenuation; it is ignored when the config has no curve.
Capture capture(const ChannelStreams& streams, const AdcConfig& cfg, double carrier_hz = 0.0);

namespace serial {
Capture capture(const ChannelStreams& streams, const AdcConfig& cfg, double carrier_hz = 0.0);
}

}  // namespace dbfrx
