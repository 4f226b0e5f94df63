#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "dbfrx/adc_model.hpp"
#include "dbfrx/array_signal.hpp"
#include "dbfrx/fixed_point.hpp"
#include "dbfrx/frequency_plan.hpp"

namespace dbfrx {

inline constexpr int kWeightBits = 12;
inline constexpr double kWeightScale = 2047.0;
inline constexpr int kBeamformWidth = 20;

/// Hardware weight register contents for one channel, Q1.11. The beamformer
/// multiplies the real IF sample by (re + j*im) as stored.
struct ComplexWeight {
    std::int16_t re = 0;
    std::int16_t im = 0;
    friend bool operator==(const ComplexWeight&, const ComplexWeight&) = default;
};

struct ComplexWeightSet {
    std::vector<ComplexWeight> weights;

    std::size_t size() const { return weights.size(); }
    void validate() const;
    /// Weights as complex doubles, value / 2047.
    std::vector<std::complex<double>> dequantized() const;
};

/// 20-bit slice of the beamformer accumulator.
struct TruncationWindow {
    int width = kBeamformWidth;
    int lsb_offset = 0;
    int accumulator_width = 0;

    /// 12 + 12 + ceil(log2 N) + 1.
    static int accumulator_width_for(int num_channels);
    /// MSB-aligned default window for N channels.
    static TruncationWindow msb_aligned(int num_channels);
    /// Explicit offset; throws ValidationError when the slice exceeds the accumulator.
    static TruncationWindow with_offset(int num_channels, int lsb_offset);

    void validate() const;
};

/// P complex samples at a declared signed width.
struct IqFrame {
    std::uint64_t frame_index = 0;
    int bit_width = 0;
    std::array<std::int64_t, kParallel> i{};
    std::array<std::int64_t, kParallel> q{};

    bool in_range() const;
    friend bool operator==(const IqFrame&, const IqFrame&) = default;
};

struct BeamformStats {
    /// Samples whose discarded accumulator MSBs were not a sign extension.
    std::uint64_t window_overflows = 0;
    OpCounts ops;
};

/// round(2047 * phasor) per component, clamped to 12-bit signed.
ComplexWeightSet quantize_weights(const SteeringVector& sv);

/// Register weights that coherently combine a plane wave from `theta_rad`.
/// For direct-orientation sampling these are the conjugated steering phasors
/// exp(+j w_c tau_n); for mirrored zones the spectrum is inverted and the
/// steering phasors are used as-is.
ComplexWeightSet steering_weights(const ArrayConfig& cfg, double theta_rad,
                                  SpectrumOrientation orientation = SpectrumOrientation::direct);

/// Unit weights (2047, 0) for every channel.
ComplexWeightSet unit_weights(int num_channels);

IqFrame beamform_frame(const ChannelFrame& frame, const ComplexWeightSet& w, const TruncationWindow& win,
                       BeamformStats* stats = nullptr);

/// Whole-capture beamforming, frames distributed over OpenMP threads.
std::vector<IqFrame> beamform_frames(const Capture& cap, const ComplexWeightSet& w, const TruncationWindow& win,
                                     BeamformStats* stats = nullptr);

namespace serial {
/// Reference kernel; counts every real multiply and add it executes.
std::vector<IqFrame> beamform_frames(const Capture& cap, const ComplexWeightSet& w, const TruncationWindow& win,
                                     BeamformStats* stats = nullptr);
}

}  // namespace dbfrx
