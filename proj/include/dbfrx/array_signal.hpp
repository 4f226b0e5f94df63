#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dbfrx {

inline constexpr double kSpeedOfLight = 2.99792458e8;

/// Uniform linear array geometry plus the carrier the array is steered for.
struct ArrayConfig {
    int num_elements = 4;
    double spacing_m = 0.0;
    double wave_speed_mps = kSpeedOfLight;
    double carrier_hz = 0.0;

    void validate() const;
    double wavelength_m() const { return wave_speed_mps / carrier_hz; }

    /// Array with half-wavelength spacing at `carrier_hz`.
    static ArrayConfig half_wavelength(int num_elements, double carrier_hz,
                                       double wave_speed_mps = kSpeedOfLight);
};

/// True when `bandwidth_hz / carrier_hz < 0.01`, i.e. delays can be treated as phase shifts.
bool is_narrowband(double bandwidth_hz, double carrier_hz);

enum class SignalKind { tone, linear_fm, iq_two_tone };

/// How `noise_power_db` is referenced.
///  - signal_amplitude: 0 dB is a noise variance equal to amplitude^2 (unit
///    variance against a unit-amplitude signal, scaled with the signal).
///  - full_scale: 0 dB is unit variance in ADC full-scale units.
enum class NoiseReference { signal_amplitude, full_scale };

struct TestSignalSpec {
    SignalKind kind = SignalKind::tone;
    double carrier_hz = 0.0;
    double arrival_angle_rad = 0.0;
    double amplitude = 0.5;

    // linear_fm: instantaneous frequency carrier + deviation*sin(2*pi*base_tone*t)
    double base_tone_hz = 0.0;
    double deviation_hz = 0.0;

    // iq_two_tone: x(t) = a/sqrt2 * [cos(2 pi fi t) cos(wc t) - cos(2 pi fq t) sin(wc t)]
    double i_tone_hz = 0.0;
    double q_tone_hz = 0.0;

    /// Noise power in dB; `noise_enabled == false` means no noise at all.
    double noise_power_db = 0.0;
    bool noise_enabled = false;
    NoiseReference noise_reference = NoiseReference::signal_amplitude;
    std::uint64_t seed = 1;

    void validate() const;
    /// Standard deviation of the additive noise in full-scale units.
    double noise_sigma() const;
    /// Occupied bandwidth estimate of the modulating signal (Carson's rule for FM).
    double bandwidth_hz() const;
};

/// Unit phasors exp(-j*w_c*tau_n), n = 1..N. phasors[0] is exactly 1.
struct SteeringVector {
    std::vector<std::complex<double>> phasors;

    std::size_t size() const { return phasors.size(); }
    SteeringVector conjugate() const;
};

/// (n-1) * d * sin(theta) / c for the 1-based element index `n`.
double element_delay(const ArrayConfig& cfg, double theta_rad, int n);

SteeringVector steering_vector(const ArrayConfig& cfg, double theta_rad);

/// True time delay inside the waveform, or the narrowband phase-shift approximation.
enum class DelayModel { true_delay, phase_shift };

/// One real sample stream per element, in full-scale units.
using ChannelStreams = std::vector<std::vector<double>>;

/// Evaluates the delayed waveform analytically at t = k/fs for every element and adds
/// per-channel independent seeded Gaussian noise. Channels are filled in parallel;
/// the result does not depend on the thread count.
ChannelStreams synthesize_channels(const ArrayConfig& cfg, const TestSignalSpec& spec, double fs_hz,
                                   std::size_t num_samples,
                                   DelayModel model = DelayModel::true_delay);

namespace serial {
ChannelStreams synthesize_channels(const ArrayConfig& cfg, const TestSignalSpec& spec, double fs_hz,
                                   std::size_t num_samples,
                                   DelayModel model = DelayModel::true_delay);
}

double deg_to_rad(double deg);
double rad_to_deg(double rad);

}  // namespace dbfrx
