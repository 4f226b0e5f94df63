#include "dbfrx/array_signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "dbfrx/error.hpp"

namespace dbfrx {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phase in radians of `freq_hz * t_s`, reduced to [0, 2pi) in extended precision so
// that large sample indices at GHz carriers keep sub-nanoradian accuracy.
double cycle_phase(double freq_hz, long double t_s) {
    const long double cycles = static_cast<long double>(freq_hz) * t_s;
    const long double frac = cycles - std::floor(cycles);
    return static_cast<double>(frac * static_cast<long double>(kTwoPi));
}

long double sample_time(std::size_t k, double fs_hz, double delay_s) {
    return static_cast<long double>(k) / static_cast<long double>(fs_hz) -
           static_cast<long double>(delay_s);
}

double waveform_sample(const TestSignalSpec& spec, std::size_t k, double fs_hz, double delay_s,
                       DelayModel model) {
    const long double t_carrier = sample_time(k, fs_hz, delay_s);
    const long double t_envelope = model == DelayModel::true_delay ? t_carrier : sample_time(k, fs_hz, 0.0);
    const double carrier_phase = cycle_phase(spec.carrier_hz, t_carrier);

    switch (spec.kind) {
        case SignalKind::tone:
            return spec.amplitude * std::cos(carrier_phase);
        case SignalKind::linear_fm: {
            const double index = spec.deviation_hz / spec.base_tone_hz;
            const double mod = -index * (std::cos(cycle_phase(spec.base_tone_hz, t_envelope)) - 1.0);
            return spec.amplitude * std::cos(carrier_phase + mod);
        }
        case SignalKind::iq_two_tone: {
            const double i = std::cos(cycle_phase(spec.i_tone_hz, t_envelope));
            const double q = std::cos(cycle_phase(spec.q_tone_hz, t_envelope));
            return spec.amplitude * std::numbers::sqrt2 / 2.0 *
                   (i * std::cos(carrier_phase) - q * std::sin(carrier_phase));
        }
    }
    return 0.0;
}

void fill_channel(std::vector<double>& out, const ArrayConfig& cfg, const TestSignalSpec& spec,
                  double fs_hz, int element, DelayModel model) {
    const double delay = element_delay(cfg, spec.arrival_angle_rad, element + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = waveform_sample(spec, k, fs_hz, delay, model);
    }
    if (!spec.noise_enabled) return;
    const double sigma = spec.noise_sigma();
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(element)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : out) v += noise(rng);
}

void check_synthesis_args(const ArrayConfig& cfg, const TestSignalSpec& spec, double fs_hz,
                          std::size_t num_samples) {
    cfg.validate();
    spec.validate();
    if (!(fs_hz > 0.0)) throw ValidationError("sample rate must be positive");
    if (num_samples == 0) throw ValidationError("num_samples must be positive");
}

}  // namespace

void ArrayConfig::validate() const {
    if (num_elements < 1) throw ValidationError("num_elements must be >= 1");
    if (!(spacing_m > 0.0)) throw ValidationError("spacing_m must be positive");
    if (!(wave_speed_mps > 0.0)) throw ValidationError("wave_speed_mps must be positive");
    if (!(carrier_hz > 0.0)) throw ValidationError("carrier_hz must be positive");
}

ArrayConfig ArrayConfig::half_wavelength(int num_elements, double carrier_hz, double wave_speed_mps) {
    ArrayConfig cfg;
    cfg.num_elements = num_elements;
    cfg.carrier_hz = carrier_hz;
    cfg.wave_speed_mps = wave_speed_mps;
    cfg.spacing_m = wave_speed_mps / carrier_hz / 2.0;
    return cfg;
}

bool is_narrowband(double bandwidth_hz, double carrier_hz) {
    return bandwidth_hz / carrier_hz < 0.01;
}

void TestSignalSpec::validate() const {
    if (!(carrier_hz > 0.0)) throw ValidationError("signal carrier_hz must be positive");
    if (!(std::abs(arrival_angle_rad) < std::numbers::pi / 2.0)) {
        throw ValidationError("arrival angle must satisfy |theta| < 90 deg");
    }
    if (!(amplitude > 0.0 && amplitude <= 1.0)) throw ValidationError("amplitude must be in (0, 1]");
    if (!std::isfinite(noise_power_db)) throw ValidationError("noise_power_db must be finite");
    switch (kind) {
        case SignalKind::tone:
            break;
        case SignalKind::linear_fm:
            if (!(base_tone_hz > 0.0)) throw ValidationError("linear_fm needs base_tone_hz > 0");
            if (!(deviation_hz > 0.0)) throw ValidationError("linear_fm needs deviation_hz > 0");
            break;
        case SignalKind::iq_two_tone:
            if (!(i_tone_hz > 0.0) || !(q_tone_hz > 0.0)) {
                throw ValidationError("iq_two_tone needs positive i_tone_hz and q_tone_hz");
            }
            break;
    }
}

double TestSignalSpec::noise_sigma() const {
    const double reference = noise_reference == NoiseReference::signal_amplitude ? amplitude : 1.0;
    return reference * std::pow(10.0, noise_power_db / 20.0);
}

double TestSignalSpec::bandwidth_hz() const {
    switch (kind) {
        case SignalKind::tone:
            return 0.0;
        case SignalKind::linear_fm:
            return 2.0 * (deviation_hz + base_tone_hz);
        case SignalKind::iq_two_tone:
            return 2.0 * std::max(i_tone_hz, q_tone_hz);
    }
    return 0.0;
}

SteeringVector SteeringVector::conjugate() const {
    SteeringVector out{phasors};
    for (auto& p : out.phasors) p = std::conj(p);
    return out;
}

double element_delay(const ArrayConfig& cfg, double theta_rad, int n) {
    cfg.validate();
    if (n < 1 || n > cfg.num_elements) {
        throw std::out_of_range("element index " + std::to_string(n) + " outside 1.." +
                                std::to_string(cfg.num_elements));
    }
    return (n - 1) * cfg.spacing_m * std::sin(theta_rad) / cfg.wave_speed_mps;
}

SteeringVector steering_vector(const ArrayConfig& cfg, double theta_rad) {
    cfg.validate();
    SteeringVector sv;
    sv.phasors.reserve(static_cast<std::size_t>(cfg.num_elements));
    const double omega = kTwoPi * cfg.carrier_hz;
    for (int n = 1; n <= cfg.num_elements; ++n) {
        sv.phasors.push_back(std::polar(1.0, -omega * element_delay(cfg, theta_rad, n)));
    }
    return sv;
}

ChannelStreams synthesize_channels(const ArrayConfig& cfg, const TestSignalSpec& spec, double fs_hz,
                                   std::size_t num_samples, DelayModel model) {
    check_synthesis_args(cfg, spec, fs_hz, num_samples);
    ChannelStreams streams(static_cast<std::size_t>(cfg.num_elements), std::vector<double>(num_samples));
#pragma omp parallel for schedule(static)
    for (int n = 0; n < cfg.num_elements; ++n) {
        fill_channel(streams[static_cast<std::size_t>(n)], cfg, spec, fs_hz, n, model);
    }
    return streams;
}

namespace serial {
ChannelStreams synthesize_channels(const ArrayConfig& cfg, const TestSignalSpec& spec, double fs_hz,
                                   std::size_t num_samples, DelayModel model) {
    check_synthesis_args(cfg, spec, fs_hz, num_samples);
    ChannelStreams streams(static_cast<std::size_t>(cfg.num_elements), std::vector<double>(num_samples));
    for (int n = 0; n < cfg.num_elements; ++n) {
        fill_channel(streams[static_cast<std::size_t>(n)], cfg, spec, fs_hz, n, model);
    }
    return streams;
}
}  // namespace serial

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace dbfrx
