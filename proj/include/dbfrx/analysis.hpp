#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dbfrx/array_signal.hpp"
#include "dbfrx/dbf_core.hpp"

namespace dbfrx {

enum class SpectrumWindow { rectangular, blackman_harris };

const char* to_string(SpectrumWindow w);

/// Raised when the input has no non-DC content to call a fundamental.
class NoFundamentalError : public std::runtime_error {
public:
    NoFundamentalError() : std::runtime_error("no-fundamental") {}
};

struct SpectralMetrics {
    double fundamental_hz = 0.0;
    double fundamental_power_db = 0.0;
    double snr_db = 0.0;
    double sndr_db = 0.0;
    double sfdr_db = 0.0;
    double thd_db = 0.0;
    std::size_t fft_size = 0;
    SpectrumWindow window = SpectrumWindow::rectangular;
    double bin_hz = 0.0;
};

struct SpectralOptions {
    int harmonics = 5;
    /// Unset: rectangular when the tone is bin-centred, Blackman-Harris otherwise.
    std::optional<SpectrumWindow> window;
};

/// Windowed-FFT metrics. Real input is analysed one-sided; complex input two-sided,
/// with fundamental_hz signed in [-fs/2, fs/2). Harmonics 2..harmonics+1 are folded
/// into the first Nyquist zone. Throws std::invalid_argument below 64 samples and
/// NoFundamentalError for constant input.
SpectralMetrics spectral_metrics(std::span<const double> samples, double fs_hz, const SpectralOptions& opts = {});
SpectralMetrics spectral_metrics(std::span<const std::complex<double>> samples, double fs_hz,
                                 const SpectralOptions& opts = {});

struct SpectrumPoint {
    double frequency_hz;
    double power_db;
};

/// Power spectrum normalized so a real sine of amplitude A reads 10*log10(A^2/2) summed
/// over its lobe. Real input gives bins 0..N/2; complex input gives all N bins ordered
/// from -fs/2 upward.
std::vector<SpectrumPoint> power_spectrum(std::span<const double> samples, double fs_hz, SpectrumWindow window);
std::vector<SpectrumPoint> power_spectrum(std::span<const std::complex<double>> samples, double fs_hz,
                                          SpectrumWindow window);

/// Unnormalized |X[k]|^2 of the windowed sequence (for Parseval-style checks).
std::vector<double> fft_bin_power(std::span<const std::complex<double>> samples, SpectrumWindow window);

std::vector<double> window_coefficients(SpectrumWindow window, std::size_t n);

/// Fraction of total power with |f| <= limit_hz.
double band_power_fraction(std::span<const std::complex<double>> samples, double fs_hz, double limit_hz);

/// Discrete instantaneous frequency arg(z[k] conj(z[k-1])) * fs / 2pi, length N-1.
std::vector<double> instantaneous_frequency(std::span<const std::complex<double>> samples, double fs_hz);

struct BeamPattern {
    std::vector<double> angles_rad;
    std::vector<double> gains_db;
};

struct BeamSummary {
    double peak_angle_rad = 0.0;
    double peak_gain_db = 0.0;
    std::optional<double> first_null_below_rad;
    std::optional<double> first_null_above_rad;
};

/// gain(theta) = |sum_n w_n exp(-j w_c tau_n(theta))| in dB with dequantized register
/// weights, so a weight set from steering_weights() peaks at its steering angle with
/// 20*log10(N). Nulls are floored at -300 dB to stay finite.
BeamPattern beam_pattern(const ArrayConfig& cfg, const ComplexWeightSet& w, std::span<const double> angles_rad);
BeamPattern beam_pattern(const ArrayConfig& cfg, std::span<const std::complex<double>> weights,
                         std::span<const double> angles_rad);

BeamSummary summarize(const BeamPattern& pattern);

/// Evenly spaced grid from lo to hi inclusive.
std::vector<double> angle_grid(double lo_rad, double hi_rad, double step_rad);

struct ComponentStats {
    double max_abs = 0.0;
    double rms = 0.0;
};

struct ComparisonReport {
    std::size_t samples_compared = 0;
    std::size_t warmup_samples = 0;
    double max_abs_diff = 0.0;
    double relative_rms = 0.0;
    ComponentStats i;
    ComponentStats q;
};

/// Differences over samples [warmup, N). Throws ValidationError when lengths differ.
ComparisonReport compare(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                         std::size_t warmup);

}  // namespace dbfrx
