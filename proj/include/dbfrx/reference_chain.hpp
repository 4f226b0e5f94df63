#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dbfrx/adc_model.hpp"
#include "dbfrx/array_signal.hpp"
#include "dbfrx/dbf_core.hpp"
#include "dbfrx/ddc_fs4.hpp"
#include "dbfrx/fir.hpp"

namespace dbfrx {

enum class Architecture { proposed, standard };
enum class Arithmetic { fixed, floating };

const char* to_string(Architecture a);
const char* to_string(Arithmetic a);

/// Everything a pipeline run needs besides the capture.
struct PipelineConfig {
    ArrayConfig array;
    AdcConfig adc;
    ComplexWeightSet weights;
    /// Unquantized weights on the register scale (2047 * phasor) for the float oracle.
    /// Empty means "use the quantized weights".
    std::vector<std::complex<double>> float_weights;
    TruncationWindow window;
    FirSpec fir;
    /// Unquantized prototype taps for the float oracle. Empty means "use coeffs_q".
    std::vector<double> fir_prototype;

    /// Steered configuration: conjugate steering weights for `steer_rad`, MSB-aligned
    /// window, default fs/8 Hamming filter.
    static PipelineConfig steered(const ArrayConfig& array, const AdcConfig& adc, double steer_rad);

    /// Throws ValidationError unless the carrier aliases to exactly fs/4 and shapes agree.
    void validate(int capture_channels) const;

    std::vector<std::complex<double>> oracle_weights() const;
    std::vector<double> oracle_coeffs() const;
};

struct StageWidths {
    int adc = kAdcBits;
    int beamformer = 0;
    int ddc = 0;
    int fir = 0;
    int output = 0;
};

struct PipelineDiagnostics {
    std::uint64_t beamform_window_overflows = 0;
    std::uint64_t ddc_saturations = 0;
    std::uint64_t fir_overflows = 0;
    std::uint64_t output_overflows = 0;  // standard chain final window
    OpCounts beamform_ops;
    OpCounts fir_ops;

    bool clean() const {
        return beamform_window_overflows == 0 && ddc_saturations == 0 && fir_overflows == 0 && output_overflows == 0;
    }
};

/// Fixed-point baseband output, 8 complex samples per frame.
struct Baseband {
    Architecture architecture = Architecture::proposed;
    std::vector<IqFrame> frames;
    StageWidths widths;
    PipelineDiagnostics diagnostics;
    /// Leading filter warm-up samples excluded from comparisons (num_taps - 1).
    std::size_t warmup_samples = 0;

    std::vector<std::complex<double>> samples() const;
};

/// Double-precision baseband in the same numeric scale as the fixed-point chains.
struct FloatBaseband {
    Architecture architecture = Architecture::proposed;
    std::vector<std::complex<double>> samples;
    std::size_t warmup_samples = 0;
};

/// Beamform -> fs/4 DDC -> FIR on the single combined channel.
Baseband run_proposed(const Capture& cap, const PipelineConfig& cfg);

/// Per-channel DDC -> per-channel FIR -> complex weight multiply -> channel sum ->
/// shift by the window lsb_offset so the output matches the proposed chain's scale.
Baseband run_standard(const Capture& cap, const PipelineConfig& cfg);

FloatBaseband run_float_oracle(const Capture& cap, const PipelineConfig& cfg, Architecture arch);

}  // namespace dbfrx
