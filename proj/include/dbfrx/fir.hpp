#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dbfrx/dbf_core.hpp"

namespace dbfrx {

enum class FirWindow { hamming, blackman, rectangular };

const char* to_string(FirWindow w);

/// Quantized low-pass FIR applied identically to I and Q.
struct FirSpec {
    int num_taps = 64;
    int coeff_bits = 10;
    double cutoff_hz = 200e6;
    FirWindow design_window = FirWindow::hamming;
    std::vector<std::int32_t> coeffs_q;

    /// Designs and quantizes the default filter: cutoff fs/8, Hamming window.
    static FirSpec design(double fs_hz, double cutoff_hz = 0.0, int num_taps = 64, int coeff_bits = 10,
                          FirWindow window = FirWindow::hamming);
    /// Wraps externally supplied coefficients (e.g. loaded from JSON).
    static FirSpec from_coefficients(std::vector<std::int32_t> coeffs, int coeff_bits = 10);

    void validate() const;
    /// Bits added on top of the input width: coeff_bits + ceil(log2 num_taps).
    int growth_bits() const;
    std::int64_t dc_gain() const;
};

/// Windowed-sinc prototype, symmetric, unity DC gain.
std::vector<double> design_lowpass(int num_taps, double cutoff_hz, double fs_hz, FirWindow window);

/// Scales so max |c| maps to 2^(bits-1)-1, rounds half away from zero, and mirrors the
/// first half so symmetric input gives exactly symmetric output.
std::vector<std::int32_t> quantize_coeffs(std::span<const double> coeffs, int coeff_bits = 10);

/// Unquantized coefficients on the integer scale: coeffs * (2^(bits-1)-1) / max|coeffs|.
std::vector<double> scale_coeffs(std::span<const double> coeffs, int coeff_bits = 10);

/// Delay lines holding the num_taps-1 most recent I and Q inputs, oldest first.
struct FirState {
    std::vector<std::int64_t> i_history;
    std::vector<std::int64_t> q_history;

    static FirState zeros(const FirSpec& spec);
};

struct FirStats {
    std::uint64_t overflows = 0;
    OpCounts ops;
};

/// Direct-form convolution with exact integer accumulation. Output width is the input
/// width plus growth_bits() (36 for 20-bit input with 64 10-bit taps).
IqFrame filter_frame(FirState& state, const IqFrame& in, const FirSpec& spec, FirStats* stats = nullptr);

/// Filters a whole stream from zero state. Output samples are computed independently
/// across OpenMP threads.
std::vector<IqFrame> filter_stream(const std::vector<IqFrame>& in, const FirSpec& spec, FirStats* stats = nullptr);

namespace serial {
/// Frame-by-frame streaming through filter_frame with carried state.
std::vector<IqFrame> filter_stream(const std::vector<IqFrame>& in, const FirSpec& spec, FirStats* stats = nullptr);
}

}  // namespace dbfrx
