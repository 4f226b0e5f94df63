#include "dbfrx/reference_chain.hpp"

#include <cmath>
#include <string>

#include "dbfrx/error.hpp"
#include "dbfrx/frequency_plan.hpp"

namespace dbfrx {
namespace {

// exp(-j*pi*n/2) for n mod 4.
constexpr std::complex<double> kMix[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};

std::vector<IqFrame> channel_as_frames(const Capture& cap, int c) {
    std::vector<IqFrame> out(cap.frames.size());
    for (std::size_t f = 0; f < cap.frames.size(); ++f) {
        out[f].frame_index = cap.frames[f].frame_index;
        out[f].bit_width = kAdcBits;
        const auto& slots = cap.frames[f].channels[static_cast<std::size_t>(c)];
        for (std::size_t p = 0; p < kParallel; ++p) out[f].i[p] = slots[p];
    }
    return out;
}

std::vector<std::complex<double>> fir_float(const std::vector<std::complex<double>>& x, const std::vector<double>& h) {
    std::vector<std::complex<double>> y(x.size());
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const auto taps = static_cast<std::ptrdiff_t>(h.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        std::complex<double> acc{};
        for (std::ptrdiff_t t = 0; t < taps && t <= k; ++t) acc += h[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(k - t)];
        y[static_cast<std::size_t>(k)] = acc;
    }
    return y;
}

double channel_code(const Capture& cap, int c, std::size_t k) {
    return cap.frames[k / kParallel].channels[static_cast<std::size_t>(c)][k % kParallel];
}

}  // namespace

const char* to_string(Architecture a) { return a == Architecture::proposed ? "proposed" : "standard"; }
const char* to_string(Arithmetic a) { return a == Arithmetic::fixed ? "fixed" : "float"; }

PipelineConfig PipelineConfig::steered(const ArrayConfig& array, const AdcConfig& adc, double steer_rad) {
    PipelineConfig cfg;
    cfg.array = array;
    cfg.adc = adc;
    const FrequencyPlan plan = nyquist_zone(array.carrier_hz, adc.fs_hz);
    cfg.weights = steering_weights(array, steer_rad, plan.orientation);
    const SteeringVector sv = steering_vector(array, steer_rad);
    for (const auto& p : sv.phasors) {
        const auto w = plan.orientation == SpectrumOrientation::direct ? std::conj(p) : p;
        cfg.float_weights.push_back(w * kWeightScale);
    }
    cfg.window = TruncationWindow::msb_aligned(array.num_elements);
    cfg.fir = FirSpec::design(adc.fs_hz);
    cfg.fir_prototype = design_lowpass(cfg.fir.num_taps, cfg.fir.cutoff_hz, adc.fs_hz, cfg.fir.design_window);
    return cfg;
}

void PipelineConfig::validate(int capture_channels) const {
    array.validate();
    adc.validate();
    weights.validate();
    window.validate();
    fir.validate();
    if (capture_channels != static_cast<int>(weights.size())) {
        throw ValidationError("capture has " + std::to_string(capture_channels) + " channels but " +
                              std::to_string(weights.size()) + " weights are configured");
    }
    if (!float_weights.empty() && float_weights.size() != weights.size()) {
        throw ValidationError("float weight count differs from quantized weight count");
    }
    if (!fir_prototype.empty() && fir_prototype.size() != fir.coeffs_q.size()) {
        throw ValidationError("fir prototype length differs from quantized coefficient count");
    }
    const FrequencyPlan plan = nyquist_zone(array.carrier_hz, adc.fs_hz);
    const double quarter = adc.fs_hz / 4.0;
    if (plan.on_zone_edge || std::abs(plan.alias_if_hz - quarter) > 1e-9 * adc.fs_hz) {
        throw ValidationError("carrier " + std::to_string(array.carrier_hz) + " Hz aliases to " +
                              std::to_string(plan.alias_if_hz) + " Hz; the fs/4 down-converter needs fs = 4 * IF");
    }
}

std::vector<std::complex<double>> PipelineConfig::oracle_weights() const {
    if (!float_weights.empty()) return float_weights;
    std::vector<std::complex<double>> out;
    for (const auto& w : weights.weights) out.emplace_back(w.re, w.im);
    return out;
}

std::vector<double> PipelineConfig::oracle_coeffs() const {
    if (!fir_prototype.empty()) return scale_coeffs(fir_prototype, fir.coeff_bits);
    return {fir.coeffs_q.begin(), fir.coeffs_q.end()};
}

std::vector<std::complex<double>> Baseband::samples() const {
    std::vector<std::complex<double>> out;
    out.reserve(frames.size() * kParallel);
    for (const auto& f : frames) {
        for (std::size_t p = 0; p < kParallel; ++p) {
            out.emplace_back(static_cast<double>(f.i[p]), static_cast<double>(f.q[p]));
        }
    }
    return out;
}

Baseband run_proposed(const Capture& cap, const PipelineConfig& cfg) {
    cfg.validate(cap.num_channels);
    Baseband out;
    out.architecture = Architecture::proposed;
    out.warmup_samples = static_cast<std::size_t>(cfg.fir.num_taps - 1);

    BeamformStats bf;
    const auto beams = beamform_frames(cap, cfg.weights, cfg.window, &bf);
    DdcStats ddc;
    const auto mixed = ddc_frames(beams, DdcPhase{0}, &ddc);
    FirStats fir;
    out.frames = filter_stream(mixed, cfg.fir, &fir);

    out.widths.beamformer = cfg.window.width;
    out.widths.ddc = cfg.window.width;
    out.widths.fir = cfg.window.width + cfg.fir.growth_bits();
    out.widths.output = out.widths.fir;
    out.diagnostics.beamform_window_overflows = bf.window_overflows;
    out.diagnostics.beamform_ops = bf.ops;
    out.diagnostics.ddc_saturations = ddc.saturations;
    out.diagnostics.fir_overflows = fir.overflows;
    out.diagnostics.fir_ops = fir.ops;
    return out;
}

Baseband run_standard(const Capture& cap, const PipelineConfig& cfg) {
    cfg.validate(cap.num_channels);
    Baseband out;
    out.architecture = Architecture::standard;
    out.warmup_samples = static_cast<std::size_t>(cfg.fir.num_taps - 1);
    out.widths.ddc = kAdcBits;
    out.widths.fir = kAdcBits + cfg.fir.growth_bits();
    out.widths.output = cfg.window.width + cfg.fir.growth_bits();
    out.widths.beamformer = out.widths.output;

    std::vector<std::vector<IqFrame>> filtered(static_cast<std::size_t>(cap.num_channels));
    DdcStats ddc;
    FirStats fir;
    for (int c = 0; c < cap.num_channels; ++c) {
        const auto mixed = ddc_frames(channel_as_frames(cap, c), DdcPhase{0}, &ddc);
        filtered[static_cast<std::size_t>(c)] = filter_stream(mixed, cfg.fir, &fir);
    }

    const int shift = cfg.window.lsb_offset;
    const int width = out.widths.output;
    out.frames.resize(cap.frames.size());
    std::uint64_t overflows = 0;
    const auto num_frames = static_cast<std::ptrdiff_t>(cap.frames.size());
#pragma omp parallel for schedule(static) reduction(+ : overflows)
    for (std::ptrdiff_t f = 0; f < num_frames; ++f) {
        const auto fu = static_cast<std::size_t>(f);
        IqFrame& o = out.frames[fu];
        o.frame_index = cap.frames[fu].frame_index;
        o.bit_width = width;
        for (std::size_t p = 0; p < kParallel; ++p) {
            std::int64_t acc_re = 0;
            std::int64_t acc_im = 0;
            for (std::size_t c = 0; c < filtered.size(); ++c) {
                const std::int64_t i = filtered[c][fu].i[p];
                const std::int64_t q = filtered[c][fu].q[p];
                const std::int64_t wr = cfg.weights.weights[c].re;
                const std::int64_t wi = cfg.weights.weights[c].im;
                acc_re += i * wr - q * wi;
                acc_im += i * wi + q * wr;
            }
            o.i[p] = acc_re >> shift;
            o.q[p] = acc_im >> shift;
            if (!fits_signed(o.i[p], width)) ++overflows;
            if (!fits_signed(o.q[p], width)) ++overflows;
        }
    }

    const std::uint64_t n = static_cast<std::uint64_t>(cap.num_channels);
    const std::uint64_t samples = cap.frames.size() * kParallel;
    out.diagnostics.ddc_saturations = ddc.saturations;
    out.diagnostics.fir_overflows = fir.overflows;
    out.diagnostics.fir_ops = fir.ops;
    out.diagnostics.output_overflows = overflows;
    out.diagnostics.beamform_ops.multiplies = samples * n * 4;
    out.diagnostics.beamform_ops.additions = samples * (n * 2 + (n - 1) * 2);
    return out;
}

FloatBaseband run_float_oracle(const Capture& cap, const PipelineConfig& cfg, Architecture arch) {
    cfg.validate(cap.num_channels);
    const auto weights = cfg.oracle_weights();
    const auto coeffs = cfg.oracle_coeffs();
    const double scale = std::ldexp(1.0, -cfg.window.lsb_offset);
    const std::size_t len = cap.samples_per_channel();
    const auto n = static_cast<std::ptrdiff_t>(len);

    FloatBaseband out;
    out.architecture = arch;
    out.warmup_samples = static_cast<std::size_t>(cfg.fir.num_taps - 1);

    if (arch == Architecture::proposed) {
        std::vector<std::complex<double>> mixed(len);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            std::complex<double> beam{};
            for (int c = 0; c < cap.num_channels; ++c) beam += channel_code(cap, c, ku) * weights[static_cast<std::size_t>(c)];
            mixed[ku] = beam * scale * kMix[ku & 3];
        }
        out.samples = fir_float(mixed, coeffs);
        return out;
    }

    out.samples.assign(len, {});
    for (int c = 0; c < cap.num_channels; ++c) {
        std::vector<std::complex<double>> mixed(len);
        for (std::size_t k = 0; k < len; ++k) mixed[k] = channel_code(cap, c, k) * kMix[k & 3];
        const auto filtered = fir_float(mixed, coeffs);
        const auto w = weights[static_cast<std::size_t>(c)];
        for (std::size_t k = 0; k < len; ++k) out.samples[k] += filtered[k] * w;
    }
    for (auto& v : out.samples) v *= scale;
    return out;
}

}  // namespace dbfrx
