#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbfrx/error.hpp"
#include "dbfrx/formats.hpp"
#include "dbfrx/reference_chain.hpp"

namespace dbfrx::app {

/// Run-config problem anchored to a line of the source document (0 when unknown).
class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& source, int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Parses "1.6G", "400M", "10k", "3.6e9". Throws ValidationError on junk.
double parse_si(std::string_view text);

enum class ArchitectureSelection { proposed, standard, both };

struct RunConfig {
    ArrayConfig array;
    TestSignalSpec signal;
    /// Zero-amplitude signals are allowed here and synthesize as exact zeros.
    bool zero_signal = false;
    AdcConfig adc;

    bool steer = true;
    double steer_angle_rad = 0.0;
    ComplexWeightSet explicit_weights;

    std::optional<int> lsb_offset;

    int num_taps = 64;
    int coeff_bits = 10;
    std::optional<double> cutoff_hz;
    FirWindow design_window = FirWindow::hamming;
    std::optional<std::vector<std::int32_t>> coeffs;

    ArchitectureSelection architecture = ArchitectureSelection::both;
    Arithmetic arithmetic = Arithmetic::fixed;
    std::size_t num_samples = 16384;
    std::string output_dir = "out";
};

RunConfig parse_run_config(const std::string& text, const std::string& source_name = "config");
RunConfig load_run_config(const std::filesystem::path& path);

PipelineConfig pipeline_config(const RunConfig& cfg);
Capture make_capture(const RunConfig& cfg);

struct SimulationOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Writes capture, baseband CSV + metadata per architecture, metrics.json and (for
/// "both") comparison.json into `out_dir`. With jobs > 1 the two architectures run
/// concurrently; artifacts do not depend on `jobs`.
SimulationOutput simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, int jobs = 1);

enum class Placement { direct, inverted, both };

struct PlanRequest {
    double fc_hz = 0.0;
    std::optional<double> fs_hz;
    std::optional<double> bw_hz;
    std::optional<int> zone_order;
    Placement placement = Placement::both;
};

formats::ordered_json plan(const PlanRequest& req);
std::string plan_text(const formats::ordered_json& report);

struct BeamRequest {
    ArrayConfig array;
    std::optional<double> steer_rad;  // unset with explicit weights
    std::optional<ComplexWeightSet> weights;
    double min_rad = -1.5707963267948966;
    double max_rad = 1.5707963267948966;
    double step_rad = 0.001745329251994330;  // 0.1 deg
};

struct BeamResult {
    BeamPattern pattern;
    formats::ordered_json summary;
};

BeamResult beampattern(const BeamRequest& req);

struct MetricsRequest {
    std::filesystem::path csv;
    double fs_hz = 1.6e9;
    std::string component = "i";  // i | q | complex
    int harmonics = 5;
    std::optional<SpectrumWindow> window;
    std::size_t skip = 0;
    /// When set, the power spectrum of the component is written here as CSV.
    std::filesystem::path spectrum_csv;
};

formats::ordered_json metrics(const MetricsRequest& req);

/// Metrics entry for one component, with status "ok" or "no-fundamental".
formats::ordered_json metrics_entry(std::span<const std::complex<double>> samples, double fs_hz,
                                    const std::string& component, const SpectralOptions& opts = {});

}  // namespace dbfrx::app
