#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbfrx/adc_model.hpp"
#include "dbfrx/analysis.hpp"
#include "dbfrx/frequency_plan.hpp"
#include "dbfrx/reference_chain.hpp"
#include "dbfrx/resource_model.hpp"

namespace dbfrx::formats {

using nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Writes `<stem>.bin` (int16 little-endian, sample-major, channels interleaved) and
/// `<stem>.json` (sidecar header). Returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> write_capture(const std::filesystem::path& dir,
                                                                      const std::string& stem, const Capture& cap);
Capture read_capture(const std::filesystem::path& bin_path, const std::filesystem::path& sidecar_path);

/// CSV with header `frame_index,slot,i,q`, integers.
void write_baseband_csv(const std::filesystem::path& path, const Baseband& bb);
/// Same columns; values printed with 17 significant digits.
void write_baseband_csv(const std::filesystem::path& path, const FloatBaseband& bb);
/// Reads either CSV flavour back as complex samples in stream order.
std::vector<std::complex<double>> read_baseband_csv(const std::filesystem::path& path);

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumPoint>& spectrum);
void write_beam_csv(const std::filesystem::path& path, const BeamPattern& pattern);

ordered_json to_json(const Baseband& bb);
ordered_json to_json(const FloatBaseband& bb);
ordered_json to_json(const SpectralMetrics& m);
ordered_json to_json(const ComparisonReport& r);
ordered_json to_json(const ResourceReport& r);
ordered_json to_json(const FrequencyPlan& p);
ordered_json to_json(const BeamSummary& s);
ordered_json to_json(const ComplexWeightSet& w);
ordered_json coefficients_to_json(const std::vector<std::int32_t>& coeffs);

ComplexWeightSet weights_from_json(const ordered_json& j);
std::vector<std::int32_t> coefficients_from_json(const ordered_json& j);

/// Writes `j` pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const ordered_json& j);

/// Aligned text table of a resource report.
std::string resource_table(const ResourceReport& r);

}  // namespace dbfrx::formats
