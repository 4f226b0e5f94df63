#include "dbfrx/formats.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dbfrx/error.hpp"

namespace dbfrx::formats {
namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json ops_json(const OpCounts& ops) {
    return {{"multiplies", ops.multiplies}, {"additions", ops.additions}};
}

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

std::pair<std::filesystem::path, std::filesystem::path> write_capture(const std::filesystem::path& dir,
                                                                      const std::string& stem, const Capture& cap) {
    const auto bin_path = dir / (stem + ".bin");
    const auto json_path = dir / (stem + ".json");
    {
        auto out = open_out(bin_path, std::ios::binary);
        std::vector<unsigned char> buf;
        buf.reserve(cap.frames.size() * kParallel * static_cast<std::size_t>(cap.num_channels) * 2);
        for (const auto& frame : cap.frames) {
            for (std::size_t p = 0; p < kParallel; ++p) {
                for (const auto& ch : frame.channels) {
                    const auto u = static_cast<std::uint16_t>(ch[p]);
                    buf.push_back(static_cast<unsigned char>(u & 0xff));
                    buf.push_back(static_cast<unsigned char>(u >> 8));
                }
            }
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    ordered_json side;
    side["format_version"] = kFormatVersion;
    side["sample_encoding"] = "int16le";
    side["layout"] = "sample_major_channel_interleaved";
    side["adc_bits"] = kAdcBits;
    side["fs_hz"] = cap.fs_hz;
    side["num_channels"] = cap.num_channels;
    side["parallel_factor"] = kParallel;
    side["frame_count"] = cap.frames.size();
    side["samples_per_channel"] = cap.samples_per_channel();
    side["padded_samples"] = cap.padded_samples;
    side["data_file"] = bin_path.filename().string();
    write_json(json_path, side);
    return {bin_path, json_path};
}

Capture read_capture(const std::filesystem::path& bin_path, const std::filesystem::path& sidecar_path) {
    std::ifstream side_in(sidecar_path);
    if (!side_in) throw ValidationError("cannot open " + sidecar_path.string());
    const auto side = ordered_json::parse(side_in);
    if (side.at("format_version").get<int>() != kFormatVersion) throw ValidationError("unsupported capture version");
    if (side.at("parallel_factor").get<int>() != kParallel) throw ValidationError("capture parallel_factor must be 8");

    Capture cap;
    cap.fs_hz = side.at("fs_hz").get<double>();
    cap.num_channels = side.at("num_channels").get<int>();
    cap.padded_samples = side.at("padded_samples").get<std::size_t>();
    const auto frames = side.at("frame_count").get<std::size_t>();
    const std::size_t bytes = frames * kParallel * static_cast<std::size_t>(cap.num_channels) * 2;

    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + bin_path.string());
    std::vector<unsigned char> buf(bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes || in.peek() != std::char_traits<char>::eof()) {
        throw ValidationError("capture data size does not match the sidecar header");
    }
    cap.frames.resize(frames);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        cap.frames[f].frame_index = f;
        cap.frames[f].channels.assign(static_cast<std::size_t>(cap.num_channels), {});
        for (std::size_t p = 0; p < kParallel; ++p) {
            for (auto& ch : cap.frames[f].channels) {
                const auto u = static_cast<std::uint16_t>(buf[pos] | (buf[pos + 1] << 8));
                ch[p] = static_cast<AdcSample>(u);
                pos += 2;
            }
        }
    }
    return cap;
}

void write_baseband_csv(const std::filesystem::path& path, const Baseband& bb) {
    auto out = open_out(path);
    std::string text = "frame_index,slot,i,q\n";
    for (const auto& f : bb.frames) {
        for (std::size_t p = 0; p < kParallel; ++p) {
            text += std::to_string(f.frame_index) + ',' + std::to_string(p) + ',' + std::to_string(f.i[p]) + ',' +
                    std::to_string(f.q[p]) + '\n';
        }
    }
    out << text;
}

void write_baseband_csv(const std::filesystem::path& path, const FloatBaseband& bb) {
    auto out = open_out(path);
    std::string text = "frame_index,slot,i,q\n";
    for (std::size_t k = 0; k < bb.samples.size(); ++k) {
        text += std::to_string(k / kParallel) + ',' + std::to_string(k % kParallel) + ',' +
                fmt_double(bb.samples[k].real()) + ',' + fmt_double(bb.samples[k].imag()) + '\n';
    }
    out << text;
}

std::vector<std::complex<double>> read_baseband_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("frame_index,slot,i,q", 0) != 0) {
        throw ValidationError(path.string() + ":1: expected header frame_index,slot,i,q");
    }
    std::vector<std::complex<double>> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell[4];
        for (auto& c : cell) std::getline(ss, c, ',');
        try {
            out.emplace_back(std::stod(cell[2]), std::stod(cell[3]));
        } catch (const std::exception&) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
        }
    }
    return out;
}

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumPoint>& spectrum) {
    auto out = open_out(path);
    std::string text = "frequency_hz,power_db\n";
    for (const auto& p : spectrum) text += fmt_double(p.frequency_hz) + ',' + fmt_double(p.power_db) + '\n';
    out << text;
}

void write_beam_csv(const std::filesystem::path& path, const BeamPattern& pattern) {
    auto out = open_out(path);
    std::string text = "angle_deg,gain_db\n";
    for (std::size_t k = 0; k < pattern.angles_rad.size(); ++k) {
        text += fmt_double(rad_to_deg(pattern.angles_rad[k])) + ',' + fmt_double(pattern.gains_db[k]) + '\n';
    }
    out << text;
}

ordered_json to_json(const Baseband& bb) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["architecture"] = to_string(bb.architecture);
    j["arithmetic"] = to_string(Arithmetic::fixed);
    j["frame_count"] = bb.frames.size();
    j["sample_count"] = bb.frames.size() * kParallel;
    j["warmup_samples"] = bb.warmup_samples;
    j["widths"] = {{"adc", bb.widths.adc},
                   {"beamformer", bb.widths.beamformer},
                   {"ddc", bb.widths.ddc},
                   {"fir", bb.widths.fir},
                   {"output", bb.widths.output}};
    const auto& d = bb.diagnostics;
    j["overflow_counters"] = {{"beamform_window", d.beamform_window_overflows},
                              {"ddc_saturation", d.ddc_saturations},
                              {"fir_accumulator", d.fir_overflows},
                              {"output_window", d.output_overflows}};
    j["operation_counts"] = {{"beamformer", ops_json(d.beamform_ops)}, {"fir", ops_json(d.fir_ops)}};
    return j;
}

ordered_json to_json(const FloatBaseband& bb) {
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["architecture"] = to_string(bb.architecture);
    j["arithmetic"] = to_string(Arithmetic::floating);
    j["frame_count"] = bb.samples.size() / kParallel;
    j["sample_count"] = bb.samples.size();
    j["warmup_samples"] = bb.warmup_samples;
    return j;
}

ordered_json to_json(const SpectralMetrics& m) {
    return {{"fundamental_hz", m.fundamental_hz}, {"fundamental_power_db", m.fundamental_power_db},
            {"snr_db", m.snr_db},                 {"sndr_db", m.sndr_db},
            {"sfdr_db", m.sfdr_db},               {"thd_db", m.thd_db},
            {"fft_size", m.fft_size},             {"bin_hz", m.bin_hz},
            {"window", to_string(m.window)}};
}

ordered_json to_json(const ComparisonReport& r) {
    return {{"format_version", kFormatVersion},
            {"samples_compared", r.samples_compared},
            {"warmup_samples", r.warmup_samples},
            {"max_abs_diff", r.max_abs_diff},
            {"relative_rms", finite_or_null(r.relative_rms)},
            {"i", {{"max_abs", r.i.max_abs}, {"rms", r.i.rms}}},
            {"q", {{"max_abs", r.q.max_abs}, {"rms", r.q.rms}}}};
}

ordered_json to_json(const ResourceReport& r) {
    auto stage_json = [](const StageCost& s) {
        ordered_json j{{"stage", s.stage},
                       {"real_multipliers", s.real_multipliers},
                       {"real_adders", s.real_adders},
                       {"dsp_fused_macs", s.dsp_fused_macs},
                       {"reported_dsp_slices", s.reported_dsp_slices ? ordered_json(*s.reported_dsp_slices)
                                                                      : ordered_json(nullptr)}};
        if (!s.notes.empty()) j["notes"] = s.notes;
        return j;
    };
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["architecture"] = to_string(r.architecture);
    j["parameters"] = {{"channels", r.channels}, {"taps", r.taps}, {"parallel", r.parallel}};
    j["stages"] = ordered_json::array();
    for (const auto& s : r.stages) j["stages"].push_back(stage_json(s));
    j["totals"] = stage_json(r.totals);
    return j;
}

ordered_json to_json(const FrequencyPlan& p) {
    return {{"fc_hz", p.fc_hz},
            {"fs_hz", p.fs_hz},
            {"zone_index", p.zone_index},
            {"orientation", to_string(p.orientation)},
            {"alias_if_hz", p.alias_if_hz},
            {"on_zone_edge", p.on_zone_edge}};
}

ordered_json to_json(const BeamSummary& s) {
    auto opt_deg = [](const std::optional<double>& v) { return v ? ordered_json(rad_to_deg(*v)) : ordered_json(nullptr); };
    return {{"peak_angle_deg", rad_to_deg(s.peak_angle_rad)},
            {"peak_gain_db", s.peak_gain_db},
            {"first_null_below_deg", opt_deg(s.first_null_below_rad)},
            {"first_null_above_deg", opt_deg(s.first_null_above_rad)}};
}

ordered_json to_json(const ComplexWeightSet& w) {
    ordered_json j = ordered_json::array();
    for (const auto& wt : w.weights) j.push_back({wt.re, wt.im});
    return j;
}

ordered_json coefficients_to_json(const std::vector<std::int32_t>& coeffs) { return ordered_json(coeffs); }

ComplexWeightSet weights_from_json(const ordered_json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("weights must be a non-empty array of [re, im] pairs");
    ComplexWeightSet w;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
            throw ValidationError("each weight must be an [re, im] integer pair");
        }
        const auto re = pair[0].get<std::int64_t>();
        const auto im = pair[1].get<std::int64_t>();
        if (!fits_signed(re, kWeightBits) || !fits_signed(im, kWeightBits)) {
            throw ValidationError("weight component outside 12-bit signed range");
        }
        w.weights.push_back({static_cast<std::int16_t>(re), static_cast<std::int16_t>(im)});
    }
    return w;
}

std::vector<std::int32_t> coefficients_from_json(const ordered_json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("coefficients must be a non-empty integer array");
    std::vector<std::int32_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ValidationError("coefficients must be integers");
        out.push_back(v.get<std::int32_t>());
    }
    return out;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::string resource_table(const ResourceReport& r) {
    std::ostringstream os;
    os << "architecture: " << to_string(r.architecture) << "  channels=" << r.channels << " taps=" << r.taps
       << " parallel=" << r.parallel << '\n';
    os << std::left << std::setw(12) << "stage" << std::right << std::setw(12) << "multipliers" << std::setw(10)
       << "adders" << std::setw(12) << "fused_macs" << std::setw(14) << "reported_dsp" << '\n';
    auto row = [&](const StageCost& s) {
        os << std::left << std::setw(12) << s.stage << std::right << std::setw(12) << s.real_multipliers
           << std::setw(10) << s.real_adders << std::setw(12) << s.dsp_fused_macs << std::setw(14)
           << (s.reported_dsp_slices ? std::to_string(*s.reported_dsp_slices) : std::string("-")) << '\n';
    };
    for (const auto& s : r.stages) row(s);
    row(r.totals);
    return os.str();
}

}  // namespace dbfrx::formats
