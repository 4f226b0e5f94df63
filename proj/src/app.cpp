#include "dbfrx/app.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace dbfrx::app {
namespace {

using formats::ordered_json;

// Locates keys in the raw document so errors can point at a line.
class ConfigReader {
public:
    ConfigReader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const {
        throw ConfigError(source_, line_of(section, key), msg);
    }

    void check_keys(const ordered_json& obj, const std::string& section, const std::set<std::string>& allowed) const {
        if (!obj.is_object()) fail("", section, "section '" + section + "' must be an object");
        for (const auto& [key, value] : obj.items()) {
            if (!allowed.contains(key)) {
                fail(section, key, "unknown key '" + key + "'" + (section.empty() ? "" : " in section '" + section + "'"));
            }
        }
    }

    const ordered_json& section(const ordered_json& root, const std::string& name, bool required) const {
        static const ordered_json empty = ordered_json::object();
        if (!root.contains(name)) {
            if (required) fail("", name, "missing section '" + name + "'");
            return empty;
        }
        const auto& s = root.at(name);
        if (!s.is_object()) fail("", name, "section '" + name + "' must be an object");
        return s;
    }

    std::optional<double> number(const ordered_json& obj, const std::string& section, const std::string& key) const {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number()) fail(section, key, "'" + section + "." + key + "' must be a number");
        return v.get<double>();
    }

    double required_number(const ordered_json& obj, const std::string& section, const std::string& key) const {
        auto v = number(obj, section, key);
        if (!v) fail("", section, "missing '" + section + "." + key + "'");
        return *v;
    }

    double positive(const ordered_json& obj, const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const {
        auto v = number(obj, section, key);
        if (!v && !fallback) fail("", section, "missing '" + section + "." + key + "'");
        const double x = v ? *v : *fallback;
        if (!(x > 0.0) || !std::isfinite(x)) fail(section, key, "'" + section + "." + key + "' must be positive");
        return x;
    }

    std::optional<std::int64_t> integer(const ordered_json& obj, const std::string& section, const std::string& key) const {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) fail(section, key, "'" + section + "." + key + "' must be an integer");
        return v.get<std::int64_t>();
    }

    std::optional<std::string> string(const ordered_json& obj, const std::string& section, const std::string& key) const {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_string()) fail(section, key, "'" + section + "." + key + "' must be a string");
        return v.get<std::string>();
    }

    int line_at(std::size_t pos) const {
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(std::min(pos, text_.size())), '\n'));
    }

private:
    int line_of(const std::string& section, const std::string& key) const {
        std::size_t from = 0;
        if (!section.empty()) {
            const auto s = text_.find('"' + section + '"');
            if (s == std::string::npos) return 0;
            from = s;
        }
        if (key.empty()) return line_at(from);
        const auto k = text_.find('"' + key + '"', from);
        return k == std::string::npos ? line_at(from) : line_at(k);
    }

    const std::string& text_;
    std::string source_;
};

template <typename Enum>
Enum parse_enum(const ConfigReader& r, const std::string& section, const std::string& key, const std::string& value,
                std::initializer_list<std::pair<const char*, Enum>> options) {
    std::string names;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        names += names.empty() ? name : std::string(", ") + name;
    }
    r.fail(section, key, "'" + section + "." + key + "' must be one of: " + names);
}

ordered_json baseband_json_fixed(const Baseband& bb, const FloatBaseband& oracle) {
    ordered_json j = formats::to_json(bb);
    const auto fixed = bb.samples();
    const auto report = compare(fixed, oracle.samples, bb.warmup_samples);
    j["float_oracle"] = {{"relative_rms", report.relative_rms},
                         {"sqnr_db", report.relative_rms > 0.0 ? -20.0 * std::log10(report.relative_rms) : 400.0}};
    return j;
}

struct ArchOutput {
    Architecture arch;
    std::vector<std::complex<double>> samples;
    std::size_t warmup = 0;
    ordered_json meta;
    std::vector<std::string> warnings;
};

ArchOutput run_architecture(const Capture& cap, const PipelineConfig& pcfg, Architecture arch, Arithmetic arith,
                            const std::filesystem::path& csv_path) {
    ArchOutput out;
    out.arch = arch;
    if (arith == Arithmetic::floating) {
        auto bb = run_float_oracle(cap, pcfg, arch);
        formats::write_baseband_csv(csv_path, bb);
        out.meta = formats::to_json(bb);
        out.samples = std::move(bb.samples);
        out.warmup = bb.warmup_samples;
        return out;
    }
    Baseband bb = arch == Architecture::proposed ? run_proposed(cap, pcfg) : run_standard(cap, pcfg);
    formats::write_baseband_csv(csv_path, bb);
    out.meta = baseband_json_fixed(bb, run_float_oracle(cap, pcfg, arch));
    out.samples = bb.samples();
    out.warmup = bb.warmup_samples;
    const auto& d = bb.diagnostics;
    auto warn = [&](std::uint64_t count, const char* what) {
        if (count > 0) {
            out.warnings.push_back(std::string(to_string(arch)) + ": " + std::to_string(count) + " " + what);
        }
    };
    warn(d.beamform_window_overflows, "beamformer window overflows");
    warn(d.ddc_saturations, "ddc negation saturations");
    warn(d.fir_overflows, "fir accumulator overflows");
    warn(d.output_overflows, "output window overflows");
    return out;
}

std::string format_hz(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

double parse_si(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw ValidationError("empty numeric value");
    double mult = 1.0;
    switch (s.back()) {
        case 'k':
        case 'K':
            mult = 1e3;
            break;
        case 'M':
            mult = 1e6;
            break;
        case 'G':
            mult = 1e9;
            break;
        default:
            break;
    }
    if (mult != 1.0) s.pop_back();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw ValidationError("not a number: '" + std::string(text) + "'");
    return v * mult;
}

RunConfig parse_run_config(const std::string& text, const std::string& source_name) {
    ordered_json root;
    ConfigReader r(text, source_name);
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source_name, r.line_at(e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
    }
    if (!root.is_object()) throw ConfigError(source_name, 1, "config must be a JSON object");
    r.check_keys(root, "", {"version", "array", "signal", "adc", "weights", "window", "fir", "run"});
    const auto version = r.integer(root, "", "version");
    if (!version) throw ConfigError(source_name, 1, "missing 'version'");
    if (*version != 1) r.fail("", "version", "unsupported config version " + std::to_string(*version));

    RunConfig cfg;

    const auto& array = r.section(root, "array", true);
    r.check_keys(array, "array", {"num_elements", "spacing_m", "spacing_wavelengths", "wave_speed_mps", "carrier_hz"});
    const auto elements = r.integer(array, "array", "num_elements");
    if (!elements || *elements < 1) r.fail("array", "num_elements", "'array.num_elements' must be an integer >= 1");
    cfg.array.num_elements = static_cast<int>(*elements);
    cfg.array.carrier_hz = r.positive(array, "array", "carrier_hz");
    cfg.array.wave_speed_mps = r.positive(array, "array", "wave_speed_mps", kSpeedOfLight);
    if (array.contains("spacing_m") == array.contains("spacing_wavelengths")) {
        r.fail("", "array", "'array' needs exactly one of spacing_m or spacing_wavelengths");
    }
    cfg.array.spacing_m = array.contains("spacing_m")
                              ? r.positive(array, "array", "spacing_m")
                              : r.positive(array, "array", "spacing_wavelengths") * cfg.array.wavelength_m();

    const auto& signal = r.section(root, "signal", true);
    r.check_keys(signal, "signal", {"kind", "carrier_hz", "parameters", "arrival_angle_deg", "amplitude",
                                    "noise_power_db", "noise_reference", "seed"});
    auto& sig = cfg.signal;
    sig.kind = parse_enum<SignalKind>(r, "signal", "kind", r.string(signal, "signal", "kind").value_or(""),
                                      {{"tone", SignalKind::tone},
                                       {"linear_fm", SignalKind::linear_fm},
                                       {"iq_two_tone", SignalKind::iq_two_tone}});
    sig.carrier_hz = r.positive(signal, "signal", "carrier_hz", cfg.array.carrier_hz);
    sig.arrival_angle_rad = deg_to_rad(r.number(signal, "signal", "arrival_angle_deg").value_or(0.0));
    if (!(std::abs(sig.arrival_angle_rad) < std::numbers::pi / 2)) {
        r.fail("signal", "arrival_angle_deg", "'signal.arrival_angle_deg' must be inside (-90, 90)");
    }
    const double amplitude = r.number(signal, "signal", "amplitude").value_or(0.5);
    if (!(amplitude >= 0.0 && amplitude <= 1.0)) r.fail("signal", "amplitude", "'signal.amplitude' must be in [0, 1]");
    cfg.zero_signal = amplitude == 0.0;
    sig.amplitude = cfg.zero_signal ? 1.0 : amplitude;
    if (signal.contains("noise_power_db") && !signal.at("noise_power_db").is_null()) {
        sig.noise_power_db = r.required_number(signal, "signal", "noise_power_db");
        sig.noise_enabled = true;
    }
    if (auto ref = r.string(signal, "signal", "noise_reference")) {
        sig.noise_reference = parse_enum<NoiseReference>(
            r, "signal", "noise_reference", *ref,
            {{"signal_amplitude", NoiseReference::signal_amplitude}, {"full_scale", NoiseReference::full_scale}});
    }
    if (auto seed = r.integer(signal, "signal", "seed")) {
        if (*seed < 0) r.fail("signal", "seed", "'signal.seed' must be non-negative");
        sig.seed = static_cast<std::uint64_t>(*seed);
    }
    const auto& params = signal.contains("parameters") ? signal.at("parameters") : ordered_json::object();
    if (!params.is_object()) r.fail("signal", "parameters", "'signal.parameters' must be an object");
    switch (sig.kind) {
        case SignalKind::tone:
            r.check_keys(params, "parameters", {});
            break;
        case SignalKind::linear_fm:
            r.check_keys(params, "parameters", {"base_tone_hz", "deviation_hz"});
            sig.base_tone_hz = r.positive(params, "parameters", "base_tone_hz");
            sig.deviation_hz = r.positive(params, "parameters", "deviation_hz");
            break;
        case SignalKind::iq_two_tone:
            r.check_keys(params, "parameters", {"i_tone_hz", "q_tone_hz"});
            sig.i_tone_hz = r.positive(params, "parameters", "i_tone_hz");
            sig.q_tone_hz = r.positive(params, "parameters", "q_tone_hz");
            break;
    }

    const auto& adc = r.section(root, "adc", false);
    r.check_keys(adc, "adc", {"fs_hz", "frontend_curve"});
    cfg.adc.fs_hz = r.positive(adc, "adc", "fs_hz", 1.6e9);
    if (adc.contains("frontend_curve")) {
        const auto& curve = adc.at("frontend_curve");
        if (!curve.is_array()) r.fail("adc", "frontend_curve", "'adc.frontend_curve' must be an array of [hz, db] pairs");
        for (const auto& pt : curve) {
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                r.fail("adc", "frontend_curve", "'adc.frontend_curve' must be an array of [hz, db] pairs");
            }
            cfg.adc.frontend_curve.push_back({pt[0].get<double>(), pt[1].get<double>()});
        }
    }

    const auto& weights = r.section(root, "weights", false);
    r.check_keys(weights, "weights", {"mode", "steer_angle_deg", "explicit"});
    const std::string mode = r.string(weights, "weights", "mode").value_or("steer");
    if (mode == "steer") {
        cfg.steer = true;
        const double deg = r.number(weights, "weights", "steer_angle_deg").value_or(rad_to_deg(sig.arrival_angle_rad));
        if (!(std::abs(deg) < 90.0)) r.fail("weights", "steer_angle_deg", "'weights.steer_angle_deg' must be inside (-90, 90)");
        cfg.steer_angle_rad = deg_to_rad(deg);
    } else if (mode == "explicit") {
        cfg.steer = false;
        if (!weights.contains("explicit")) r.fail("", "weights", "'weights.explicit' is required in explicit mode");
        try {
            cfg.explicit_weights = formats::weights_from_json(weights.at("explicit"));
        } catch (const ValidationError& e) {
            r.fail("weights", "explicit", e.what());
        }
        if (static_cast<int>(cfg.explicit_weights.size()) != cfg.array.num_elements) {
            r.fail("weights", "explicit", "'weights.explicit' needs one pair per array element");
        }
    } else {
        r.fail("weights", "mode", "'weights.mode' must be one of: steer, explicit");
    }

    const auto& window = r.section(root, "window", false);
    r.check_keys(window, "window", {"lsb_offset"});
    if (auto off = r.integer(window, "window", "lsb_offset")) {
        const int acc = TruncationWindow::accumulator_width_for(cfg.array.num_elements);
        if (*off < 0 || *off + kBeamformWidth > acc) {
            r.fail("window", "lsb_offset", "'window.lsb_offset' must be in [0, " + std::to_string(acc - kBeamformWidth) + "]");
        }
        cfg.lsb_offset = static_cast<int>(*off);
    }

    const auto& fir = r.section(root, "fir", false);
    r.check_keys(fir, "fir", {"num_taps", "coeff_bits", "cutoff_hz", "design_window", "coeffs"});
    if (auto taps = r.integer(fir, "fir", "num_taps")) {
        if (*taps < 1 || *taps > 4096) r.fail("fir", "num_taps", "'fir.num_taps' must be in [1, 4096]");
        cfg.num_taps = static_cast<int>(*taps);
    }
    if (auto bits = r.integer(fir, "fir", "coeff_bits")) {
        if (*bits < 2 || *bits > 24) r.fail("fir", "coeff_bits", "'fir.coeff_bits' must be in [2, 24]");
        cfg.coeff_bits = static_cast<int>(*bits);
    }
    if (fir.contains("cutoff_hz")) {
        cfg.cutoff_hz = r.positive(fir, "fir", "cutoff_hz");
        if (!(*cfg.cutoff_hz < cfg.adc.fs_hz / 2.0)) r.fail("fir", "cutoff_hz", "'fir.cutoff_hz' must be below fs/2");
    }
    if (auto w = r.string(fir, "fir", "design_window")) {
        cfg.design_window = parse_enum<FirWindow>(r, "fir", "design_window", *w,
                                                  {{"hamming", FirWindow::hamming},
                                                   {"blackman", FirWindow::blackman},
                                                   {"rectangular", FirWindow::rectangular}});
    }
    if (fir.contains("coeffs")) {
        try {
            cfg.coeffs = formats::coefficients_from_json(fir.at("coeffs"));
            FirSpec::from_coefficients(*cfg.coeffs, cfg.coeff_bits);
        } catch (const ValidationError& e) {
            r.fail("fir", "coeffs", e.what());
        }
        if (fir.contains("num_taps") && static_cast<int>(cfg.coeffs->size()) != cfg.num_taps) {
            r.fail("fir", "coeffs", "'fir.coeffs' length differs from 'fir.num_taps'");
        }
        cfg.num_taps = static_cast<int>(cfg.coeffs->size());
    }

    const auto& run = r.section(root, "run", true);
    r.check_keys(run, "run", {"architecture", "arithmetic", "num_samples", "output_dir"});
    if (auto a = r.string(run, "run", "architecture")) {
        cfg.architecture = parse_enum<ArchitectureSelection>(r, "run", "architecture", *a,
                                                             {{"proposed", ArchitectureSelection::proposed},
                                                              {"standard", ArchitectureSelection::standard},
                                                              {"both", ArchitectureSelection::both}});
    }
    if (auto a = r.string(run, "run", "arithmetic")) {
        cfg.arithmetic = parse_enum<Arithmetic>(r, "run", "arithmetic", *a,
                                                {{"fixed", Arithmetic::fixed}, {"float", Arithmetic::floating}});
    }
    if (auto n = r.integer(run, "run", "num_samples")) {
        if (*n < 64 || *n > (std::int64_t{1} << 26)) r.fail("run", "num_samples", "'run.num_samples' must be in [64, 2^26]");
        cfg.num_samples = static_cast<std::size_t>(*n);
    }
    if (auto d = r.string(run, "run", "output_dir")) cfg.output_dir = *d;

    try {
        cfg.array.validate();
        cfg.signal.validate();
        cfg.adc.validate();
        pipeline_config(cfg).validate(cfg.array.num_elements);
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(source_name, 0, e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.string());
}

PipelineConfig pipeline_config(const RunConfig& cfg) {
    PipelineConfig p = PipelineConfig::steered(cfg.array, cfg.adc, cfg.steer_angle_rad);
    if (!cfg.steer) {
        p.weights = cfg.explicit_weights;
        p.float_weights.clear();
    }
    p.window = cfg.lsb_offset ? TruncationWindow::with_offset(cfg.array.num_elements, *cfg.lsb_offset)
                              : TruncationWindow::msb_aligned(cfg.array.num_elements);
    if (cfg.coeffs) {
        p.fir = FirSpec::from_coefficients(*cfg.coeffs, cfg.coeff_bits);
        p.fir_prototype.clear();
    } else {
        p.fir = FirSpec::design(cfg.adc.fs_hz, cfg.cutoff_hz.value_or(cfg.adc.fs_hz / 8.0), cfg.num_taps,
                                cfg.coeff_bits, cfg.design_window);
        p.fir_prototype = design_lowpass(p.fir.num_taps, p.fir.cutoff_hz, cfg.adc.fs_hz, p.fir.design_window);
    }
    return p;
}

Capture make_capture(const RunConfig& cfg) {
    ChannelStreams streams;
    if (cfg.zero_signal) {
        streams.assign(static_cast<std::size_t>(cfg.array.num_elements), std::vector<double>(cfg.num_samples, 0.0));
    } else {
        streams = synthesize_channels(cfg.array, cfg.signal, cfg.adc.fs_hz, cfg.num_samples);
    }
    return capture(streams, cfg.adc, cfg.signal.carrier_hz);
}

SimulationOutput simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, int jobs) {
    if (jobs < 1) throw ValidationError("jobs must be >= 1");
    std::filesystem::create_directories(out_dir);
    const int saved_threads = omp_get_max_threads();
    omp_set_num_threads(jobs);

    SimulationOutput result;
    const PipelineConfig pcfg = pipeline_config(cfg);
    const Capture cap = make_capture(cfg);
    const auto [bin, side] = formats::write_capture(out_dir, "capture", cap);
    result.files = {bin, side};

    std::vector<Architecture> archs;
    if (cfg.architecture != ArchitectureSelection::standard) archs.push_back(Architecture::proposed);
    if (cfg.architecture != ArchitectureSelection::proposed) archs.push_back(Architecture::standard);

    auto csv_for = [&](Architecture a) { return out_dir / ("baseband_" + std::string(to_string(a)) + ".csv"); };
    std::vector<ArchOutput> outputs;
    if (jobs > 1 && archs.size() > 1) {
        std::vector<std::future<ArchOutput>> futures;
        for (auto a : archs) {
            futures.push_back(std::async(std::launch::async, [&, a] {
                return run_architecture(cap, pcfg, a, cfg.arithmetic, csv_for(a));
            }));
        }
        for (auto& f : futures) outputs.push_back(f.get());
    } else {
        for (auto a : archs) outputs.push_back(run_architecture(cap, pcfg, a, cfg.arithmetic, csv_for(a)));
    }

    ordered_json metrics_doc;
    metrics_doc["format_version"] = formats::kFormatVersion;
    metrics_doc["fs_hz"] = cfg.adc.fs_hz;
    metrics_doc["arithmetic"] = to_string(cfg.arithmetic);
    metrics_doc["results"] = ordered_json::array();
    for (const auto& o : outputs) {
        const auto meta_path = out_dir / ("baseband_" + std::string(to_string(o.arch)) + ".json");
        formats::write_json(meta_path, o.meta);
        result.files.push_back(csv_for(o.arch));
        result.files.push_back(meta_path);
        result.warnings.insert(result.warnings.end(), o.warnings.begin(), o.warnings.end());

        const std::span<const std::complex<double>> steady(o.samples.data() + std::min(o.warmup, o.samples.size()),
                                                           o.samples.size() - std::min(o.warmup, o.samples.size()));
        for (const char* component : {"i", "q"}) {
            ordered_json entry = metrics_entry(steady, cfg.adc.fs_hz, component);
            ordered_json tagged{{"architecture", to_string(o.arch)}};
            tagged.update(entry);
            metrics_doc["results"].push_back(tagged);
        }
    }
    metrics_doc["warmup_samples"] = outputs.front().warmup;
    const auto metrics_path = out_dir / "metrics.json";
    formats::write_json(metrics_path, metrics_doc);
    result.files.push_back(metrics_path);

    if (outputs.size() == 2) {
        const auto report = compare(outputs[0].samples, outputs[1].samples, outputs[0].warmup);
        ordered_json j = formats::to_json(report);
        j["a"] = to_string(outputs[0].arch);
        j["b"] = to_string(outputs[1].arch);
        j["arithmetic"] = to_string(cfg.arithmetic);
        const auto cmp_path = out_dir / "comparison.json";
        formats::write_json(cmp_path, j);
        result.files.push_back(cmp_path);
    }
    omp_set_num_threads(saved_threads);
    return result;
}

ordered_json metrics_entry(std::span<const std::complex<double>> samples, double fs_hz, const std::string& component,
                           const SpectralOptions& opts) {
    ordered_json entry{{"component", component}};
    try {
        SpectralMetrics m;
        if (component == "complex") {
            m = spectral_metrics(samples, fs_hz, opts);
        } else {
            std::vector<double> real(samples.size());
            for (std::size_t k = 0; k < samples.size(); ++k) {
                real[k] = component == "i" ? samples[k].real() : samples[k].imag();
            }
            m = spectral_metrics(std::span<const double>(real), fs_hz, opts);
        }
        entry["status"] = "ok";
        entry["metrics"] = formats::to_json(m);
    } catch (const NoFundamentalError&) {
        entry["status"] = "no-fundamental";
        entry["metrics"] = nullptr;
    }
    return entry;
}

ordered_json plan(const PlanRequest& req) {
    if (!(req.fc_hz > 0.0)) throw ValidationError("--fc must be positive");
    if (!req.fs_hz && !req.bw_hz) throw ValidationError("plan needs --fs, or --bw (optionally with --zone)");
    if (req.zone_order && !req.bw_hz) throw ValidationError("--zone needs --bw");

    ordered_json j;
    j["format_version"] = formats::kFormatVersion;
    j["fc_hz"] = req.fc_hz;
    j["bw_hz"] = req.bw_hz ? ordered_json(*req.bw_hz) : ordered_json(nullptr);
    if (req.fs_hz) {
        const FrequencyPlan p = nyquist_zone(req.fc_hz, *req.fs_hz);
        ordered_json z = formats::to_json(p);
        if (req.bw_hz) {
            const double half = *req.fs_hz / 2.0;
            const double lo = req.fc_hz - *req.bw_hz / 2.0;
            const double hi = req.fc_hz + *req.bw_hz / 2.0;
            z["band_within_zone"] = lo >= (p.zone_index - 1) * half && hi <= p.zone_index * half;
        }
        j["zone"] = z;
    }
    if (req.bw_hz) {
        const double fc = req.fc_hz;
        const double bw = *req.bw_hz;
        ordered_json ranges = ordered_json::array();
        auto add = [&](const char* placement, int n, const std::optional<SampleRateRange>& r, int zone) {
            ordered_json e{{"placement", placement}, {"n", n}, {"zone_index", zone}, {"infeasible", !r.has_value()}};
            e["fs_min_hz"] = r ? ordered_json(r->fs_min_hz) : ordered_json(nullptr);
            e["fs_max_hz"] = r && std::isfinite(r->fs_max_hz) ? ordered_json(r->fs_max_hz) : ordered_json(nullptr);
            ranges.push_back(e);
        };
        const bool direct = req.placement != Placement::inverted;
        const bool inverted = req.placement != Placement::direct;
        if (req.zone_order) {
            const int n = *req.zone_order;
            if (direct) add("direct", n, undersample_range_direct(fc, bw, n), 2 * n + 1);
            if (inverted) {
                if (n < 1) throw ValidationError("inverted placement needs --zone >= 1");
                add("inverted", n, undersample_range_inverted(fc, bw, n), 2 * n);
            }
        } else {
            if (direct) {
                const int max_n = static_cast<int>(std::floor(max_direct_zone_order(fc, bw) + 1e-9));
                for (int n = 0; n <= max_n; ++n) {
                    if (auto r = undersample_range_direct(fc, bw, n)) add("direct", n, r, 2 * n + 1);
                }
            }
            if (inverted) {
                const int max_n = static_cast<int>(std::floor(max_inverted_zone_order(fc, bw) + 1e-9));
                for (int n = 1; n <= max_n; ++n) {
                    if (auto r = undersample_range_inverted(fc, bw, n)) add("inverted", n, r, 2 * n);
                }
            }
        }
        j["ranges"] = ranges;
    }
    return j;
}

std::string plan_text(const ordered_json& report) {
    std::ostringstream os;
    os << "fc = " << format_hz(report["fc_hz"].get<double>()) << " Hz";
    if (!report["bw_hz"].is_null()) os << ", bw = " << format_hz(report["bw_hz"].get<double>()) << " Hz";
    os << '\n';
    if (report.contains("zone")) {
        const auto& z = report["zone"];
        os << "fs = " << format_hz(z["fs_hz"].get<double>()) << " Hz -> zone " << z["zone_index"].get<int>() << " ("
           << z["orientation"].get<std::string>() << "), alias " << format_hz(z["alias_if_hz"].get<double>()) << " Hz";
        if (z["on_zone_edge"].get<bool>()) os << "  [on zone edge]";
        if (z.contains("band_within_zone") && !z["band_within_zone"].get<bool>()) os << "  [band straddles zones]";
        os << '\n';
    }
    if (report.contains("ranges")) {
        os << "placement  n   zone  fs_min_hz        fs_max_hz\n";
        for (const auto& e : report["ranges"]) {
            char line[160];
            if (e["infeasible"].get<bool>()) {
                std::snprintf(line, sizeof line, "%-9s %3d %5d  infeasible\n", e["placement"].get<std::string>().c_str(),
                              e["n"].get<int>(), e["zone_index"].get<int>());
            } else {
                const std::string hi = e["fs_max_hz"].is_null() ? "inf" : format_hz(e["fs_max_hz"].get<double>());
                std::snprintf(line, sizeof line, "%-9s %3d %5d  %-16s %s\n", e["placement"].get<std::string>().c_str(),
                              e["n"].get<int>(), e["zone_index"].get<int>(),
                              format_hz(e["fs_min_hz"].get<double>()).c_str(), hi.c_str());
            }
            os << line;
        }
    }
    return os.str();
}

BeamResult beampattern(const BeamRequest& req) {
    req.array.validate();
    ComplexWeightSet w;
    if (req.weights) {
        w = *req.weights;
    } else {
        w = steering_weights(req.array, req.steer_rad.value_or(0.0));
    }
    if (static_cast<int>(w.size()) != req.array.num_elements) throw ValidationError("weight count differs from element count");
    const auto grid = angle_grid(req.min_rad, req.max_rad, req.step_rad);
    BeamResult out;
    out.pattern = beam_pattern(req.array, w, grid);
    ordered_json j;
    j["format_version"] = formats::kFormatVersion;
    j["num_elements"] = req.array.num_elements;
    j["spacing_m"] = req.array.spacing_m;
    j["carrier_hz"] = req.array.carrier_hz;
    j["steer_angle_deg"] = req.weights ? ordered_json(nullptr) : ordered_json(rad_to_deg(req.steer_rad.value_or(0.0)));
    j["weights"] = formats::to_json(w);
    j["grid"] = {{"min_deg", rad_to_deg(req.min_rad)},
                 {"max_deg", rad_to_deg(req.max_rad)},
                 {"step_deg", rad_to_deg(req.step_rad)},
                 {"points", grid.size()}};
    j.update(formats::to_json(summarize(out.pattern)));
    out.summary = j;
    return out;
}

ordered_json metrics(const MetricsRequest& req) {
    if (req.component != "i" && req.component != "q" && req.component != "complex") {
        throw ValidationError("--component must be i, q or complex");
    }
    const auto samples = formats::read_baseband_csv(req.csv);
    if (req.skip >= samples.size()) throw ValidationError("--skip removes every sample");
    const std::span<const std::complex<double>> steady(samples.data() + req.skip, samples.size() - req.skip);
    SpectralOptions opts;
    opts.harmonics = req.harmonics;
    opts.window = req.window;
    ordered_json j;
    j["format_version"] = formats::kFormatVersion;
    j["source"] = req.csv.filename().string();
    j["fs_hz"] = req.fs_hz;
    j["skipped_samples"] = req.skip;
    j.update(metrics_entry(steady, req.fs_hz, req.component, opts));
    if (!req.spectrum_csv.empty()) {
        auto window = req.window.value_or(SpectrumWindow::blackman_harris);
        if (j["status"] == "ok") {
            window = j["metrics"]["window"] == "rectangular" ? SpectrumWindow::rectangular : SpectrumWindow::blackman_harris;
        }
        if (req.component == "complex") {
            formats::write_spectrum_csv(req.spectrum_csv, power_spectrum(steady, req.fs_hz, window));
        } else {
            std::vector<double> real(steady.size());
            for (std::size_t k = 0; k < steady.size(); ++k) {
                real[k] = req.component == "i" ? steady[k].real() : steady[k].imag();
            }
            formats::write_spectrum_csv(req.spectrum_csv,
                                        power_spectrum(std::span<const double>(real), req.fs_hz, window));
        }
    }
    return j;
}

}  // namespace dbfrx::app
