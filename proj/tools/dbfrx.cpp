#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dbfrx/app.hpp"
#include "dbfrx/resource_model.hpp"

namespace fs = std::filesystem;
using namespace dbfrx;
using formats::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::optional<double> si(const std::string& flag, const std::string& text) {
    if (text.empty()) return std::nullopt;
    try {
        return app::parse_si(text);
    } catch (const ValidationError& e) {
        throw ValidationError(flag + ": " + e.what());
    }
}

void emit_json(const ordered_json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        formats::write_json(path, j);
    }
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": malformed JSON");
    }
}

struct PlanArgs {
    std::string fc, fs, bw, placement = "both", format = "text", json_out;
    std::optional<int> zone;
};

struct SimulateArgs {
    std::string config, out_dir;
    int jobs = 1;
};

struct BeamArgs {
    std::string config, fc, spacing, weights, steer, out_dir = "beam";
    int elements = 4;
    double spacing_wavelengths = 0.5;
    double min_deg = -90.0, max_deg = 90.0, step_deg = 0.1;
};

struct ResourceArgs {
    std::string arch = "both", format = "text", json_out;
    int channels = 4, taps = 64, parallel = 8;
};

struct MetricsArgs {
    std::string csv, fs = "1.6G", component = "i", window, json_out, spectrum;
    int harmonics = 5;
    std::size_t skip = 0;
};

int run_plan(const PlanArgs& a) {
    app::PlanRequest req;
    req.fc_hz = *si("--fc", a.fc);
    req.fs_hz = si("--fs", a.fs);
    req.bw_hz = si("--bw", a.bw);
    req.zone_order = a.zone;
    static const std::map<std::string, app::Placement> placements{
        {"direct", app::Placement::direct}, {"inverted", app::Placement::inverted}, {"both", app::Placement::both}};
    req.placement = placements.at(a.placement);
    const auto report = app::plan(req);
    if (a.format == "json") {
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout << app::plan_text(report);
    }
    if (!a.json_out.empty()) formats::write_json(a.json_out, report);
    return 0;
}

int run_simulate(const SimulateArgs& a) {
    const app::RunConfig cfg = app::load_run_config(a.config);
    const fs::path out = a.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(a.out_dir);
    const auto result = app::simulate(cfg, out, a.jobs);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return 0;
}

int run_beampattern(const BeamArgs& a) {
    app::BeamRequest req;
    if (!a.config.empty()) {
        const app::RunConfig cfg = app::load_run_config(a.config);
        req.array = cfg.array;
        if (cfg.steer) {
            req.steer_rad = cfg.steer_angle_rad;
        } else {
            req.weights = cfg.explicit_weights;
        }
    } else {
        req.array.num_elements = a.elements;
        req.array.carrier_hz = si("--fc", a.fc).value_or(3.6e9);
        req.array.spacing_m = a.spacing.empty() ? a.spacing_wavelengths * req.array.wavelength_m() : *si("--spacing", a.spacing);
    }
    if (!a.steer.empty()) req.steer_rad = deg_to_rad(*si("--steer", a.steer));
    if (!a.weights.empty()) {
        req.weights = formats::weights_from_json(read_json_file(a.weights));
        req.steer_rad.reset();
    }
    if (!(a.step_deg > 0.0) || !(a.min_deg < a.max_deg) || a.min_deg < -90.0 || a.max_deg > 90.0) {
        throw ValidationError("grid needs -90 <= --min < --max <= 90 and --step > 0");
    }
    req.min_rad = deg_to_rad(a.min_deg);
    req.max_rad = deg_to_rad(a.max_deg);
    req.step_rad = deg_to_rad(a.step_deg);
    const auto result = app::beampattern(req);
    fs::create_directories(a.out_dir);
    formats::write_beam_csv(fs::path(a.out_dir) / "beam_pattern.csv", result.pattern);
    formats::write_json(fs::path(a.out_dir) / "beam_summary.json", result.summary);
    std::cout << result.summary.dump(2) << '\n';
    return 0;
}

int run_resources(const ResourceArgs& a) {
    std::vector<Architecture> archs;
    if (a.arch != "standard") archs.push_back(Architecture::proposed);
    if (a.arch != "proposed") archs.push_back(Architecture::standard);
    ordered_json doc;
    doc["format_version"] = formats::kFormatVersion;
    doc["reports"] = ordered_json::array();
    for (auto arch : archs) {
        const auto report = estimate(arch, a.channels, a.taps, a.parallel);
        doc["reports"].push_back(formats::to_json(report));
        if (a.format == "text") std::cout << formats::resource_table(report) << '\n';
    }
    if (a.format == "json") std::cout << doc.dump(2) << '\n';
    if (!a.json_out.empty()) formats::write_json(a.json_out, doc);
    return 0;
}

int run_metrics(const MetricsArgs& a) {
    app::MetricsRequest req;
    req.csv = a.csv;
    req.fs_hz = *si("--fs", a.fs);
    req.component = a.component;
    req.harmonics = a.harmonics;
    req.skip = a.skip;
    req.spectrum_csv = a.spectrum;
    if (a.window == "rectangular") {
        req.window = SpectrumWindow::rectangular;
    } else if (a.window == "blackman-harris") {
        req.window = SpectrumWindow::blackman_harris;
    }
    emit_json(app::metrics(req), a.json_out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Bit-accurate simulator of a beamform-before-DDC digital receiver"};
    cli.require_subcommand(1);

    PlanArgs plan_args;
    auto* plan = cli.add_subcommand("plan", "Nyquist zone / undersampling rate planning");
    plan->add_option("--fc", plan_args.fc, "Carrier frequency (Hz, k/M/G suffix ok)")->required();
    plan->add_option("--fs", plan_args.fs, "Sampling rate to classify");
    plan->add_option("--bw", plan_args.bw, "Signal bandwidth");
    plan->add_option("--zone", plan_args.zone, "Zone order n")->check(CLI::NonNegativeNumber);
    plan->add_option("--placement", plan_args.placement)->check(CLI::IsMember({"direct", "inverted", "both"}));
    plan->add_option("--format", plan_args.format)->check(CLI::IsMember({"text", "json"}));
    plan->add_option("--json", plan_args.json_out, "Also write the JSON report here");

    SimulateArgs sim_args;
    auto* sim = cli.add_subcommand("simulate", "Run a capture through the receiver chains");
    sim->add_option("config", sim_args.config, "Run config JSON")->required();
    sim->add_option("--out-dir", sim_args.out_dir, "Override run.output_dir");
    sim->add_option("--jobs", sim_args.jobs, "Worker threads")->check(CLI::Range(1, 256));

    BeamArgs beam_args;
    auto* beam = cli.add_subcommand("beampattern", "Array factor of a weight set");
    beam->add_option("--config", beam_args.config, "Take array and weights from a run config");
    beam->add_option("--elements", beam_args.elements)->check(CLI::Range(1, 4096));
    beam->add_option("--fc", beam_args.fc, "Carrier (default 3.6G)");
    auto* spacing = beam->add_option("--spacing", beam_args.spacing, "Element spacing in metres");
    beam->add_option("--spacing-wavelengths", beam_args.spacing_wavelengths)->excludes(spacing);
    beam->add_option("--steer", beam_args.steer, "Steering angle in degrees");
    beam->add_option("--weights", beam_args.weights, "JSON file of [re, im] integer weights");
    beam->add_option("--min", beam_args.min_deg, "Grid start (deg)");
    beam->add_option("--max", beam_args.max_deg, "Grid end (deg)");
    beam->add_option("--step", beam_args.step_deg, "Grid step (deg)");
    beam->add_option("--out-dir", beam_args.out_dir);

    ResourceArgs res_args;
    auto* res = cli.add_subcommand("resources", "Arithmetic resource estimate");
    res->add_option("--arch", res_args.arch)->check(CLI::IsMember({"proposed", "standard", "both"}));
    res->add_option("--channels", res_args.channels)->check(CLI::PositiveNumber);
    res->add_option("--taps", res_args.taps)->check(CLI::PositiveNumber);
    res->add_option("--parallel", res_args.parallel)->check(CLI::PositiveNumber);
    res->add_option("--format", res_args.format)->check(CLI::IsMember({"text", "json"}));
    res->add_option("--json", res_args.json_out, "Also write the JSON report here");

    MetricsArgs met_args;
    auto* met = cli.add_subcommand("metrics", "Spectral metrics of a baseband CSV");
    met->add_option("csv", met_args.csv)->required();
    met->add_option("--fs", met_args.fs, "Sample rate of the CSV");
    met->add_option("--component", met_args.component)->check(CLI::IsMember({"i", "q", "complex"}));
    met->add_option("--harmonics", met_args.harmonics)->check(CLI::Range(1, 50));
    met->add_option("--window", met_args.window)->check(CLI::IsMember({"rectangular", "blackman-harris"}));
    met->add_option("--skip", met_args.skip, "Leading samples to drop");
    met->add_option("--json", met_args.json_out, "Write the report here instead of stdout");
    met->add_option("--spectrum", met_args.spectrum, "Also write the power spectrum CSV here");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return kExitUsage;
    }

    try {
        if (*plan) return run_plan(plan_args);
        if (*sim) return run_simulate(sim_args);
        if (*beam) return run_beampattern(beam_args);
        if (*res) return run_resources(res_args);
        if (*met) return run_metrics(met_args);
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
