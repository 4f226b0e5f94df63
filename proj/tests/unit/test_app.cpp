#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dbfrx/app.hpp"
#include "dbfrx/error.hpp"

using namespace dbfrx;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"({
  "version": 1,
  "array": {"num_elements": 4, "spacing_wavelengths": 0.5, "carrier_hz": 2e9},
  "signal": {
    "kind": "iq_two_tone",
    "parameters": {"i_tone_hz": 3e7, "q_tone_hz": 5e6},
    "arrival_angle_deg": 0.0,
    "amplitude": 0.5,
    "seed": 7
  },
  "adc": {"fs_hz": 1.6e9},
  "run": {"architecture": "both", "arithmetic": "fixed", "num_samples": 2048, "output_dir": "out"}
})";

std::string with(const std::string& from, const std::string& to) {
    std::string s = kBase;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

int error_line(const std::string& text) {
    try {
        app::parse_run_config(text, "cfg.json");
    } catch (const app::ConfigError& e) {
        return e.line();
    }
    return -1;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("dbfrx_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("si suffixes") {
    CHECK(app::parse_si("1.6G") == 1.6e9);
    CHECK(app::parse_si("400M") == 4e8);
    CHECK(app::parse_si("10k") == 1e4);
    CHECK(app::parse_si("3.6e9") == 3.6e9);
    CHECK_THROWS_AS(app::parse_si("abc"), ValidationError);
    CHECK_THROWS_AS(app::parse_si("1.0X"), ValidationError);
    CHECK_THROWS_AS(app::parse_si(""), ValidationError);
}

TEST_CASE("run config parsing") {
    const auto cfg = app::parse_run_config(kBase);
    CHECK(cfg.array.num_elements == 4);
    CHECK(cfg.array.spacing_m == doctest::Approx(kSpeedOfLight / 2e9 / 2));
    CHECK(cfg.signal.carrier_hz == 2e9);
    CHECK(cfg.steer);
    CHECK(cfg.num_samples == 2048);
    CHECK_FALSE(cfg.signal.noise_enabled);
    CHECK(app::pipeline_config(cfg).fir.coeffs_q.size() == 64);
}

TEST_CASE("config errors point at the offending line") {
    CHECK(error_line(with("\"seed\": 7", "\"seed\": 7, \"bogus\": 1")) == 9);
    CHECK(error_line(with("\"num_elements\": 4", "\"num_elements\": 0")) == 3);
    CHECK(error_line(with("\"version\": 1", "\"version\": 2")) == 2);
    CHECK(error_line(with("\"fs_hz\": 1.6e9", "\"fs_hz\": -1")) == 11);
    CHECK(error_line(with("\"kind\": \"iq_two_tone\"", "\"kind\": \"chirp\"")) == 5);
    CHECK(error_line(with("\"amplitude\": 0.5,", "\"amplitude\": 0.5")) >= 9);
    CHECK(error_line(with("\"arithmetic\": \"fixed\"", "\"arithmetic\": \"double\"")) == 12);
    // A carrier that does not alias to fs/4 is rejected without a usable line.
    CHECK(error_line(with("\"carrier_hz\": 2e9}", "\"carrier_hz\": 2.1e9}")) == 0);
}

TEST_CASE("explicit weights and coefficients") {
    auto text = with("\"adc\": {\"fs_hz\": 1.6e9},",
                     "\"adc\": {\"fs_hz\": 1.6e9},\n  \"weights\": {\"mode\": \"explicit\", \"explicit\": [[2047,0],[2047,0],[2047,0],[2047,0]]},\n"
                     "  \"fir\": {\"coeffs\": [1, 2, 3, 2, 1]},");
    const auto cfg = app::parse_run_config(text);
    CHECK_FALSE(cfg.steer);
    CHECK(cfg.num_taps == 5);
    const auto p = app::pipeline_config(cfg);
    CHECK(p.fir.coeffs_q == std::vector<std::int32_t>{1, 2, 3, 2, 1});
    CHECK(p.weights.weights[1] == ComplexWeight{2047, 0});

    text = with("\"adc\": {\"fs_hz\": 1.6e9},", "\"adc\": {\"fs_hz\": 1.6e9},\n  \"weights\": {\"mode\": \"explicit\", \"explicit\": [[2047,0]]},");
    CHECK_THROWS_AS(app::parse_run_config(text), app::ConfigError);
}

TEST_CASE("capture files round trip") {
    auto cfg = app::parse_run_config(kBase);
    const auto cap = app::make_capture(cfg);
    const auto dir = scratch("capture");
    fs::create_directories(dir);
    const auto [bin, side] = formats::write_capture(dir, "cap", cap);
    CHECK(fs::file_size(bin) == cap.samples_per_channel() * 4 * 2);
    const auto back = formats::read_capture(bin, side);
    CHECK(back.num_channels == 4);
    for (int c = 0; c < 4; ++c) CHECK(back.channel(c) == cap.channel(c));
    fs::remove_all(dir);
}

TEST_CASE("baseband csv round trip") {
    auto cfg = app::parse_run_config(kBase);
    const auto bb = run_proposed(app::make_capture(cfg), app::pipeline_config(cfg));
    const auto dir = scratch("csv");
    fs::create_directories(dir);
    formats::write_baseband_csv(dir / "b.csv", bb);
    CHECK(formats::read_baseband_csv(dir / "b.csv") == bb.samples());
    std::ofstream(dir / "bad.csv") << "frame_index,slot,i,q\n0,0,1\n";
    CHECK_THROWS_AS(formats::read_baseband_csv(dir / "bad.csv"), ValidationError);
    fs::remove_all(dir);
}

TEST_CASE("simulate writes deterministic artifacts") {
    const auto cfg = app::parse_run_config(kBase);
    const auto a = scratch("sim_a"), b = scratch("sim_b");
    const auto ra = app::simulate(cfg, a, 1);
    const auto rb = app::simulate(cfg, b, 2);
    REQUIRE(ra.files.size() == rb.files.size());
    CHECK(ra.files.size() == 8);
    for (std::size_t k = 0; k < ra.files.size(); ++k) {
        CHECK(ra.files[k].filename() == rb.files[k].filename());
        CHECK(slurp(ra.files[k]) == slurp(rb.files[k]));
    }
    CHECK(ra.warnings.empty());
    const auto metrics = formats::ordered_json::parse(slurp(a / "metrics.json"));
    CHECK(metrics["results"].size() == 4);
    const auto& i = metrics["results"][0]["metrics"];
    const auto& q = metrics["results"][1]["metrics"];
    CHECK(std::abs(i["fundamental_hz"].get<double>() - 3e7) <= i["bin_hz"].get<double>());
    CHECK(std::abs(q["fundamental_hz"].get<double>() - 5e6) <= q["bin_hz"].get<double>());
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("zero amplitude reports no fundamental") {
    const auto cfg = app::parse_run_config(with("\"amplitude\": 0.5", "\"amplitude\": 0"));
    const auto dir = scratch("zero");
    app::simulate(cfg, dir);
    const auto metrics = formats::ordered_json::parse(slurp(dir / "metrics.json"));
    for (const auto& r : metrics["results"]) CHECK(r["status"] == "no-fundamental");
    const auto samples = formats::read_baseband_csv(dir / "baseband_standard.csv");
    for (const auto& v : samples) CHECK(v == std::complex<double>{});
    fs::remove_all(dir);
}

TEST_CASE("plan reports") {
    app::PlanRequest req;
    req.fc_hz = 3.6e9;
    req.fs_hz = 1.6e9;
    auto j = app::plan(req);
    CHECK(j["zone"]["zone_index"] == 5);
    CHECK(j["zone"]["orientation"] == "direct");
    CHECK(j["zone"]["alias_if_hz"].get<double>() == doctest::Approx(4e8));

    req = {};
    req.fc_hz = 2e9;
    req.bw_hz = 1e8;
    req.zone_order = 1;
    req.placement = app::Placement::direct;
    j = app::plan(req);
    REQUIRE(j["ranges"].size() == 1);
    CHECK(j["ranges"][0]["fs_min_hz"].get<double>() == doctest::Approx(1.36667e9).epsilon(1e-5));
    CHECK(j["ranges"][0]["fs_max_hz"].get<double>() == doctest::Approx(1.95e9));

    req.zone_order = 10;
    j = app::plan(req);
    CHECK(j["ranges"][0]["infeasible"] == true);
    CHECK(app::plan_text(j).find("infeasible") != std::string::npos);

    req = {};
    req.fc_hz = 1e9;
    CHECK_THROWS_AS(app::plan(req), ValidationError);
}

TEST_CASE("beampattern summary") {
    app::BeamRequest req;
    req.array = ArrayConfig::half_wavelength(4, 3.6e9);
    req.steer_rad = 0.0;
    auto r = app::beampattern(req);
    CHECK(r.summary["peak_gain_db"].get<double>() == doctest::Approx(12.0412).epsilon(1e-4));
    CHECK(std::abs(r.summary["first_null_above_deg"].get<double>() - 30.0) <= 0.1);
    req.array.num_elements = 1;
    r = app::beampattern(req);
    for (double g : r.pattern.gains_db) CHECK(std::abs(g) < 1e-12);
}
