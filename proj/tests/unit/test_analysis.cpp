#include <doctest.h>

#include <random>

#include "dbfrx/adc_model.hpp"
#include "dbfrx/analysis.hpp"
#include "dbfrx/dbf_core.hpp"
#include "dbfrx/error.hpp"
#include "oracles.hpp"

using namespace dbfrx;

namespace {

std::vector<double> sine(std::size_t n, double cycles, double amp, double phase = 0.0) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = amp * std::sin(2.0 * std::numbers::pi * cycles * static_cast<double>(k) / static_cast<double>(n) + phase);
    }
    return x;
}

std::vector<double> quantized_dithered_sine(std::size_t n, double cycles, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> dither(0.0, 0.05 / 2048.0);
    auto x = sine(n, cycles, 2047.0 / 2048.0, ph(rng));
    for (auto& v : x) v = quantize(v + dither(rng)) / 2048.0;
    return x;
}

}  // namespace

TEST_CASE("pure coherent sine has no spurs") {
    const auto x = sine(4096, 127, 0.9);
    const auto m = spectral_metrics(x, 1.6e9, {});
    CHECK(m.window == SpectrumWindow::rectangular);
    CHECK(m.sfdr_db > 250.0);
    CHECK(m.fundamental_hz == doctest::Approx(127.0 * 1.6e9 / 4096));
    CHECK(m.fundamental_power_db == doctest::Approx(10.0 * std::log10(0.81 / 2)).epsilon(1e-9));
}

TEST_CASE("12-bit quantized dithered sine reaches the ideal snr") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto x = quantized_dithered_sine(1 << 14, 1021, seed);
        const auto m = spectral_metrics(x, 1.6e9, {});
        CHECK(m.snr_db == doctest::Approx(oracle::ideal_sqnr_db(12)).epsilon(1.0 / 74.0));
        CHECK(m.sndr_db <= m.snr_db);
        CHECK(m.sfdr_db >= 0.0);
    }
}

TEST_CASE("rectangular and blackman-harris agree on snr") {
    const auto x = quantized_dithered_sine(1 << 14, 1021, 9);
    SpectralOptions rect{5, SpectrumWindow::rectangular};
    SpectralOptions bh{5, SpectrumWindow::blackman_harris};
    CHECK(std::abs(spectral_metrics(x, 1.6e9, rect).snr_db - spectral_metrics(x, 1.6e9, bh).snr_db) < 1.0);
}

TEST_CASE("second harmonic at -60 dBc") {
    auto x = sine(8192, 331, 0.5);
    const auto h2 = sine(8192, 662, 0.5e-3);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += h2[k];
    const auto m = spectral_metrics(x, 1.6e9, {});
    CHECK(m.sfdr_db == doctest::Approx(60.0).epsilon(0.5 / 60));
    CHECK(m.thd_db == doctest::Approx(-60.0).epsilon(0.5 / 60));
}

TEST_CASE("harmonics fold into the first zone") {
    auto x = sine(4096, 1500, 0.5);
    const auto h3 = sine(4096, 4500, 0.5e-2);  // aliases to bin 404
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += h3[k];
    const auto m = spectral_metrics(x, 1.6e9, {});
    CHECK(m.thd_db == doctest::Approx(-40.0).epsilon(0.01));
}

TEST_CASE("non-coherent tone picks blackman-harris and locates the tone") {
    const auto x = sine(4096, 200.37, 0.5);
    const auto m = spectral_metrics(x, 1.6e9, {});
    CHECK(m.window == SpectrumWindow::blackman_harris);
    CHECK(std::abs(m.fundamental_hz - 200.37 * m.bin_hz) < 0.5 * m.bin_hz);
}

TEST_CASE("complex input is two-sided") {
    std::vector<std::complex<double>> z(2048);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = std::polar(0.3, -2.0 * std::numbers::pi * 100.0 * k / 2048.0);
    const auto m = spectral_metrics(z, 2048.0, {});
    CHECK(m.fundamental_hz == doctest::Approx(-100.0));
    const auto spec = power_spectrum(z, 2048.0, SpectrumWindow::rectangular);
    CHECK(spec.front().frequency_hz == doctest::Approx(-1024.0));
    CHECK(spec.size() == 2048);
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(spectral_metrics(std::vector<double>(64, 0.0), 1.0, {}), NoFundamentalError);
    CHECK_THROWS_AS(spectral_metrics(std::vector<double>(128, 0.25), 1.0, {}), NoFundamentalError);
    CHECK_THROWS_AS(spectral_metrics(std::vector<double>(32, 0.25), 1.0, {}), std::invalid_argument);
}

TEST_CASE("parseval") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> z(1000);
    for (auto& v : z) v = {g(rng), g(rng)};
    const auto p = fft_bin_power(z, SpectrumWindow::rectangular);
    double freq = 0, time = 0;
    for (double v : p) freq += v;
    for (const auto& v : z) time += std::norm(v);
    CHECK(freq == doctest::Approx(time * 1000.0).epsilon(1e-9));
}

TEST_CASE("spectrum normalization of a real sine") {
    const auto s = power_spectrum(sine(1024, 64, 1.0), 1024.0, SpectrumWindow::rectangular);
    CHECK(s.size() == 513);
    CHECK(s[64].power_db == doctest::Approx(10.0 * std::log10(0.5)).epsilon(1e-9));
    CHECK(s[10].power_db == doctest::Approx(-300.0).epsilon(1e-3));
}

TEST_CASE("instantaneous frequency and band power") {
    std::vector<std::complex<double>> z(512);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = std::polar(1.0, 2.0 * std::numbers::pi * 0.125 * static_cast<double>(k));
    for (double f : instantaneous_frequency(z, 1000.0)) CHECK(f == doctest::Approx(125.0));
    CHECK(band_power_fraction(z, 1000.0, 150.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(band_power_fraction(z, 1000.0, 100.0) < 1e-20);
}

TEST_CASE("beam pattern") {
    const auto cfg = ArrayConfig::half_wavelength(4, 3.6e9);
    const auto grid = angle_grid(-std::numbers::pi / 2, std::numbers::pi / 2, deg_to_rad(0.1));
    SUBCASE("broadside peak and first null") {
        const auto s = summarize(beam_pattern(cfg, steering_weights(cfg, 0.0), grid));
        CHECK(rad_to_deg(s.peak_angle_rad) == doctest::Approx(0.0));
        CHECK(s.peak_gain_db == doctest::Approx(20.0 * std::log10(4.0)).epsilon(1e-12));
        REQUIRE(s.first_null_above_rad);
        CHECK(std::abs(rad_to_deg(*s.first_null_above_rad) - 30.0) <= 0.1);
        CHECK(std::abs(rad_to_deg(*s.first_null_below_rad) + 30.0) <= 0.1);
    }
    SUBCASE("steered to 10 degrees") {
        const auto s = summarize(beam_pattern(cfg, steering_weights(cfg, deg_to_rad(10)), grid));
        CHECK(std::abs(rad_to_deg(s.peak_angle_rad) - 10.0) <= 0.1);
        CHECK(s.peak_gain_db == doctest::Approx(12.04).epsilon(0.05 / 12.04));
    }
    SUBCASE("matches the array factor oracle") {
        const auto w = steering_weights(cfg, deg_to_rad(-25));
        const auto p = beam_pattern(cfg, w, grid);
        std::vector<oracle::cld> wl;
        for (const auto& c : w.weights) wl.emplace_back(c.re / 2047.0L, c.im / 2047.0L);
        for (std::size_t k = 0; k < grid.size(); k += 37) {
            const auto ref = oracle::array_factor_db(wl, cfg.spacing_m, cfg.wave_speed_mps, cfg.carrier_hz, grid[k]);
            if (ref > -100) CHECK(p.gains_db[k] == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
        }
    }
    SUBCASE("single element is flat") {
        const auto one = ArrayConfig::half_wavelength(1, 3.6e9);
        for (double g : beam_pattern(one, unit_weights(1), grid).gains_db) CHECK(std::abs(g) < 1e-12);
    }
    SUBCASE("grid errors") {
        CHECK_THROWS_AS(beam_pattern(cfg, unit_weights(3), grid), ValidationError);
        CHECK_THROWS_AS(angle_grid(0.1, 0.0, 0.01), ValidationError);
    }
}

TEST_CASE("compare") {
    std::vector<std::complex<double>> a(100, {3.0, -1.0});
    auto b = a;
    auto r = compare(a, b, 10);
    CHECK(r.max_abs_diff == 0.0);
    CHECK(r.relative_rms == 0.0);
    CHECK(r.samples_compared == 90);
    CHECK(r.warmup_samples == 10);
    b[50] += 1.0;
    r = compare(a, b, 10);
    CHECK(r.max_abs_diff == 1.0);
    CHECK(r.i.max_abs == 1.0);
    CHECK(r.q.max_abs == 0.0);
    b[5] += 100.0;
    CHECK(compare(a, b, 10).max_abs_diff == 1.0);
    b.pop_back();
    CHECK_THROWS_AS(compare(a, b, 0), ValidationError);
}
