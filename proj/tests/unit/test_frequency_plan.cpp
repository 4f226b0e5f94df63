#include <doctest.h>

#include <cmath>
#include <limits>

#include "dbfrx/frequency_plan.hpp"
#include "oracles.hpp"

using namespace dbfrx;

TEST_CASE("nyquist zone classification") {
    auto p = nyquist_zone(3.6e9, 1.6e9);
    CHECK(p.zone_index == 5);
    CHECK(p.orientation == SpectrumOrientation::direct);
    CHECK(p.alias_if_hz == doctest::Approx(4e8).epsilon(1e-12));
    CHECK_FALSE(p.on_zone_edge);

    p = nyquist_zone(2.0e9, 1.6e9);
    CHECK(p.zone_index == 3);
    CHECK(p.orientation == SpectrumOrientation::direct);
    CHECK(p.alias_if_hz == doctest::Approx(4e8).epsilon(1e-12));

    p = nyquist_zone(0.3e9, 1.6e9);
    CHECK(p.zone_index == 1);
    CHECK(p.alias_if_hz == doctest::Approx(3e8));

    p = nyquist_zone(1.2e9, 1.6e9);
    CHECK(p.zone_index == 2);
    CHECK(p.orientation == SpectrumOrientation::mirrored);
    CHECK(p.alias_if_hz == doctest::Approx(4e8));
}

TEST_CASE("zone edges are flagged") {
    const auto p = nyquist_zone(1.6e9, 1.6e9);
    CHECK(p.on_zone_edge);
    CHECK(nyquist_zone(2.4e9, 1.6e9).on_zone_edge);
    CHECK_THROWS_AS(nyquist_zone(-1.0, 1.6e9), std::domain_error);
    CHECK_THROWS_AS(nyquist_zone(1e9, 0.0), std::domain_error);
}

TEST_CASE("alias is a fixed point") {
    for (double fc : {1.234e8, 7.77e8, 2.1e9, 3.6e9, 5.55e9}) {
        const auto p = nyquist_zone(fc, 1.6e9);
        CHECK(p.alias_if_hz >= 0.0);
        CHECK(p.alias_if_hz < 0.8e9);
        CHECK(nyquist_zone(p.alias_if_hz, 1.6e9).alias_if_hz == doctest::Approx(p.alias_if_hz));
    }
}

TEST_CASE("direct undersampling ranges") {
    auto r = undersample_range_direct(2e9, 1e8, 1);
    REQUIRE(r);
    CHECK(r->fs_min_hz == doctest::Approx(4.1e9 / 3.0).epsilon(1e-12));
    CHECK(r->fs_max_hz == doctest::Approx(1.95e9).epsilon(1e-12));
    CHECK(r->contains(1.6e9));

    r = undersample_range_direct(2e9, 1e8, 0);
    REQUIRE(r);
    CHECK(r->fs_min_hz == doctest::Approx(4.1e9));
    CHECK(std::isinf(r->fs_max_hz));

    CHECK_FALSE(undersample_range_direct(2e9, 1e8, 10));
    CHECK(max_direct_zone_order(2e9, 1e8) == doctest::Approx(9.75));
}

TEST_CASE("inverted undersampling ranges") {
    auto r = undersample_range_inverted(2e9, 1e8, 2);
    REQUIRE(r);
    CHECK(r->fs_min_hz == doctest::Approx(1.025e9));
    CHECK(r->fs_max_hz == doctest::Approx(1.3e9));
    r = undersample_range_inverted(2e9, 1e8, 1);
    REQUIRE(r);
    CHECK(r->fs_min_hz == doctest::Approx(2.05e9));
    CHECK(r->fs_max_hz == doctest::Approx(3.9e9));
    CHECK_FALSE(undersample_range_inverted(2e9, 1e8, 25));
    CHECK(max_inverted_zone_order(2e9, 1e8) == doctest::Approx(10.25));
    CHECK_THROWS_AS(undersample_range_inverted(2e9, 1e8, 0), std::domain_error);
}

TEST_CASE("feasible ranges keep the band in one zone") {
    for (double fc : {2e9, 3.6e9, 1.1e9}) {
        for (double bw : {2e7, 1e8, 2.5e8}) {
            for (int n = 0; n < 30; ++n) {
                for (int inverted = 0; inverted < 2; ++inverted) {
                    if (inverted && n == 0) continue;
                    const auto r = inverted ? undersample_range_inverted(fc, bw, n) : undersample_range_direct(fc, bw, n);
                    if (!r) continue;
                    const double hi = std::isinf(r->fs_max_hz) ? r->fs_min_hz * 2 : r->fs_max_hz;
                    for (int s = 1; s < 10; ++s) {
                        const long double fs = r->fs_min_hz + (hi - r->fs_min_hz) * s / 10.0;
                        CHECK(oracle::band_in_single_zone(fc - bw / 2, fc + bw / 2, fs));
                        const long long zone = oracle::zone_of(fc, fs);
                        CHECK(zone == (inverted ? 2 * n : 2 * n + 1));
                    }
                }
            }
        }
    }
}

TEST_CASE("range bounds decrease with zone order") {
    std::optional<SampleRateRange> prev;
    for (int n = 1; n <= 9; ++n) {
        const auto r = undersample_range_direct(2e9, 1e8, n);
        REQUIRE(r);
        if (prev) {
            CHECK(r->fs_min_hz < prev->fs_min_hz);
            CHECK(r->fs_max_hz < prev->fs_max_hz);
        }
        prev = r;
    }
}
