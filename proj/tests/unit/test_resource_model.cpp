#include <doctest.h>

#include "dbfrx/resource_model.hpp"

using namespace dbfrx;

TEST_CASE("proposed architecture at the reference size") {
    const auto r = estimate(Architecture::proposed, 4, 64, 8);
    CHECK(r.stage("fir").real_multipliers == 1024);
    CHECK(r.stage("fir").real_adders == 1008);
    CHECK(r.stage("beamformer").dsp_fused_macs == 64);
    CHECK(r.stage("beamformer").real_multipliers == 64);
    CHECK(r.stage("beamformer").real_adders == 48);
    CHECK(r.stage("ddc").real_multipliers == 0);
    CHECK(r.stage("ddc").real_adders == 0);
    CHECK(r.stage("fir").reported_dsp_slices == 1358u);
    CHECK(r.totals.reported_dsp_slices == 1422u);
}

TEST_CASE("standard architecture at the reference size") {
    const auto r = estimate(Architecture::standard, 4, 64, 8);
    CHECK(r.stage("beamformer").real_multipliers == 128);
    CHECK(r.stage("fir").real_multipliers == 4096);
    CHECK(r.stage("fir").real_adders == 4032);
    CHECK(r.totals.reported_dsp_slices == 773u);
}

TEST_CASE("sixteen channels scale only the proposed beamformer") {
    const auto a = estimate(Architecture::proposed, 4);
    const auto b = estimate(Architecture::proposed, 16);
    CHECK(b.stage("beamformer").real_multipliers == 4 * a.stage("beamformer").real_multipliers);
    CHECK(b.stage("beamformer").dsp_fused_macs == 4 * a.stage("beamformer").dsp_fused_macs);
    CHECK(b.stage("fir").real_multipliers == a.stage("fir").real_multipliers);
    CHECK(b.stage("fir").real_adders == a.stage("fir").real_adders);
    CHECK(b.stage("ddc").real_adders == a.stage("ddc").real_adders);
    CHECK_FALSE(b.stage("fir").reported_dsp_slices);
}

TEST_CASE("totals, linearity and crossover") {
    for (int n = 1; n <= 32; ++n) {
        for (int t : {2, 7, 64}) {
            for (int p : {1, 8}) {
                const auto prop = estimate(Architecture::proposed, n, t, p);
                const auto std_ = estimate(Architecture::standard, n, t, p);
                for (const auto* r : {&prop, &std_}) {
                    std::uint64_t m = 0, a = 0;
                    for (const auto& s : r->stages) {
                        m += s.real_multipliers;
                        a += s.real_adders;
                    }
                    CHECK(r->totals.real_multipliers == m);
                    CHECK(r->totals.real_adders == a);
                }
                CHECK(std_.totals.real_multipliers > prop.totals.real_multipliers);
                CHECK(std_.stage("fir").real_multipliers == static_cast<std::uint64_t>(n) * estimate(Architecture::standard, 1, t, p).stage("fir").real_multipliers);
                CHECK(prop.stage("beamformer").real_multipliers == static_cast<std::uint64_t>(n) * estimate(Architecture::proposed, 1, t, p).stage("beamformer").real_multipliers);
            }
        }
    }
    CHECK_THROWS_AS(estimate(Architecture::proposed, 0), std::domain_error);
    CHECK_THROWS_AS(estimate(Architecture::proposed, 4).stage("nope"), std::out_of_range);
}
