#include "dbfrx/resource_model.hpp"

#include <stdexcept>

namespace dbfrx {
namespace {

bool is_reference_build(int channels, int taps, int parallel) { return channels == 4 && taps == 64 && parallel == 8; }

StageCost sum(const std::vector<StageCost>& stages) {
    StageCost t;
    t.stage = "total";
    std::uint64_t reported = 0;
    bool all_reported = true;
    for (const auto& s : stages) {
        t.real_multipliers += s.real_multipliers;
        t.real_adders += s.real_adders;
        t.dsp_fused_macs += s.dsp_fused_macs;
        if (s.reported_dsp_slices) {
            reported += *s.reported_dsp_slices;
        } else {
            all_reported = false;
        }
    }
    if (all_reported) t.reported_dsp_slices = reported;
    return t;
}

}  // namespace

const StageCost& ResourceReport::stage(const std::string& name) const {
    for (const auto& s : stages) {
        if (s.stage == name) return s;
    }
    throw std::out_of_range("no stage named " + name);
}

ResourceReport estimate(Architecture arch, int channels, int taps, int parallel) {
    if (channels < 1 || taps < 1 || parallel < 1) throw std::domain_error("channels, taps and parallel must be >= 1");
    const std::uint64_t n = static_cast<std::uint64_t>(channels);
    const std::uint64_t t = static_cast<std::uint64_t>(taps);
    const std::uint64_t p = static_cast<std::uint64_t>(parallel);
    const bool calibrated = is_reference_build(channels, taps, parallel);
    auto reported = [&](std::uint64_t v) { return calibrated ? std::optional<std::uint64_t>(v) : std::nullopt; };

    ResourceReport r;
    r.architecture = arch;
    r.channels = channels;
    r.taps = taps;
    r.parallel = parallel;

    if (arch == Architecture::proposed) {
        r.stages.push_back({"beamformer", n * p * 2, (n - 1) * p * 2, n * p * 2, reported(64),
                            "real IF x complex weight; fused-MAC count also equals the add count when every "
                            "product is accumulated in its own DSP slice"});
        r.stages.push_back({"ddc", 0, 0, 0, reported(0), "fs/4 sign inversion and I/Q swap, no multipliers"});
        r.stages.push_back({"fir", t * p * 2, (t - 1) * p * 2, t * p * 2, reported(1358),
                            "single combined channel; reported DSP count is a synthesis mapping outcome"});
    } else {
        r.stages.push_back({"ddc", 0, 0, 0, reported(0), "per-channel fs/4 down-conversion"});
        r.stages.push_back({"fir", n * t * p * 2, n * (t - 1) * p * 2, n * t * p * 2, reported(645),
                            "per-channel I/Q filtering; the reference build exceeded the device DSPs and "
                            "spilled into fabric logic, so reported slices undercount the arithmetic"});
        r.stages.push_back({"beamformer", n * p * 4, n * p * 2 + (n - 1) * p * 2, n * p * 4, reported(128),
                            "complex x complex weight multiply and channel sum"});
    }
    r.totals = sum(r.stages);
    return r;
}

}  // namespace dbfrx
