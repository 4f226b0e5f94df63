#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbfrx/reference_chain.hpp"

namespace dbfrx {

struct StageCost {
    std::string stage;
    std::uint64_t real_multipliers = 0;
    std::uint64_t real_adders = 0;
    /// One fused MAC = one multiplier plus its accumulation add.
    std::uint64_t dsp_fused_macs = 0;
    /// DSP slices the reference FPGA build reported for this stage (N=4, T=64, P=8 only).
    std::optional<std::uint64_t> reported_dsp_slices;
    std::string notes;
};

struct ResourceReport {
    Architecture architecture = Architecture::proposed;
    int channels = 0;
    int taps = 0;
    int parallel = 0;
    std::vector<StageCost> stages;
    StageCost totals;

    const StageCost& stage(const std::string& name) const;
};

/// Analytic multiplier/adder counts per pipeline stage. Throws std::domain_error for
/// non-positive parameters.
ResourceReport estimate(Architecture arch, int channels, int taps = 64, int parallel = 8);

}  // namespace dbfrx
