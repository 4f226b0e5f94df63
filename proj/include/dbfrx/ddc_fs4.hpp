#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dbfrx/dbf_core.hpp"

namespace dbfrx {

/// Position in the {1,0,-1,0} / {0,1,0,-1} mixing sequences. Sample k of a
/// stream uses phase k mod 4.
struct DdcPhase {
    int index = 0;

    DdcPhase advanced(std::uint64_t samples) const {
        return DdcPhase{static_cast<int>((static_cast<std::uint64_t>(index) + samples) % 4)};
    }
    friend bool operator==(const DdcPhase&, const DdcPhase&) = default;
};

struct DdcStats {
    /// Negations of the most negative code that were saturated to the maximum.
    std::uint64_t saturations = 0;
};

/// Multiplier-free mix by exp(-j*pi*n/2): I' = Re cos + Im sin, Q' = -Re sin + Im cos.
/// The output keeps the input bit width.
std::pair<IqFrame, DdcPhase> ddc_frame(const IqFrame& in, DdcPhase phase, DdcStats* stats = nullptr);

/// Whole stream starting at `start`; frames are independent given their phase, so
/// they are processed in parallel.
std::vector<IqFrame> ddc_frames(const std::vector<IqFrame>& in, DdcPhase start = {}, DdcStats* stats = nullptr);

namespace serial {
std::vector<IqFrame> ddc_frames(const std::vector<IqFrame>& in, DdcPhase start = {}, DdcStats* stats = nullptr);
}

}  // namespace dbfrx
