#include "dbfrx/ddc_fs4.hpp"

#include "dbfrx/error.hpp"

namespace dbfrx {
namespace {

std::int64_t negate_saturating(std::int64_t v, int bits, std::uint64_t& saturations) {
    if (v == signed_min(bits)) {
        ++saturations;
        return signed_max(bits);
    }
    return -v;
}

IqFrame mix_frame(const IqFrame& in, int phase, std::uint64_t& saturations) {
    if (in.bit_width < 2 || in.bit_width > 62) throw ValidationError("ddc input width out of range");
    if (!in.in_range()) throw ValidationError("ddc input sample exceeds its declared width");
    IqFrame out;
    out.frame_index = in.frame_index;
    out.bit_width = in.bit_width;
    const int w = in.bit_width;
    for (std::size_t p = 0; p < kParallel; ++p) {
        const std::int64_t re = in.i[p];
        const std::int64_t im = in.q[p];
        switch ((phase + static_cast<int>(p)) & 3) {
            case 0:
                out.i[p] = re;
                out.q[p] = im;
                break;
            case 1:
                out.i[p] = im;
                out.q[p] = negate_saturating(re, w, saturations);
                break;
            case 2:
                out.i[p] = negate_saturating(re, w, saturations);
                out.q[p] = negate_saturating(im, w, saturations);
                break;
            default:
                out.i[p] = negate_saturating(im, w, saturations);
                out.q[p] = re;
                break;
        }
    }
    return out;
}

}  // namespace

std::pair<IqFrame, DdcPhase> ddc_frame(const IqFrame& in, DdcPhase phase, DdcStats* stats) {
    std::uint64_t sat = 0;
    IqFrame out = mix_frame(in, phase.index, sat);
    if (stats) stats->saturations += sat;
    return {out, phase.advanced(kParallel)};
}

std::vector<IqFrame> ddc_frames(const std::vector<IqFrame>& in, DdcPhase start, DdcStats* stats) {
    for (const auto& frame : in) {
        if (frame.bit_width < 2 || frame.bit_width > 62) throw ValidationError("ddc input width out of range");
        if (!frame.in_range()) throw ValidationError("ddc input sample exceeds its declared width");
    }
    std::vector<IqFrame> out(in.size());
    std::uint64_t sat = 0;
    const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) reduction(+ : sat)
    for (std::ptrdiff_t f = 0; f < n; ++f) {
        const int phase = start.advanced(static_cast<std::uint64_t>(f) * kParallel).index;
        out[static_cast<std::size_t>(f)] = mix_frame(in[static_cast<std::size_t>(f)], phase, sat);
    }
    if (stats) stats->saturations += sat;
    return out;
}

namespace serial {
std::vector<IqFrame> ddc_frames(const std::vector<IqFrame>& in, DdcPhase start, DdcStats* stats) {
    std::vector<IqFrame> out;
    out.reserve(in.size());
    DdcPhase phase = start;
    for (const auto& frame : in) {
        auto [mixed, next] = ddc_frame(frame, phase, stats);
        out.push_back(mixed);
        phase = next;
    }
    return out;
}
}  // namespace serial

}  // namespace dbfrx
