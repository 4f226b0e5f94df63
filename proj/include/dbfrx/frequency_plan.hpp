#pragma once

#include <optional>

namespace dbfrx {

enum class SpectrumOrientation { direct, mirrored };

const char* to_string(SpectrumOrientation o);

/// Where a carrier lands after sampling at fs.
struct FrequencyPlan {
    int zone_index = 1;  // 1-based Nyquist zone
    SpectrumOrientation orientation = SpectrumOrientation::direct;
    double alias_if_hz = 0.0;  // in [0, fs/2)
    double fs_hz = 0.0;
    double fc_hz = 0.0;
    /// fc sits on a zone boundary (fc mod fs/2 == 0 within 1e-9 relative). Such a
    /// placement violates the strict Nyquist inequality and should be rejected by callers.
    bool on_zone_edge = false;
};

FrequencyPlan nyquist_zone(double fc_hz, double fs_hz);

/// Closed interval of valid sample rates. `fs_max_hz` is +inf for the n = 0 direct case.
struct SampleRateRange {
    double fs_min_hz;
    double fs_max_hz;

    bool contains(double fs_hz) const { return fs_hz >= fs_min_hz && fs_hz <= fs_max_hz; }
};

/// Sample-rate range that places [fc - bw/2, fc + bw/2] in odd zone 2n+1.
/// std::nullopt when the range is empty or n is above the zone bound.
std::optional<SampleRateRange> undersample_range_direct(double fc_hz, double bw_hz, int n);

/// Sample-rate range that places the band in even zone 2n (spectrum inverted), n >= 1.
std::optional<SampleRateRange> undersample_range_inverted(double fc_hz, double bw_hz, int n);

/// Largest n accepted by undersample_range_direct / _inverted.
double max_direct_zone_order(double fc_hz, double bw_hz);
double max_inverted_zone_order(double fc_hz, double bw_hz);

}  // namespace dbfrx
