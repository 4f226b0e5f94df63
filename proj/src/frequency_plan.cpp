#include "dbfrx/frequency_plan.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dbfrx {
namespace {

constexpr double kRelTol = 1e-9;

bool le_tol(double a, double b) { return a <= b + kRelTol * std::max(std::abs(a), std::abs(b)); }

void check_band(double fc_hz, double bw_hz) {
    if (!(bw_hz > 0.0)) throw std::domain_error("bandwidth must be positive");
    if (!(fc_hz > bw_hz / 2.0)) throw std::domain_error("carrier must exceed half the bandwidth");
}

}  // namespace

const char* to_string(SpectrumOrientation o) {
    return o == SpectrumOrientation::direct ? "direct" : "mirrored";
}

FrequencyPlan nyquist_zone(double fc_hz, double fs_hz) {
    if (!(fs_hz > 0.0)) throw std::domain_error("sample rate must be positive");
    if (!(fc_hz >= 0.0)) throw std::domain_error("carrier must be non-negative");

    FrequencyPlan plan;
    plan.fc_hz = fc_hz;
    plan.fs_hz = fs_hz;

    const double half = fs_hz / 2.0;
    const double zones = fc_hz / half;
    double whole = std::round(zones);
    if (std::abs(zones - whole) <= kRelTol * std::max(1.0, zones)) {
        plan.on_zone_edge = true;
    } else {
        whole = std::floor(zones);
    }
    plan.zone_index = static_cast<int>(whole) + 1;
    plan.orientation = plan.zone_index % 2 == 1 ? SpectrumOrientation::direct : SpectrumOrientation::mirrored;

    double r = std::fmod(fc_hz, fs_hz);
    if (plan.on_zone_edge) {
        r = std::fmod(whole * half, fs_hz);
    }
    // Edge placements at odd multiples of fs/2 report alias = fs/2.
    plan.alias_if_hz = r < half ? r : fs_hz - r;
    return plan;
}

double max_direct_zone_order(double fc_hz, double bw_hz) { return (fc_hz - bw_hz / 2.0) / (2.0 * bw_hz); }

double max_inverted_zone_order(double fc_hz, double bw_hz) { return (fc_hz + bw_hz / 2.0) / (2.0 * bw_hz); }

std::optional<SampleRateRange> undersample_range_direct(double fc_hz, double bw_hz, int n) {
    check_band(fc_hz, bw_hz);
    if (n < 0) throw std::domain_error("zone order n must be >= 0");
    if (!le_tol(static_cast<double>(n), max_direct_zone_order(fc_hz, bw_hz))) return std::nullopt;

    SampleRateRange range{(2.0 * fc_hz + bw_hz) / (2.0 * n + 1.0),
                          n == 0 ? std::numeric_limits<double>::infinity() : (fc_hz - bw_hz / 2.0) / n};
    if (!le_tol(range.fs_min_hz, range.fs_max_hz)) return std::nullopt;
    return range;
}

std::optional<SampleRateRange> undersample_range_inverted(double fc_hz, double bw_hz, int n) {
    check_band(fc_hz, bw_hz);
    if (n < 1) throw std::domain_error("zone order n must be >= 1 for inverted placement");
    if (!le_tol(static_cast<double>(n), max_inverted_zone_order(fc_hz, bw_hz))) return std::nullopt;

    SampleRateRange range{(fc_hz + bw_hz / 2.0) / n, (2.0 * fc_hz - bw_hz) / (2.0 * n - 1.0)};
    if (!le_tol(range.fs_min_hz, range.fs_max_hz)) return std::nullopt;
    return range;
}

}  // namespace dbfrx
