#pragma once

#include <cstdint>

namespace dbfrx {

constexpr std::int64_t signed_max(int bits) { return (std::int64_t{1} << (bits - 1)) - 1; }
constexpr std::int64_t signed_min(int bits) { return -(std::int64_t{1} << (bits - 1)); }

constexpr bool fits_signed(std::int64_t v, int bits) { return v >= signed_min(bits) && v <= signed_max(bits); }

/// Low `bits` of `v` reinterpreted as a two's-complement value (hardware wrap).
constexpr std::int64_t wrap_signed(std::int64_t v, int bits) {
    const auto mask = (std::uint64_t{1} << bits) - 1;
    const auto sign = std::uint64_t{1} << (bits - 1);
    const auto low = static_cast<std::uint64_t>(v) & mask;
    return static_cast<std::int64_t>(low ^ sign) - static_cast<std::int64_t>(sign);
}

/// Number of bits needed to represent values 0..n-1 (ceil(log2 n)), 0 for n <= 1.
constexpr int ceil_log2(std::uint64_t n) {
    int bits = 0;
    while ((std::uint64_t{1} << bits) < n) ++bits;
    return bits;
}

/// Real multiply/add tallies accumulated by the instrumented reference kernels.
struct OpCounts {
    std::uint64_t multiplies = 0;
    std::uint64_t additions = 0;

    OpCounts& operator+=(const OpCounts& o) {
        multiplies += o.multiplies;
        additions += o.additions;
        return *this;
    }
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

}  // namespace dbfrx
