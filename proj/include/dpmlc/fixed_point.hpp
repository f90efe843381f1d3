#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace dpmlc {

/// Signed fixed-point format Qm.n (m integer bits including sign, n fraction
/// bits). Values are stored as scaled integers; the default Q8.8 covers
/// [-128, 128 - 2^-8] in 16 bits. A Q8.16 variant is used only to attribute
/// emitted-program disagreements to quantization.
struct FixedFormat {
    int int_bits = 8;
    int frac_bits = 8;

    std::int64_t scale() const { return std::int64_t{1} << frac_bits; }
    std::int64_t raw_max() const { return (std::int64_t{1} << (int_bits + frac_bits - 1)) - 1; }
    std::int64_t raw_min() const { return -(std::int64_t{1} << (int_bits + frac_bits - 1)); }

    std::string name() const {
        return "q" + std::to_string(int_bits) + "." + std::to_string(frac_bits);
    }
    bool operator==(const FixedFormat&) const = default;
};

namespace fixed {

/// Round to the nearest representable value, saturating at the range ends.
inline std::int64_t quantize_raw(double x, FixedFormat f) {
    if (std::isnan(x)) return 0;
    const double scaled = x * static_cast<double>(f.scale());
    if (scaled >= static_cast<double>(f.raw_max())) return f.raw_max();
    if (scaled <= static_cast<double>(f.raw_min())) return f.raw_min();
    return std::llround(scaled);
}

inline double dequantize(std::int64_t raw, FixedFormat f) {
    return static_cast<double>(raw) / static_cast<double>(f.scale());
}

inline double quantize(double x, FixedFormat f) { return dequantize(quantize_raw(x, f), f); }

/// True iff x survives quantization without hitting the saturation rails.
inline bool in_range(double x, FixedFormat f) {
    const double scaled = x * static_cast<double>(f.scale());
    return scaled < static_cast<double>(f.raw_max()) + 0.5 &&
           scaled > static_cast<double>(f.raw_min()) - 0.5;
}

inline std::int64_t sat(std::int64_t raw, FixedFormat f) {
    return std::clamp(raw, f.raw_min(), f.raw_max());
}

inline std::int64_t sat_add(std::int64_t a, std::int64_t b, FixedFormat f) {
    return sat(a + b, f);
}

/// Fixed-point product with round-half-up on the discarded fraction bits.
inline std::int64_t sat_mul(std::int64_t a, std::int64_t b, FixedFormat f) {
    const std::int64_t prod = a * b;
    const std::int64_t half = std::int64_t{1} << (f.frac_bits - 1);
    // floor((prod + half) / 2^n); >> on negatives floors, which is what we want
    return sat((prod + half) >> f.frac_bits, f);
}

}  // namespace fixed
}  // namespace dpmlc
