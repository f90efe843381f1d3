#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dpmlc {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard; the std:: distributions are not, so all draws are derived from
// raw engine words to keep runs bit-reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_state_(seed ? seed : 0x9e3779b97f4a7c15ull) {
        // splitmix64 warmup so nearby seeds do not produce correlated streams
        for (int i = 0; i < 4; ++i) next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (engine_state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Log-uniform over [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(bounded(span));
    }

    /// Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(bounded(n)); }

    /// Standard normal via Box-Muller (the std distribution is not portable).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    // Multiply-shift bounding (unbiased enough for 64-bit words vs. small n).
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    std::uint64_t engine_state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dpmlc
