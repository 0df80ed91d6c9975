#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace usbone {

/// Deterministic random stream. Wraps mt19937_64 with explicit bit-to-double
/// mappings so generated values do not depend on the standard library's
/// distribution implementations.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : eng_(seed) {}
    RandomStream(uint64_t seed, uint64_t stream) {
        std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                          static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
        eng_.seed(seq);
    }

    uint64_t bits() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // modulo bias is negligible for n << 2^64
        return eng_() % n;
    }

    int range(int lo, int hi) {  // inclusive ends
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double gauss() {
        // Box-Muller, first component only; deterministic two-draw cost.
        double u1 = uniform01(), u2 = uniform01();
        u1 = std::max(u1, 1e-300);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Rayleigh sample with scale sigma (mode of the density).
    double rayleigh(double sigma) {
        double u = std::max(uniform01(), 1e-300);
        return sigma * std::sqrt(-2.0 * std::log(u));
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace usbone
