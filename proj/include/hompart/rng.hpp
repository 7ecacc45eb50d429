#pragma once

#include "hompart/ratio.hpp"

#include <cstdint>

namespace hompart {

// SplitMix64. Fixed constants; every generated instance is a pure function
// of (seed, index), which is what makes generation order- and
// thread-count-independent.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash2(std::uint64_t seed, std::uint64_t idx) {
    return mix64(seed ^ mix64(idx));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() { return mix64(s_++); }
    // uniform in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t s_;
};

/**
 * Bernoulli(p) decisions keyed by index: true iff hash2(seed, idx) falls
 * under floor(p * 2^64). p enters as an exact rational, so the threshold
 * itself is exact and the decision reproducible bit-for-bit.
 */
class NoiseGate {
public:
    NoiseGate(std::uint64_t seed, const Ratio& p) : seed_(seed) {
        if (p.num() < 0 || Ratio::integer(1) < p)
            throw std::domain_error("NoiseGate: probability outside [0,1]");
        if (p.num() == 0) {
            threshold_ = 0;
        } else if (p == Ratio::integer(1)) {
            threshold_ = ~std::uint64_t{0};
            all_ = true;
        } else {
            bigint t = (p.num() << 64) / p.den();
            threshold_ = static_cast<std::uint64_t>(t);
        }
    }

    bool fires(std::uint64_t idx) const {
        if (all_) return true;
        if (threshold_ == 0) return false;
        return hash2(seed_, idx) < threshold_;
    }

private:
    std::uint64_t seed_;
    std::uint64_t threshold_ = 0;
    bool all_ = false;
};

} // namespace hompart
