#pragma once

#include <cstdint>

// Deterministic, platform-independent randomness. Two flavors:
//  - Stream: a splitmix64 sequence for generators that consume values in order.
//  - key(...): stateless hashing of (seed, tag, id, counter) tuples, so one
//    variable can be redrawn without perturbing any other draw.

namespace cfc::rng {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <class... Words>
constexpr std::uint64_t key(std::uint64_t seed, Words... words) {
    std::uint64_t h = mix(seed);
    ((h = mix(h ^ static_cast<std::uint64_t>(words))), ...);
    return h;
}

inline double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::uint32_t to_below(std::uint64_t h, std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(h) * n) >> 64);
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGolden;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double unit() { return to_unit(next()); }

    std::uint32_t below(std::uint32_t n) { return to_below(next(), n); }

    template <class T>
    void shuffle(T& seq) {
        for (std::size_t i = seq.size(); i > 1; --i) {
            std::size_t j = below(static_cast<std::uint32_t>(i));
            std::swap(seq[i - 1], seq[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace cfc::rng
