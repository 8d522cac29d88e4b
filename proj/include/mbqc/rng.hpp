// Counter-based per-shot random stream: draw i of stream (seed, shot) is a
// pure hash, so shots are independent and reproducible regardless of
// scheduling order.
#pragma once

#include <cstdint>

namespace mbqc {

struct CounterRng {
    std::uint64_t key = 0;
    std::uint64_t ctr = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key(mix(seed ^ mix(stream + 0x85EBCA77C2B2AE63ULL))) {}

    std::uint64_t next_u64() { return mix(key + (++ctr) * 0xD1B54A32D192ED03ULL); }

    // uniform in [0, 1)
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }
};

} // namespace mbqc
