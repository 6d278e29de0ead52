#pragma once

#include <cstdint>
#include <random>

namespace ecosim {

// Deterministic random stream. The engine is std::mt19937_64; the
// conversions to doubles and bounded integers are done here so results do
// not depend on the standard library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Independent stream keyed by (seed, a, b). Used to give every Monte
    // Carlo iteration, and every purpose within an iteration, its own stream.
    static RandomStream child(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();

    // Uniform on [lo, hi]; returns lo when lo == hi.
    double uniform(double lo, double hi);

    // Uniform integer in [0, n). Requires n > 0. Unbiased (rejection).
    std::uint64_t index(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ecosim
