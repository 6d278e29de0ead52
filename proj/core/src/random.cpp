#include "ecosim/random.hpp"

namespace ecosim {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::child(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t key = splitmix64(seed);
    key = splitmix64(key ^ a);
    key = splitmix64(key ^ (b * 0xD1B54A32D192ED03ULL));
    return RandomStream(key);
}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    if (lo == hi) return lo;
    // Inclusive upper bound: scale a 53-bit integer over [0, 2^53].
    const std::uint64_t k = index((1ULL << 53) + 1);
    const double t = static_cast<double>(k) * 0x1.0p-53;
    return lo + (hi - lo) * t;
}

std::uint64_t RandomStream::index(std::uint64_t n) {
    // Lemire's multiply-shift with rejection.
    u128 m = static_cast<u128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            m = static_cast<u128>(engine_()) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace ecosim
