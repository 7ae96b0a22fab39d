#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace heavytail {

// splitmix64 finalizer, used to derive independent substream seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Child seed for a numbered substream. Streams derived from the same master
// seed but different indices are effectively independent.
inline constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ull));
}

// Uniform random source. All samplers take one of these explicitly so that
// results are a pure function of the seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~0ull - ~0ull % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

inline double sample_exponential(Rng& rng, double rate) {
    return -std::log1p(-rng.uniform()) / rate;
}

}
