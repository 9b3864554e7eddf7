#pragma once

#include <cstdint>
#include <cmath>

namespace trimlab {

// splitmix64 (Vigna). Small state, passes BigCrush, and cheap enough that
// each replica can own an independent stream derived from the master seed
// by counter-splitting, so worker scheduling never affects results.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng from_seed(std::uint64_t seed) { return Rng(mix(seed)); }

    // Derive stream `stream_id` from `seed`. Streams with distinct ids are
    // statistically independent for practical purposes.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(mix(mix(seed) ^ mix(stream_id ^ 0xd1342543de82ef95ULL)));
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1]; never returns 0, safe under log().
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // Standard exponential via inversion.
    double exponential() { return -std::log(uniform_pos()); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace trimlab
