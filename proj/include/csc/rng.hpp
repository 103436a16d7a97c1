#pragma once

#include <cstdint>
#include <string>

namespace csc {

// Deterministic counter-based generator ("csc-rng v1").
//
// The raw stream is the SplitMix64 sequence: draw i of a stream with seed s is
//       finalize(s + (i+1) * 0x9E3779B97F4A7C15)
// where finalize(z) is the SplitMix64 output mix
//       z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//       z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//       return z ^ (z >> 31)
// Independent substreams are derived by a counter offset on the seed itself:
//       substream_seed(master, id) = finalize(master + id * 0xD2B74407B1CE6E93)
// Floating point draws use the top 53 bits; Gaussians use Box-Muller on two
// consecutive uniforms (both values of the pair are consumed in order).
// The mapping contains no platform-dependent state, so identical seeds give
// bitwise identical draws everywhere.
class CounterRng {
public:
    static constexpr const char* kVersion = "csc-rng v1";

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // Seed for the id-th substream of a master seed.
    static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t id);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer in [0, bound), exact (rejection sampled). bound >= 1.
    std::uint64_t uniform_int(std::uint64_t bound);

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian();

    std::uint64_t counter() const { return counter_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace csc
