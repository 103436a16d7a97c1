#include "csc/rng.hpp"

#include <cmath>

namespace csc {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamGamma = 0xD2B74407B1CE6E93ull;

std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::substream_seed(std::uint64_t master, std::uint64_t id) {
    return finalize(master + id * kStreamGamma);
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return finalize(seed_ + counter_ * kGamma);
}

double CounterRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
}

std::uint64_t CounterRng::uniform_int(std::uint64_t bound) {
    // Reject the tail of the 64-bit range that would bias the modulus.
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
}

double CounterRng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

}  // namespace csc
