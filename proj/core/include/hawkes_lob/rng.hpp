#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hawkes_lob {

// Deterministic splittable generator (splitmix64). Chosen over the standard
// library engines so that streams are bit-reproducible across platforms and
// standard library versions; the algorithm name is pinned in output metadata.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "splitmix64";

    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1), both endpoints excluded.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double mean = 1.0) { return -mean * std::log(uniform()); }

    double normal() {
        // Box-Muller; second variate discarded to keep the stream position
        // independent of call history.
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Derives an independent stream; feeding the child index through the
    // output function decorrelates nearby seeds.
    Rng split(std::uint64_t stream) const {
        Rng child(state_ ^ 0x5851f42d4c957f2dULL);
        child.state_ += stream * 0x9e3779b97f4a7c15ULL;
        child.state_ = child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

}  // namespace hawkes_lob
