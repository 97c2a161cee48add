#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mtom {

// Deterministic random source. All randomness in the toolkit flows through
// seeded instances of this class; independent consumers derive disjoint
// substreams from one master seed so that adding a consumer does not shift
// the draws of another.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Substream derivation: splitmix64 over (seed, stream id).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive(seed, stream));
    }

    std::uint64_t next_u64() { return eng_(); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    // Uniform integer in [0, bound).
    std::uint32_t uniform_u32(std::uint32_t bound) {
        return std::uniform_int_distribution<std::uint32_t>(0, bound - 1)(eng_);
    }

    bool bit() { return (eng_() >> 63) != 0; }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

    // Circularly-symmetric complex Gaussian with the given total variance.
    std::complex<double> cnormal(double total_variance) {
        const double s = std::sqrt(total_variance / 2.0);
        return {s * normal(), s * normal()};
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace mtom
