#pragma once

#include <array>
#include <cstdint>

namespace mrsde {

// Philox4x32-10 counter-based generator.  Every draw is addressed by a
// 128-bit counter and a 64-bit key, so any (replication, particle, step)
// coordinate can be regenerated independently of evaluation order or
// thread scheduling.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key);
};

// Stream lanes keep logically distinct consumers of randomness out of each
// other's way while sharing one seed.
enum class NoiseLane : std::uint32_t {
    scheme = 0,     // driving Gaussians of the particle scheme
    reference = 1,  // extra Gaussians for coupled reference transitions
    initial = 2,    // initial-condition sampling
    aux = 3,        // diagnostics, random probes, test scaffolding
};

// Addressable N(0,1) / U[0,1) field for one (seed, replication, lane).
// normal() consumes one Philox block per call; identical coordinates give
// identical values on every platform and thread count.
class NoiseSource {
public:
    NoiseSource(std::uint64_t seed, std::uint32_t replication, NoiseLane lane);

    double normal(std::uint32_t particle, std::uint32_t step, std::uint32_t slot = 0) const;
    double uniform01(std::uint32_t particle, std::uint32_t step, std::uint32_t slot = 0) const;

    std::uint64_t seed() const { return seed_; }
    std::uint32_t replication() const { return replication_; }

private:
    std::array<std::uint32_t, 4> counter(std::uint32_t particle, std::uint32_t step,
                                         std::uint32_t slot) const;

    std::uint64_t seed_;
    std::uint32_t replication_;
    std::uint32_t lane_tag_;
};

}  // namespace mrsde
