#include "mrsde/rng.hpp"

#include <cmath>
#include <numbers>

namespace mrsde {

namespace {

constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;
constexpr std::uint32_t kMultA = 0xD2511F53u;
constexpr std::uint32_t kMultB = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

inline void round_once(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kMultA, ctr[0], lo0, hi0);
    mul_hi_lo(kMultB, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// 64 uniform bits -> (0, 1]: strictly positive so log() below is safe.
inline double to_unit_positive(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

// 64 uniform bits -> [0, 1).
inline double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline std::uint64_t join(std::uint32_t lo, std::uint32_t hi) {
    return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        round_once(counter, key);
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return counter;
}

NoiseSource::NoiseSource(std::uint64_t seed, std::uint32_t replication, NoiseLane lane)
    : seed_(seed),
      replication_(replication),
      lane_tag_((replication << 3) | static_cast<std::uint32_t>(lane)) {}

std::array<std::uint32_t, 4> NoiseSource::counter(std::uint32_t particle, std::uint32_t step,
                                                  std::uint32_t slot) const {
    return {slot, step, particle, lane_tag_};
}

double NoiseSource::normal(std::uint32_t particle, std::uint32_t step, std::uint32_t slot) const {
    const auto key = std::array<std::uint32_t, 2>{static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::block(counter(particle, step, slot), key);
    const double u1 = to_unit_positive(join(out[0], out[1]));
    const double u2 = to_unit(join(out[2], out[3]));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseSource::uniform01(std::uint32_t particle, std::uint32_t step, std::uint32_t slot) const {
    const auto key = std::array<std::uint32_t, 2>{static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::block(counter(particle, step, slot), key);
    return to_unit(join(out[0], out[1]));
}

}  // namespace mrsde
