#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace equifair {

// splitmix64; used to derive independent sub-seeds from one master seed so
// that every randomized step of a run is reproducible in isolation.
inline std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream));
}

// Sub-seed streams for the two jitter sites of a calibrate/transform run.
inline constexpr std::uint64_t kStreamFitJitter = 0xf17;
inline constexpr std::uint64_t kStreamTransformJitter = 0x7a5;

std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed);

}  // namespace equifair
