#include "equifair/rng.hpp"

namespace equifair {

std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed) {
    std::vector<double> out(n, 0.0);
    if (sigma <= 0.0) return out;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (auto& v : out) v = dist(gen);
    return out;
}

}  // namespace equifair
