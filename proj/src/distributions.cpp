#include "equifair/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "equifair/kernels.hpp"
#include "equifair/rng.hpp"

namespace equifair {

namespace {

void check_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("non-finite value in sample");
    }
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> samples,
                                             double jitter_sigma, std::uint64_t seed)
    : jitter_sigma_(jitter_sigma) {
    if (samples.empty()) throw ValidationError("empirical distribution needs at least one value");
    if (jitter_sigma < 0.0) throw ValidationError("jitter sigma must be non-negative");
    check_finite(samples);
    values_ = jitter(samples, jitter_sigma, seed);
    std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double u) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), u);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double v) const {
    if (v < 0.0 || v > 1.0) throw ValidationError("quantile level outside [0,1]");
    const auto n = values_.size();
    // inf{u : F(u) >= v} = order statistic ceil(v*n), with quantile(0) = min.
    std::size_t k = static_cast<std::size_t>(std::ceil(v * static_cast<double>(n)));
    if (k == 0) k = 1;
    if (k > n) k = n;
    return values_[k - 1];
}

double EmpiricalDistribution::quantile_interp(double v) const {
    if (v < 0.0 || v > 1.0) throw ValidationError("quantile level outside [0,1]");
    const auto n = values_.size();
    if (n == 1) return values_[0];
    const double pos = v * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return values_[n - 1];
    const double frac = pos - static_cast<double>(lo);
    return values_[lo] + frac * (values_[lo + 1] - values_[lo]);
}

double EmpiricalDistribution::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
}

std::vector<double> jitter(std::span<const double> values, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ValidationError("jitter sigma must be non-negative");
    check_finite(values);
    std::vector<double> out(values.begin(), values.end());
    if (sigma == 0.0) return out;
    const auto noise = gaussian_noise(out.size(), sigma, seed);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += noise[i];
    return out;
}

double wasserstein1_grid(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2,
                         std::size_t grid_size) {
    if (grid_size < 2) throw ValidationError("grid_size must be at least 2");
    return kernels::grid_quantile_distance(d1.values(), d2.values(), grid_size, 1);
}

double wasserstein2_grid(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2,
                         std::size_t grid_size) {
    if (grid_size < 2) throw ValidationError("grid_size must be at least 2");
    return kernels::grid_quantile_distance(d1.values(), d2.values(), grid_size, 2);
}

double wasserstein1_exact(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2) {
    const auto& a = d1.values();
    const auto& b = d2.values();
    // Scan the merged support accumulating |F1 - F2| times the gap length.
    double total = 0.0;
    double fa = 0.0, fb = 0.0;
    const double step_a = 1.0 / static_cast<double>(a.size());
    const double step_b = 1.0 / static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double prev = 0.0;
    bool have_prev = false;
    while (i < a.size() || j < b.size()) {
        const double x = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
        if (have_prev && x > prev) total += std::abs(fa - fb) * (x - prev);
        while (i < a.size() && a[i] == x) { fa += step_a; ++i; }
        while (j < b.size() && b[j] == x) { fb += step_b; ++j; }
        prev = x;
        have_prev = true;
    }
    return total;
}

GaussianSpec gaussian_barycenter(std::span<const GaussianSpec> specs) {
    if (specs.empty()) throw ValidationError("empty Gaussian family");
    double wsum = 0.0, mean = 0.0, std = 0.0;
    for (const auto& s : specs) {
        if (s.std <= 0.0) throw ValidationError("Gaussian std must be positive");
        wsum += s.weight;
        mean += s.weight * s.mean;
        std += s.weight * s.std;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ValidationError("Gaussian weights must sum to 1");
    return GaussianSpec{mean, std, 1.0};
}

}  // namespace equifair
