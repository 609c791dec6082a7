#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "equifair/errors.hpp"

namespace equifair {

// Empirical one-dimensional distribution over a finite sample.
//
// Values are stored sorted ascending. `cdf` is the right-continuous
// empirical CDF with jumps 1/n; `quantile` is its left-continuous
// generalized inverse (the inf definition). `quantile_interp` is the
// piecewise-linear quantile function through the order statistics at
// plotting positions k/(n-1); barycentric score transforms compose it
// with `cdf`.
class EmpiricalDistribution {
public:
    EmpiricalDistribution() = default;

    // Takes raw (unsorted) samples. sigma > 0 adds Gaussian jitter before
    // sorting, which breaks ties almost surely; sigma = 0 keeps the data
    // as given.
    EmpiricalDistribution(std::span<const double> samples, double jitter_sigma = 0.0,
                          std::uint64_t seed = 0);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }
    double jitter_sigma() const { return jitter_sigma_; }

    double cdf(double u) const;

    // inf{u : F(u) >= v}; quantile(0) = min by convention.
    double quantile(double v) const;

    // Linear interpolation between order statistics; clamps to [min, max].
    double quantile_interp(double v) const;

    double mean() const;

private:
    std::vector<double> values_;
    double jitter_sigma_ = 0.0;
};

struct GaussianSpec {
    double mean = 0.0;
    double std = 1.0;
    double weight = 1.0;
};

// values + N(0, sigma^2) noise elementwise; sigma = 0 returns the input.
std::vector<double> jitter(std::span<const double> values, double sigma, std::uint64_t seed);

// W1 approximated on the midpoint grid u_k = (k - 1/2)/grid_size with the
// generalized-inverse quantiles.
double wasserstein1_grid(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2,
                         std::size_t grid_size);

// Exact W1 = integral |F1 - F2| over the merged support; equals the optimum
// of the transportation LP in one dimension.
double wasserstein1_exact(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2);

// Squared 2-Wasserstein distance on the same midpoint grid.
double wasserstein2_grid(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2,
                         std::size_t grid_size);

// Closed-form barycenter of a weighted Gaussian family: the weighted mean
// of means and of standard deviations. Test oracle.
GaussianSpec gaussian_barycenter(std::span<const GaussianSpec> specs);

inline constexpr std::size_t kDefaultGridSize = 1000;

}  // namespace equifair
