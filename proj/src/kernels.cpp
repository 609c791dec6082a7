#include "equifair/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace equifair::kernels {

namespace {

std::atomic<Exec> g_policy{Exec::parallel};

inline double step_quantile(std::span<const double> sorted, double v) {
    const auto n = sorted.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(v * static_cast<double>(n)));
    if (k == 0) k = 1;
    if (k > n) k = n;
    return sorted[k - 1];
}

inline double step_cdf(std::span<const double> sorted, double x) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

inline double interp_quantile(std::span<const double> sorted, double v) {
    const auto n = sorted.size();
    if (n == 1) return sorted[0];
    if (v <= 0.0) return sorted[0];
    if (v >= 1.0) return sorted[n - 1];
    const double pos = v * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double grid_cell(std::span<const double> s1, std::span<const double> s2, std::size_t k,
                        std::size_t grid_size, int p) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(grid_size);
    const double d = std::abs(step_quantile(s1, u) - step_quantile(s2, u));
    return p == 1 ? d : d * d;
}

inline double bary_cell(double x, std::size_t gi, const std::vector<std::vector<double>>& groups,
                        std::span<const double> weights) {
    const double t = step_cdf(groups[gi], x);
    double acc = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g)
        acc += weights[g] * interp_quantile(groups[g], t);
    return acc;
}

constexpr double kInvSqrt2Pi = 0.3989422804014327;

inline double gaussian_cell(std::span<const double> sample, double h, double x) {
    double acc = 0.0;
    for (double v : sample) {
        const double z = (x - v) / h;
        acc += std::exp(-0.5 * z * z);
    }
    return acc * kInvSqrt2Pi / (h * static_cast<double>(sample.size()));
}

// Chen-style boundary kernel: at grid point x the kernel is the
// Beta(x/b + 1, (1-x)/b + 1) density evaluated at the sample points.
inline double beta_cell(std::span<const double> sample, double b, double x) {
    const double alpha = x / b + 1.0;
    const double beta = (1.0 - x) / b + 1.0;
    const double log_norm = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta);
    double acc = 0.0;
    for (double v : sample) {
        if (v <= 0.0 || v >= 1.0) {
            if ((v == 0.0 && alpha == 1.0) || (v == 1.0 && beta == 1.0)) acc += std::exp(log_norm);
            continue;
        }
        acc += std::exp(log_norm + (alpha - 1.0) * std::log(v) + (beta - 1.0) * std::log1p(-v));
    }
    return acc / static_cast<double>(sample.size());
}

}  // namespace

Exec execution_policy() { return g_policy.load(); }
void set_execution_policy(Exec e) { g_policy.store(e); }

namespace serial {

double grid_quantile_distance(std::span<const double> s1, std::span<const double> s2,
                              std::size_t grid_size, int p) {
    std::vector<double> cells(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) cells[k] = grid_cell(s1, s2, k, grid_size, p);
    double total = 0.0;
    for (double c : cells) total += c;
    return total / static_cast<double>(grid_size);
}

void barycentric_apply(std::span<const double> input, std::span<const std::size_t> group_index,
                       const std::vector<std::vector<double>>& group_values,
                       std::span<const double> group_weights, std::span<double> output) {
    for (std::size_t i = 0; i < input.size(); ++i)
        output[i] = bary_cell(input[i], group_index[i], group_values, group_weights);
}

void kde_gaussian(std::span<const double> sample, double h, std::span<const double> grid,
                  std::span<double> density) {
    for (std::size_t j = 0; j < grid.size(); ++j) density[j] = gaussian_cell(sample, h, grid[j]);
}

void kde_beta(std::span<const double> sample, double b, std::span<const double> grid,
              std::span<double> density) {
    for (std::size_t j = 0; j < grid.size(); ++j) density[j] = beta_cell(sample, b, grid[j]);
}

}  // namespace serial

namespace parallel {

double grid_quantile_distance(std::span<const double> s1, std::span<const double> s2,
                              std::size_t grid_size, int p) {
    std::vector<double> cells(grid_size);
    const auto n = static_cast<std::int64_t>(grid_size);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k)
        cells[static_cast<std::size_t>(k)] =
            grid_cell(s1, s2, static_cast<std::size_t>(k), grid_size, p);
    // Serial reduction keeps the sum order fixed regardless of thread count.
    double total = 0.0;
    for (double c : cells) total += c;
    return total / static_cast<double>(grid_size);
}

void barycentric_apply(std::span<const double> input, std::span<const std::size_t> group_index,
                       const std::vector<std::vector<double>>& group_values,
                       std::span<const double> group_weights, std::span<double> output) {
    const auto n = static_cast<std::int64_t>(input.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        output[k] = bary_cell(input[k], group_index[k], group_values, group_weights);
    }
}

void kde_gaussian(std::span<const double> sample, double h, std::span<const double> grid,
                  std::span<double> density) {
    const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j)
        density[static_cast<std::size_t>(j)] =
            gaussian_cell(sample, h, grid[static_cast<std::size_t>(j)]);
}

void kde_beta(std::span<const double> sample, double b, std::span<const double> grid,
              std::span<double> density) {
    const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j)
        density[static_cast<std::size_t>(j)] =
            beta_cell(sample, b, grid[static_cast<std::size_t>(j)]);
}

}  // namespace parallel

double grid_quantile_distance(std::span<const double> s1, std::span<const double> s2,
                              std::size_t grid_size, int p) {
    return execution_policy() == Exec::serial ? serial::grid_quantile_distance(s1, s2, grid_size, p)
                                              : parallel::grid_quantile_distance(s1, s2, grid_size, p);
}

void barycentric_apply(std::span<const double> input, std::span<const std::size_t> group_index,
                       const std::vector<std::vector<double>>& group_values,
                       std::span<const double> group_weights, std::span<double> output) {
    if (execution_policy() == Exec::serial)
        serial::barycentric_apply(input, group_index, group_values, group_weights, output);
    else
        parallel::barycentric_apply(input, group_index, group_values, group_weights, output);
}

void kde_gaussian(std::span<const double> sample, double h, std::span<const double> grid,
                  std::span<double> density) {
    if (execution_policy() == Exec::serial)
        serial::kde_gaussian(sample, h, grid, density);
    else
        parallel::kde_gaussian(sample, h, grid, density);
}

void kde_beta(std::span<const double> sample, double b, std::span<const double> grid,
              std::span<double> density) {
    if (execution_policy() == Exec::serial)
        serial::kde_beta(sample, b, grid, density);
    else
        parallel::kde_beta(sample, b, grid, density);
}

}  // namespace equifair::kernels
