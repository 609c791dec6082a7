#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace equifair::kernels {

// The data-parallel inner loops live here, each in a serial reference
// version and an OpenMP version. Both fill per-element outputs in identical
// order and reduce serially, so results are bitwise equal for any thread
// count; tests compare the two and the benchmark tool times them.
enum class Exec { serial, parallel };

Exec execution_policy();
void set_execution_policy(Exec e);

// |Q1(u_k) - Q2(u_k)|^p averaged over the midpoint grid; generalized-inverse
// quantiles of two sorted samples. p is 1 or 2.
namespace serial {
double grid_quantile_distance(std::span<const double> sorted1, std::span<const double> sorted2,
                              std::size_t grid_size, int p);
void barycentric_apply(std::span<const double> input, std::span<const std::size_t> group_index,
                       const std::vector<std::vector<double>>& group_values,
                       std::span<const double> group_weights, std::span<double> output);
void kde_gaussian(std::span<const double> sample, double bandwidth,
                  std::span<const double> grid, std::span<double> density);
void kde_beta(std::span<const double> sample, double smoothing,
              std::span<const double> grid, std::span<double> density);
}  // namespace serial

namespace parallel {
double grid_quantile_distance(std::span<const double> sorted1, std::span<const double> sorted2,
                              std::size_t grid_size, int p);
void barycentric_apply(std::span<const double> input, std::span<const std::size_t> group_index,
                       const std::vector<std::vector<double>>& group_values,
                       std::span<const double> group_weights, std::span<double> output);
void kde_gaussian(std::span<const double> sample, double bandwidth,
                  std::span<const double> grid, std::span<double> density);
void kde_beta(std::span<const double> sample, double smoothing,
              std::span<const double> grid, std::span<double> density);
}  // namespace parallel

// Dispatch through the active policy.
double grid_quantile_distance(std::span<const double> sorted1, std::span<const double> sorted2,
                              std::size_t grid_size, int p);
void barycentric_apply(std::span<const double> input, std::span<const std::size_t> group_index,
                       const std::vector<std::vector<double>>& group_values,
                       std::span<const double> group_weights, std::span<double> output);
void kde_gaussian(std::span<const double> sample, double bandwidth, std::span<const double> grid,
                  std::span<double> density);
void kde_beta(std::span<const double> sample, double smoothing, std::span<const double> grid,
              std::span<double> density);

}  // namespace equifair::kernels
