#pragma once

#include <span>
#include <string>
#include <vector>

#include "equifair/calibration.hpp"
#include "equifair/distributions.hpp"

namespace equifair {

enum class UnfairnessMethod { grid, exact };
enum class PerformanceMetric { mse, mae, accuracy };

struct UnfairnessReport {
    std::vector<std::pair<std::string, double>> per_attribute;
    double total = 0.0;
    UnfairnessMethod method = UnfairnessMethod::grid;
};

struct DecompositionRow {
    std::string stage_label;
    std::vector<std::pair<std::string, double>> per_attribute;
    double total = 0.0;
};

struct DecompositionTable {
    std::vector<DecompositionRow> rows;
};

// Per attribute the largest 1-Wasserstein distance between the pooled score
// distribution and any single-modality conditional; the total sums the
// attributes. Scores are audited as given: no jitter.
UnfairnessReport unfairness(std::span<const double> predictions, const SensitiveFrame& sensitive,
                            UnfairnessMethod method = UnfairnessMethod::grid,
                            std::size_t grid_size = kDefaultGridSize);

// Kolmogorov-Smirnov variant: sup-norm gap between pooled and conditional
// CDFs on the merged support.
UnfairnessReport unfairness_ks(std::span<const double> predictions,
                               const SensitiveFrame& sensitive);

double performance(std::span<const double> y_true, std::span<const double> y_pred,
                   PerformanceMetric metric = PerformanceMetric::mse, double threshold = 0.5);

double price_of_fairness(std::span<const double> y_true, std::span<const double> y_base,
                         std::span<const double> y_fair,
                         PerformanceMetric metric = PerformanceMetric::mse,
                         double threshold = 0.5);

// Unfairness per attribute for every entry of the calibrator's y_fair trace,
// in correction order.
DecompositionTable decompose(const MsaCalibrator& cal, const SensitiveFrame& sensitive,
                             UnfairnessMethod method = UnfairnessMethod::grid,
                             std::size_t grid_size = kDefaultGridSize);

std::string to_json(const UnfairnessReport& report, int indent = 2);
std::string to_json(const DecompositionTable& table, int indent = 2);

}  // namespace equifair
