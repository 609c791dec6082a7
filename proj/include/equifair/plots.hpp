#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equifair/calibration.hpp"
#include "equifair/metrics.hpp"

namespace equifair {

enum class PlotKind { arrow, multiple_arrow, density, waterfall };
enum class PlotFormat { json, svg };

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::string> labels;  // per-point annotations, optional
    int row = 0;                      // panel coordinates (density grids)
    int col = 0;

    bool operator==(const PlotSeries&) const = default;
};

struct PlotMeta {
    std::vector<std::string> order;
    std::vector<double> epsilon;
    std::size_t calib_size = 0;
    std::size_t test_size = 0;
    std::vector<std::string> warnings;

    bool operator==(const PlotMeta&) const = default;
};

struct PlotSpec {
    PlotKind kind = PlotKind::arrow;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    PlotMeta meta;

    bool operator==(const PlotSpec&) const = default;
};

struct PlotConfig {
    double sigma = kDefaultSigma;
    std::uint64_t seed = 0;
    std::size_t grid_size = kDefaultGridSize;
    UnfairnessMethod method = UnfairnessMethod::grid;
    PerformanceMetric metric = PerformanceMetric::mse;
    double threshold = 0.5;
    std::size_t permutation_cap = 120;
    bool binary_task = false;  // Beta kernel densities when scores lie in [0,1]
};

// Fairness-performance path of the sequential correction: one point per
// y_fair stage, base model first.
PlotSpec arrow_plot_data(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                         std::span<const double> test_pred, const SensitiveFrame& test_sens,
                         std::span<const double> y_true,
                         const std::optional<EpsilonVector>& epsilon, const PlotConfig& cfg);

// One arrow path per permutation of the correction order; all share the
// base point.
PlotSpec multiple_arrow_plot_data(std::span<const double> calib_pred,
                                  const SensitiveFrame& calib_sens,
                                  std::span<const double> test_pred,
                                  const SensitiveFrame& test_sens, std::span<const double> y_true,
                                  const std::optional<EpsilonVector>& epsilon,
                                  const PlotConfig& cfg);

// Panel grid of per-group score densities: one row per stage (base first),
// one column per attribute. Gaussian KDE with Silverman bandwidth, or a
// boundary-respecting Beta kernel for binary-task scores in [0,1].
PlotSpec density_plot_data(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                           std::span<const double> test_pred, const SensitiveFrame& test_sens,
                           const std::optional<EpsilonVector>& epsilon, const PlotConfig& cfg);

// Total unfairness as a waterfall: base level, one signed decrement per
// stage (annotated with epsilon and percent of base corrected), residual.
PlotSpec waterfall_plot_data(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                             std::span<const double> test_pred, const SensitiveFrame& test_sens,
                             const std::optional<EpsilonVector>& epsilon, bool both_orders,
                             const PlotConfig& cfg);

std::string render(const PlotSpec& spec, PlotFormat format);

std::string plot_spec_to_json(const PlotSpec& spec, int indent = 2);
PlotSpec plot_spec_from_json(const std::string& text);

// Deterministic static SVG 1.1; fixed fonts and sizes, no timestamps.
std::string render_svg(const PlotSpec& spec);

}  // namespace equifair
