#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equifair/calibration.hpp"

namespace equifair {

// Synthetic benchmark data: two correlated binary attributes and
// group-shifted Gaussian scores. Labels are score plus independent noise,
// so the score column is the conditional mean of the label.
struct SyntheticConfig {
    std::size_t n = 20000;
    double correlation = 0.05;   // P(a2 == a1) = 0.5 + correlation/2
    double shift1 = 3.0;         // mean shift added when a1 == 1
    double shift2 = 2.0;         // mean shift added when a2 == 1
    double score_sigma = 1.0;
    double label_noise = 0.5;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    std::vector<double> predictions;
    std::vector<double> labels;
    SensitiveFrame sensitive;  // columns "a1", "a2"
};

SyntheticData make_synthetic(const SyntheticConfig& cfg);

std::string synthetic_to_csv(const SyntheticData& data);

}  // namespace equifair
