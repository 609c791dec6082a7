#include "equifair/synthetic.hpp"

#include <random>

#include "equifair/csv.hpp"

namespace equifair {

SyntheticData make_synthetic(const SyntheticConfig& cfg) {
    if (cfg.n < 4) throw ValidationError("synthetic data needs at least 4 rows");
    std::mt19937_64 gen(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::string> a1(cfg.n), a2(cfg.n);
    std::vector<double> preds(cfg.n), labels(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const int v1 = unif(gen) < 0.5 ? 0 : 1;
        const int v2 = unif(gen) < (0.5 + cfg.correlation / 2.0) ? v1 : 1 - v1;
        const double mu = cfg.shift1 * v1 + cfg.shift2 * v2;
        preds[i] = mu + cfg.score_sigma * gauss(gen);
        labels[i] = preds[i] + cfg.label_noise * gauss(gen);
        a1[i] = std::to_string(v1);
        a2[i] = std::to_string(v2);
    }
    return SyntheticData{std::move(preds), std::move(labels),
                         SensitiveFrame({"a1", "a2"}, {std::move(a1), std::move(a2)})};
}

std::string synthetic_to_csv(const SyntheticData& data) {
    std::string out = "pred,a1,a2,label\n";
    const auto& c1 = data.sensitive.column(std::size_t{0});
    const auto& c2 = data.sensitive.column(std::size_t{1});
    for (std::size_t i = 0; i < data.predictions.size(); ++i) {
        out += format_double(data.predictions[i]);
        out += ',';
        out += c1[i];
        out += ',';
        out += c2[i];
        out += ',';
        out += format_double(data.labels[i]);
        out += '\n';
    }
    return out;
}

}  // namespace equifair
