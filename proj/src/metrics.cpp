#include "equifair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace equifair {

namespace {

double sup_cdf_gap(const EmpiricalDistribution& pool, const EmpiricalDistribution& group) {
    double sup = 0.0;
    for (double x : pool.values()) sup = std::max(sup, std::abs(pool.cdf(x) - group.cdf(x)));
    for (double x : group.values()) sup = std::max(sup, std::abs(pool.cdf(x) - group.cdf(x)));
    return sup;
}

UnfairnessReport per_attribute_max(std::span<const double> predictions,
                                   const SensitiveFrame& sensitive, UnfairnessMethod method,
                                   std::size_t grid_size, bool ks) {
    if (predictions.size() != sensitive.rows())
        throw ValidationError("prediction vector and sensitive frame row counts differ");
    if (predictions.empty()) throw ValidationError("empty prediction vector");

    const EmpiricalDistribution pool(predictions);
    UnfairnessReport report;
    report.method = method;
    for (std::size_t c = 0; c < sensitive.attribute_count(); ++c) {
        const auto& col = sensitive.column(c);
        std::set<std::string> mods(col.begin(), col.end());
        if (mods.size() < 2)
            throw DegeneracyError("attribute '" + sensitive.columns()[c] +
                                  "' is constant; unfairness is undefined");
        double worst = 0.0;
        for (const auto& m : mods) {
            std::vector<double> grp;
            for (std::size_t i = 0; i < col.size(); ++i)
                if (col[i] == m) grp.push_back(predictions[i]);
            const EmpiricalDistribution gd(grp);
            double v;
            if (ks)
                v = sup_cdf_gap(pool, gd);
            else if (method == UnfairnessMethod::exact)
                v = wasserstein1_exact(pool, gd);
            else
                v = wasserstein1_grid(pool, gd, grid_size);
            worst = std::max(worst, v);
        }
        report.per_attribute.emplace_back(sensitive.columns()[c], worst);
        report.total += worst;
    }
    return report;
}

double metric_value(std::span<const double> y_true, std::span<const double> y_pred,
                    PerformanceMetric metric, double threshold) {
    if (y_true.size() != y_pred.size()) throw ValidationError("metric input lengths differ");
    if (y_true.empty()) throw ValidationError("empty metric input");
    const auto n = static_cast<double>(y_true.size());
    switch (metric) {
        case PerformanceMetric::mse: {
            double acc = 0.0;
            for (std::size_t i = 0; i < y_true.size(); ++i) {
                const double d = y_true[i] - y_pred[i];
                acc += d * d;
            }
            return acc / n;
        }
        case PerformanceMetric::mae: {
            double acc = 0.0;
            for (std::size_t i = 0; i < y_true.size(); ++i) acc += std::abs(y_true[i] - y_pred[i]);
            return acc / n;
        }
        case PerformanceMetric::accuracy: {
            if (!(threshold > 0.0 && threshold < 1.0))
                throw ValidationError("accuracy threshold must lie in (0,1)");
            double hits = 0.0;
            for (std::size_t i = 0; i < y_true.size(); ++i) {
                if (y_true[i] != 0.0 && y_true[i] != 1.0)
                    throw ValidationError("accuracy requires binary labels");
                hits += ((y_pred[i] >= threshold ? 1.0 : 0.0) == y_true[i]) ? 1.0 : 0.0;
            }
            return hits / n;
        }
    }
    throw ValidationError("unknown metric");
}

}  // namespace

UnfairnessReport unfairness(std::span<const double> predictions, const SensitiveFrame& sensitive,
                            UnfairnessMethod method, std::size_t grid_size) {
    return per_attribute_max(predictions, sensitive, method, grid_size, false);
}

UnfairnessReport unfairness_ks(std::span<const double> predictions,
                               const SensitiveFrame& sensitive) {
    return per_attribute_max(predictions, sensitive, UnfairnessMethod::exact, 2, true);
}

double performance(std::span<const double> y_true, std::span<const double> y_pred,
                   PerformanceMetric metric, double threshold) {
    return metric_value(y_true, y_pred, metric, threshold);
}

double price_of_fairness(std::span<const double> y_true, std::span<const double> y_base,
                         std::span<const double> y_fair, PerformanceMetric metric,
                         double threshold) {
    return metric_value(y_true, y_fair, metric, threshold) -
           metric_value(y_true, y_base, metric, threshold);
}

DecompositionTable decompose(const MsaCalibrator& cal, const SensitiveFrame& sensitive,
                             UnfairnessMethod method, std::size_t grid_size) {
    if (cal.y_fair().empty())
        throw StateError("decompose requires a prior transform (y_fair is empty)");
    DecompositionTable table;
    for (const auto& [label, vec] : cal.y_fair()) {
        auto rep = unfairness(vec, sensitive, method, grid_size);
        DecompositionRow row;
        row.stage_label = label;
        row.per_attribute = rep.per_attribute;
        row.total = rep.total;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string to_json(const UnfairnessReport& report, int indent) {
    nlohmann::ordered_json j;
    j["method"] = report.method == UnfairnessMethod::grid ? "grid" : "exact";
    j["per_attribute"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : report.per_attribute) j["per_attribute"][name] = v;
    j["total"] = report.total;
    return j.dump(indent);
}

std::string to_json(const DecompositionTable& table, int indent) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        r["stage"] = row.stage_label;
        r["per_attribute"] = nlohmann::ordered_json::object();
        for (const auto& [name, v] : row.per_attribute) r["per_attribute"][name] = v;
        r["total"] = row.total;
        j.push_back(std::move(r));
    }
    return j.dump(indent);
}

}  // namespace equifair
