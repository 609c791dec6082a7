#include "equifair/plots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "equifair/kernels.hpp"

namespace equifair {

namespace {

struct StageRun {
    MsaCalibrator cal;
    std::vector<double> final;
    std::vector<std::pair<std::string, std::vector<double>>> trace;
};

StageRun run_pipeline(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                      std::span<const double> test_pred, const SensitiveFrame& test_sens,
                      const std::optional<EpsilonVector>& epsilon, const PlotConfig& cfg) {
    StageRun run;
    run.cal = fit_msa(calib_pred, calib_sens, cfg.sigma, cfg.seed);
    run.final = run.cal.transform(test_pred, test_sens, epsilon);
    run.trace = run.cal.y_fair();
    return run;
}

std::vector<std::pair<double, double>> fairness_performance_path(
    const std::vector<std::pair<std::string, std::vector<double>>>& trace,
    const SensitiveFrame& test_sens, std::span<const double> y_true, const PlotConfig& cfg) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [label, vec] : trace) {
        const auto rep = unfairness(vec, test_sens, cfg.method, cfg.grid_size);
        pts.emplace_back(rep.total, performance(y_true, vec, cfg.metric, cfg.threshold));
    }
    return pts;
}

PlotMeta make_meta(const SensitiveFrame& calib_sens, std::size_t test_size,
                   const std::optional<EpsilonVector>& epsilon) {
    PlotMeta meta;
    meta.order = calib_sens.columns();
    meta.epsilon = epsilon ? epsilon->values
                           : std::vector<double>(calib_sens.attribute_count(), 0.0);
    meta.calib_size = calib_sens.rows();
    meta.test_size = test_size;
    return meta;
}

std::string join_order(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ">";
        out += n;
    }
    return out;
}

double quantile_of_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] + (pos - lo) * (s[lo + 1] - s[lo]);
}

}  // namespace

PlotSpec arrow_plot_data(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                         std::span<const double> test_pred, const SensitiveFrame& test_sens,
                         std::span<const double> y_true,
                         const std::optional<EpsilonVector>& epsilon, const PlotConfig& cfg) {
    if (y_true.size() != test_pred.size())
        throw ValidationError("arrow plot requires labels matching the test predictions");
    auto run = run_pipeline(calib_pred, calib_sens, test_pred, test_sens, epsilon, cfg);
    const auto pts = fairness_performance_path(run.trace, test_sens, y_true, cfg);

    PlotSpec spec;
    spec.kind = PlotKind::arrow;
    spec.x_label = "unfairness";
    spec.y_label = cfg.metric == PerformanceMetric::mse   ? "mse"
                   : cfg.metric == PerformanceMetric::mae ? "mae"
                                                          : "accuracy";
    PlotSeries s;
    s.name = join_order(calib_sens.columns());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        s.x.push_back(pts[i].first);
        s.y.push_back(pts[i].second);
        s.labels.push_back(run.trace[i].first);
    }
    spec.series.push_back(std::move(s));
    spec.meta = make_meta(calib_sens, test_pred.size(), epsilon);
    return spec;
}

PlotSpec multiple_arrow_plot_data(std::span<const double> calib_pred,
                                  const SensitiveFrame& calib_sens,
                                  std::span<const double> test_pred,
                                  const SensitiveFrame& test_sens, std::span<const double> y_true,
                                  const std::optional<EpsilonVector>& epsilon,
                                  const PlotConfig& cfg) {
    const std::size_t r = calib_sens.attribute_count();
    if (r < 2)
        throw ValidationError("multiple_arrow needs at least 2 attributes; use the arrow plot");
    std::size_t paths = 1;
    for (std::size_t k = 2; k <= r; ++k) paths *= k;
    if (paths > cfg.permutation_cap)
        throw ValidationError("permutation count exceeds the configured cap");
    if (y_true.size() != test_pred.size())
        throw ValidationError("multiple_arrow requires labels matching the test predictions");

    std::vector<std::size_t> perm(r);
    std::iota(perm.begin(), perm.end(), 0);

    PlotSpec spec;
    spec.kind = PlotKind::multiple_arrow;
    spec.x_label = "unfairness";
    spec.y_label = cfg.metric == PerformanceMetric::mse   ? "mse"
                   : cfg.metric == PerformanceMetric::mae ? "mae"
                                                          : "accuracy";
    do {
        const auto cs = calib_sens.select(perm);
        const auto ts = test_sens.select(perm);
        std::optional<EpsilonVector> eps;
        if (epsilon) {
            EpsilonVector e;
            for (auto i : perm) e.values.push_back(epsilon->values.at(i));
            eps = e;
        }
        auto run = run_pipeline(calib_pred, cs, test_pred, ts, eps, cfg);
        const auto pts = fairness_performance_path(run.trace, ts, y_true, cfg);
        PlotSeries s;
        s.name = join_order(cs.columns());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            s.x.push_back(pts[i].first);
            s.y.push_back(pts[i].second);
            s.labels.push_back(run.trace[i].first);
        }
        spec.series.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));

    spec.meta = make_meta(calib_sens, test_pred.size(), epsilon);
    return spec;
}

PlotSpec density_plot_data(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                           std::span<const double> test_pred, const SensitiveFrame& test_sens,
                           const std::optional<EpsilonVector>& epsilon, const PlotConfig& cfg) {
    auto run = run_pipeline(calib_pred, calib_sens, test_pred, test_sens, epsilon, cfg);

    PlotSpec spec;
    spec.kind = PlotKind::density;
    spec.x_label = "score";
    spec.y_label = "density";
    spec.meta = make_meta(calib_sens, test_pred.size(), epsilon);

    constexpr std::size_t kGridPoints = 512;
    for (int row = 0; row < static_cast<int>(run.trace.size()); ++row) {
        const auto& [stage_label, vec] = run.trace[row];
        const bool all_unit = std::all_of(vec.begin(), vec.end(),
                                          [](double v) { return v >= 0.0 && v <= 1.0; });
        const bool beta = cfg.binary_task && all_unit;
        for (int col = 0; col < static_cast<int>(test_sens.attribute_count()); ++col) {
            const auto& column = test_sens.column(static_cast<std::size_t>(col));
            std::set<std::string> mods(column.begin(), column.end());
            for (const auto& m : mods) {
                std::vector<double> grp;
                for (std::size_t i = 0; i < column.size(); ++i)
                    if (column[i] == m) grp.push_back(vec[i]);
                if (grp.size() < 2) {
                    spec.meta.warnings.push_back("omitted density for " +
                                                 test_sens.columns()[col] + "=" + m + " at stage " +
                                                 stage_label + " (fewer than 2 points)");
                    continue;
                }
                std::sort(grp.begin(), grp.end());
                PlotSeries s;
                s.name = stage_label + "|" + test_sens.columns()[col] + "=" + m;
                s.row = row;
                s.col = col;
                s.x.resize(kGridPoints);
                s.y.resize(kGridPoints);
                if (beta) {
                    const double b = std::pow(static_cast<double>(grp.size()), -0.4);
                    for (std::size_t k = 0; k < kGridPoints; ++k)
                        s.x[k] = static_cast<double>(k) / static_cast<double>(kGridPoints - 1);
                    kernels::kde_beta(grp, b, s.x, s.y);
                } else {
                    const double n = static_cast<double>(grp.size());
                    const double mean = std::accumulate(grp.begin(), grp.end(), 0.0) / n;
                    double var = 0.0;
                    for (double v : grp) var += (v - mean) * (v - mean);
                    const double sd = std::sqrt(var / n);
                    const double iqr =
                        quantile_of_sorted(grp, 0.75) - quantile_of_sorted(grp, 0.25);
                    double h = 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
                    if (h <= 0.0) h = std::max(1e-6, 1e-3 * std::max(std::abs(mean), 1.0));
                    const double lo = grp.front() - 3.0 * h;
                    const double hi = grp.back() + 3.0 * h;
                    for (std::size_t k = 0; k < kGridPoints; ++k)
                        s.x[k] = lo + (hi - lo) * static_cast<double>(k) /
                                          static_cast<double>(kGridPoints - 1);
                    kernels::kde_gaussian(grp, h, s.x, s.y);
                }
                // Normalize on the evaluation grid (the Beta kernel is not
                // exactly normalized in its parameter argument).
                double mass = 0.0;
                for (std::size_t k = 1; k < kGridPoints; ++k)
                    mass += 0.5 * (s.y[k] + s.y[k - 1]) * (s.x[k] - s.x[k - 1]);
                if (mass > 0.0)
                    for (auto& v : s.y) v /= mass;
                spec.series.push_back(std::move(s));
            }
        }
    }
    return spec;
}

PlotSpec waterfall_plot_data(std::span<const double> calib_pred, const SensitiveFrame& calib_sens,
                             std::span<const double> test_pred, const SensitiveFrame& test_sens,
                             const std::optional<EpsilonVector>& epsilon, bool both_orders,
                             const PlotConfig& cfg) {
    PlotSpec spec;
    spec.kind = PlotKind::waterfall;
    spec.x_label = "correction step";
    spec.y_label = "unfairness";
    spec.meta = make_meta(calib_sens, test_pred.size(), epsilon);

    auto build = [&](const SensitiveFrame& cs, const SensitiveFrame& ts,
                     const std::optional<EpsilonVector>& eps) {
        auto run = run_pipeline(calib_pred, cs, test_pred, ts, eps, cfg);
        std::vector<double> totals;
        for (const auto& [label, vec] : run.trace)
            totals.push_back(unfairness(vec, ts, cfg.method, cfg.grid_size).total);

        PlotSeries s;
        s.name = join_order(cs.columns());
        const double base = totals.front();
        s.x.push_back(0.0);
        s.y.push_back(base);
        s.labels.push_back("Base model");
        const auto epsv = eps ? eps->values : std::vector<double>(cs.attribute_count(), 0.0);
        char buf[160];
        for (std::size_t i = 1; i < totals.size(); ++i) {
            const double drop = totals[i] - totals[i - 1];
            const double pct = base > 0.0 ? -100.0 * drop / base : 0.0;
            std::snprintf(buf, sizeof buf, "%s (eps=%.6g, %.1f%% of base)",
                          cs.columns()[i - 1].c_str(), epsv[i - 1], pct);
            s.x.push_back(static_cast<double>(i));
            s.y.push_back(drop);
            s.labels.push_back(buf);
        }
        s.x.push_back(static_cast<double>(totals.size()));
        s.y.push_back(totals.back());
        s.labels.push_back("Residual");
        return s;
    };

    spec.series.push_back(build(calib_sens, test_sens, epsilon));
    if (both_orders) {
        std::vector<std::size_t> rev(calib_sens.attribute_count());
        std::iota(rev.begin(), rev.end(), 0);
        std::reverse(rev.begin(), rev.end());
        std::optional<EpsilonVector> eps;
        if (epsilon) {
            EpsilonVector e;
            for (auto i : rev) e.values.push_back(epsilon->values.at(i));
            eps = e;
        }
        spec.series.push_back(build(calib_sens.select(rev), test_sens.select(rev), eps));
    }
    return spec;
}

// ---- serialization ----

namespace {

const char* kind_name(PlotKind k) {
    switch (k) {
        case PlotKind::arrow: return "arrow";
        case PlotKind::multiple_arrow: return "multiple_arrow";
        case PlotKind::density: return "density";
        case PlotKind::waterfall: return "waterfall";
    }
    return "arrow";
}

PlotKind kind_from_name(const std::string& s) {
    if (s == "arrow") return PlotKind::arrow;
    if (s == "multiple_arrow") return PlotKind::multiple_arrow;
    if (s == "density") return PlotKind::density;
    if (s == "waterfall") return PlotKind::waterfall;
    throw ValidationError("unknown plot kind: " + s);
}

}  // namespace

std::string plot_spec_to_json(const PlotSpec& spec, int indent) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(spec.kind);
    j["x_label"] = spec.x_label;
    j["y_label"] = spec.y_label;
    j["series"] = nlohmann::ordered_json::array();
    for (const auto& s : spec.series) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["row"] = s.row;
        js["col"] = s.col;
        js["x"] = s.x;
        js["y"] = s.y;
        js["labels"] = s.labels;
        j["series"].push_back(std::move(js));
    }
    j["meta"] = {{"order", spec.meta.order},
                 {"epsilon", spec.meta.epsilon},
                 {"calib_size", spec.meta.calib_size},
                 {"test_size", spec.meta.test_size},
                 {"warnings", spec.meta.warnings}};
    return j.dump(indent);
}

PlotSpec plot_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("plot spec: invalid JSON: ") + e.what());
    }
    PlotSpec spec;
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    spec.x_label = j.at("x_label").get<std::string>();
    spec.y_label = j.at("y_label").get<std::string>();
    for (const auto& js : j.at("series")) {
        PlotSeries s;
        s.name = js.at("name").get<std::string>();
        s.row = js.at("row").get<int>();
        s.col = js.at("col").get<int>();
        s.x = js.at("x").get<std::vector<double>>();
        s.y = js.at("y").get<std::vector<double>>();
        s.labels = js.at("labels").get<std::vector<std::string>>();
        if (s.x.empty() || s.x.size() != s.y.size())
            throw ValidationError("plot spec: malformed series");
        spec.series.push_back(std::move(s));
    }
    const auto& m = j.at("meta");
    spec.meta.order = m.at("order").get<std::vector<std::string>>();
    spec.meta.epsilon = m.at("epsilon").get<std::vector<double>>();
    spec.meta.calib_size = m.at("calib_size").get<std::size_t>();
    spec.meta.test_size = m.at("test_size").get<std::size_t>();
    spec.meta.warnings = m.at("warnings").get<std::vector<std::string>>();
    return spec;
}

std::string render(const PlotSpec& spec, PlotFormat format) {
    if (spec.series.empty()) throw ValidationError("plot spec has no series");
    return format == PlotFormat::json ? plot_spec_to_json(spec) : render_svg(spec);
}

}  // namespace equifair
