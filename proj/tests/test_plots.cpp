#include <doctest.h>

#include <cmath>

#include "equifair/plots.hpp"
#include "equifair/synthetic.hpp"
#include "support/testutil.hpp"

using namespace equifair;
using namespace testutil;

namespace {

SyntheticData calib_data() {
    SyntheticConfig sc;
    sc.n = 4000;
    sc.seed = 61;
    return make_synthetic(sc);
}

SyntheticData test_data() {
    SyntheticConfig sc;
    sc.n = 4000;
    sc.seed = 62;
    return make_synthetic(sc);
}

}  // namespace

TEST_CASE("arrow plot: r + 1 points, last no less fair than first") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = arrow_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                      t.labels, std::nullopt, cfg);
    REQUIRE(spec.series.size() == 1);
    REQUIRE(spec.series[0].x.size() == 3);
    CHECK(spec.series[0].labels[0] == "Base model");
    CHECK(spec.series[0].x.back() <= spec.series[0].x.front());
    CHECK(spec.meta.order == std::vector<std::string>{"a1", "a2"});
}

TEST_CASE("arrow plot: all-ones epsilon keeps every point at the base") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = arrow_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                      t.labels, EpsilonVector{{1.0, 1.0}}, cfg);
    for (std::size_t i = 1; i < spec.series[0].x.size(); ++i) {
        CHECK(std::abs(spec.series[0].x[i] - spec.series[0].x[0]) < 0.01);
        CHECK(std::abs(spec.series[0].y[i] - spec.series[0].y[0]) < 0.01);
    }
}

TEST_CASE("arrow plot requires labels") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    CHECK_THROWS_AS(arrow_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                    std::vector<double>{}, std::nullopt, cfg),
                    ValidationError);
}

TEST_CASE("multiple arrow plot: one path per permutation, shared base point") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = multiple_arrow_plot_data(c.predictions, c.sensitive, t.predictions,
                                               t.sensitive, t.labels, std::nullopt, cfg);
    REQUIRE(spec.series.size() == 2);
    for (const auto& s : spec.series) CHECK(s.x.size() == 3);
    CHECK(spec.series[0].x[0] == doctest::Approx(spec.series[1].x[0]).epsilon(1e-12));
    // Final unfairness agrees across orders up to the empirical tolerance.
    CHECK(std::abs(spec.series[0].x.back() - spec.series[1].x.back()) < 0.05);
}

TEST_CASE("multiple arrow plot: r = 1 is an error, cap is enforced") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    SensitiveFrame c1({"a1"}, {c.sensitive.column(std::size_t{0})});
    SensitiveFrame t1({"a1"}, {t.sensitive.column(std::size_t{0})});
    CHECK_THROWS_AS(multiple_arrow_plot_data(c.predictions, c1, t.predictions, t1, t.labels,
                                             std::nullopt, cfg),
                    ValidationError);
    PlotConfig capped;
    capped.permutation_cap = 1;
    CHECK_THROWS_AS(multiple_arrow_plot_data(c.predictions, c.sensitive, t.predictions,
                                             t.sensitive, t.labels, std::nullopt, capped),
                    ValidationError);
}

TEST_CASE("density plot: panel grid, normalized non-negative curves") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = density_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                        std::nullopt, cfg);
    // (r + 1) stage rows x r attribute columns x 2 modalities.
    CHECK(spec.series.size() == 3 * 2 * 2);
    int max_row = 0, max_col = 0;
    for (const auto& s : spec.series) {
        max_row = std::max(max_row, s.row);
        max_col = std::max(max_col, s.col);
        double mass = 0.0;
        for (std::size_t k = 1; k < s.x.size(); ++k) {
            CHECK(s.y[k] >= 0.0);
            mass += 0.5 * (s.y[k] + s.y[k - 1]) * (s.x[k] - s.x[k - 1]);
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
    }
    CHECK(max_row == 2);
    CHECK(max_col == 1);
}

TEST_CASE("density plot: beta kernel for binary-task scores in [0,1]") {
    std::vector<double> calib_scores, test_scores;
    std::vector<int> ca, ta;
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1500; ++i) {
        const int a = u(gen) < 0.5;
        calib_scores.push_back(std::min(1.0, std::max(0.0, 0.3 + 0.25 * a + 0.3 * (u(gen) - 0.5))));
        ca.push_back(a);
        const int b = u(gen) < 0.5;
        test_scores.push_back(std::min(1.0, std::max(0.0, 0.3 + 0.25 * b + 0.3 * (u(gen) - 0.5))));
        ta.push_back(b);
    }
    PlotConfig cfg;
    cfg.binary_task = true;
    const auto spec = density_plot_data(calib_scores, frame1("a", ca), test_scores,
                                        frame1("a", ta), std::nullopt, cfg);
    for (const auto& s : spec.series) {
        CHECK(s.x.front() == 0.0);
        CHECK(s.x.back() == 1.0);
        double mass = 0.0;
        for (std::size_t k = 1; k < s.x.size(); ++k)
            mass += 0.5 * (s.y[k] + s.y[k - 1]) * (s.x[k] - s.x[k - 1]);
        CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("density plot: near-constant groups collapse to spikes, tiny groups are omitted") {
    // Group 1 of the test frame has a single observation: curve omitted.
    const std::vector<double> calib{0.5, 0.5001, 0.4999, 0.5, 0.9, 0.9001, 0.8999, 0.9};
    const std::vector<int> ca{0, 0, 0, 0, 1, 1, 1, 1};
    const std::vector<double> test{0.5, 0.5001, 0.9};
    const std::vector<int> ta{0, 0, 1};
    PlotConfig cfg;
    const auto spec = density_plot_data(calib, frame1("a", ca), test, frame1("a", ta),
                                        std::nullopt, cfg);
    CHECK(!spec.meta.warnings.empty());
    for (const auto& s : spec.series) {
        double peak = 0.0;
        for (double v : s.y) peak = std::max(peak, v);
        CHECK(peak > 10.0);  // near-delta spike
    }
}

TEST_CASE("waterfall: telescoping decrements and both-orders residual agreement") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = waterfall_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                          std::nullopt, true, cfg);
    REQUIRE(spec.series.size() == 2);
    for (const auto& s : spec.series) {
        REQUIRE(s.y.size() == 4);  // base, 2 steps, residual
        const double base = s.y[0];
        const double residual = s.y[3];
        CHECK(base + s.y[1] + s.y[2] == doctest::Approx(residual).epsilon(1e-9));
    }
    CHECK(std::abs(spec.series[0].y.back() - spec.series[1].y.back()) < 0.05);
}

TEST_CASE("waterfall: partial epsilon corrects a strict fraction") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = waterfall_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                          EpsilonVector{{0.5, 0.25}}, false, cfg);
    const auto& s = spec.series[0];
    const double pct1 = -100.0 * s.y[1] / s.y[0];
    CHECK(pct1 > 0.0);
    CHECK(pct1 < 100.0);
    CHECK(s.labels[1].find("eps=0.5") != std::string::npos);
}

TEST_CASE("render: json round trip and deterministic svg") {
    const auto c = calib_data();
    const auto t = test_data();
    PlotConfig cfg;
    const auto spec = arrow_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                      t.labels, std::nullopt, cfg);
    const auto js = render(spec, PlotFormat::json);
    CHECK(plot_spec_from_json(js) == spec);

    const auto svg1 = render(spec, PlotFormat::svg);
    const auto svg2 = render(spec, PlotFormat::svg);
    CHECK(svg1 == svg2);
    CHECK(svg1.find("<svg") == 0);
    // r + 1 point markers
    std::size_t markers = 0, pos = 0;
    while ((pos = svg1.find("<circle", pos)) != std::string::npos) {
        ++markers;
        pos += 7;
    }
    CHECK(markers == 3);
}
