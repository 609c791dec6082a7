// Acceptance suite: one numbered criterion per run (or all when invoked
// without arguments). Prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "equifair/calibration.hpp"
#include "equifair/csv.hpp"
#include "equifair/distributions.hpp"
#include "equifair/metrics.hpp"
#include "equifair/plots.hpp"
#include "equifair/synthetic.hpp"
#include "support/lp_oracle.hpp"
#include "support/testutil.hpp"

using namespace equifair;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("CRITERION %2d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Criterion-5 dataset, shared by criteria 5, 6 and 9.
struct Bench {
    SyntheticData calib, test;
};

Bench make_bench() {
    SyntheticConfig sc;
    sc.n = 20000;
    sc.correlation = 0.05;
    sc.shift1 = 3.0;
    sc.shift2 = 2.0;
    sc.score_sigma = 1.0;
    sc.label_noise = 0.5;
    sc.seed = 101;
    Bench b;
    b.calib = make_synthetic(sc);
    sc.seed = 102;
    b.test = make_synthetic(sc);
    return b;
}

// 1. Ten-point two-attribute example: total unfairness 0.472 +/- 0.01 under
//    both methods, in under a millisecond.
void criterion_1() {
    const auto frame = frame2("origin", kAuditOrigin, "gender", kAuditGender);
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = unfairness(kAuditPreds, frame, UnfairnessMethod::grid);
    const auto exact = unfairness(kAuditPreds, frame, UnfairnessMethod::exact);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const bool value_ok = std::abs(grid.total - 0.472) <= 0.01 &&
                          std::abs(exact.total - 0.472) <= 0.01;
    const bool time_ok = ms < 1.0;
    report(1, value_ok && time_ok,
           "ten-point example: grid=" + fmt(grid.total) + " exact=" + fmt(exact.total) +
               " (target 0.472 +/- 0.01), runtime " + fmt(ms) + " ms" +
               (value_ok ? "" : " [the W1 unfairness of this example is ~0.110; 0.472 "
                                "corresponds to a sup-of-quantile-gaps statistic]"));
}

// 2. SSA golden transform.
void criterion_2() {
    const auto cal = fit_ssa(kCalibPreds, frame1("origin", kCalibOrigin), 1e-4, 42);
    const auto out = cal.transform(kTestPreds, frame1("origin", kTestOrigin));
    const bool ok = std::abs(out[0] - 0.271) <= 0.02 && std::abs(out[1] - 0.752) <= 0.02;
    report(2, ok, "ssa transform -> [" + fmt(out[0]) + ", " + fmt(out[1]) +
                      "] (target [0.271, 0.752] +/- 0.02)");
}

// 3. MSA golden transform and its epsilon variant.
void criterion_3() {
    const auto cf = frame2("origin", kCalibOrigin, "gender", kCalibGender);
    const auto tf = frame2("origin", kTestOrigin, "gender", kTestGender);
    auto cal = fit_msa(kCalibPreds, cf, 1e-4, 42);
    const auto out0 = cal.transform(kTestPreds, tf);
    const auto oute = cal.transform(kTestPreds, tf, EpsilonVector{{0.1, 0.2}});
    const bool ok0 = std::abs(out0[0] - 0.203) <= 0.02 && std::abs(out0[1] - 0.361) <= 0.02;
    const bool oke = std::abs(oute[0] - 0.210) <= 0.02 && std::abs(oute[1] - 0.348) <= 0.02;
    report(3, ok0 && oke,
           "msa transform -> [" + fmt(out0[0]) + ", " + fmt(out0[1]) +
               "] (target [0.203, 0.361]); eps=[0.1,0.2] -> [" + fmt(oute[0]) + ", " +
               fmt(oute[1]) + "] (target [0.210, 0.348])" +
               (ok0 ? "" : " [not reproducible from these inputs under the closed-form "
                           "composition]"));
}

// 4. Exact W1 vs the brute-force transportation LP.
void criterion_4() {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> a(size(gen)), b(size(gen));
        for (auto& v : a) v = val(gen);
        for (auto& v : b) v = val(gen);
        const double mine = wasserstein1_exact(EmpiricalDistribution(a), EmpiricalDistribution(b));
        worst = std::max(worst, std::abs(mine - oracle::w1_lp(a, b)));
    }
    report(4, worst < 1e-10,
           "200 random instances (sizes <= 8): max |exact - LP| = " + fmt(worst) +
               " (tolerance 1e-10)");
}

// 5. Mitigation effectiveness and price-of-fairness consistency.
void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    auto bench = make_bench();
    auto cal = fit_msa(bench.calib.predictions, bench.calib.sensitive, 1e-4, 7);
    const auto fair = cal.transform(bench.test.predictions, bench.test.sensitive);

    const double u_base = unfairness(bench.test.predictions, bench.test.sensitive).total;
    const double u_fair = unfairness(fair, bench.test.sensitive).total;
    const double ratio = u_fair / u_base;

    const double mse_base = performance(bench.test.labels, bench.test.predictions);
    const double mse_fair = performance(bench.test.labels, fair);
    const double d_mse = mse_fair - mse_base;

    // Empirical price of fairness: joint-group conditioned squared W2 to the
    // pooled fair distribution.
    const EmpiricalDistribution fair_pool(fair);
    const auto& c1 = bench.test.sensitive.column(std::size_t{0});
    const auto& c2 = bench.test.sensitive.column(std::size_t{1});
    double excess = 0.0;
    for (const std::string v1 : {"0", "1"}) {
        for (const std::string v2 : {"0", "1"}) {
            std::vector<double> cell;
            for (std::size_t i = 0; i < fair.size(); ++i)
                if (c1[i] == v1 && c2[i] == v2) cell.push_back(bench.test.predictions[i]);
            if (cell.empty()) continue;
            const double p = static_cast<double>(cell.size()) / static_cast<double>(fair.size());
            excess += p * wasserstein2_grid(EmpiricalDistribution(cell), fair_pool, 2000);
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    const bool fair_ok = ratio <= 0.05;
    const bool mse_ok = d_mse <= 1.1 * excess;
    const bool time_ok = secs < 5.0;
    report(5, fair_ok && mse_ok && time_ok,
           "unfairness " + fmt(u_base) + " -> " + fmt(u_fair) + " (ratio " + fmt(ratio) +
               ", need <= 0.05); mse increase " + fmt(d_mse) + " vs W2 excess " + fmt(excess) +
               " (need <= 1.1x); runtime " + fmt(secs) + " s");
}

// 6. Order invariance of the final vectors and of the multiple-arrow final
//    points, with one shared jitter realization.
void criterion_6() {
    auto bench = make_bench();
    const std::vector<std::size_t> fwd{0, 1}, rev{1, 0};
    const auto cf_f = bench.calib.sensitive.select(fwd);
    const auto cf_r = bench.calib.sensitive.select(rev);
    const auto tf_f = bench.test.sensitive.select(fwd);
    const auto tf_r = bench.test.sensitive.select(rev);

    auto calA = fit_msa(bench.calib.predictions, cf_f, 1e-4, 7);
    auto calB = fit_msa(bench.calib.predictions, cf_r, 1e-4, 7);
    const auto outA = calA.transform(bench.test.predictions, tf_f);
    const auto outB = calB.transform(bench.test.predictions, tf_r);
    double maxd = 0.0;
    for (std::size_t i = 0; i < outA.size(); ++i)
        maxd = std::max(maxd, std::abs(outA[i] - outB[i]));

    PlotConfig pc;
    pc.seed = 7;
    const auto spec = multiple_arrow_plot_data(bench.calib.predictions, bench.calib.sensitive,
                                               bench.test.predictions, bench.test.sensitive,
                                               bench.test.labels, std::nullopt, pc);
    const double du = std::abs(spec.series[0].x.back() - spec.series[1].x.back());
    const double dp = std::abs(spec.series[0].y.back() - spec.series[1].y.back());

    const bool ok = maxd <= 1e-3 && du <= 1e-3 && dp <= 1e-3;
    report(6, ok,
           "final vectors max|diff| = " + fmt(maxd) + ", multiple-arrow final gap (" + fmt(du) +
               ", " + fmt(dp) + ") (tolerance 1e-3)" +
               (ok ? "" : " [pointwise order-equality does not hold empirically under "
                          "correlated attributes]"));
}

// 7. Geodesic identity, exact to 1e-12.
void criterion_7() {
    SyntheticConfig sc;
    sc.n = 2000;
    sc.seed = 71;
    const auto calib = make_synthetic(sc);
    sc.seed = 72;
    const auto test = make_synthetic(sc);
    auto cal = fit_msa(calib.predictions, calib.sensitive, 1e-4, 7);

    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const EpsilonVector eps{{u(gen), u(gen)}};
        cal.transform(test.predictions, test.sensitive, eps);
        const auto trace = cal.y_fair();
        // per stage: out = (1 - eps_i) * full_correction(stage input) + eps_i * input
        for (std::size_t s = 0; s < 2; ++s) {
            const auto& input = trace[s].second;
            const auto full = cal.stage(s).transform_prejittered(
                input, test.sensitive.column(s));
            for (std::size_t i = 0; i < input.size(); ++i) {
                const double expect = (1.0 - eps.values[s]) * full[i] + eps.values[s] * input[i];
                worst = std::max(worst, std::abs(trace[s + 1].second[i] - expect));
            }
        }
    }
    // Single-attribute full identity: transform(eps) vs blend of transform(0).
    const SensitiveFrame c1({"a1"}, {calib.sensitive.column(std::size_t{0})});
    const SensitiveFrame t1({"a1"}, {test.sensitive.column(std::size_t{0})});
    auto cal1 = fit_msa(calib.predictions, c1, 1e-4, 7);
    const auto base0 = cal1.transform(test.predictions, t1);
    const auto yj = cal1.y_fair().front().second;
    for (int rep = 0; rep < 20; ++rep) {
        const double e = u(gen);
        const auto oute = cal1.transform(test.predictions, t1, EpsilonVector{{e}});
        for (std::size_t i = 0; i < oute.size(); ++i)
            worst = std::max(worst, std::abs(oute[i] - ((1.0 - e) * base0[i] + e * yj[i])));
    }
    report(7, worst <= 1e-12,
           "20 random epsilon vectors: max geodesic identity error = " + fmt(worst) +
               " (tolerance 1e-12)");
}

// 8. Gaussian barycenter oracle at n = 1e5 per family.
void criterion_8() {
    std::mt19937_64 gen(808);
    std::uniform_real_distribution<double> mu(-1.0, 1.0), sd(0.25, 0.6), coin(0.0, 1.0);
    const std::size_t n = 100000;
    const double tol = 3.0 / std::sqrt(static_cast<double>(n));
    double worst_mean = 0.0, worst_std = 0.0;
    bool jensen_ok = true;
    for (int fam = 0; fam < 50; ++fam) {
        const double m1 = mu(gen), m2 = mu(gen), s1 = sd(gen), s2 = sd(gen);
        std::normal_distribution<double> g1(m1, s1), g2(m2, s2);
        std::vector<double> x(n);
        std::vector<int> a(n);
        std::size_t n1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = coin(gen) < 0.5 ? 0 : 1;
            x[i] = a[i] == 0 ? g1(gen) : g2(gen);
            n1 += static_cast<std::size_t>(a[i] == 0);
        }
        const double w1 = static_cast<double>(n1) / static_cast<double>(n);
        const auto cal = fit_ssa(x, frame1("a", a), 0.0, 0);
        const auto out = cal.transform(x, frame1("a", a));

        double mean = 0.0;
        for (double v : out) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : out) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n);

        const std::vector<GaussianSpec> fam_spec{{m1, s1, w1}, {m2, s2, 1.0 - w1}};
        const auto bar = gaussian_barycenter(fam_spec);
        worst_mean = std::max(worst_mean, std::abs(mean - bar.mean));
        worst_std = std::max(worst_std, std::abs(std::sqrt(var) - bar.std));

        const double mix_var = w1 * s1 * s1 + (1 - w1) * s2 * s2 +
                               w1 * (1 - w1) * (m1 - m2) * (m1 - m2);
        jensen_ok = jensen_ok && bar.std * bar.std <= mix_var + 1e-12 && var <= mix_var + 3.0 * tol;
    }
    const bool ok = worst_mean <= tol && worst_std <= tol && jensen_ok;
    report(8, ok,
           "50 families (n=1e5): max mean err " + fmt(worst_mean) + ", max std err " +
               fmt(worst_std) + " (tolerance " + fmt(tol) + "), Jensen bound " +
               (jensen_ok ? "holds" : "violated"));
}

// 9. Decomposition shape on the criterion-5 data.
void criterion_9() {
    auto bench = make_bench();
    auto cal = fit_msa(bench.calib.predictions, bench.calib.sensitive, 1e-4, 7);
    cal.transform(bench.test.predictions, bench.test.sensitive);
    const auto table = decompose(cal, bench.test.sensitive);
    const double base_a1 = table.rows[0].per_attribute[0].second;
    const double after_a1 = table.rows[1].per_attribute[0].second;
    const double base_total = table.rows[0].total;
    const double final_total = table.rows.back().total;
    const bool ok = after_a1 <= 0.05 * base_a1 && final_total <= 0.15 * base_total;
    report(9, ok,
           "stage-1 attribute " + fmt(base_a1) + " -> " + fmt(after_a1) + " (need <= 0.05x); " +
               "total " + fmt(base_total) + " -> " + fmt(final_total) + " (need <= 0.15x)");
}

// 10. Determinism and lossless round-trips.
void criterion_10() {
    bool ok = true;
    std::string detail;

    // save/load round trip
    const auto cf = frame2("origin", kCalibOrigin, "gender", kCalibGender);
    const auto tf = frame2("origin", kTestOrigin, "gender", kTestGender);
    auto cal = fit_msa(kCalibPreds, cf, 1e-4, 99);
    auto loaded = load_calibrator(save_calibrator(cal));
    const auto a = cal.transform(kTestPreds, tf, EpsilonVector{{0.3, 0.4}});
    const auto b = loaded.transform(kTestPreds, tf, EpsilonVector{{0.3, 0.4}});
    if (a != b) {
        ok = false;
        detail += "save/load transform mismatch; ";
    }

    // plot JSON round trip
    SyntheticConfig sc;
    sc.n = 1500;
    sc.seed = 5;
    const auto c = make_synthetic(sc);
    sc.seed = 6;
    const auto t = make_synthetic(sc);
    PlotConfig pc;
    const auto spec = arrow_plot_data(c.predictions, c.sensitive, t.predictions, t.sensitive,
                                      t.labels, std::nullopt, pc);
    if (plot_spec_from_json(render(spec, PlotFormat::json)) != spec) {
        ok = false;
        detail += "plot json round trip mismatch; ";
    }
    if (render(spec, PlotFormat::svg) != render(spec, PlotFormat::svg)) {
        ok = false;
        detail += "svg not deterministic; ";
    }

    // byte-identical seeded CLI runs
    const auto dir = fs::temp_directory_path() / "equifair_acceptance10";
    fs::create_directories(dir);
    const std::string base = std::string(EQUIFAIR_CLI_BIN);
    auto run = [&](const std::string& args) {
        const std::string cmd = base + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string data = (dir / "d.csv").string();
    bool cli_ok = run("synth --n 500 --seed 13 --out " + data);
    for (int r = 1; r <= 2 && cli_ok; ++r) {
        const std::string suffix = std::to_string(r);
        cli_ok = cli_ok &&
                 run("calibrate --calib " + data +
                     " --pred-col pred --sensitive-cols a1,a2 --seed 4 --out " +
                     (dir / ("m" + suffix + ".json")).string()) &&
                 run("apply --model " + (dir / ("m" + suffix + ".json")).string() + " --test " +
                     data + " --out " + (dir / ("f" + suffix + ".csv")).string()) &&
                 run("plot --kind waterfall --calib " + data + " --test " + data +
                     " --pred-col pred --sensitive-cols a1,a2 --seed 4 --format svg --out " +
                     (dir / ("w" + suffix + ".svg")).string());
    }
    if (!cli_ok) {
        ok = false;
        detail += "cli run failed; ";
    } else if (read_file((dir / "m1.json").string()) != read_file((dir / "m2.json").string()) ||
               read_file((dir / "f1.csv").string()) != read_file((dir / "f2.csv").string()) ||
               read_file((dir / "w1.svg").string()) != read_file((dir / "w2.svg").string())) {
        ok = false;
        detail += "cli outputs not byte-identical; ";
    }
    fs::remove_all(dir);
    report(10, ok, ok ? "save/load, json/svg renders, and seeded CLI runs are reproducible"
                      : detail);
}

}  // namespace

int main(int argc, char** argv) {
    const int which = argc > 1 ? std::atoi(argv[1]) : 0;
    using Fn = void (*)();
    const Fn criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                           criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    if (which >= 1 && which <= 10) {
        criteria[which - 1]();
    } else {
        for (const auto& fn : criteria) fn();
    }
    return g_failures == 0 ? 0 : 1;
}
