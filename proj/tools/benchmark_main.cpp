// Times the OpenMP kernels against the serial reference implementations.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "equifair/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clk = std::chrono::steady_clock;

double time_ms(const auto& fn, int reps) {
    fn();  // warm-up
    const auto t0 = clk::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = clk::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    using namespace equifair;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    std::mt19937_64 gen(42);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::size_t n = 200000;
    std::vector<double> a(n), b(n), input(n);
    std::vector<std::size_t> groups(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = gauss(gen);
        b[i] = 1.5 + gauss(gen);
        input[i] = gauss(gen);
        groups[i] = i % 2;
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    std::vector<std::vector<double>> gv{a, b};
    std::vector<double> weights{0.5, 0.5};
    std::vector<double> out(n);

    std::vector<double> grid(2048);
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = -4.0 + 9.0 * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
    std::vector<double> density(grid.size());
    std::vector<double> sample(a.begin(), a.begin() + 20000);

    struct Row {
        const char* name;
        double serial_ms;
        double parallel_ms;
    };
    std::vector<Row> rows;

    rows.push_back({"grid_quantile_distance (G=100k)",
                    time_ms([&] { kernels::serial::grid_quantile_distance(a, b, 100000, 2); }, 5),
                    time_ms([&] { kernels::parallel::grid_quantile_distance(a, b, 100000, 2); }, 5)});
    rows.push_back({"barycentric_apply (N=200k)",
                    time_ms([&] { kernels::serial::barycentric_apply(input, groups, gv, weights, out); }, 5),
                    time_ms([&] { kernels::parallel::barycentric_apply(input, groups, gv, weights, out); }, 5)});
    rows.push_back({"kde_gaussian (n=20k, G=2048)",
                    time_ms([&] { kernels::serial::kde_gaussian(sample, 0.1, grid, density); }, 3),
                    time_ms([&] { kernels::parallel::kde_gaussian(sample, 0.1, grid, density); }, 3)});

    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial[ms]", "parallel[ms]", "speedup");
    for (const auto& r : rows)
        std::printf("%-34s %12.2f %12.2f %8.2fx\n", r.name, r.serial_ms, r.parallel_ms,
                    r.serial_ms / r.parallel_ms);
    return 0;
}
