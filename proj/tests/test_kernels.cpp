#include <doctest.h>

#include <random>

#include "equifair/kernels.hpp"
#include "support/testutil.hpp"

using namespace equifair;

// The OpenMP kernels fill per-element outputs and reduce serially, so they
// must agree with the serial reference bit for bit.
TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
    std::mt19937_64 gen(404);
    auto a = testutil::random_sample(gen, 5000, -3.0, 3.0);
    auto b = testutil::random_sample(gen, 3777, -1.0, 5.0);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    for (int p : {1, 2}) {
        CHECK(kernels::serial::grid_quantile_distance(a, b, 4096, p) ==
              kernels::parallel::grid_quantile_distance(a, b, 4096, p));
    }

    const auto input = testutil::random_sample(gen, 2000, -4.0, 4.0);
    std::vector<std::size_t> groups(input.size());
    for (std::size_t i = 0; i < groups.size(); ++i) groups[i] = i % 2;
    const std::vector<std::vector<double>> gv{a, b};
    const std::vector<double> w{0.4, 0.6};
    std::vector<double> out_s(input.size()), out_p(input.size());
    kernels::serial::barycentric_apply(input, groups, gv, w, out_s);
    kernels::parallel::barycentric_apply(input, groups, gv, w, out_p);
    CHECK(out_s == out_p);

    std::vector<double> grid(512), ds(512), dp(512);
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = -4.0 + 8.0 * k / 511.0;
    kernels::serial::kde_gaussian(a, 0.2, grid, ds);
    kernels::parallel::kde_gaussian(a, 0.2, grid, dp);
    CHECK(ds == dp);

    std::vector<double> unit(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) unit[i] = (a[i] + 3.0) / 6.0;
    std::sort(unit.begin(), unit.end());
    std::vector<double> ugrid(256);
    for (std::size_t k = 0; k < ugrid.size(); ++k) ugrid[k] = k / 255.0;
    std::vector<double> bs(256), bp(256);
    kernels::serial::kde_beta(unit, 0.05, ugrid, bs);
    kernels::parallel::kde_beta(unit, 0.05, ugrid, bp);
    CHECK(bs == bp);
}

TEST_CASE("execution policy switch dispatches both paths") {
    std::mt19937_64 gen(7);
    auto a = testutil::random_sample(gen, 100, 0.0, 1.0);
    auto b = testutil::random_sample(gen, 90, 0.0, 1.0);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto saved = kernels::execution_policy();
    kernels::set_execution_policy(kernels::Exec::serial);
    const double vs = kernels::grid_quantile_distance(a, b, 1000, 1);
    kernels::set_execution_policy(kernels::Exec::parallel);
    const double vp = kernels::grid_quantile_distance(a, b, 1000, 1);
    kernels::set_execution_policy(saved);
    CHECK(vs == vp);
}
