#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/parallel.hpp"

using namespace hyperwave;

TEST_CASE("parallel grids equal the serial reference bit for bit") {
    for (int n : {3, 4}) {
        const auto p = SpaceParams::hyperbolic(n);
        const std::vector<double> ts{0.3, 2.0, 9.0};
        const std::vector<double> rs{0.0, 0.7, 3.0, 6.5};
        const WaveParams base = WaveParams::low_defaults(p, 1.0);
        const auto s = omega0_grid(p, base, ts, rs, cutoffs(), ExecutionMode::serial);
        const auto q = omega0_grid(p, base, ts, rs, cutoffs(), ExecutionMode::parallel);
        REQUIRE(s.size() == ts.size() * rs.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == q[i]);
        // row-major in t
        WaveParams wp = base;
        wp.t = ts[2];
        CHECK(s[2 * rs.size() + 1] == omega0(p, wp, rs[1]));
    }
    const auto p = SpaceParams::hyperbolic(5);
    const std::vector<double> ls{0.0, 0.5, 3.0};
    const std::vector<double> rs{0.2, 1.0, 4.0};
    const auto a = phi_grid(p, ls, rs, ExecutionMode::serial);
    const auto b = phi_grid(p, ls, rs, ExecutionMode::parallel);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(a[1 * rs.size() + 2] == phi_lambda(p, 0.5, 4.0).real());
}

TEST_CASE("every index is visited once and errors propagate") {
    std::vector<std::atomic<int>> hits(257);
    for_each_index(hits.size(), ExecutionMode::parallel, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(for_each_index(10, ExecutionMode::parallel,
                                   [](std::size_t i) {
                                       if (i == 7) throw DomainError("boom");
                                   }),
                    DomainError);
    CHECK_THROWS_AS(for_each_index(10, ExecutionMode::serial,
                                   [](std::size_t i) {
                                       if (i == 3) throw std::runtime_error("boom");
                                   }),
                    std::runtime_error);
}

TEST_CASE("thread count override") {
    setenv("HYPERWAVE_THREADS", "3", 1);
    CHECK(configured_threads() == 3);
    setenv("HYPERWAVE_THREADS", "zero", 1);
    CHECK_THROWS_AS(configured_threads(), DomainError);
    setenv("HYPERWAVE_THREADS", "0", 1);
    CHECK_THROWS_AS(configured_threads(), DomainError);
    unsetenv("HYPERWAVE_THREADS");
    CHECK(configured_threads() >= 1);
}
