#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ulab/doubling.hpp"
#include "ulab/errors.hpp"

using namespace ulab;
using namespace ulab::doubling;

namespace {

FiniteMetricSpace line_space(std::size_t n, std::vector<std::size_t> sigma,
                             std::vector<std::size_t> d_set) {
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dist[i * n + j] = std::fabs(double(i) - double(j));
    return make_space(n, std::move(dist), std::move(sigma), std::move(d_set));
}

std::vector<std::size_t> iota_set(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

// Euclidean metric on random points in the plane.
std::vector<double> random_euclidean(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<double> px(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = u(rng);
        py[i] = u(rng);
    }
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = std::hypot(px[i] - px[j], py[i] - py[j]);
            if (d == 0.0) d = 1e-6;
            dist[i * n + j] = dist[j * n + i] = d;
        }
    return dist;
}

// Random symmetric weights repaired into a metric by shortest-path completion.
std::vector<double> random_graph_metric(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i * n + j] = dist[j * n + i] = u(rng);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double via = dist[i * n + l] + dist[l * n + j];
                if (via < dist[i * n + j]) dist[i * n + j] = via;
            }
    return dist;
}

}  // namespace

TEST_CASE("constant M selects the starting point in zero hops") {
    auto sp = line_space(11, iota_set(11), {2, 3, 4, 5, 6, 7, 8});
    std::vector<double> M(sp.d_set.size(), 5.0);
    auto res = doubling_select(sp, M, 0.4, 5);
    CHECK(res.x == 5);
    CHECK(res.trace.size() == 1);
    CHECK(check_conclusions(sp, M, 0.4, 5, res.x));
}

TEST_CASE("dyadic M on a 1D grid: conclusions verified exhaustively") {
    auto sp = line_space(11, iota_set(11), {1, 2, 3, 4, 5, 6, 7, 8, 9});
    std::vector<double> M;
    for (std::size_t i : sp.d_set) M.push_back(std::pow(2.0, double(i)));
    double k = 0.4;
    std::size_t y = 3;
    REQUIRE(M[2] * sp.dist_to_gamma(y) > 2 * k);  // 8 * 3 > 0.8
    auto res = doubling_select(sp, M, k, y);

    auto Mof = [&](std::size_t p) { return std::pow(2.0, double(p)); };
    // (a)-(c) by brute force over all points of D.
    CHECK(Mof(res.x) * sp.dist_to_gamma(res.x) > 2 * k);
    CHECK(Mof(res.x) >= Mof(y));
    for (std::size_t z : sp.d_set)
        if (sp.d(z, res.x) <= k / Mof(res.x)) CHECK(Mof(z) <= 2 * Mof(res.x));
    CHECK(check_conclusions(sp, M, k, y, res.x));

    // strict doubling along the trace and the iteration bound
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(Mof(res.trace[i]) > 2 * Mof(res.trace[i - 1]));
    double max_M = Mof(9);
    std::size_t bound =
        std::size_t(std::ceil(std::log2(max_M / Mof(y)))) + 1;
    CHECK(res.trace.size() - 1 <= bound);
}

TEST_CASE("empty boundary set gives infinite distance and a valid run") {
    auto sp = line_space(6, iota_set(6), iota_set(6));
    CHECK(sp.gamma.empty());
    CHECK(sp.dist_to_gamma(0) == std::numeric_limits<double>::infinity());
    std::vector<double> M = {1, 7, 2, 3, 5, 4};
    auto res = doubling_select(sp, M, 100.0, 0);
    CHECK(check_conclusions(sp, M, 100.0, 0, res.x));
}

TEST_CASE("metric validation rejects malformed matrices") {
    // asymmetric
    CHECK_THROWS_AS(make_space(2, {0, 1, 2, 0}, {0, 1}, {0}), PreconditionError);
    // negative entry
    CHECK_THROWS_AS(make_space(2, {0, -1, -1, 0}, {0, 1}, {0}), PreconditionError);
    // nonzero diagonal
    CHECK_THROWS_AS(make_space(2, {1, 1, 1, 0}, {0, 1}, {0}), PreconditionError);
    // triangle inequality: d(0,2)=5 > d(0,1)+d(1,2)=2
    CHECK_THROWS_AS(
        make_space(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}, {0, 1, 2}, {0}),
        PreconditionError);
    // D empty, D not a subset of Sigma, Sigma index out of range
    CHECK_THROWS_AS(make_space(2, {0, 1, 1, 0}, {0, 1}, {}), PreconditionError);
    CHECK_THROWS_AS(make_space(2, {0, 1, 1, 0}, {0}, {1}), PreconditionError);
    CHECK_THROWS_AS(make_space(2, {0, 1, 1, 0}, {0, 5}, {0}), PreconditionError);
}

TEST_CASE("selection preconditions are enforced") {
    auto sp = line_space(5, iota_set(5), {1, 2, 3});
    std::vector<double> M = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(doubling_select(sp, M, 0.0, 2), PreconditionError);
    CHECK_THROWS_AS(doubling_select(sp, {1.0, 1.0}, 0.1, 2), PreconditionError);
    CHECK_THROWS_AS(doubling_select(sp, {1.0, -1.0, 1.0}, 0.1, 2),
                    PreconditionError);
    CHECK_THROWS_AS(doubling_select(sp, M, 0.1, 0), PreconditionError);  // y not in D
    // M(y) dist(y,Gamma) = 1*1 = 2k fails strictly; message carries the product
    try {
        doubling_select(sp, M, 0.5, 1);
        CHECK(false);
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("1.0") != std::string::npos);
    }
}

TEST_CASE("randomized spaces: conclusions, iteration bound, determinism") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<std::size_t> nd(10, 200);
    std::uniform_real_distribution<double> mag(-3.0, 3.0);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = nd(rng);
        std::vector<double> dist = (trial % 2 == 0 || n > 60)
                                       ? random_euclidean(n, rng)
                                       : random_graph_metric(n, rng);
        std::vector<std::size_t> sigma = iota_set(n);
        // Gamma = a random suffix (possibly empty)
        std::uniform_int_distribution<std::size_t> gd(0, n / 4);
        std::size_t ng = gd(rng);
        std::vector<std::size_t> d_set(sigma.begin(), sigma.end() - ng);
        auto sp = make_space(n, std::move(dist), sigma, d_set);

        std::vector<double> M;
        for (std::size_t i = 0; i < sp.d_set.size(); ++i)
            M.push_back(std::pow(10.0, mag(rng)));
        std::uniform_real_distribution<double> kd(0.01, 2.0);
        double k = kd(rng);
        std::uniform_int_distribution<std::size_t> yd(0, sp.d_set.size() - 1);
        std::size_t y = sp.d_set[yd(rng)];

        std::size_t yi = std::lower_bound(sp.d_set.begin(), sp.d_set.end(), y) -
                         sp.d_set.begin();
        double My = M[yi];
        if (!(My * sp.dist_to_gamma(y) > 2 * k)) {
            CHECK_THROWS_AS(doubling_select(sp, M, k, y), PreconditionError);
            continue;
        }
        auto res = doubling_select(sp, M, k, y);
        CHECK(check_conclusions(sp, M, k, y, res.x));
        double max_M = *std::max_element(M.begin(), M.end());
        std::size_t bound =
            std::size_t(std::ceil(std::log2(max_M / My))) + 1;
        CHECK(res.trace.size() - 1 <= bound);
        auto res2 = doubling_select(sp, M, k, y);
        CHECK(res2.trace == res.trace);
        ++checked;
    }
    CHECK(checked > 300);  // the precondition should hold often enough
}
