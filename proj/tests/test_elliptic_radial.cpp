#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ulab/elliptic_radial.hpp"
#include "ulab/errors.hpp"
#include "ulab/nonlinearity.hpp"
#include "ulab/quadrature.hpp"

using namespace ulab;
using namespace ulab::nonlin;
using namespace ulab::radial;

namespace {

// Radial Laplacian u'' + (n-1)u'/r by Richardson-extrapolated central FD.
double fd_radial_laplacian(const std::function<double(double)>& u, int n,
                           double r) {
    auto lap_h = [&](double h) {
        double upp = (u(r + h) - 2 * u(r) + u(r - h)) / (h * h);
        double up = (u(r + h) - u(r - h)) / (2 * h);
        return upp + (n - 1) * up / r;
    };
    double h = 1e-3 * r;
    double a = lap_h(h), b = lap_h(h / 2);
    return (4 * b - a) / 3;
}

}  // namespace

TEST_CASE("critical power in three dimensions reproduces the bubble profile") {
    double v0 = std::pow(3.0, 0.25);
    // verify the closed form independently before trusting it as an oracle
    auto U = [&](double r) { return v0 / std::sqrt(1.0 + r * r); };
    for (double r : {0.3, 1.0, 2.5, 7.0}) {
        double lap = fd_radial_laplacian(U, 3, r);
        CHECK(-lap == doctest::Approx(std::pow(U(r), 5.0)).epsilon(1e-7));
    }

    auto res = shoot(Expr::pow_s(5.0), 3, v0, 100.0, 1e-11);
    REQUIRE(res.outcome == Outcome::PositiveGlobal);
    for (std::size_t i = 0; i < res.r.size(); ++i)
        CHECK(res.v[i] == doctest::Approx(U(res.r[i])).epsilon(1e-8));
    CHECK(res.decay_exponent == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("five-dimensional two-coefficient example matches (1+r^2)^{-1}") {
    auto f = counterexample_decay(5, 2.0);
    auto V = [](double r) { return 1.0 / (1.0 + r * r); };
    for (double r : {0.4, 1.0, 3.0}) {
        double lap = fd_radial_laplacian(V, 5, r);
        CHECK(-lap == doctest::Approx(f.eval(V(r))).epsilon(1e-7));
    }
    auto res = shoot(f, 5, 1.0, 100.0, 1e-11);
    REQUIRE(res.outcome == Outcome::PositiveGlobal);
    for (std::size_t i = 0; i < res.r.size(); ++i)
        CHECK(res.v[i] == doctest::Approx(V(res.r[i])).epsilon(1e-8));
    CHECK(res.decay_exponent == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("subcritical cubic crosses zero with the scaling law R ~ 1/v0") {
    std::vector<double> R;
    for (double v0 : {0.1, 1.0, 10.0}) {
        auto res = shoot(Expr::pow_s(3.0), 3, v0, 1e3, 1e-11);
        REQUIRE(res.outcome == Outcome::CrossesZero);
        R.push_back(res.R);
    }
    // v -> a v(a r) maps solutions to solutions for f = s^3, so R v0 is fixed
    CHECK(R[0] * 0.1 == doctest::Approx(R[1]).epsilon(1e-7));
    CHECK(R[2] * 10.0 == doctest::Approx(R[1]).epsilon(1e-7));
}

TEST_CASE("integral form of the equation holds along traces") {
    auto res = shoot(Expr::pow_s(5.0), 3, std::pow(3.0, 0.25), 100.0, 1e-11);
    CHECK(integral_identity_residual(Expr::pow_s(5.0), 3, res) < 1e-8);

    auto res2 = shoot(Expr::pow_s(3.0), 3, 1.0, 1e3, 1e-11);
    CHECK(integral_identity_residual(Expr::pow_s(3.0), 3, res2) < 1e-8);

    // fully independent check against quadrature of the exact profile
    double v0 = std::pow(3.0, 0.25);
    for (std::size_t i = 40; i < res.r.size(); i += 50) {
        double r = res.r[i];
        auto g = [&](double rho) {
            double u = v0 / std::sqrt(1.0 + rho * rho);
            return rho * rho * std::pow(u, 5.0);
        };
        double I = quad::integrate(g, 0.0, r, 1e-13).value;
        double w = res.dv[i] * r * r;
        CHECK(w == doctest::Approx(-I).epsilon(1e-8));
    }
}

TEST_CASE("grid search outcomes split by growth regime") {
    std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    auto sup = entire_solution_search(parse("pow(s,5)*log(1+s)"), 3, grid, 1e3);
    CHECK(sup.existence_corroborated);

    auto sub = entire_solution_search(parse("pow(s,2)*log(2+s)"), 3, grid, 1e3);
    CHECK_FALSE(sub.existence_corroborated);
    for (const auto& e : sub.entries) CHECK(e.outcome == Outcome::CrossesZero);

    auto crit = entire_solution_search(Expr::pow_s(5.0), 3,
                                       {std::pow(3.0, 0.25)}, 1e3);
    CHECK(crit.existence_corroborated);
}

TEST_CASE("singular steady state closed forms and parameter gate") {
    auto u34 = singular_steady_state(4.0, 3);
    CHECK(u34.beta == doctest::Approx(2.0 / 3.0));
    CHECK(u34.c == doctest::Approx(std::pow(2.0 / 9.0, 1.0 / 3.0)));
    auto u52 = singular_steady_state(2.0, 5);
    CHECK(u52.beta == doctest::Approx(2.0));
    CHECK(u52.c == doctest::Approx(2.0));
    // FD oracle for the PDE residual
    for (double r : {0.05, 0.5, 0.9}) {
        auto u = [&](double rr) { return u34.value(rr); };
        double lap = fd_radial_laplacian(u, 3, r);
        CHECK(-lap == doctest::Approx(std::pow(u34.value(r), 4.0)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(singular_steady_state(3.0, 3), PreconditionError);  // p = n/(n-2)
    CHECK_THROWS_AS(singular_steady_state(5.0, 3), PreconditionError);  // p = p_S
    CHECK_THROWS_AS(singular_steady_state(4.0, 2), PreconditionError);
}

TEST_CASE("Pohozaev-type margin vanishes at the critical power") {
    // s f - (p_S+1) F = s^{p+1} (1 - (p_S+1)/(p+1)) for f = s^p
    for (double s : {0.5, 1.0, 3.0}) {
        CHECK(pohozaev_margin(Expr::pow_s(5.0), 3, s) ==
              doctest::Approx(0.0).epsilon(1e-9));
        double want = std::pow(s, 7.0) * (1.0 - 6.0 / 7.0);
        CHECK(pohozaev_margin(Expr::pow_s(6.0), 3, s) ==
              doctest::Approx(want).epsilon(1e-9));
        CHECK(pohozaev_margin(Expr::pow_s(4.0), 3, s) < 0.0);
    }
    CHECK_THROWS_AS(pohozaev_margin(Expr::pow_s(5.0), 2, 1.0), PreconditionError);
}

TEST_CASE("shooting preconditions") {
    CHECK_THROWS_AS(shoot(Expr::pow_s(3.0), 3, -1.0, 10.0), PreconditionError);
    CHECK_THROWS_AS(shoot(Expr::pow_s(3.0), 0, 1.0, 10.0), PreconditionError);
    CHECK_THROWS_AS(shoot(Expr::pow_s(3.0), 3, 1.0, 0.0), PreconditionError);
}
