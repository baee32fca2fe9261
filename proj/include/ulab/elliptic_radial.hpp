#pragma once

// Radial shooting for -(r^{n-1} v')' = r^{n-1} f(v) with v(0) = v0, v'(0) = 0:
// zero-crossing detection, "positive up to r_max" diagnostics, closed-form
// singular steady states, and the Pohozaev-type margin s f(s) - (p_S+1) F(s).

#include <cstddef>
#include <string>
#include <vector>

#include "ulab/nonlinearity.hpp"

namespace ulab::radial {

enum class Outcome { CrossesZero, PositiveGlobal, Inconclusive };

struct ShootResult {
    Outcome outcome = Outcome::Inconclusive;
    double R = 0.0;        // first zero of v when CrossesZero
    double r_max = 0.0;
    std::vector<double> r, v, dv;  // accepted-step trace while v > 0
    double decay_exponent = 0.0;   // -d log v / d log r over the last decade
    std::size_t steps = 0;
    std::string note;              // diagnostics when Inconclusive
};

// f is extended by zero below s = 0. PositiveGlobal means positive with
// v' <= 0 up to r_max only; no entire-existence claim.
ShootResult shoot(const nonlin::Expr& f, int n, double v0, double r_max = 1e3,
                  double tol = 1e-10);

struct SearchEntry {
    double v0 = 0.0;
    Outcome outcome = Outcome::Inconclusive;
    double R = 0.0;  // crossing radius when applicable
};

struct SearchSummary {
    std::vector<SearchEntry> entries;
    bool existence_corroborated = false;  // some v0 stayed positive to r_max
};

SearchSummary entire_solution_search(const nonlin::Expr& f, int n,
                                     const std::vector<double>& v0_grid,
                                     double r_max = 1e3);

// u(r) = c r^{-beta} with beta = 2/(p-1), c = [beta(n-2-beta)]^{1/(p-1)},
// an exact solution of -Laplace(u) = u^p for p strictly between n/(n-2)
// and (n+2)/(n-2), n >= 3. The residual is checked on a grid at build time.
struct SingularSteadyState {
    int n = 0;
    double p = 0.0, beta = 0.0, c = 0.0;
    double value(double r) const;
    double slope(double r) const;
};

SingularSteadyState singular_steady_state(double p, int n);

// Max over trace checkpoints of the relative defect in the integral form
// r^{n-1} v'(r) = -int_0^r rho^{n-1} f(v(rho)) drho, with v reconstructed by
// cubic Hermite interpolation between accepted steps.
double integral_identity_residual(const nonlin::Expr& f, int n,
                                  const ShootResult& res);

// phi(s) = s f(s) - (p_S + 1) F(s); nonnegative on an initial height interval
// for Sobolev-supercritical nonlinearities.
double pohozaev_margin(const nonlin::Expr& f, int n, double s);

}  // namespace ulab::radial
