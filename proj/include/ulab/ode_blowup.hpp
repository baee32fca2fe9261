#pragma once

// The scalar ODE y' = f(y): blow-up time by quadrature of 1/f, trajectory by
// inversion of H(y) = int_y^inf dz/f(z), and rate diagnostics.

#include <vector>

#include "ulab/nonlinearity.hpp"

namespace ulab::ode {

struct BlowupProfile {
    double y0 = 0.0;
    double T = 0.0;
    std::vector<double> t;       // sample times in [0, T)
    std::vector<double> y;       // y(t_i)
    std::vector<double> rho;     // (f(y)/y)(T - t_i)
};

// Cheap falsifier for superlinearity at infinity: s/f(s) must decay with a
// negative log-log slope across s in [1e6, 1e12].
bool tail_integrable(const nonlin::Expr& f, double delta = 0.05);

// T = int_{y0}^inf dz/f(z). Throws NumericError("non-integrable tail") when
// the tail probe fails.
double blowup_time(const nonlin::Expr& f, double y0, double tol = 1e-12);

// H(s) = int_s^inf dz/f(z), the decreasing time-to-blow-up map.
double time_to_blowup(const nonlin::Expr& f, double s, double tol = 1e-12);

// Invert H(y) = T - t for each requested time; t_grid must be strictly
// increasing inside [0, T).
BlowupProfile trajectory(const nonlin::Expr& f, double y0,
                         const std::vector<double>& t_grid, double tol = 1e-10);

struct RateWindow {
    double rho_min = 0.0;
    double rho_max = 0.0;
    bool pass = false;  // rho_min > 0
};

// Min/max of rho(t) = (f(y)/y)(T-t) on a grid log-spaced in T - t over
// [t_a, t_b] subset (0, T).
RateWindow verify_rate(const nonlin::Expr& f, double y0, double t_a, double t_b,
                       int n_samples = 64, double tol = 1e-10);

}  // namespace ulab::ode
