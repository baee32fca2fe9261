#include "ulab/ode_blowup.hpp"

#include <cmath>

#include "ulab/errors.hpp"
#include "ulab/quadrature.hpp"

namespace ulab::ode {

bool tail_integrable(const nonlin::Expr& f, double delta) {
    // log of s/f(s) at s = 1e6 ... 1e12; require a consistently negative slope.
    double prev = 0.0;
    bool first = true;
    for (double e = 6.0; e <= 12.0; e += 1.0) {
        double t = e * std::log(10.0);
        double lg = t - f.eval_log(t).lg;  // log (s/f(s))
        if (!first && lg > prev - delta * std::log(10.0)) return false;
        prev = lg;
        first = false;
    }
    return true;
}

double time_to_blowup(const nonlin::Expr& f, double s, double tol) {
    if (!(s > 0.0)) throw PreconditionError("time_to_blowup: s must be positive");
    // z = s e^u: int_s^inf dz/f(z) = int_0^inf (z/f(z)) du
    double t0 = std::log(s);
    auto g = [&f, t0](double u) {
        double t = t0 + u;
        LogVal fl = f.eval_log(t);
        return LogVal{t - fl.lg, fl.sign}.to_double();
    };
    quad::Result r = quad::integrate_to_inf(g, 0.0, tol);
    return r.value;
}

double blowup_time(const nonlin::Expr& f, double y0, double tol) {
    if (!(y0 > 0.0)) throw PreconditionError("blowup_time: y0 must be positive");
    if (!tail_integrable(f))
        throw NumericError("non-integrable tail: f is not superlinear at infinity");
    return time_to_blowup(f, y0, tol);
}

namespace {

// Solve H(y) = tau for y >= y0 (H decreasing). Newton in y with the analytic
// H' = -1/f, safeguarded by a bracket.
double invert_H(const nonlin::Expr& f, double y0, double T, double tau,
                double tol) {
    double lo = y0, hi = y0;
    double H_hi = T;
    while (H_hi > tau) {
        lo = hi;
        hi *= 4.0;
        H_hi = time_to_blowup(f, hi, tol);
        if (hi > 1e300) throw NumericError("trajectory: bracket expansion failed");
    }
    double y = std::sqrt(lo * hi);
    for (int it = 0; it < 100; ++it) {
        double H = time_to_blowup(f, y, tol);
        double resid = H - tau;
        if (resid > 0)
            lo = y;
        else
            hi = y;
        double step = resid * f.eval(std::min(y, 1e290));
        double ynext = y + step;
        if (!(ynext > lo && ynext < hi)) ynext = std::sqrt(lo * hi);
        if (std::fabs(ynext - y) <= 1e-13 * y && std::fabs(resid) <= 10 * tol * tau)
            return ynext;
        y = ynext;
    }
    return y;
}

}  // namespace

BlowupProfile trajectory(const nonlin::Expr& f, double y0,
                         const std::vector<double>& t_grid, double tol) {
    BlowupProfile prof;
    prof.y0 = y0;
    prof.T = blowup_time(f, y0, tol);
    double prev_t = -1.0;
    for (double t : t_grid) {
        if (!(t >= 0.0 && t < prof.T))
            throw PreconditionError("trajectory: t must lie in [0, T)");
        if (!(t > prev_t))
            throw PreconditionError("trajectory: t_grid must be strictly increasing");
        prev_t = t;
        double tau = prof.T - t;
        double y = invert_H(f, y0, prof.T, tau, tol);
        prof.t.push_back(t);
        prof.y.push_back(y);
        prof.rho.push_back(f.eval(y) / y * tau);
    }
    return prof;
}

RateWindow verify_rate(const nonlin::Expr& f, double y0, double t_a, double t_b,
                       int n_samples, double tol) {
    double T = blowup_time(f, y0, tol);
    if (!(0.0 < t_a && t_a < t_b && t_b < T))
        throw PreconditionError("verify_rate: window must satisfy 0 < t_a < t_b < T");
    RateWindow w;
    w.rho_min = 1e308;
    w.rho_max = -1e308;
    double la = std::log(T - t_b), lb = std::log(T - t_a);
    for (int i = 0; i < n_samples; ++i) {
        double tau = std::exp(la + (lb - la) * i / (n_samples - 1.0));
        double y = invert_H(f, y0, T, tau, tol);
        double rho = f.eval(y) / y * tau;
        w.rho_min = std::min(w.rho_min, rho);
        w.rho_max = std::max(w.rho_max, rho);
    }
    w.pass = w.rho_min > 0.0;
    return w;
}

}  // namespace ulab::ode
