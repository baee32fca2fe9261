#include "ulab/elliptic_radial.hpp"

#include <algorithm>
#include <cmath>

#include "ulab/errors.hpp"
#include "ulab/quadrature.hpp"
#include "ulab/rk45.hpp"

namespace ulab::radial {

namespace {

// f extended by zero below s = 0 so trajectories continue past a crossing.
double f_ext(const nonlin::Expr& f, double s) {
    return s > 0.0 ? f.eval(s) : 0.0;
}

rk::Rhs<2> make_rhs(const nonlin::Expr& f, int n) {
    return [&f, n](double r, const rk::State<2>& y, rk::State<2>& dy) {
        double rn1 = std::pow(r, n - 1);
        dy[0] = y[1] / rn1;
        dy[1] = -rn1 * f_ext(f, y[0]);
    };
}

// Least-squares slope of log v against log r over the last decade of samples.
double tail_decay_exponent(const std::vector<double>& r,
                           const std::vector<double>& v) {
    double r_hi = r.back();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 0.1 * r_hi || v[i] <= 0.0) continue;
        double x = std::log(r[i]), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    double denom = m * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return -(m * sxy - sx * sy) / denom;
}

}  // namespace

ShootResult shoot(const nonlin::Expr& f, int n, double v0, double r_max,
                  double tol) {
    if (!(v0 > 0.0)) throw PreconditionError("shoot: v0 must be positive");
    if (n < 1) throw PreconditionError("shoot: n must be at least 1");
    if (!(r_max > 0.0)) throw PreconditionError("shoot: r_max must be positive");

    ShootResult res;
    res.r_max = r_max;

    double f0 = f.eval(v0);
    // First step from the center expansion v = v0 - f(v0) r^2/(2n) + O(r^4);
    // r0 keeps the quadratic correction near 1e-7 so the tail is below 1e-13.
    double r0 = 1e-6;
    if (f0 > 0.0)
        r0 = 3.16e-4 * std::sqrt(2.0 * n * v0 / f0);
    r0 = std::min(r0, std::min(1e-3, r_max / 100.0));

    res.r.push_back(0.0);
    res.v.push_back(v0);
    res.dv.push_back(0.0);

    // two-term series: with a = f(v0)/(2n), f(v) = f(v0) - f'(v0) a r^2 + ...
    double a = f0 / (2.0 * n);
    double f1 = f0 > 0.0 ? f.derivative(v0) : 0.0;
    rk::State<2> y{v0 - a * r0 * r0 + f1 * a * std::pow(r0, 4) / (4.0 * (n + 2)),
                   -f0 * std::pow(r0, n) / n +
                       f1 * a * std::pow(r0, n + 2) / (n + 2)};
    double r = r0;
    res.r.push_back(r);
    res.v.push_back(y[0]);
    res.dv.push_back(y[1] / std::pow(r, n - 1));

    rk::Rhs<2> rhs = make_rhs(f, n);
    double r_prev = r;
    rk::State<2> y_prev = y;
    bool crossed = false, bad = false;

    try {
        while (r < r_max && !crossed && !bad) {
            double seg_end = std::min(r_max, 2.0 * r);
            rk::StepControl ctl;
            ctl.rel_tol = tol;
            ctl.abs_tol = 1e-14 * std::max(1.0, v0);
            ctl.h_init = 0.01 * r;
            ctl.h_max = 0.005 * seg_end;  // dense trace for interpolation checks
            rk::integrate<2>(
                rhs, r, y, seg_end, ctl, [&](double rc, const rk::State<2>& yc) {
                    ++res.steps;
                    if (yc[0] <= 0.0) {
                        crossed = true;
                        r_prev = r;
                        y_prev = y;
                        r = rc;
                        y = yc;
                        return false;
                    }
                    double slack = 1e-9 * (std::fabs(y[1]) + tol * v0);
                    if (yc[1] > y[1] + slack || yc[1] > 1e-12 * v0) {
                        bad = true;
                        res.note = "monotonicity check failed at r=" +
                                   std::to_string(rc);
                        return false;
                    }
                    r = rc;
                    y = yc;
                    res.r.push_back(rc);
                    res.v.push_back(yc[0]);
                    res.dv.push_back(yc[1] / std::pow(rc, n - 1));
                    return true;
                });
        }
    } catch (const NumericError& e) {
        res.outcome = Outcome::Inconclusive;
        res.note = e.what();
        return res;
    }

    if (bad) {
        res.outcome = Outcome::Inconclusive;
        return res;
    }
    if (!crossed) {
        res.outcome = Outcome::PositiveGlobal;
        res.decay_exponent = tail_decay_exponent(res.r, res.v);
        return res;
    }

    // Localize the first zero in (r_prev, r] by bisection, re-integrating the
    // bracketing step from the last positive state.
    auto v_at = [&](double rt) {
        if (rt <= r_prev) return y_prev[0];
        rk::StepControl ctl;
        ctl.rel_tol = std::min(tol, 1e-12);
        ctl.abs_tol = 1e-15 * std::max(1.0, v0);
        ctl.h_init = 0.1 * (rt - r_prev);
        double v_end = y_prev[0];
        rk::integrate<2>(rhs, r_prev, y_prev, rt, ctl,
                         [&](double, const rk::State<2>& st) {
                             v_end = st[0];
                             return true;
                         });
        return v_end;
    };
    double lo = r_prev, hi = r;
    for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (v_at(mid) > 0.0 ? lo : hi) = mid;
    }
    res.outcome = Outcome::CrossesZero;
    res.R = 0.5 * (lo + hi);
    return res;
}

SearchSummary entire_solution_search(const nonlin::Expr& f, int n,
                                     const std::vector<double>& v0_grid,
                                     double r_max) {
    SearchSummary s;
    for (double v0 : v0_grid) {
        ShootResult r = shoot(f, n, v0, r_max);
        s.entries.push_back({v0, r.outcome, r.R});
        if (r.outcome == Outcome::PositiveGlobal) s.existence_corroborated = true;
    }
    return s;
}

double SingularSteadyState::value(double r) const {
    return c * std::pow(r, -beta);
}

double SingularSteadyState::slope(double r) const {
    return -c * beta * std::pow(r, -beta - 1.0);
}

SingularSteadyState singular_steady_state(double p, int n) {
    if (n < 3) throw PreconditionError("singular_steady_state: n must be >= 3");
    double p_sg = double(n) / (n - 2), p_S = double(n + 2) / (n - 2);
    if (!(p > p_sg && p < p_S))
        throw PreconditionError(
            "singular_steady_state: p must lie strictly between n/(n-2) and "
            "(n+2)/(n-2)");
    SingularSteadyState u;
    u.n = n;
    u.p = p;
    u.beta = 2.0 / (p - 1.0);
    u.c = std::pow(u.beta * (n - 2 - u.beta), 1.0 / (p - 1.0));
    // residual of -(u'' + (n-1)u'/r) = u^p via the analytic radial Laplacian
    for (int i = 0; i <= 50; ++i) {
        double r = std::pow(10.0, -3.0 + 3.0 * i / 50.0);
        double upp = u.c * u.beta * (u.beta + 1.0) * std::pow(r, -u.beta - 2.0);
        double lap = upp + (n - 1) * u.slope(r) / r;
        double rhs = std::pow(u.value(r), p);
        if (std::fabs(-lap - rhs) > 1e-12 * rhs)
            throw NumericError("singular_steady_state: residual check failed");
    }
    return u;
}

double integral_identity_residual(const nonlin::Expr& f, int n,
                                  const ShootResult& res) {
    // 5-point Gauss-Legendre nodes on [-1, 1]
    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665,
                                 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    double acc = 0.0, worst = 0.0;
    for (std::size_t i = 0; i + 1 < res.r.size(); ++i) {
        double ra = res.r[i], rb = res.r[i + 1], h = rb - ra;
        double va = res.v[i], vb = res.v[i + 1];
        double da = res.dv[i], db = res.dv[i + 1];
        for (int g = 0; g < 5; ++g) {
            double t = 0.5 * (gx[g] + 1.0);  // in [0,1]
            double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
            double h10 = t * (1 - t) * (1 - t);
            double h01 = t * t * (3 - 2 * t);
            double h11 = t * t * (t - 1);
            double vh = h00 * va + h10 * h * da + h01 * vb + h11 * h * db;
            double rho = ra + t * h;
            acc += 0.5 * h * gw[g] * std::pow(rho, n - 1) * f_ext(f, vh);
        }
        double w = res.dv[i + 1] * std::pow(rb, n - 1);
        double rel = std::fabs(w + acc) / std::max(std::fabs(w), 1e-300);
        worst = std::max(worst, rel);
    }
    return worst;
}

double pohozaev_margin(const nonlin::Expr& f, int n, double s) {
    if (n < 3) throw PreconditionError("pohozaev_margin: n must be >= 3");
    if (!(s > 0.0)) throw PreconditionError("pohozaev_margin: s must be positive");
    double p_S = double(n + 2) / (n - 2);
    return s * f.eval(s) - (p_S + 1.0) * nonlin::antiderivative_F(f, s);
}

}  // namespace ulab::radial
