#pragma once

// Adaptive embedded Runge-Kutta (Cash-Karp 4(5)) for small fixed-size systems.

#include <array>
#include <cmath>
#include <functional>

#include "ulab/errors.hpp"

namespace ulab::rk {

template <size_t N>
using State = std::array<double, N>;

template <size_t N>
using Rhs = std::function<void(double, const State<N>&, State<N>&)>;

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-4;
    double h_min = 1e-14;
    double h_max = 1e30;
    long max_steps = 50'000'000;
};

// One Cash-Karp step; returns the embedded error estimate per component.
template <size_t N>
void ck_step(const Rhs<N>& rhs, double x, const State<N>& y, double h,
             State<N>& out, State<N>& err) {
    static constexpr double b21 = 1.0 / 5;
    static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27,
                            b54 = 35.0 / 27;
    static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512,
                            b63 = 575.0 / 13824, b64 = 44275.0 / 110592,
                            b65 = 253.0 / 4096;
    static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                            c6 = 512.0 / 1771;
    static constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                            d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336,
                            d6 = c6 - 0.25;

    State<N> k1, k2, k3, k4, k5, k6, tmp;
    rhs(x, y, k1);
    for (size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * b21 * k1[i];
    rhs(x + h / 5, tmp, k2);
    for (size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
    rhs(x + 3 * h / 10, tmp, k3);
    for (size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    rhs(x + 3 * h / 5, tmp, k4);
    for (size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    rhs(x + h, tmp, k5);
    for (size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] +
                             b64 * k4[i] + b65 * k5[i]);
    rhs(x + 7 * h / 8, tmp, k6);
    for (size_t i = 0; i < N; ++i) {
        out[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
        err[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                      d6 * k6[i]);
    }
}

// Integrate from x0 to x1, calling observer(x, y, h_taken) after each accepted
// step. The observer may return false to stop early.
template <size_t N>
void integrate(const Rhs<N>& rhs, double x0, const State<N>& y0, double x1,
               const StepControl& ctl,
               const std::function<bool(double, const State<N>&)>& observer) {
    State<N> y = y0;
    double x = x0;
    double h = ctl.h_init;
    State<N> ynew, err;
    for (long step = 0; step < ctl.max_steps && x < x1; ++step) {
        bool last = false;
        if (x + h >= x1) {
            h = x1 - x;
            last = true;
            if (h <= 0) break;
        }
        ck_step(rhs, x, y, h, ynew, err);
        double worst = 0.0;
        for (size_t i = 0; i < N; ++i) {
            double scale =
                ctl.abs_tol + ctl.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            worst = std::max(worst, std::fabs(err[i]) / scale);
        }
        if (worst <= 1.0) {
            x = last ? x1 : x + h;
            y = ynew;
            if (!observer(x, y)) return;
            double grow = worst > 0 ? 0.9 * std::pow(worst, -0.2) : 5.0;
            h *= std::min(grow, 5.0);
        } else {
            h *= std::max(0.9 * std::pow(worst, -0.25), 0.1);
            if (h < ctl.h_min)
                throw NumericError("rk45: step size underflow at x=" +
                                   std::to_string(x));
        }
        h = std::min(h, ctl.h_max);
    }
    if (x < x1) throw NumericError("rk45: max step count exceeded");
}

}  // namespace ulab::rk
