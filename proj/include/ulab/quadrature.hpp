#pragma once

#include <functional>

namespace ulab::quad {

struct Result {
    double value = 0.0;
    double abs_err = 0.0;
    long evals = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
// Subdivides until the estimated error meets rel_tol*|value| + abs_tol.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol = 0.0, int max_depth = 60);

// Semi-infinite integral int_a^inf f, evaluated in blocks of fixed width on
// the given axis until a block contributes below tolerance.
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol, double block = 20.0, int max_blocks = 200);

// int_{-inf}^b f, same block scheme going down.
Result integrate_from_minus_inf(const std::function<double(double)>& f, double b,
                                double rel_tol, double block = 20.0,
                                int max_blocks = 200);

}  // namespace ulab::quad
