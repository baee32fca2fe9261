#pragma once

// Interior and temporal universal-estimate functionals evaluated on sampled
// solutions, plus a finite-difference verification of the Gidas-Spruck-type
// integral inequality relating a positive function, its gradient, and its
// Laplacian.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ulab/nonlinearity.hpp"
#include "ulab/parabolic_fd.hpp"

namespace ulab::est {

enum class Case { Elliptic, Parabolic };

// Analytic boundary distance for 1D / radial domains; the parabolic variant
// measures distance to the parabolic boundary of D x (t0, t1), whose square
// is min(d_E^2, t - t0, t1 - t).
struct DistanceModel {
    enum class Domain { Interval, Ball, Annulus };
    Case kind = Case::Elliptic;
    Domain domain = Domain::Interval;
    double a = 0.0, b = 1.0;   // interval endpoints
    double r0 = 0.0, R = 1.0;  // annulus/ball radii
    double t0 = 0.0, t1 = 0.0; // parabolic time slab

    static DistanceModel interval(double a, double b);
    static DistanceModel ball(double R);
    static DistanceModel annulus(double r0, double R);
    DistanceModel with_time(double t0, double t1) const;

    double spatial_distance(double pos) const;  // d_E(pos, boundary)
    double dist_sq(double pos, double t) const; // squared (parabolic) distance
};

struct Sample {
    double pos = 0.0;  // interval coordinate or radius
    double t = 0.0;
    double u = 0.0;
};

struct EstimateReport {
    std::string functional;
    double sup = 0.0;
    double arg_pos = 0.0, arg_t = 0.0;
    std::vector<double> values;  // one per admissible sample, scan order
    int admissible = 0;
};

enum class Variant { Homogeneous, Shifted };

// Homogeneous: sup over samples of (f(u)/u) d^2(X, boundary). Shifted:
// restricted to u >= 1 and normalized by 1 + d^{-2} instead. Throws
// PreconditionError("no admissible points") when the restriction empties the
// sample set, and rejects samples outside the domain.
EstimateReport interior_constant(const std::vector<Sample>& samples,
                                 const nonlin::Expr& f,
                                 const DistanceModel& dm, Variant variant);

// sup over snapshot grid points with u >= 1 of
// (f(u)/u) / (1 + 1/t + 1/(T_end - t)), scanning 0 < t < T_end; T_end is the
// estimated blow-up time for blow-up runs and the final time otherwise.
EstimateReport temporal_constant(const pde::Trajectory& traj,
                                 const nonlin::Expr& f, double T_end);

struct GSCoefficients {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

// alpha = -(n-1)/n k^2 + (q-1)k - q(q-1)/2, beta = (n+2)/n k - 3q/2,
// gamma = -(n-1)/n.
GSCoefficients gs_coefficients(int n, double q, double k);

struct GSInput {
    int n = 2;  // 1 or 2 space dimensions, box [-1,1]^n
    std::function<double(const std::array<double, 2>&)> v;    // > 0
    std::function<double(const std::array<double, 2>&)> phi;  // >= 0, compact
    double q = 0.0, k = 0.0;
    int cells = 128;  // per axis
};

struct GSReport {
    double I = 0.0, J = 0.0, K = 0.0;  // weighted gradient/Laplacian integrals
    double lhs = 0.0, rhs = 0.0;
    double slack = 0.0;  // rhs - lhs; nonnegative in the limit h -> 0
    double h = 0.0;
    double c_disc = 0.0;  // Richardson estimate of the h^2 error coefficient
    bool pass = false;    // slack >= -(4 c_disc h^2 + 1e-12)
};

// Checks  alpha I_q + beta J_q + gamma K_q <=
//   1/2 int v^q |grad v|^2 lap(phi)
//   + int v^q [lap v + (q-k) v^{-1} |grad v|^2] grad v . grad phi
// with I_q = int phi v^{q-2}|grad v|^4, J_q = int phi v^{q-1}|grad v|^2 lap v,
// K_q = int phi v^q (lap v)^2, by centered differences and rectangle sums;
// the discretization budget comes from a coarse/fine Richardson pair.
// Preconditions: k != -1, v > 0 on the grid, phi >= 0 and vanishing on the
// two outermost node layers.
GSReport gs_inequality_check(const GSInput& in);

}  // namespace ulab::est
