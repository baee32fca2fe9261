#pragma once

// Method-of-lines solver for u_t = Lap u + f(u) on an interval, a radial
// ball, or a Neumann-capped line segment, with blow-up detection, H-based
// blow-up-time extrapolation, and rate diagnostics.

#include <functional>
#include <string>
#include <vector>

#include "ulab/nonlinearity.hpp"

namespace ulab::pde {

enum class GeometryKind { Interval, Ball, Line };

struct Geometry {
    GeometryKind kind = GeometryKind::Interval;
    double a = 0.0, b = 1.0;  // interval / line endpoints
    int dim = 1;              // ball dimension
    double R = 1.0;           // ball radius

    static Geometry interval(double a, double b);
    static Geometry ball(int dim, double R);
    static Geometry line(double a, double b);  // reflecting (Neumann) ends
};

enum class BC { Dirichlet0, Neumann0 };
enum class Termination { BlowUp, Horizon, Decayed };

std::string to_string(Termination t);

struct SimOptions {
    int grid = 256;          // number of cells; grid + 1 nodes
    double safety = 0.25;    // dt = safety * min(h^2/2, 1/f'(M))
    double cap = 1e12;       // M above this terminates as blow-up
    double horizon = 10.0;
    double decay_threshold = 1e-10;
    double snapshot_stride = 0.0;  // time between snapshots; 0 = horizon/16
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
};

struct Trajectory {
    std::vector<double> x;  // node coordinates (radius for a ball)
    double h = 0.0;
    std::vector<Snapshot> snapshots;
    std::vector<double> t;  // thinned time series
    std::vector<double> M;  // sup_x u at those times
    Termination termination = Termination::Horizon;
    long steps = 0;
    std::string note;
};

// Classic fourth-order explicit stepping of the centered second-order
// semidiscretization; the step size tracks both the diffusion limit h^2/2 and
// the nonlinear limit 1/f'(M). Dirichlet nodes stay pinned at zero; Neumann
// ends use ghost reflection; the ball center uses the symmetry limit
// dim * u_rr(0). Line geometry requires Neumann0. Throws PreconditionError on
// bad data and NumericError when the field leaves the finite range.
Trajectory simulate(const nonlin::Expr& f, const Geometry& geo, BC bc,
                    const std::function<double(double)>& u0,
                    const SimOptions& opts = {});

struct BlowupEstimate {
    double T_hat = 0.0;
    double uncertainty = 0.0;  // spread of fit-window means
    int points_used = 0;
};

// T_hat from the ODE ansatz t + H(M(t)) = const over the last resolved decade
// of M, where H(s) = int_s^inf dz/f(z); the uncertainty is the spread of the
// quartile-window means. Throws PreconditionError("not a blow-up trajectory")
// unless the run terminated by blow-up.
BlowupEstimate estimate_blowup_time(const Trajectory& traj,
                                    const nonlin::Expr& f);

struct RateReport {
    std::vector<double> t, rho;  // rho = (f(M)/M) (T_hat - t)
    double rho_sup = 0.0, rho_inf = 0.0;  // over the last resolved decade
};

RateReport rate_report(const Trajectory& traj, const nonlin::Expr& f,
                       double T_hat);

}  // namespace ulab::pde
