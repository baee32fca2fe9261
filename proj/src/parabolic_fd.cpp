#include "ulab/parabolic_fd.hpp"

#include <algorithm>
#include <cmath>

#include "ulab/errors.hpp"
#include "ulab/ode_blowup.hpp"

namespace ulab::pde {

Geometry Geometry::interval(double a, double b) {
    if (!(a < b)) throw PreconditionError("geometry: need a < b");
    Geometry g;
    g.kind = GeometryKind::Interval;
    g.a = a;
    g.b = b;
    return g;
}

Geometry Geometry::ball(int dim, double R) {
    if (dim < 1 || !(R > 0.0))
        throw PreconditionError("geometry: need dim >= 1 and R > 0");
    Geometry g;
    g.kind = GeometryKind::Ball;
    g.dim = dim;
    g.R = R;
    return g;
}

Geometry Geometry::line(double a, double b) {
    Geometry g = interval(a, b);
    g.kind = GeometryKind::Line;
    return g;
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::BlowUp: return "blow-up";
        case Termination::Decayed: return "decayed";
        default: return "horizon";
    }
}

namespace {

struct Stencil {
    int N = 0;  // nodes 0..N
    double h = 0.0;
    bool radial = false;
    int dim = 1;
    bool dir_left = false, dir_right = false;  // pinned-to-zero ends
};

// semidiscrete right-hand side Lap u + f(u); f is sampled at max(u, 0) so
// roundoff undershoot cannot leave the domain of f
void rhs(const Stencil& st, const nonlin::CompiledExpr& cf,
         const std::vector<double>& u, std::vector<double>& out) {
    const double ih2 = 1.0 / (st.h * st.h);
    const int N = st.N;
    for (int i = 1; i < N; ++i) {
        double lap = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2;
        if (st.radial)
            lap += (st.dim - 1) / (i * st.h) * (u[i + 1] - u[i - 1]) /
                   (2.0 * st.h);
        out[i] = lap + cf(u[i] > 0.0 ? u[i] : 0.0);
    }
    if (st.dir_left)
        out[0] = 0.0;
    else if (st.radial)  // symmetry limit dim * u_rr(0)
        out[0] = 2.0 * st.dim * (u[1] - u[0]) * ih2 +
                 cf(u[0] > 0.0 ? u[0] : 0.0);
    else  // Neumann ghost reflection
        out[0] = 2.0 * (u[1] - u[0]) * ih2 + cf(u[0] > 0.0 ? u[0] : 0.0);
    if (st.dir_right)
        out[N] = 0.0;
    else
        out[N] = 2.0 * (u[N - 1] - u[N]) * ih2 + cf(u[N] > 0.0 ? u[N] : 0.0);
}

}  // namespace

Trajectory simulate(const nonlin::Expr& f, const Geometry& geo, BC bc,
                    const std::function<double(double)>& u0,
                    const SimOptions& opts) {
    if (opts.grid < 8) throw PreconditionError("simulate: grid >= 8");
    if (!(opts.safety > 0.0 && opts.safety <= 1.0))
        throw PreconditionError("simulate: safety in (0, 1]");
    if (!(opts.horizon > 0.0) || !(opts.cap > 0.0))
        throw PreconditionError("simulate: horizon and cap must be positive");
    if (geo.kind == GeometryKind::Line && bc != BC::Neumann0)
        throw PreconditionError("simulate: line geometry is Neumann-capped");

    Trajectory traj;
    Stencil st;
    st.N = opts.grid;
    st.radial = geo.kind == GeometryKind::Ball;
    st.dim = geo.dim;
    double x0 = st.radial ? 0.0 : geo.a;
    double x1 = st.radial ? geo.R : geo.b;
    st.h = (x1 - x0) / st.N;
    if (bc == BC::Dirichlet0) {
        st.dir_right = true;
        st.dir_left = !st.radial;  // the ball center is a symmetry node
    }
    traj.h = st.h;
    for (int i = 0; i <= st.N; ++i) traj.x.push_back(x0 + i * st.h);

    std::vector<double> u(st.N + 1);
    double m0 = 0.0;
    for (int i = 0; i <= st.N; ++i) {
        u[i] = u0(traj.x[i]);
        if (!(u[i] >= 0.0) || !std::isfinite(u[i]))
            throw PreconditionError("simulate: initial data must be >= 0");
        m0 = std::max(m0, u[i]);
    }
    if ((st.dir_left && u[0] > 1e-8 * std::max(m0, 1.0)) ||
        (st.dir_right && u[st.N] > 1e-8 * std::max(m0, 1.0)))
        throw PreconditionError(
            "simulate: initial data incompatible with Dirichlet boundary");
    if (st.dir_left) u[0] = 0.0;
    if (st.dir_right) u[st.N] = 0.0;

    auto cf = nonlin::compile(f);
    std::vector<double> k1(u.size()), k2(u.size()), k3(u.size()),
        k4(u.size()), ut(u.size());

    double t = 0.0;
    double M = m0;
    double last_M = -1.0, last_t = -1.0;     // thinned series markers
    double snap_M = -1.0, snap_t = -1e308;   // snapshot markers
    const double t_stride = opts.horizon / 2e4;
    const double snap_stride = opts.snapshot_stride > 0.0
                                   ? opts.snapshot_stride
                                   : opts.horizon / 16.0;
    auto record = [&]() {
        if (last_M >= 0.0 && std::fabs(M - last_M) < 1e-3 * last_M &&
            t - last_t < t_stride)
            return;
        traj.t.push_back(t);
        traj.M.push_back(M);
        last_M = M;
        last_t = t;
        if (traj.snapshots.size() < 200 &&
            (M >= 2.0 * snap_M || t - snap_t >= snap_stride)) {
            traj.snapshots.push_back({t, u});
            snap_M = M;
            snap_t = t;
        }
    };
    record();

    const double dt_diff = 0.5 * st.h * st.h;
    while (true) {
        if (M >= opts.cap) {
            traj.termination = Termination::BlowUp;
            break;
        }
        if (M <= opts.decay_threshold) {
            traj.termination = Termination::Decayed;
            break;
        }
        if (t >= opts.horizon) {
            traj.termination = Termination::Horizon;
            break;
        }
        double fp = f.derivative(M);
        double dt = opts.safety *
                    (fp > 0.0 ? std::min(dt_diff, 1.0 / fp) : dt_diff);
        if (dt < 1e-15 * std::max(t, 1.0)) {
            if (M > 1e6) {
                traj.termination = Termination::BlowUp;
                traj.note = "step underflow near blow-up";
                break;
            }
            throw NumericError("simulate: step underflow at t = " +
                               std::to_string(t));
        }
        dt = std::min(dt, opts.horizon - t);

        rhs(st, cf, u, k1);
        for (std::size_t i = 0; i < u.size(); ++i)
            ut[i] = u[i] + 0.5 * dt * k1[i];
        rhs(st, cf, ut, k2);
        for (std::size_t i = 0; i < u.size(); ++i)
            ut[i] = u[i] + 0.5 * dt * k2[i];
        rhs(st, cf, ut, k3);
        for (std::size_t i = 0; i < u.size(); ++i)
            ut[i] = u[i] + dt * k3[i];
        rhs(st, cf, ut, k4);
        M = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (u[i] < 0.0) u[i] = 0.0;
            M = std::max(M, u[i]);
        }
        if (!std::isfinite(M))
            throw NumericError("simulate: field left the finite range at t = " +
                               std::to_string(t) + ", step " +
                               std::to_string(traj.steps));
        t += dt;
        ++traj.steps;
        record();
    }
    if (traj.t.empty() || traj.t.back() != t) {
        traj.t.push_back(t);
        traj.M.push_back(M);
    }
    if (traj.snapshots.size() < 200) traj.snapshots.push_back({t, u});
    return traj;
}

BlowupEstimate estimate_blowup_time(const Trajectory& traj,
                                    const nonlin::Expr& f) {
    if (traj.termination != Termination::BlowUp)
        throw PreconditionError("not a blow-up trajectory");
    double M_top = traj.M.back();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < traj.M.size(); ++i)
        if (traj.M[i] >= M_top / 10.0) idx.push_back(i);
    // thin to at most 64 quadrature calls, evenly across the decade
    std::vector<double> T;
    std::size_t count = std::min<std::size_t>(idx.size(), 64);
    for (std::size_t j = 0; j < count; ++j) {
        std::size_t i = idx[j * (idx.size() - 1) / std::max<std::size_t>(
                                                       count - 1, 1)];
        T.push_back(traj.t[i] + ode::time_to_blowup(f, traj.M[i]));
    }
    BlowupEstimate est;
    est.points_used = int(T.size());
    for (double v : T) est.T_hat += v;
    est.T_hat /= T.size();
    if (T.size() >= 8) {
        double lo = 1e308, hi = -1e308;
        for (int w = 0; w < 4; ++w) {
            double s = 0.0;
            std::size_t a = w * T.size() / 4, b = (w + 1) * T.size() / 4;
            for (std::size_t i = a; i < b; ++i) s += T[i];
            s /= b - a;
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        est.uncertainty = hi - lo;
    } else {
        est.uncertainty = *std::max_element(T.begin(), T.end()) -
                          *std::min_element(T.begin(), T.end());
    }
    return est;
}

RateReport rate_report(const Trajectory& traj, const nonlin::Expr& f,
                       double T_hat) {
    RateReport rep;
    double gap_min = 1e308;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        double gap = T_hat - traj.t[i];
        if (gap <= 0.0) continue;
        rep.t.push_back(traj.t[i]);
        rep.rho.push_back(f.eval(traj.M[i]) / traj.M[i] * gap);
        gap_min = std::min(gap_min, gap);
    }
    rep.rho_sup = -1e308;
    rep.rho_inf = 1e308;
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
        if (T_hat - rep.t[i] > 10.0 * gap_min) continue;
        rep.rho_sup = std::max(rep.rho_sup, rep.rho[i]);
        rep.rho_inf = std::min(rep.rho_inf, rep.rho[i]);
    }
    return rep;
}

}  // namespace ulab::pde
