#include "ulab/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "ulab/errors.hpp"

namespace ulab::est {

DistanceModel DistanceModel::interval(double a, double b) {
    if (!(a < b)) throw PreconditionError("distance model: need a < b");
    DistanceModel dm;
    dm.domain = Domain::Interval;
    dm.a = a;
    dm.b = b;
    return dm;
}

DistanceModel DistanceModel::ball(double R) {
    if (!(R > 0.0)) throw PreconditionError("distance model: need R > 0");
    DistanceModel dm;
    dm.domain = Domain::Ball;
    dm.R = R;
    return dm;
}

DistanceModel DistanceModel::annulus(double r0, double R) {
    if (!(0.0 <= r0 && r0 < R))
        throw PreconditionError("distance model: need 0 <= r0 < R");
    DistanceModel dm;
    dm.domain = Domain::Annulus;
    dm.r0 = r0;
    dm.R = R;
    return dm;
}

DistanceModel DistanceModel::with_time(double t0, double t1) const {
    if (!(t0 < t1)) throw PreconditionError("distance model: need t0 < t1");
    DistanceModel dm = *this;
    dm.kind = Case::Parabolic;
    dm.t0 = t0;
    dm.t1 = t1;
    return dm;
}

double DistanceModel::spatial_distance(double pos) const {
    double d;
    switch (domain) {
        case Domain::Interval: d = std::min(pos - a, b - pos); break;
        case Domain::Ball: d = R - std::fabs(pos); break;
        default: d = std::min(pos - r0, R - pos); break;
    }
    if (d < 0.0)
        throw PreconditionError("distance model: sample outside the domain");
    return d;
}

double DistanceModel::dist_sq(double pos, double t) const {
    double d = spatial_distance(pos);
    if (kind == Case::Elliptic) return d * d;
    if (!(t0 < t && t < t1))
        throw PreconditionError("distance model: sample outside the time slab");
    return std::min(d * d, std::min(t - t0, t1 - t));
}

EstimateReport interior_constant(const std::vector<Sample>& samples,
                                 const nonlin::Expr& f,
                                 const DistanceModel& dm, Variant variant) {
    EstimateReport rep;
    rep.functional = variant == Variant::Homogeneous ? "interior-homogeneous"
                                                     : "interior-shifted";
    rep.sup = -1e308;
    for (const auto& s : samples) {
        double d2 = dm.dist_sq(s.pos, s.t);
        double val;
        if (variant == Variant::Homogeneous) {
            double ratio = s.u > 0.0 ? f.eval(s.u) / s.u : 0.0;
            val = ratio * d2;
        } else {
            if (s.u < 1.0) continue;
            if (d2 <= 0.0) continue;
            val = f.eval(s.u) / s.u / (1.0 + 1.0 / d2);
        }
        ++rep.admissible;
        rep.values.push_back(val);
        if (val > rep.sup) {
            rep.sup = val;
            rep.arg_pos = s.pos;
            rep.arg_t = s.t;
        }
    }
    if (rep.admissible == 0) throw PreconditionError("no admissible points");
    return rep;
}

EstimateReport temporal_constant(const pde::Trajectory& traj,
                                 const nonlin::Expr& f, double T_end) {
    if (!(T_end > 0.0))
        throw PreconditionError("temporal_constant: need T_end > 0");
    EstimateReport rep;
    rep.functional = "temporal";
    rep.sup = -1e308;
    for (const auto& snap : traj.snapshots) {
        if (!(snap.t > 0.0 && snap.t < T_end)) continue;
        double weight = 1.0 + 1.0 / snap.t + 1.0 / (T_end - snap.t);
        for (std::size_t i = 0; i < snap.u.size(); ++i) {
            double u = snap.u[i];
            if (u < 1.0) continue;
            double val = f.eval(u) / u / weight;
            ++rep.admissible;
            rep.values.push_back(val);
            if (val > rep.sup) {
                rep.sup = val;
                rep.arg_pos = traj.x[i];
                rep.arg_t = snap.t;
            }
        }
    }
    if (rep.admissible == 0) throw PreconditionError("no admissible points");
    return rep;
}

GSCoefficients gs_coefficients(int n, double q, double k) {
    if (n < 1) throw PreconditionError("gs_coefficients: n >= 1");
    GSCoefficients c;
    double r = double(n - 1) / n;
    c.alpha = -r * k * k + (q - 1.0) * k - q * (q - 1.0) / 2.0;
    c.beta = double(n + 2) / n * k - 1.5 * q;
    c.gamma = -r;
    return c;
}

namespace {

struct GSRaw {
    double I = 0.0, J = 0.0, K = 0.0, rhs = 0.0, h = 0.0;
};

// one evaluation of all integrals at a fixed resolution
GSRaw gs_eval(const GSInput& in, int m) {
    const int n = in.n;
    const double h = 2.0 / m;
    const int ny = n == 2 ? m : 0;
    auto node = [&](int i, int j) {
        return std::array<double, 2>{-1.0 + i * h,
                                     n == 2 ? -1.0 + j * h : 0.0};
    };
    std::vector<double> v((m + 1) * (ny + 1)), phi(v.size());
    auto id = [&](int i, int j) { return i * (ny + 1) + j; };
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= ny; ++j) {
            auto x = node(i, j);
            v[id(i, j)] = in.v(x);
            phi[id(i, j)] = in.phi(x);
            if (!(v[id(i, j)] > 0.0))
                throw PreconditionError("gs_inequality_check: v must be > 0");
            if (phi[id(i, j)] < 0.0)
                throw PreconditionError("gs_inequality_check: phi must be >= 0");
            bool outer = i <= 1 || i >= m - 1 ||
                         (n == 2 && (j <= 1 || j >= ny - 1));
            if (outer && phi[id(i, j)] > 1e-14)
                throw PreconditionError(
                    "gs_inequality_check: phi support touches the boundary");
        }

    GSRaw raw;
    raw.h = h;
    const double cell = n == 2 ? h * h : h;
    for (int i = 1; i < m; ++i) {
        int j_lo = n == 2 ? 1 : 0, j_hi = n == 2 ? ny - 1 : 0;
        for (int j = j_lo; j <= j_hi; ++j) {
            double vx = (v[id(i + 1, j)] - v[id(i - 1, j)]) / (2 * h);
            double lv = (v[id(i + 1, j)] - 2 * v[id(i, j)] + v[id(i - 1, j)]) /
                        (h * h);
            double px = (phi[id(i + 1, j)] - phi[id(i - 1, j)]) / (2 * h);
            double lp = (phi[id(i + 1, j)] - 2 * phi[id(i, j)] +
                         phi[id(i - 1, j)]) /
                        (h * h);
            double vy = 0.0, py = 0.0;
            if (n == 2) {
                vy = (v[id(i, j + 1)] - v[id(i, j - 1)]) / (2 * h);
                lv += (v[id(i, j + 1)] - 2 * v[id(i, j)] + v[id(i, j - 1)]) /
                      (h * h);
                py = (phi[id(i, j + 1)] - phi[id(i, j - 1)]) / (2 * h);
                lp += (phi[id(i, j + 1)] - 2 * phi[id(i, j)] +
                       phi[id(i, j - 1)]) /
                      (h * h);
            }
            double vv = v[id(i, j)], pp = phi[id(i, j)];
            double g2 = vx * vx + vy * vy;
            double vq = std::pow(vv, in.q);
            raw.I += cell * pp * vq / (vv * vv) * g2 * g2;
            raw.J += cell * pp * vq / vv * g2 * lv;
            raw.K += cell * pp * vq * lv * lv;
            double gvgp = vx * px + vy * py;
            raw.rhs += cell * (0.5 * vq * g2 * lp +
                               vq * (lv + (in.q - in.k) / vv * g2) * gvgp);
        }
    }
    return raw;
}

}  // namespace

GSReport gs_inequality_check(const GSInput& in) {
    if (in.n != 1 && in.n != 2)
        throw PreconditionError("gs_inequality_check: n must be 1 or 2");
    if (in.k == -1.0)
        throw PreconditionError("gs_inequality_check: k must differ from -1");
    if (in.cells < 16 || in.cells % 2 != 0)
        throw PreconditionError("gs_inequality_check: cells even and >= 16");

    auto c = gs_coefficients(in.n, in.q, in.k);
    auto fine = gs_eval(in, in.cells);
    auto coarse = gs_eval(in, in.cells / 2);
    auto slack_of = [&](const GSRaw& r) {
        return r.rhs - (c.alpha * r.I + c.beta * r.J + c.gamma * r.K);
    };
    GSReport rep;
    rep.I = fine.I;
    rep.J = fine.J;
    rep.K = fine.K;
    rep.lhs = c.alpha * fine.I + c.beta * fine.J + c.gamma * fine.K;
    rep.rhs = fine.rhs;
    rep.slack = slack_of(fine);
    rep.h = fine.h;
    // slack(h) = slack(0) + C h^2: the pair isolates C
    rep.c_disc = std::fabs(slack_of(coarse) - rep.slack) /
                 (coarse.h * coarse.h - fine.h * fine.h);
    rep.pass = rep.slack >= -(4.0 * rep.c_disc * rep.h * rep.h + 1e-12);
    return rep;
}

}  // namespace ulab::est
