#include "ulab/classification.hpp"

#include <algorithm>
#include <cmath>

#include "ulab/errors.hpp"

namespace ulab::classify {

namespace {

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> v;
    double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i)
        v.push_back(std::exp(la + (lb - la) * i / (count - 1.0)));
    return v;
}

double log_f(const nonlin::Expr& f, double s) {
    LogVal l = f.eval_log(std::log(s));
    if (l.sign <= 0)
        throw NumericError("classification: f must be positive on the grid");
    return l.lg;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Regular: return "regular";
        case Verdict::ControlledOnly: return "controlled-only";
        case Verdict::Falsified: return "falsified";
        default: return "inconclusive";
    }
}

VariationReport estimate_rv_index(const nonlin::Expr& f, bool at_infinity,
                                  std::vector<double> lambda_grid,
                                  std::vector<double> s_grid, double tol) {
    VariationReport rep;
    rep.at_infinity = at_infinity;
    // ordered toward the limit, so the grid tail probes the location
    if (lambda_grid.empty())
        lambda_grid = at_infinity ? log_spaced(1e4, 1e10, 13)
                                  : log_spaced(1e-4, 1e-10, 13);
    if (s_grid.empty()) s_grid = log_spaced(0.125, 8.0, 17);
    rep.lambda_grid = lambda_grid;

    bool out_of_band = false;
    for (double lam : lambda_grid) {
        double l0 = log_f(f, lam);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::vector<double> xs, ys;
        for (double s : s_grid) {
            double x = std::log(s);
            double y = log_f(f, lam * s) - l0;
            if (std::fabs(y) > 40.0 && !out_of_band) {
                out_of_band = true;
                rep.witness_lambda = lam;
                rep.witness_s = s;
            }
            xs.push_back(x);
            ys.push_back(y);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double m = s_grid.size();
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        double icpt = (sy - slope * sx) / m;
        rep.slopes.push_back(slope);
        for (std::size_t i = 0; i < xs.size(); ++i)
            rep.residual =
                std::max(rep.residual, std::fabs(ys[i] - slope * xs[i] - icpt));
    }

    // spread over the last three lambda decades
    double decades = std::fabs(std::log10(lambda_grid.back()) -
                               std::log10(lambda_grid.front()));
    std::size_t tail = rep.slopes.size();
    if (decades > 3.0)
        tail = std::max<std::size_t>(
            2, std::lround(rep.slopes.size() * 3.0 / decades));
    double lo = rep.slopes.back(), hi = lo;
    for (std::size_t i = rep.slopes.size() - tail; i < rep.slopes.size(); ++i) {
        lo = std::min(lo, rep.slopes[i]);
        hi = std::max(hi, rep.slopes[i]);
    }
    rep.spread = hi - lo;

    // index: intercept of slope against 1/log lambda, which removes the
    // O(1/log lambda) drift of slowly varying factors
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < rep.slopes.size(); ++i) {
        double x = 1.0 / std::log(lambda_grid[i]);
        sx += x;
        sy += rep.slopes[i];
        sxx += x * x;
        sxy += x * rep.slopes[i];
    }
    double m = rep.slopes.size();
    double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.index = (sy - b * sx) / m;

    if (out_of_band)
        rep.verdict = Verdict::Falsified;
    else if (rep.spread < tol)
        rep.verdict = Verdict::Regular;
    else if (rep.residual > 0.3)
        rep.verdict = Verdict::ControlledOnly;  // bounded but not power-like
    else
        rep.verdict = Verdict::Inconclusive;  // power-like, index not settled
    return rep;
}

ControlledReport controlled_variation_inf(const nonlin::Expr& f, double s_lo,
                                          double s_hi,
                                          std::vector<double> lambda_grid) {
    if (!(0.0 < s_lo && s_lo <= s_hi))
        throw PreconditionError(
            "controlled_variation_inf: need 0 < s_lo <= s_hi");
    ControlledReport rep;
    rep.s_lo = s_lo;
    rep.s_hi = s_hi;
    if (lambda_grid.empty()) lambda_grid = log_spaced(1e-10, 1e10, 81);
    rep.lambda_grid = lambda_grid;
    auto s_grid = log_spaced(s_lo, s_hi, 33);
    double best = 1e308;
    for (double lam : lambda_grid) {
        double l0 = log_f(f, lam);
        for (double s : s_grid) {
            double lr = log_f(f, lam * s) - l0;
            if (lr < best) {
                best = lr;
                rep.witness_lambda = lam;
                rep.witness_s = s;
            }
        }
    }
    rep.inf_ratio = std::exp(std::max(best, -700.0));
    rep.positive = best > -40.0;  // margin: within a modest power of s
    return rep;
}

SuperlinearityProfile superlinearity_profile(const nonlin::Expr& f,
                                             std::vector<double> s_grid,
                                             std::vector<double> lambda_grid) {
    SuperlinearityProfile prof;
    if (s_grid.empty()) s_grid = log_spaced(2.0, 1e4, 13);
    if (lambda_grid.empty()) lambda_grid = log_spaced(1e-8, 1e8, 65);
    for (double s : s_grid) {
        double best = 1e308;
        for (double lam : lambda_grid)
            best = std::min(best,
                            log_f(f, lam * s) - log_f(f, lam) - std::log(s));
        prof.s.push_back(s);
        prof.inf_ratio.push_back(std::exp(std::max(best, -700.0)));
    }
    prof.superlinear = prof.inf_ratio.back() >= 10.0;
    if (!prof.superlinear) prof.witness_s = prof.s.back();
    return prof;
}

QuotientCheck monotone_quotient_check(const nonlin::Expr& f, double m,
                                      std::vector<double> s_grid) {
    if (s_grid.empty()) s_grid = log_spaced(1e-8, 1e8, 4096);
    QuotientCheck qc;
    qc.pass = true;
    double prev = log_f(f, s_grid[0]) - m * std::log(s_grid[0]);
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        double cur = log_f(f, s_grid[i]) - m * std::log(s_grid[i]);
        if (cur > prev + 1e-13) {
            qc.pass = false;
            qc.witness_s = s_grid[i];
            return qc;
        }
        prev = cur;
    }
    return qc;
}

QuotientCheck monotone_quotient_check_tilde(const nonlin::Expr& f, double m,
                                            std::vector<double> s_grid) {
    if (s_grid.empty()) s_grid = log_spaced(1e-8, 1e8, 512);
    QuotientCheck qc;
    qc.pass = true;
    double prev = std::log(nonlin::tilde_f(f, s_grid[0])) -
                  m * std::log(s_grid[0]);
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        double cur = std::log(nonlin::tilde_f(f, s_grid[i])) -
                     m * std::log(s_grid[i]);
        if (cur > prev + 1e-9) {
            qc.pass = false;
            qc.witness_s = s_grid[i];
            return qc;
        }
        prev = cur;
    }
    return qc;
}

HypothesisReport liouville_hypothesis_check(const nonlin::Expr& f, int n) {
    if (n < 1) throw PreconditionError("liouville_hypothesis_check: n >= 1");
    HypothesisReport rep;
    rep.n = n;
    auto ce = nonlin::critical_exponents(n, true);
    rep.p_B = ce.p_B;
    rep.m_star = ce.m_star;

    auto s_lo_grid = log_spaced(rep.s_lo, 1.0, rep.s_grid);
    auto s_hi_grid = log_spaced(1.0, rep.s_hi, rep.s_grid);
    std::vector<double> lf_lo, lt_lo, lf_hi, lt_hi;
    for (double s : s_lo_grid) {
        lf_lo.push_back(log_f(f, s));
        lt_lo.push_back(std::log(nonlin::tilde_f(f, s)));
    }
    for (double s : s_hi_grid) {
        lf_hi.push_back(log_f(f, s));
        lt_hi.push_back(std::log(nonlin::tilde_f(f, s)));
    }

    // f <= p tf on the whole grid; the smallest workable p is sup f/tf
    double sup = -1e308;
    for (std::size_t i = 0; i < lf_lo.size(); ++i)
        sup = std::max(sup, lf_lo[i] - lt_lo[i]);
    for (std::size_t i = 0; i < lf_hi.size(); ++i)
        sup = std::max(sup, lf_hi[i] - lt_hi[i]);
    rep.p_needed = std::exp(sup);
    // a workable p in (1, p_B) exists iff max(p_needed, 1) < p_B
    rep.bound_by_tilde = n == 1 || rep.p_needed < rep.p_B;

    // branch infima log c_i(m) = min_s [log f - m log s - (2m-1) log tf].
    // When g trends downward toward the open end of the branch the infimum
    // escapes to zero off-grid, so the branch is marked infeasible (-inf);
    // toward_end = index of the grid point nearest the open end.
    auto branch_c = [](const std::vector<double>& grid,
                      const std::vector<double>& lf,
                      const std::vector<double>& lt, double m,
                      bool end_is_back) {
        std::vector<double> g(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            g[i] = lf[i] - m * std::log(grid[i]) - (2 * m - 1) * lt[i];
        std::size_t k = grid.size() / 8;  // trend window: outer eighth
        double g_end = end_is_back ? g.back() : g.front();
        double g_in = end_is_back ? g[g.size() - 1 - k] : g[k];
        double span = std::fabs(std::log(end_is_back ? grid.back() : grid.front()) -
                                std::log(end_is_back ? grid[g.size() - 1 - k]
                                                     : grid[k]));
        if (g_end - g_in < -1e-4 * span) return -1e308;  // escaping infimum
        return *std::min_element(g.begin(), g.end());
    };
    double best = -1e308;
    for (int j = 0; j < rep.m_grid; ++j) {
        double m2 = 2.0 / 3 + (rep.m_star - 2.0 / 3) * (j + 0.5) / rep.m_grid;
        double lc2 = branch_c(s_hi_grid, lf_hi, lt_hi, m2, true);
        for (int i = j + 1; i < rep.m_grid; ++i) {
            double m1 = 2.0 / 3 + (rep.m_star - 2.0 / 3) * (i + 0.5) / rep.m_grid;
            double lc1 = branch_c(s_lo_grid, lf_lo, lt_lo, m1, false);
            double lc = std::min(lc1, lc2);
            if (lc > best) {
                best = lc;
                rep.m1 = m1;
                rep.m2 = m2;
            }
        }
    }
    rep.c = std::exp(std::max(best, -700.0));
    rep.growth_pair_feasible = rep.c >= 1e-6;
    return rep;
}

std::string to_string(Example1Condition c) {
    switch (c) {
        case Example1Condition::I: return "i";
        case Example1Condition::II1: return "ii1";
        case Example1Condition::II2: return "ii2";
        case Example1Condition::II3: return "ii3";
        case Example1Condition::III: return "iii";
        case Example1Condition::Nonexistence: return "nonexistence";
        default: return "none";
    }
}

Example1Condition example1_condition(double p, double q, double K, int n,
                                     bool parabolic) {
    if (!(p > 1.0) || !(K >= 1.0))
        throw PreconditionError("example1_condition: need p > 1 and K >= 1");
    auto ce = nonlin::critical_exponents(n, parabolic);
    double p_S = ce.p_S;
    if ((p < p_S && q > p_S - p && K == 1.0) || (p >= p_S && q > 0.0))
        return Example1Condition::Nonexistence;
    if (p < ce.p_star && K > 1.0) return Example1Condition::I;
    if (p >= ce.p_star && p < ce.p_c) {
        double gap = ce.p_c - p;
        if (q < gap) return Example1Condition::II1;
        if (q == gap && K > 1.0) return Example1Condition::II2;
        if (q > gap && K > gap / q * std::exp(q / gap - 1.0))
            return Example1Condition::II3;
    }
    if (parabolic && p >= ce.p_B && p < p_S && std::fabs(q) <= 0.1)
        return Example1Condition::III;
    return Example1Condition::None;
}

}  // namespace ulab::classify
