// End-to-end acceptance harness: one pass/fail line per criterion. Exits
// nonzero when any criterion fails. argv[1] must point at the CLI binary
// (used by the determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ulab/classification.hpp"
#include "ulab/doubling.hpp"
#include "ulab/elliptic_radial.hpp"
#include "ulab/estimates.hpp"
#include "ulab/nonlinearity.hpp"
#include "ulab/ode_blowup.hpp"
#include "ulab/parabolic_fd.hpp"

namespace fs = std::filesystem;
using namespace ulab;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d %-28s %s%s%s\n", idx, name,
                ok ? "PASS" : "FAIL", detail.empty() ? "" : "  -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* pat, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pat, a, b, c);
    return buf;
}

// ---- 1: scalar ODE rate --------------------------------------------------
void criterion1() {
    bool ok = true;
    std::string detail;
    for (double p : {1.5, 2.0, 3.0}) {
        auto t0 = clock_type::now();
        auto f = nonlin::Expr::pow_s(p);
        double T = ode::blowup_time(f, 1.0);
        auto win = ode::verify_rate(f, 1.0, 0.5 * T, T * (1.0 - 1e-8), 64);
        double want = 1.0 / (p - 1.0);
        double el = seconds_since(t0);
        bool here = win.pass &&
                    std::fabs(win.rho_min - want) <= 1e-6 * want &&
                    std::fabs(win.rho_max - want) <= 1e-6 * want && el < 1.0;
        if (!here && detail.empty())
            detail = fmt("p=%.1f rho=[%.9f,%.9f]", p, win.rho_min, win.rho_max);
        ok = ok && here;
    }
    report(1, "ODE sharp rate", ok, detail);
}

// ---- 2: blow-up time quadrature ------------------------------------------
void criterion2() {
    double T2 = ode::blowup_time(nonlin::Expr::pow_s(2.0), 1.0);
    double T3 = ode::blowup_time(nonlin::Expr::pow_s(3.0), 1.0);
    bool ok = std::fabs(T2 - 1.0) <= 1e-10 && std::fabs(T3 - 0.5) <= 1e-10;
    report(2, "blow-up time quadrature", ok,
           fmt("T(s^2)=%.12f T(s^3)=%.12f", T2, T3));
}

// ---- 3: closed-form elliptic regressions ---------------------------------
void criterion3() {
    bool ok = true;
    std::string detail;

    // residual oracles from independently typed analytic radial Laplacians
    auto f5 = nonlin::Expr::pow_s(5.0);
    double c = std::pow(3.0, 0.25);
    double res_at = 0.0;
    for (int i = 1; i <= 50; ++i) {
        double r = 100.0 * i / 50.0;
        double lap = -3.0 * c * std::pow(1.0 + r * r, -2.5);
        double u = c / std::sqrt(1.0 + r * r);
        res_at = std::max(res_at,
                          std::fabs(lap + f5.eval(u)) / f5.eval(u));
    }
    auto fce = nonlin::counterexample_decay(5, 2.0);
    double res_ce = 0.0;
    for (int i = 1; i <= 50; ++i) {
        double r = 100.0 * i / 50.0;
        double s2 = 1.0 + r * r;
        double lap = -(2.0 * r * r + 10.0) / (s2 * s2 * s2);
        double u = 1.0 / s2;
        res_ce = std::max(res_ce, std::fabs(lap + fce.eval(u)) / fce.eval(u));
    }
    if (res_at > 1e-10 || res_ce > 1e-10) {
        ok = false;
        detail = fmt("closed-form residuals %.2e %.2e", res_at, res_ce);
    }

    auto at = radial::shoot(f5, 3, c, 100.0, 1e-10);
    double worst = 0.0;
    for (std::size_t i = 0; i < at.r.size(); ++i) {
        double want = c / std::sqrt(1.0 + at.r[i] * at.r[i]);
        worst = std::max(worst, std::fabs(at.v[i] - want) / want);
    }
    auto ce = radial::shoot(fce, 5, 1.0, 100.0, 1e-10);
    double worst2 = 0.0;
    for (std::size_t i = 0; i < ce.r.size(); ++i) {
        double want = 1.0 / (1.0 + ce.r[i] * ce.r[i]);
        worst2 = std::max(worst2, std::fabs(ce.v[i] - want) / want);
    }
    ok = ok && worst <= 1e-8 && worst2 <= 1e-8;
    report(3, "closed-form regressions", ok,
           fmt("rel err %.2e / %.2e", worst, worst2) +
               (detail.empty() ? "" : "; " + detail));
}

// ---- 4: subcritical Liouville corroboration ------------------------------
void criterion4() {
    bool ok = true;
    std::string detail;
    for (const char* txt :
         {"pow(s,3)", "pow(s,3)*log(2+s)", "pow(s,2)*log(2+s)"}) {
        auto f = nonlin::parse(txt);
        for (double v0 : {0.1, 1.0, 10.0}) {
            auto t0 = clock_type::now();
            auto res = radial::shoot(f, 3, v0, 1e3);
            double el = seconds_since(t0);
            bool here =
                res.outcome == radial::Outcome::CrossesZero && el < 1.0;
            if (!here && detail.empty())
                detail = std::string(txt) + fmt(" v0=%.1f (%.2fs)", v0, el);
            ok = ok && here;
        }
    }
    auto t0 = clock_type::now();
    auto sup = radial::entire_solution_search(
        nonlin::example1(5.0, 1.0, 1.0), 3, {0.25, 0.5, 1.0, 2.0, 4.0}, 1e3);
    double el = seconds_since(t0);
    ok = ok && sup.existence_corroborated && el < 5.0;
    if (!sup.existence_corroborated) detail += " no positive-global shot";
    report(4, "Liouville corroboration", ok, detail);
}

// ---- 5: interior estimate sharpness --------------------------------------
void criterion5() {
    auto ss = radial::singular_steady_state(4.0, 3);
    auto f = nonlin::Expr::pow_s(4.0);
    std::vector<est::Sample> samples;
    for (int i = 0; i <= 80; ++i) {
        double r = std::pow(10.0, -4.0 + (4.0 - std::log10(2.0)) * i / 80.0);
        samples.push_back({r, 0.0, ss.value(r)});
    }
    auto rep = est::interior_constant(samples, f,
                                      est::DistanceModel::annulus(0.0, 1.0),
                                      est::Variant::Homogeneous);
    double worst = 0.0;
    for (double v : rep.values)
        worst = std::max(worst, std::fabs(v - 2.0 / 9.0) / (2.0 / 9.0));
    report(5, "interior estimate sharpness", worst <= 1e-10,
           fmt("max rel dev %.2e over %g samples", worst,
               double(rep.values.size())));
}

// ---- 6: doubling lemma ---------------------------------------------------
std::vector<double> random_euclidean(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<double> px(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = u(rng);
        py[i] = u(rng);
    }
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = std::hypot(px[i] - px[j], py[i] - py[j]);
            if (d == 0.0) d = 1e-6;
            dist[i * n + j] = dist[j * n + i] = d;
        }
    return dist;
}

void criterion6() {
    auto t0 = clock_type::now();
    std::mt19937 rng(424242);
    std::uniform_int_distribution<std::size_t> nd(10, 200);
    std::uniform_real_distribution<double> mag(-3.0, 3.0), kd(0.01, 2.0);
    int checked = 0, bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = nd(rng);
        auto dist = random_euclidean(n, rng);
        std::vector<std::size_t> sigma(n);
        std::iota(sigma.begin(), sigma.end(), std::size_t{0});
        std::uniform_int_distribution<std::size_t> gd(0, n / 4);
        std::size_t ng = gd(rng);
        std::vector<std::size_t> d_set(sigma.begin(), sigma.end() - ng);
        auto sp = doubling::make_space(n, std::move(dist), sigma, d_set);
        std::vector<double> M;
        for (std::size_t i = 0; i < sp.d_set.size(); ++i)
            M.push_back(std::pow(10.0, mag(rng)));
        double k = kd(rng);
        std::uniform_int_distribution<std::size_t> yd(0, sp.d_set.size() - 1);
        std::size_t y = sp.d_set[yd(rng)];
        std::size_t yi =
            std::lower_bound(sp.d_set.begin(), sp.d_set.end(), y) -
            sp.d_set.begin();
        if (!(M[yi] * sp.dist_to_gamma(y) > 2 * k)) continue;
        auto res = doubling::doubling_select(sp, M, k, y);
        double max_M = *std::max_element(M.begin(), M.end());
        std::size_t bound =
            std::size_t(std::max(0.0, std::ceil(std::log2(max_M / M[yi])))) + 1;
        if (!doubling::check_conclusions(sp, M, k, y, res.x) ||
            res.trace.size() - 1 > bound)
            ++bad;
        ++checked;
    }
    double el = seconds_since(t0);
    report(6, "doubling lemma", bad == 0 && checked > 300 && el < 30.0,
           fmt("%g instances with precondition, %.1fs", double(checked), el));
}

// ---- 7: integral inequality ----------------------------------------------
double bump1(double x) {
    double g = 0.81 - x * x;
    return g > 0.0 ? std::exp(-1.0 / g) : 0.0;
}

void criterion7() {
    bool ok = true;
    std::string detail;
    est::GSInput base;
    base.v = [](const std::array<double, 2>&) { return 1.0; };
    base.phi = [](const std::array<double, 2>& x) {
        return bump1(x[0]) * bump1(x[1]);
    };
    base.n = 2;
    base.cells = 64;
    base.q = 0.4;
    base.k = 2.0;
    auto flat = est::gs_inequality_check(base);
    if (!(flat.I == 0.0 && std::fabs(flat.slack) <= 1e-15)) {
        ok = false;
        detail = fmt("flat slack %.2e", flat.slack);
    }

    std::mt19937 rng(77);
    std::uniform_real_distribution<double> qd(-2.0, 2.0), kd(-3.0, 3.0),
        ad(0.3, 1.0), wd(1.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        est::GSInput in;
        in.n = 1 + trial % 2;
        in.q = qd(rng);
        do in.k = kd(rng); while (std::fabs(in.k + 1.0) < 0.1);
        double a = ad(rng), w = wd(rng);
        in.v = [a, w](const std::array<double, 2>& x) {
            return 2.0 + a * std::sin(w * M_PI * x[0]) *
                             std::cos(w * M_PI * x[1]);
        };
        in.phi = [](const std::array<double, 2>& x) {
            return bump1(x[0]) * bump1(x[1]);
        };
        in.cells = 256;  // h = 1/128 on [-1,1]
        auto coarse = est::gs_inequality_check(in);
        in.cells = 512;  // h = 1/256
        auto fine = est::gs_inequality_check(in);
        bool here = coarse.pass && fine.pass &&
                    std::max(0.0, -fine.slack) <=
                        std::max(0.0, -coarse.slack) + 1e-10;
        if (!here && detail.empty())
            detail = fmt("trial slack %.2e -> %.2e", coarse.slack, fine.slack);
        ok = ok && here;
    }
    report(7, "integral inequality", ok, detail);
}

// ---- 8: parabolic blow-up rate -------------------------------------------
void criterion8() {
    bool ok = true;
    std::string detail;

    auto f2 = nonlin::Expr::pow_s(2.0);
    pde::SimOptions o;
    o.grid = 512;
    o.horizon = 2.0;
    auto t0 = clock_type::now();
    auto flat = pde::simulate(f2, pde::Geometry::line(0.0, 1.0),
                              pde::BC::Neumann0, [](double) { return 1.0; }, o);
    double el_flat = seconds_since(t0);
    bool flat_ok = flat.termination == pde::Termination::BlowUp &&
                   el_flat < 60.0;
    double T_hat = 0.0;
    if (flat_ok) {
        auto bu = pde::estimate_blowup_time(flat, f2);
        auto rate = pde::rate_report(flat, f2, bu.T_hat);
        T_hat = bu.T_hat;
        flat_ok = std::fabs(bu.T_hat - 1.0) <= 0.01 &&
                  std::fabs(rate.rho_sup - 1.0) <= 0.01 &&
                  std::fabs(rate.rho_inf - 1.0) <= 0.01;
    }
    if (!flat_ok) detail = fmt("flat T_hat=%.4f (%.1fs)", T_hat, el_flat);
    ok = ok && flat_ok;

    auto flog = nonlin::parse("pow(s,2)*log(2+s)");
    double lo[2] = {1e308, 1e308}, hi[2] = {-1e308, -1e308};
    for (int level = 0; level < 2 && ok; ++level) {
        for (double amp : {20.0, 50.0, 100.0}) {
            pde::SimOptions od;
            od.grid = level == 0 ? 512 : 1024;
            od.horizon = 1.0;
            auto t1 = clock_type::now();
            auto traj = pde::simulate(
                flog, pde::Geometry::interval(0.0, 1.0), pde::BC::Dirichlet0,
                [amp](double x) { return amp * std::sin(M_PI * x); }, od);
            double el = seconds_since(t1);
            if (traj.termination != pde::Termination::BlowUp || el >= 60.0) {
                ok = false;
                detail += fmt(" family amp=%g (%.1fs)", amp, el);
                break;
            }
            auto bu = pde::estimate_blowup_time(traj, flog);
            auto rate = pde::rate_report(traj, flog, bu.T_hat);
            if (!std::isfinite(rate.rho_sup) || rate.rho_sup <= 0.0) {
                ok = false;
                detail += " non-finite rate";
                break;
            }
            lo[level] = std::min(lo[level], rate.rho_sup);
            hi[level] = std::max(hi[level], rate.rho_sup);
        }
    }
    if (ok) {
        bool spread_ok = hi[0] <= 4.0 * lo[0] && hi[1] <= 4.0 * lo[1];
        // stability: refinement moves the family envelope by < 25%
        bool stable = std::fabs(hi[1] - hi[0]) <= 0.25 * hi[0] &&
                      std::fabs(lo[1] - lo[0]) <= 0.25 * lo[0];
        if (!(spread_ok && stable))
            detail += fmt(" sup-rho [%.3f,%.3f] -> ", lo[0], hi[0]) +
                      fmt("[%.3f,%.3f]", lo[1], hi[1]);
        ok = spread_ok && stable;
    }
    report(8, "parabolic blow-up rate", ok, detail);
}

// ---- 9: classification suite ---------------------------------------------
void criterion9() {
    bool ok = true;
    std::string detail;
    for (double p : {1.5, 2.0, 3.0}) {
        for (const auto& entry : nonlin::slow_variation_catalog()) {
            auto f = nonlin::Expr::pow_s(p) * entry.L;
            for (bool at_inf : {true, false}) {
                auto rep = classify::estimate_rv_index(f, at_inf);
                if (std::fabs(rep.index - p) > 0.05) {
                    ok = false;
                    if (detail.empty())
                        detail = entry.name +
                                 fmt(" p=%.1f idx=%.3f", p, rep.index);
                }
            }
        }
    }
    auto osc = classify::estimate_rv_index(nonlin::example2(2.0, 0.5), true);
    auto ctrl =
        classify::controlled_variation_inf(nonlin::example2(2.0, 0.5), 0.5, 2.0);
    if (osc.verdict != classify::Verdict::Inconclusive || !ctrl.positive) {
        ok = false;
        detail += " example-2 verdicts wrong";
    }
    auto f95 = nonlin::lemma95_example(2.0, 9.0, 3);
    double p_B = nonlin::critical_exponents(3, true).p_B;
    bool tilde_some = false, f_none = true;
    for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 3.5, 3.7}) {
        if (p >= p_B) continue;
        if (classify::monotone_quotient_check_tilde(f95, p).pass)
            tilde_some = true;
        if (classify::monotone_quotient_check(f95, p).pass) f_none = false;
    }
    if (!(tilde_some && f_none)) {
        ok = false;
        detail += " two-branch monotonicity split wrong";
    }
    report(9, "classification suite", ok, detail);
}

// ---- 10: CLI determinism -------------------------------------------------
bool same_tree_bytes(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> fa, fb;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    if (fa != fb) return false;
    for (const auto& rel : fa) {
        std::ifstream ia(a / rel, std::ios::binary);
        std::ifstream ib(b / rel, std::ios::binary);
        std::ostringstream sa, sb;
        sa << ia.rdbuf();
        sb << ib.rdbuf();
        if (sa.str() != sb.str()) return false;
    }
    return true;
}

void criterion10(const std::string& cli) {
    fs::path root = fs::temp_directory_path() / "ulab_acceptance_det";
    fs::remove_all(root);
    fs::create_directories(root);
    std::vector<std::string> experiments = {
        "classify --f \"pow(s,2)*log(2+s)\"",
        "blowup --f \"pow(s,3)\" --y0 2 --samples 64",
        "shoot --f \"pow(s,3)\" --n 3 --v0 1",
        "simulate --f \"pow(s,2)\" --geometry line --bc neumann --shape flat "
        "--grid 16 --horizon 2",
        "doubling-demo",
    };
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < experiments.size(); ++i) {
        fs::path d1 = root / ("a" + std::to_string(i));
        fs::path d2 = root / ("b" + std::to_string(i));
        for (const fs::path& d : {d1, d2}) {
            std::string cmd = cli + " " + experiments[i] + " --out " +
                              d.string() + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                detail = "exit failure: " + experiments[i];
            }
        }
        if (ok && !same_tree_bytes(d1, d2)) {
            ok = false;
            detail = "bytes differ: " + experiments[i];
        }
    }
    report(10, "CLI determinism", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (argc > 1) {
        criterion10(argv[1]);
    } else {
        report(10, "CLI determinism", false, "CLI path argument missing");
    }
    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
