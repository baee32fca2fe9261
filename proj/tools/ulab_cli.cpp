// Batch front door: every subcommand runs one reproducible experiment and
// writes its artifacts (JSON / CSV / SVG) into the output directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ulab/classification.hpp"
#include "ulab/doubling.hpp"
#include "ulab/elliptic_radial.hpp"
#include "ulab/errors.hpp"
#include "ulab/estimates.hpp"
#include "ulab/nonlinearity.hpp"
#include "ulab/ode_blowup.hpp"
#include "ulab/parabolic_fd.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ulab;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string g_out = "out";
std::string g_config_hash;

std::string fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

fs::path out_path(const std::string& name) {
    fs::create_directories(g_out);
    return fs::path(g_out) / name;
}

void write_json(const std::string& name, json j) {
    j["tool_version"] = kToolVersion;
    j["config_hash"] = g_config_hash;
    std::ofstream os(out_path(name));
    os << j.dump(2) << "\n";
}

void write_csv(const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& cols) {
    std::ofstream os(out_path(name));
    for (std::size_t c = 0; c < header.size(); ++c)
        os << header[c] << (c + 1 < header.size() ? ',' : '\n');
    std::size_t rows = cols.empty() ? 0 : cols[0].size();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            os << num(cols[c][r]) << (c + 1 < cols.size() ? ',' : '\n');
}

// minimal static line plot; the CSV/JSON artifacts are authoritative
void write_svg(const std::string& name, const std::string& title,
               const std::vector<double>& xs, const std::vector<double>& ys) {
    std::ofstream os(out_path(name));
    const int W = 640, H = 400, m = 60;
    double x0 = 1e308, x1 = -1e308, y0 = 1e308, y1 = -1e308;
    for (double v : xs) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
    for (double v : ys) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\">"
       << title << "</text>\n";
    os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m
       << "\" height=\"" << H - 2 * m
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double px = m + (xs[i] - x0) / (x1 - x0) * (W - 2 * m);
        double py = H - m - (ys[i] - y0) / (y1 - y0) * (H - 2 * m);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
        os << buf;
    }
    os << "\"/>\n";
    os << "<text x=\"" << m << "\" y=\"" << H - m + 16 << "\">" << num(x0)
       << "</text>\n";
    os << "<text x=\"" << W - m << "\" y=\"" << H - m + 16
       << "\" text-anchor=\"end\">" << num(x1) << "</text>\n";
    os << "<text x=\"" << m << "\" y=\"" << m - 6 << "\">" << num(y1)
       << "</text>\n";
    os << "<text x=\"" << m << "\" y=\"" << H - m - 6 << "\">" << num(y0)
       << "</text>\n";
    os << "</svg>\n";
}

std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        std::string tok = text.substr(pos, next - pos);
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad numeric list entry: " + tok);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return v;
}

json variation_json(const classify::VariationReport& rep) {
    json j;
    j["at"] = rep.at_infinity ? "inf" : "0";
    j["verdict"] = classify::to_string(rep.verdict);
    j["index"] = rep.index;
    j["residual"] = rep.residual;
    j["spread"] = rep.spread;
    j["lambda_grid"] = rep.lambda_grid;
    j["slopes"] = rep.slopes;
    if (rep.verdict == classify::Verdict::Falsified) {
        j["witness_lambda"] = rep.witness_lambda;
        j["witness_s"] = rep.witness_s;
    }
    return j;
}

// ---------------------------------------------------------------------------

void run_classify(const std::string& f_text, const std::string& at, int n) {
    auto f = nonlin::parse(f_text);
    json j;
    j["kind"] = "classify";
    j["f"] = f.print();
    j["n"] = n;
    j["variation"] = json::array();
    if (at == "inf" || at == "both")
        j["variation"].push_back(variation_json(classify::estimate_rv_index(f, true)));
    if (at == "0" || at == "both")
        j["variation"].push_back(variation_json(classify::estimate_rv_index(f, false)));
    auto cv = classify::controlled_variation_inf(f, 0.5, 2.0);
    j["controlled"] = {{"positive", cv.positive},
                       {"inf_ratio", cv.inf_ratio},
                       {"witness_lambda", cv.witness_lambda},
                       {"witness_s", cv.witness_s}};
    auto sp = classify::superlinearity_profile(f);
    j["superlinear"] = sp.superlinear;
    auto hyp = classify::liouville_hypothesis_check(f, n);
    j["hypotheses"] = {{"bound_by_tilde", hyp.bound_by_tilde},
                       {"p_needed", hyp.p_needed},
                       {"p_B", hyp.p_B},
                       {"growth_pair_feasible", hyp.growth_pair_feasible},
                       {"m1", hyp.m1},
                       {"m2", hyp.m2},
                       {"c", hyp.c},
                       {"m_star", hyp.m_star}};
    write_json("classify.json", j);
    for (const auto& v : j["variation"])
        std::cout << "variation at " << v["at"].get<std::string>() << ": "
                  << v["verdict"].get<std::string>() << " (index "
                  << num(v["index"].get<double>()) << ")\n";
}

void run_blowup(const std::string& f_text, double y0, int samples) {
    auto f = nonlin::parse(f_text);
    double T = ode::blowup_time(f, y0);
    std::vector<double> t_grid;
    for (int i = 0; i < samples; ++i) {
        // T - t log-spaced from T/2 down to 1e-8 T
        double gap = T * std::pow(10.0, std::log10(0.5) -
                                            (8.0 - 0.30103) * i / (samples - 1));
        t_grid.push_back(T - gap);
    }
    auto prof = ode::trajectory(f, y0, t_grid);
    write_csv("blowup.csv", {"t", "y", "rho"}, {prof.t, prof.y, prof.rho});
    json j;
    j["kind"] = "blowup";
    j["f"] = f.print();
    j["y0"] = y0;
    j["T"] = T;
    j["samples"] = samples;
    write_json("blowup.json", j);
    std::vector<double> lg;
    for (double t : prof.t) lg.push_back(std::log10(T - t));
    write_svg("blowup_rate.svg", "rate vs log10(T-t)", lg, prof.rho);
    std::cout << "T = " << num(T) << "\n";
}

const char* outcome_name(radial::Outcome o) {
    switch (o) {
        case radial::Outcome::CrossesZero: return "crosses-zero";
        case radial::Outcome::PositiveGlobal: return "positive-global";
        default: return "inconclusive";
    }
}

void run_shoot(const std::string& f_text, int n, std::vector<double> v0s,
               double r_max) {
    auto f = nonlin::parse(f_text);
    if (v0s.empty()) v0s = {0.1, 1.0, 10.0};
    json j;
    j["kind"] = "shoot";
    j["f"] = f.print();
    j["n"] = n;
    j["r_max"] = r_max;
    j["shots"] = json::array();
    for (std::size_t i = 0; i < v0s.size(); ++i) {
        auto res = radial::shoot(f, n, v0s[i], r_max);
        char name[40];
        std::snprintf(name, sizeof name, "shoot_%02zu.csv", i);
        write_csv(name, {"r", "v", "dv"}, {res.r, res.v, res.dv});
        json s;
        s["v0"] = v0s[i];
        s["outcome"] = outcome_name(res.outcome);
        s["R"] = res.R;
        s["decay_exponent"] = res.decay_exponent;
        s["trace"] = name;
        if (!res.note.empty()) s["note"] = res.note;
        j["shots"].push_back(s);
        std::cout << "v0 " << num(v0s[i]) << ": " << outcome_name(res.outcome)
                  << "\n";
    }
    auto summary = radial::entire_solution_search(f, n, v0s, r_max);
    j["existence_corroborated"] = summary.existence_corroborated;
    write_json("shoot.json", j);
}

void run_simulate(const std::string& f_text, const std::string& geo_name,
                  double a, double b, int dim, double R,
                  const std::string& bc_name, const std::string& shape,
                  double amp, const pde::SimOptions& opts) {
    auto f = nonlin::parse(f_text);
    pde::Geometry geo;
    if (geo_name == "interval")
        geo = pde::Geometry::interval(a, b);
    else if (geo_name == "ball")
        geo = pde::Geometry::ball(dim, R);
    else if (geo_name == "line")
        geo = pde::Geometry::line(a, b);
    else
        throw ConfigError("unknown geometry: " + geo_name);
    pde::BC bc;
    if (bc_name == "dirichlet")
        bc = pde::BC::Dirichlet0;
    else if (bc_name == "neumann")
        bc = pde::BC::Neumann0;
    else
        throw ConfigError("unknown bc: " + bc_name);

    std::function<double(double)> u0;
    bool ball = geo_name == "ball";
    if (shape == "flat")
        u0 = [amp](double) { return amp; };
    else if (shape == "sine" && !ball)
        u0 = [amp, a, b](double x) {
            return amp * std::sin(M_PI * (x - a) / (b - a));
        };
    else if (shape == "sine")  // radial profile vanishing at R
        u0 = [amp, R](double r) { return amp * std::cos(M_PI * r / (2 * R)); };
    else
        throw ConfigError("unknown initial shape: " + shape);

    auto traj = pde::simulate(f, geo, bc, u0, opts);
    write_csv("series.csv", {"t", "M"}, {traj.t, traj.M});
    json j;
    j["kind"] = "simulate";
    j["f"] = f.print();
    j["geometry"] = geo_name;
    j["bc"] = bc_name;
    j["grid"] = opts.grid;
    j["h"] = traj.h;
    j["termination"] = pde::to_string(traj.termination);
    j["steps"] = traj.steps;
    if (!traj.note.empty()) j["note"] = traj.note;
    j["snapshots"] = json::array();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[40];
        std::snprintf(name, sizeof name, "snap_%03zu.csv", i);
        write_csv(name, {"x", "u"}, {traj.x, traj.snapshots[i].u});
        j["snapshots"].push_back({{"t", traj.snapshots[i].t}, {"file", name}});
    }
    if (traj.termination == pde::Termination::BlowUp) {
        auto est = pde::estimate_blowup_time(traj, f);
        auto rate = pde::rate_report(traj, f, est.T_hat);
        j["T_hat"] = est.T_hat;
        j["T_hat_uncertainty"] = est.uncertainty;
        j["rho_sup"] = rate.rho_sup;
        j["rho_inf"] = rate.rho_inf;
        std::cout << "blow-up, T_hat = " << num(est.T_hat) << " +- "
                  << num(est.uncertainty) << "\n";
    } else {
        std::cout << pde::to_string(traj.termination) << " at t = "
                  << num(traj.t.back()) << "\n";
    }
    write_json("manifest.json", j);
    std::vector<double> lm;
    for (double m : traj.M) lm.push_back(std::log10(std::max(m, 1e-300)));
    write_svg("series.svg", "log10 M vs t", traj.t, lm);
}

void run_verify_estimate(const std::string& functional, int n, double q,
                         double k, int cells, double p) {
    json j;
    j["kind"] = "verify-estimate";
    j["functional"] = functional;
    if (functional == "gs") {
        est::GSInput in;
        in.n = n;
        in.q = q;
        in.k = k;
        in.cells = cells;
        in.v = [](const std::array<double, 2>& x) {
            return 2.0 + std::sin(M_PI * x[0]) * std::cos(M_PI * x[1]);
        };
        in.phi = [](const std::array<double, 2>& x) {
            auto bump = [](double t) {
                double g = 0.81 - t * t;
                return g > 0.0 ? std::exp(-1.0 / g) : 0.0;
            };
            return bump(x[0]) * bump(x[1]);
        };
        auto rep = est::gs_inequality_check(in);
        j["n"] = n;
        j["q"] = q;
        j["k"] = k;
        j["cells"] = cells;
        j["I"] = rep.I;
        j["J"] = rep.J;
        j["K"] = rep.K;
        j["lhs"] = rep.lhs;
        j["rhs"] = rep.rhs;
        j["slack"] = rep.slack;
        j["c_disc"] = rep.c_disc;
        j["pass"] = rep.pass;
        std::cout << "slack = " << num(rep.slack)
                  << (rep.pass ? " (pass)" : " (FAIL)") << "\n";
    } else if (functional == "interior") {
        auto ss = radial::singular_steady_state(p, n);
        auto f = nonlin::Expr::pow_s(p);
        std::vector<est::Sample> samples;
        for (int i = 0; i <= 60; ++i) {
            double r = std::pow(10.0, -3.0 + (3.0 - std::log10(2.0)) * i / 60.0);
            samples.push_back({r, 0.0, ss.value(r)});
        }
        auto rep = est::interior_constant(samples, f,
                                          est::DistanceModel::annulus(0.0, 1.0),
                                          est::Variant::Homogeneous);
        j["n"] = n;
        j["p"] = p;
        j["sup"] = rep.sup;
        j["arg_pos"] = rep.arg_pos;
        j["admissible"] = rep.admissible;
        j["values"] = rep.values;
        std::cout << "sup = " << num(rep.sup) << "\n";
    } else {
        throw ConfigError("unknown functional: " + functional);
    }
    write_json("estimate.json", j);
}

void run_doubling_demo(const std::string& csv, const std::string& gamma_list,
                       const std::string& m_list, double k, std::size_t y) {
    std::size_t n;
    std::vector<double> dist;
    std::vector<std::size_t> gamma_idx;
    std::vector<double> M;
    if (csv.empty()) {
        // built-in demo: integer line 0..10, boundary at both ends,
        // dyadic magnitudes peaking in the middle
        n = 11;
        dist.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dist[i * n + j] = std::fabs(double(i) - double(j));
        gamma_idx = {0, 10};
        for (std::size_t i = 1; i < 10; ++i)
            M.push_back(std::pow(2.0, std::min(i, 10 - i)));
    } else {
        std::ifstream is(csv);
        if (!is) throw ConfigError("cannot open " + csv);
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(is, line))
            if (!line.empty()) rows.push_back(split_doubles(line));
        n = rows.size();
        for (const auto& r : rows) {
            if (r.size() != n)
                throw ConfigError("distance matrix must be square");
            dist.insert(dist.end(), r.begin(), r.end());
        }
        for (double g : split_doubles(gamma_list))
            gamma_idx.push_back(std::size_t(g));
        M = split_doubles(m_list);
    }
    std::vector<std::size_t> sigma(n), d_set;
    for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(gamma_idx.begin(), gamma_idx.end(), i) ==
            gamma_idx.end())
            d_set.push_back(i);
    if (M.size() != d_set.size())
        throw ConfigError("need one magnitude per interior point");
    auto space = doubling::make_space(n, dist, sigma, d_set);
    auto sel = doubling::doubling_select(space, M, k, y);
    bool ok = doubling::check_conclusions(space, M, k, y, sel.x);
    json j;
    j["kind"] = "doubling-demo";
    j["n"] = n;
    j["k"] = k;
    j["y"] = y;
    j["x"] = sel.x;
    j["trace"] = sel.trace;
    j["conclusions_hold"] = ok;
    write_json("doubling.json", j);
    std::cout << "selected x = " << sel.x << ", conclusions "
              << (ok ? "hold" : "FAIL") << "\n";
}

void run_sweep(const std::string& family, const std::string& param, double lo,
               double hi, int n, std::vector<double> v0s, double r_max,
               int iters) {
    if (v0s.empty()) v0s = {0.1, 1.0, 10.0};
    auto substitute = [&](double val) {
        std::string out;
        for (std::size_t i = 0; i < family.size();) {
            bool word_start = i == 0 || !(std::isalnum(family[i - 1]) ||
                                          family[i - 1] == '_');
            if (word_start && family.compare(i, param.size(), param) == 0) {
                std::size_t j = i + param.size();
                if (j >= family.size() ||
                    !(std::isalnum(family[j]) || family[j] == '_')) {
                    out += "(" + num(val) + ")";
                    i = j;
                    continue;
                }
            }
            out += family[i++];
        }
        return out;
    };
    auto oracle = [&](double val) {
        auto f = nonlin::parse(substitute(val));
        return radial::entire_solution_search(f, n, v0s, r_max)
            .existence_corroborated;
    };
    json j;
    j["kind"] = "sweep";
    j["family"] = family;
    j["param"] = param;
    j["evaluations"] = json::array();
    bool at_lo = oracle(lo), at_hi = oracle(hi);
    j["evaluations"].push_back({{"value", lo}, {"corroborated", at_lo}});
    j["evaluations"].push_back({{"value", hi}, {"corroborated", at_hi}});
    if (at_lo == at_hi)
        throw PreconditionError(
            "sweep: oracle does not change over [lo, hi]; no threshold");
    double a = lo, b = hi;
    for (int it = 0; it < iters; ++it) {
        double mid = 0.5 * (a + b);
        bool res = oracle(mid);
        j["evaluations"].push_back({{"value", mid}, {"corroborated", res}});
        (res == at_lo ? a : b) = mid;
    }
    j["threshold_lo"] = a;
    j["threshold_hi"] = b;
    write_json("sweep.json", j);
    std::cout << "threshold in [" << num(a) << ", " << num(b) << "]\n";
}

void run_report(const std::string& dir) {
    json j;
    j["kind"] = "report";
    j["artifacts"] = json::array();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json" &&
            entry.path().filename() != "report.json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream is(p);
        json a;
        try {
            is >> a;
        } catch (const json::exception&) {
            continue;
        }
        json item;
        item["file"] = p.filename().string();
        if (a.contains("kind")) item["kind"] = a["kind"];
        if (a.contains("config_hash")) item["config_hash"] = a["config_hash"];
        for (auto& [key, val] : a.items())
            if (val.is_number() || val.is_boolean() || val.is_string())
                item[key] = val;
        j["artifacts"].push_back(item);
    }
    g_out = dir;
    write_json("report.json", j);
    std::ofstream os(out_path("report.svg"));
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\""
       << 40 + 20 * j["artifacts"].size() << "\">\n";
    os << "<text x=\"20\" y=\"24\" font-weight=\"bold\">experiment bundle</text>\n";
    int yy = 48;
    for (const auto& a : j["artifacts"]) {
        os << "<text x=\"20\" y=\"" << yy << "\">"
           << a["file"].get<std::string>();
        if (a.contains("kind")) os << " [" << a["kind"].get<std::string>() << "]";
        os << "</text>\n";
        yy += 20;
    }
    os << "</svg>\n";
    std::cout << j["artifacts"].size() << " artifacts\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory front door"};
    app.require_subcommand(1);
    const char* env_out = std::getenv("ULAB_OUT");
    std::string out_dir = env_out ? env_out : "out";

    std::string f_text, at = "both", geo_name = "interval",
                bc_name = "dirichlet", shape = "sine", functional = "gs",
                csv, gamma_list, m_list, family, param = "a", report_dir;
    int n = 3, samples = 200, dim = 3, cells = 128, iters = 24;
    double y0 = 1.0, r_max = 1e3, a = 0.0, b = 1.0, R = 1.0, amp = 1.0,
           q = 0.0, k = 0.0, p = 4.0, lo = 0.0, hi = 1.0, kk = 0.4;
    std::size_t y = 5;
    std::vector<double> v0s;
    pde::SimOptions sim;

    app.set_config("--config", "",
                   "config file with a [subcommand] section of key=value lines");
    app.allow_config_extras(CLI::config_extras_mode::error);
    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--out", out_dir, "output directory");
        return sc;
    };

    auto* c_classify = add_common(app.add_subcommand("classify",
        "variation / hypothesis classification of a nonlinearity"));
    c_classify->add_option("--f", f_text, "expression")->required();
    c_classify->add_option("--at", at, "inf, 0, or both");
    c_classify->add_option("--n", n, "dimension");

    auto* c_blowup = add_common(app.add_subcommand("blowup",
        "scalar ODE blow-up profile and rate"));
    c_blowup->add_option("--f", f_text, "expression")->required();
    c_blowup->add_option("--y0", y0, "initial value");
    c_blowup->add_option("--samples", samples, "profile samples");

    auto* c_shoot = add_common(app.add_subcommand("shoot",
        "radial shooting traces and search summary"));
    c_shoot->add_option("--f", f_text, "expression")->required();
    c_shoot->add_option("--n", n, "dimension");
    c_shoot->add_option("--v0", v0s, "initial heights");
    c_shoot->add_option("--rmax", r_max, "integration radius");

    auto* c_sim = add_common(app.add_subcommand("simulate",
        "reaction-diffusion run with blow-up diagnostics"));
    c_sim->add_option("--f", f_text, "expression")->required();
    c_sim->add_option("--geometry", geo_name, "interval, ball, or line");
    c_sim->add_option("--a", a, "left endpoint");
    c_sim->add_option("--b", b, "right endpoint");
    c_sim->add_option("--dim", dim, "ball dimension");
    c_sim->add_option("--R", R, "ball radius");
    c_sim->add_option("--bc", bc_name, "dirichlet or neumann");
    c_sim->add_option("--shape", shape, "flat or sine");
    c_sim->add_option("--amp", amp, "initial amplitude");
    c_sim->add_option("--grid", sim.grid, "cells per axis");
    c_sim->add_option("--safety", sim.safety, "dt safety factor");
    c_sim->add_option("--cap", sim.cap, "blow-up cap");
    c_sim->add_option("--horizon", sim.horizon, "time horizon");

    auto* c_est = add_common(app.add_subcommand("verify-estimate",
        "evaluate an estimate functional"));
    c_est->add_option("--functional", functional, "gs or interior");
    c_est->add_option("--n", n, "dimension");
    c_est->add_option("--q", q, "exponent q");
    c_est->add_option("--k", k, "parameter k");
    c_est->add_option("--cells", cells, "grid cells per axis");
    c_est->add_option("--p", p, "power for the interior functional");

    auto* c_dbl = add_common(app.add_subcommand("doubling-demo",
        "doubling selection on a finite metric space"));
    c_dbl->add_option("--csv", csv, "distance matrix file");
    c_dbl->add_option("--gamma", gamma_list, "boundary indices");
    c_dbl->add_option("--m", m_list, "magnitudes on interior points");
    c_dbl->add_option("--k", kk, "doubling parameter");
    c_dbl->add_option("--y", y, "starting point");

    auto* c_sweep = add_common(app.add_subcommand("sweep",
        "bisect a family parameter on the shooting oracle"));
    c_sweep->add_option("--family", family, "expression with parameter")
        ->required();
    c_sweep->add_option("--param", param, "parameter token");
    c_sweep->add_option("--lo", lo, "bracket low")->required();
    c_sweep->add_option("--hi", hi, "bracket high")->required();
    c_sweep->add_option("--n", n, "dimension");
    c_sweep->add_option("--v0", v0s, "initial heights");
    c_sweep->add_option("--rmax", r_max, "integration radius");
    c_sweep->add_option("--iters", iters, "bisection steps");

    auto* c_rep = add_common(app.add_subcommand("report",
        "aggregate an experiment directory"));
    c_rep->add_option("--dir", report_dir, "directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        json err;
        err["error"] = {{"type", "config"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }

    g_out = out_dir;
    CLI::App* sub = app.get_subcommands().front();
    // hash the experiment parameters only, not where the artifacts land
    std::string canon = sub->get_name();
    for (const CLI::Option* opt : sub->get_options()) {
        std::string name = opt->get_name();
        if (name == "--out" || name == "--config" || name == "--help")
            continue;
        canon += "\n" + name + "=";
        if (opt->count())
            for (const auto& r : opt->results()) canon += r + ";";
        else
            canon += opt->get_default_str();
    }
    g_config_hash = fnv1a(canon);

    try {
        if (sub == c_classify)
            run_classify(f_text, at, n);
        else if (sub == c_blowup)
            run_blowup(f_text, y0, samples);
        else if (sub == c_shoot)
            run_shoot(f_text, n, v0s, r_max);
        else if (sub == c_sim)
            run_simulate(f_text, geo_name, a, b, dim, R, bc_name, shape, amp,
                         sim);
        else if (sub == c_est)
            run_verify_estimate(functional, n, q, k, cells, p);
        else if (sub == c_dbl)
            run_doubling_demo(csv, gamma_list, m_list, kk, y);
        else if (sub == c_sweep)
            run_sweep(family, param, lo, hi, n, v0s, r_max, iters);
        else
            run_report(report_dir);
    } catch (const ConfigError& e) {
        json err;
        err["error"] = {{"type", "config"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const NumericError& e) {
        json err;
        err["error"] = {{"type", "numeric"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        json err;
        err["error"] = {{"type", "precondition"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 4;
    }
    return 0;
}
