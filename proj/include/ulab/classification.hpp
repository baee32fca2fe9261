#pragma once

// Sampling-based detection / falsification of function-class membership:
// regular variation indices, controlled variation, superlinearity, monotone
// quotients, and the combined hypothesis set used by the parabolic Liouville
// theorem. Every verdict is a statement about the declared sample grid only.

#include <string>
#include <vector>

#include "ulab/nonlinearity.hpp"

namespace ulab::classify {

enum class Verdict { Regular, ControlledOnly, Falsified, Inconclusive };

std::string to_string(Verdict v);

struct VariationReport {
    bool at_infinity = true;
    double index = 0.0;     // slope extrapolated across the lambda grid
    double residual = 0.0;  // worst per-lambda deviation from a power law
    double spread = 0.0;    // slope spread over the last three lambda decades
    std::vector<double> lambda_grid;
    std::vector<double> slopes;  // least-squares slope per lambda
    Verdict verdict = Verdict::Inconclusive;
    double witness_lambda = 0.0, witness_s = 0.0;  // set when Falsified
};

// Per lambda: least-squares slope of log[f(lambda s)/f(lambda)] against log s
// over s in [1/8, 8]. Regular(m) when the slopes agree to `tol` over the last
// three lambda decades; the index extrapolates the slopes against 1/log
// lambda to remove slowly varying drift. Falsified when some sampled ratio is
// outside any power law of modest index (|log ratio| > 40); ControlledOnly
// when ratios stay bounded but some scale is not power-like in s;
// Inconclusive otherwise (e.g. an index oscillating without settling).
VariationReport estimate_rv_index(const nonlin::Expr& f, bool at_infinity,
                                  std::vector<double> lambda_grid = {},
                                  std::vector<double> s_grid = {},
                                  double tol = 0.02);

struct ControlledReport {
    double inf_ratio = 0.0;  // sampled inf of f(lambda s)/f(lambda)
    bool positive = false;
    double witness_lambda = 0.0, witness_s = 0.0;  // argmin of the ratio
    std::vector<double> lambda_grid;
    double s_lo = 0.0, s_hi = 0.0;
};

// Sampled infimum of f(lambda s)/f(lambda) over s in [s_lo, s_hi] and the
// lambda grid (default log-spaced over [1e-10, 1e10]); all ratios are
// computed in the log domain.
ControlledReport controlled_variation_inf(const nonlin::Expr& f, double s_lo,
                                          double s_hi,
                                          std::vector<double> lambda_grid = {});

struct SuperlinearityProfile {
    std::vector<double> s;
    std::vector<double> inf_ratio;  // inf over lambda of f(lambda s)/(s f(lambda))
    bool superlinear = false;
    double witness_s = 0.0;  // s with a small ratio when not superlinear
};

// Sampled profile of inf_lambda f(lambda s)/(s f(lambda)) for s increasing;
// superlinear when the profile clears 10 at the top of the s range.
SuperlinearityProfile superlinearity_profile(
    const nonlin::Expr& f, std::vector<double> s_grid = {},
    std::vector<double> lambda_grid = {});

struct QuotientCheck {
    bool pass = false;
    double witness_s = 0.0;  // first increasing pair when failing
};

// s^{-m} f(s) nonincreasing, adjacent-pair comparison at 1e-13 relative on a
// dense log grid (default 4096 points over [1e-8, 1e8]).
QuotientCheck monotone_quotient_check(const nonlin::Expr& f, double m,
                                      std::vector<double> s_grid = {});

// Same monotonicity check applied to tf(s) = int_0^s f(z)/z dz instead of f;
// the comparison tolerance is 1e-9 relative (quadrature-limited) on a default
// 512-point grid.
QuotientCheck monotone_quotient_check_tilde(const nonlin::Expr& f, double m,
                                            std::vector<double> s_grid = {});

struct HypothesisReport {
    int n = 0;
    // f(s) <= p tf(s) for all sampled s, some p < p_B, where
    // tf(s) = int_0^s f(z)/z dz; p_needed is the sampled sup of f/tf.
    bool bound_by_tilde = false;
    double p_needed = 0.0;
    double p_B = 0.0;
    // f(s) >= c s^{m_i} tf(s)^{2 m_i - 1} on (0,1] for m_1 and on (1,inf)
    // for m_2, searched over a 64x64 grid of 2/3 < m_2 < m_1 < m_star.
    bool growth_pair_feasible = false;
    double m1 = 0.0, m2 = 0.0, c = 0.0;
    double m_star = 0.0;
    int m_grid = 64, s_grid = 512;
    double s_lo = 1e-8, s_hi = 1e8;
};

HypothesisReport liouville_hypothesis_check(const nonlin::Expr& f, int n);

enum class Example1Condition { I, II1, II2, II3, III, Nonexistence, None };

std::string to_string(Example1Condition c);

// Which clause of the log-perturbed power family s^p log^q(K+s) the
// parameters satisfy; boundary ties return None. The III smallness proxy is
// |q| <= 0.1 (no explicit bound exists). Nonexistence is the entire-steady-
// state regime (supercritical q > p_S - p with K = 1, or p >= p_S, q > 0).
Example1Condition example1_condition(double p, double q, double K, int n,
                                     bool parabolic);

}  // namespace ulab::classify
