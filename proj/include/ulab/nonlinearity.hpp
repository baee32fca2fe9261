#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ulab/logval.hpp"

namespace ulab::nonlin {

// Closed expression tree for a nonlinearity f(s), s > 0. Trees are immutable
// after construction and cheap to copy (shared nodes). Evaluation has two
// routes: direct (linear domain) and log-domain; the log route stays accurate
// far beyond the double range of s.
enum class Kind {
    Const,       // c (any real; positivity is a property of the whole tree)
    Var,         // s
    Pow,         // kids[0] ^ kids[1]
    ShiftedLog,  // log(K + kids[0])
    IterLog,     // log o ... o log (depth times) of (K + kids[0])
    Sin,         // sin(kids[0])
    Cos,         // cos(kids[0])
    Exp,         // exp(kids[0])
    AbsLog,      // |log kids[0]|
    RecipAug,    // s + 1/s
    MinClamp,    // min(s^r, 1)
    Sum,         // kids[0] + kids[1] + ...
    Product,     // kids[0] * kids[1] * ...
    Piecewise,   // kids[i] on [breaks[i-1], breaks[i]), breaks strictly increasing
};

class Expr;
struct Node;

class Expr {
  public:
    Expr() = default;

    double eval(double s) const;          // routes through log domain when |log s| is extreme
    LogVal eval_log(double t) const;      // value of f at s = e^t
    double derivative(double s) const;    // analytic chain rule; FD fallback at kinks
    bool smooth() const;                  // no kink-carrying node in the tree

    std::string print() const;
    bool operator==(const Expr& other) const;

    Kind kind() const;
    const Node& node() const { return *node_; }
    bool empty() const { return node_ == nullptr; }

    // -- constructors ------------------------------------------------------
    static Expr constant(double c);
    static Expr var();
    static Expr pow(Expr base, Expr exponent);
    static Expr pow_s(double p);                       // s^p
    static Expr shifted_log(double K, Expr arg);       // log(K + arg)
    static Expr shifted_log(double K);                 // log(K + s)
    static Expr iter_log(int depth, double K, Expr arg);
    static Expr sin(Expr e);
    static Expr cos(Expr e);
    static Expr exp(Expr e);
    static Expr abs_log(Expr e);
    static Expr recip_aug();                           // s + 1/s
    static Expr min_clamp(double r);                   // min(s^r, 1)
    static Expr sum(std::vector<Expr> kids);
    static Expr product(std::vector<Expr> kids);
    static Expr piecewise(std::vector<double> breaks, std::vector<Expr> kids);

  private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend struct Node;
};

struct Node {
    Kind kind;
    double a = 0.0;  // Const value, ShiftedLog/IterLog shift K, MinClamp exponent r
    int depth = 0;   // IterLog depth
    std::vector<Expr> kids;
    std::vector<double> breaks;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);

// Textual grammar round-tripping print(): numbers, `s`, `+`, `-`, `*`, and
// calls pow, log(K+X), ilog(m,K,X), sin, cos, exp, abslog, recipaug(),
// minclamp(r), pw(e0, b1, e1, ..., bk, ek). Throws ConfigError on bad input.
Expr parse(const std::string& text);

// ---------------------------------------------------------------------------

struct CriticalExponents {
    int n = 0;
    bool parabolic = false;
    double p_S, p_sg, p_F, p_B;
    double p_c, p_star, p_dstar;  // p_dstar is the boundary exponent p_**
    double n_star;
    double m_star;  // 2(n+2)/(3n+2)
};

// Exact exponent table for dimension n; infinities where the formulas
// degenerate (n <= 2 for p_S, n = 1 for p_B).
CriticalExponents critical_exponents(int n, bool parabolic);

// ---------------------------------------------------------------------------
// Integral transforms. Both use the substitution z = e^u to resolve z = 0.

// tilde_f(s) = int_0^s f(z)/z dz. Throws NumericError("divergent at origin")
// when the integrability probe fails.
double tilde_f(const Expr& f, double s, double tol = 1e-12);

// F(s) = int_0^s f(z) dz.
double antiderivative_F(const Expr& f, double s, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Builders.

// Example 1: s^p log^q(K+s).
Expr example1(double p, double q, double K);

// Example 2: s^{p + a sin[log log(3 + s + 1/s)]}.
Expr example2(double p, double a);

// Example 3: s^p + s^q, or its piecewise form (s^p on [0,1], s^q beyond).
Expr example3_sum(double p, double q);
Expr example3_piecewise(double p, double q);

// Counter-example of the sharpness remark: f(s) = [A + B min(s^{p-1},1)] s^p
// with A = 2a(n-2-2a), B = 4a(1+a), a = 1/(p-1). The closed form
// v(x) = (1+|x|^2)^{-1/(p-1)} then solves -Dv = f(v); the builder verifies the
// radial residual and refuses to return a drifted tree.
Expr counterexample_decay(int n, double p);
void counterexample_coeffs(int n, double p, double& A, double& B);

// Two-branch nonlinearity (s^m + s^q below a, matched power beyond) with the
// matching height a = [(p_B-m)/(q-p_B)]^{1/(q-m)}; requires 1 < m < p_B < q.
Expr lemma95_example(double m, double q, int n);
double lemma95_height(double m, double q, int n);

struct PiecewisePowerSpec {
    std::vector<double> breakpoints;  // s_2 < s_3 < ...
    std::vector<double> exponents;    // exponent on each segment, incl. [0, s_2)
    std::vector<double> coefficients; // matching prefactor per segment
    double ell, m, p, p_star;
    double m_bar, p_bar;
    Expr expr;
};

// Alternating-exponent construction touching s^p at even and s^m at odd
// breakpoints, with m_bar in (ell,m) and p_bar in (p,p_star) taken as
// midpoints. Requires 1 < ell < m < p < p_star.
PiecewisePowerSpec build_piecewise_power(double ell, double m, double p,
                                         double p_star, int n_segments);

// Slowly varying factor catalog; each entry is positive, has slow variation
// at both 0 and infinity (two-sided variants via s + 1/s), and carries a name
// for reports.
// Flat postfix program for fast repeated evaluation in inner loops (direct
// domain only, no log routing; integer powers become multiplications).
// Trees containing Piecewise fall back to ordinary tree evaluation.
class CompiledExpr {
  public:
    double operator()(double s) const;

    struct Op {
        int code = 0;
        double a = 0.0;
        int k = 0;
    };

  private:
    std::vector<Op> prog_;
    Expr fallback_;
    friend CompiledExpr compile(const Expr&);
};

CompiledExpr compile(const Expr& f);

struct CatalogEntry {
    std::string name;
    Expr L;
};
std::vector<CatalogEntry> slow_variation_catalog();

}  // namespace ulab::nonlin
