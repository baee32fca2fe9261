#include "ulab/nonlinearity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>

#include "ulab/errors.hpp"
#include "ulab/quadrature.hpp"

namespace ulab::nonlin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::shared_ptr<const Node> make(Kind k, double a = 0.0, int depth = 0,
                                 std::vector<Expr> kids = {},
                                 std::vector<double> breaks = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = a;
    n->depth = depth;
    n->kids = std::move(kids);
    n->breaks = std::move(breaks);
    return n;
}

double iter_exp(int depth) {
    double v = 0.0;
    for (int i = 0; i < depth; ++i) v = std::exp(v);
    return v;
}

}  // namespace

Kind Expr::kind() const { return node_->kind; }

Expr Expr::constant(double c) { return Expr(make(Kind::Const, c)); }
Expr Expr::var() { return Expr(make(Kind::Var)); }
Expr Expr::pow(Expr base, Expr exponent) {
    return Expr(make(Kind::Pow, 0, 0, {std::move(base), std::move(exponent)}));
}
Expr Expr::pow_s(double p) { return pow(var(), constant(p)); }
Expr Expr::shifted_log(double K, Expr arg) {
    if (!(K >= 0.0)) throw PreconditionError("shifted_log: shift K must be >= 0");
    return Expr(make(Kind::ShiftedLog, K, 0, {std::move(arg)}));
}
Expr Expr::shifted_log(double K) { return shifted_log(K, var()); }
Expr Expr::iter_log(int depth, double K, Expr arg) {
    if (depth < 1) throw PreconditionError("iter_log: depth must be >= 1");
    if (!(K > iter_exp(depth)))
        throw PreconditionError("iter_log: shift K must exceed exp o..o exp(0) = " +
                                fmt_double(iter_exp(depth)));
    return Expr(make(Kind::IterLog, K, depth, {std::move(arg)}));
}
Expr Expr::sin(Expr e) { return Expr(make(Kind::Sin, 0, 0, {std::move(e)})); }
Expr Expr::cos(Expr e) { return Expr(make(Kind::Cos, 0, 0, {std::move(e)})); }
Expr Expr::exp(Expr e) { return Expr(make(Kind::Exp, 0, 0, {std::move(e)})); }
Expr Expr::abs_log(Expr e) { return Expr(make(Kind::AbsLog, 0, 0, {std::move(e)})); }
Expr Expr::recip_aug() { return Expr(make(Kind::RecipAug)); }
Expr Expr::min_clamp(double r) { return Expr(make(Kind::MinClamp, r)); }
Expr Expr::sum(std::vector<Expr> kids) {
    if (kids.size() == 1) return kids[0];
    if (kids.empty()) throw PreconditionError("sum: needs at least one term");
    return Expr(make(Kind::Sum, 0, 0, std::move(kids)));
}
Expr Expr::product(std::vector<Expr> kids) {
    if (kids.size() == 1) return kids[0];
    if (kids.empty()) throw PreconditionError("product: needs at least one factor");
    return Expr(make(Kind::Product, 0, 0, std::move(kids)));
}

Expr Expr::piecewise(std::vector<double> breaks, std::vector<Expr> kids) {
    if (breaks.empty() || kids.size() != breaks.size() + 1)
        throw PreconditionError("piecewise: need k breakpoints and k+1 segments");
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            throw PreconditionError("piecewise: breakpoints must be strictly increasing");
    if (!(breaks.front() > 0.0))
        throw PreconditionError("piecewise: breakpoints must be positive");
    Expr e(make(Kind::Piecewise, 0, 0, std::move(kids), std::move(breaks)));
    const Node& n = e.node();
    for (size_t i = 0; i < n.breaks.size(); ++i) {
        double b = n.breaks[i];
        double lhs = n.kids[i].eval(b);
        double rhs = n.kids[i + 1].eval(b);
        double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        if (std::fabs(lhs - rhs) > 1e-9 * scale)
            throw PreconditionError("piecewise: segments do not match at breakpoint " +
                                    fmt_double(b));
    }
    return e;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }

// --- evaluation -------------------------------------------------------------

namespace {

double eval_direct(const Node& n, double s) {
    switch (n.kind) {
        case Kind::Const: return n.a;
        case Kind::Var: return s;
        case Kind::Pow: {
            double b = eval_direct(n.kids[0].node(), s);
            double e = eval_direct(n.kids[1].node(), s);
            if (b == 0.0) return e > 0 ? 0.0 : (e == 0 ? 1.0 : kInf);
            return std::pow(b, e);
        }
        case Kind::ShiftedLog:
            return std::log(n.a + eval_direct(n.kids[0].node(), s));
        case Kind::IterLog: {
            double v = n.a + eval_direct(n.kids[0].node(), s);
            for (int i = 0; i < n.depth; ++i) v = std::log(v);
            return v;
        }
        case Kind::Sin: return std::sin(eval_direct(n.kids[0].node(), s));
        case Kind::Cos: return std::cos(eval_direct(n.kids[0].node(), s));
        case Kind::Exp: return std::exp(eval_direct(n.kids[0].node(), s));
        case Kind::AbsLog: return std::fabs(std::log(eval_direct(n.kids[0].node(), s)));
        case Kind::RecipAug: return s + 1.0 / s;
        case Kind::MinClamp: return std::min(std::pow(s, n.a), 1.0);
        case Kind::Sum: {
            double acc = 0.0;
            for (const auto& k : n.kids) acc += eval_direct(k.node(), s);
            return acc;
        }
        case Kind::Product: {
            double acc = 1.0;
            for (const auto& k : n.kids) acc *= eval_direct(k.node(), s);
            return acc;
        }
        case Kind::Piecewise: {
            size_t i = std::upper_bound(n.breaks.begin(), n.breaks.end(), s) -
                       n.breaks.begin();
            return eval_direct(n.kids[i].node(), s);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

LogVal eval_logdom(const Node& n, double t) {
    switch (n.kind) {
        case Kind::Const: return LogVal::from_double(n.a);
        case Kind::Var: return LogVal::pos(t);
        case Kind::Pow: {
            LogVal b = eval_logdom(n.kids[0].node(), t);
            double e = eval_logdom(n.kids[1].node(), t).to_double();
            if (b.sign == 0) return e > 0 ? LogVal::zero() : LogVal{kInf, 1};
            if (b.sign < 0)
                return LogVal{std::numeric_limits<double>::quiet_NaN(), 1};
            return LogVal{e * b.lg, 1};
        }
        case Kind::ShiftedLog: {
            LogVal c = eval_logdom(n.kids[0].node(), t);
            double w;
            if (c.sign > 0)
                w = log_shifted_exp(n.a, c.lg);
            else
                w = std::log(n.a + c.to_double());
            return LogVal::from_double(w);
        }
        case Kind::IterLog: {
            LogVal c = eval_logdom(n.kids[0].node(), t);
            double v = (c.sign > 0) ? log_shifted_exp(n.a, c.lg)
                                    : std::log(n.a + c.to_double());
            for (int i = 1; i < n.depth; ++i) v = std::log(v);
            return LogVal::from_double(v);
        }
        case Kind::Sin:
            return LogVal::from_double(
                std::sin(eval_logdom(n.kids[0].node(), t).to_double()));
        case Kind::Cos:
            return LogVal::from_double(
                std::cos(eval_logdom(n.kids[0].node(), t).to_double()));
        case Kind::Exp:
            return LogVal{eval_logdom(n.kids[0].node(), t).to_double(), 1};
        case Kind::AbsLog: {
            LogVal c = eval_logdom(n.kids[0].node(), t);
            if (c.sign <= 0)
                return LogVal{std::numeric_limits<double>::quiet_NaN(), 1};
            return LogVal::from_double(std::fabs(c.lg));
        }
        case Kind::RecipAug: {
            double at = std::fabs(t);
            return LogVal::pos(at + std::log1p(std::exp(-2.0 * at)));
        }
        case Kind::MinClamp:
            return LogVal::pos(std::min(n.a * t, 0.0));
        case Kind::Sum: {
            LogVal acc = LogVal::zero();
            for (const auto& k : n.kids) acc = log_add(acc, eval_logdom(k.node(), t));
            return acc;
        }
        case Kind::Product: {
            LogVal acc = LogVal::from_double(1.0);
            for (const auto& k : n.kids) acc = log_mul(acc, eval_logdom(k.node(), t));
            return acc;
        }
        case Kind::Piecewise: {
            size_t i = 0;
            while (i < n.breaks.size() && t >= std::log(n.breaks[i])) ++i;
            return eval_logdom(n.kids[i].node(), t);
        }
    }
    return LogVal::zero();
}

bool has_kink(const Node& n) {
    if (n.kind == Kind::AbsLog || n.kind == Kind::MinClamp ||
        n.kind == Kind::Piecewise)
        return true;
    for (const auto& k : n.kids)
        if (has_kink(k.node())) return true;
    return false;
}

double deriv_direct(const Node& n, double s) {
    switch (n.kind) {
        case Kind::Const: return 0.0;
        case Kind::Var: return 1.0;
        case Kind::Pow: {
            double b = eval_direct(n.kids[0].node(), s);
            double e = eval_direct(n.kids[1].node(), s);
            double db = deriv_direct(n.kids[0].node(), s);
            double de = deriv_direct(n.kids[1].node(), s);
            double f = std::pow(b, e);
            return f * (de * std::log(b) + e * db / b);
        }
        case Kind::ShiftedLog:
            return deriv_direct(n.kids[0].node(), s) /
                   (n.a + eval_direct(n.kids[0].node(), s));
        case Kind::IterLog: {
            double v = n.a + eval_direct(n.kids[0].node(), s);
            double denom = v;
            for (int i = 1; i < n.depth; ++i) {
                v = std::log(v);
                denom *= v;
            }
            return deriv_direct(n.kids[0].node(), s) / denom;
        }
        case Kind::Sin:
            return std::cos(eval_direct(n.kids[0].node(), s)) *
                   deriv_direct(n.kids[0].node(), s);
        case Kind::Cos:
            return -std::sin(eval_direct(n.kids[0].node(), s)) *
                   deriv_direct(n.kids[0].node(), s);
        case Kind::Exp:
            return std::exp(eval_direct(n.kids[0].node(), s)) *
                   deriv_direct(n.kids[0].node(), s);
        case Kind::AbsLog: {
            double v = eval_direct(n.kids[0].node(), s);
            double sgn = std::log(v) >= 0 ? 1.0 : -1.0;
            return sgn * deriv_direct(n.kids[0].node(), s) / v;
        }
        case Kind::RecipAug: return 1.0 - 1.0 / (s * s);
        case Kind::MinClamp: {
            double sr = std::pow(s, n.a);
            return sr < 1.0 ? n.a * sr / s : 0.0;
        }
        case Kind::Sum: {
            double acc = 0.0;
            for (const auto& k : n.kids) acc += deriv_direct(k.node(), s);
            return acc;
        }
        case Kind::Product: {
            double acc = 0.0;
            for (size_t i = 0; i < n.kids.size(); ++i) {
                double term = deriv_direct(n.kids[i].node(), s);
                for (size_t j = 0; j < n.kids.size(); ++j)
                    if (j != i) term *= eval_direct(n.kids[j].node(), s);
                acc += term;
            }
            return acc;
        }
        case Kind::Piecewise: {
            size_t i = std::upper_bound(n.breaks.begin(), n.breaks.end(), s) -
                       n.breaks.begin();
            return deriv_direct(n.kids[i].node(), s);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double Expr::eval(double s) const {
    if (s < 0.0) throw PreconditionError("eval: s must be nonnegative");
    double v;
    if (s > 0.0 && (s < 1e-300 || s > 1e300)) {
        LogVal lv = eval_log(std::log(s));
        if (lv.sign != 0 && lv.lg > 709.0)
            throw NumericError("eval: out of range at s=" + fmt_double(s));
        v = lv.to_double();
    } else {
        v = eval_direct(*node_, s);
    }
    if (std::isinf(v))
        throw NumericError("eval: out of range at s=" + fmt_double(s));
    return v;
}

LogVal Expr::eval_log(double t) const { return eval_logdom(*node_, t); }

bool Expr::smooth() const { return !has_kink(*node_); }

double Expr::derivative(double s) const {
    if (smooth()) return deriv_direct(*node_, s);
    double h = std::fabs(s) * 1e-6;
    if (h == 0.0) h = 1e-6;
    return (eval(s + h) - eval(std::max(s - h, 0.0))) /
           (s + h - std::max(s - h, 0.0));
}

// --- structural equality ----------------------------------------------------

bool Expr::operator==(const Expr& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind || a.a != b.a || a.depth != b.depth ||
        a.kids.size() != b.kids.size() || a.breaks != b.breaks)
        return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!(a.kids[i] == b.kids[i])) return false;
    return true;
}

// --- printing ---------------------------------------------------------------

namespace {

void print_node(const Node& n, std::string& out) {
    auto kid = [&](size_t i) { print_node(n.kids[i].node(), out); };
    switch (n.kind) {
        case Kind::Const: out += fmt_double(n.a); return;
        case Kind::Var: out += 's'; return;
        case Kind::Pow:
            out += "pow(";
            kid(0);
            out += ',';
            kid(1);
            out += ')';
            return;
        case Kind::ShiftedLog:
            out += "log(" + fmt_double(n.a) + "+";
            kid(0);
            out += ')';
            return;
        case Kind::IterLog:
            out += "ilog(" + std::to_string(n.depth) + "," + fmt_double(n.a) + ",";
            kid(0);
            out += ')';
            return;
        case Kind::Sin: out += "sin("; kid(0); out += ')'; return;
        case Kind::Cos: out += "cos("; kid(0); out += ')'; return;
        case Kind::Exp: out += "exp("; kid(0); out += ')'; return;
        case Kind::AbsLog: out += "abslog("; kid(0); out += ')'; return;
        case Kind::RecipAug: out += "recipaug()"; return;
        case Kind::MinClamp: out += "minclamp(" + fmt_double(n.a) + ")"; return;
        case Kind::Sum:
            out += '(';
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += '+';
                kid(i);
            }
            out += ')';
            return;
        case Kind::Product:
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += '*';
                kid(i);
            }
            return;
        case Kind::Piecewise:
            out += "pw(";
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += ',' + fmt_double(n.breaks[i - 1]) + ',';
                kid(i);
            }
            out += ')';
            return;
    }
}

}  // namespace

std::string Expr::print() const {
    std::string out;
    print_node(*node_, out);
    return out;
}

// --- parser -----------------------------------------------------------------

namespace {

struct Parser {
    const char* p;
    const std::string& src;

    explicit Parser(const std::string& s) : p(s.c_str()), src(s) {}

    void skip_ws() {
        while (*p == ' ' || *p == '\t') ++p;
    }
    bool eat(char c) {
        skip_ws();
        if (*p == c) {
            ++p;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ConfigError("parse error at offset " +
                          std::to_string(p - src.c_str()) + ": " + msg);
    }

    double number() {
        skip_ws();
        char* end = nullptr;
        double v = std::strtod(p, &end);
        if (end == p) fail("expected number");
        p = end;
        return v;
    }

    Expr expr() {
        Expr acc = product();
        std::vector<Expr> terms{acc};
        for (;;) {
            skip_ws();
            if (*p == '+') {
                ++p;
                terms.push_back(product());
            } else if (*p == '-') {
                ++p;
                terms.push_back(Expr::constant(-1.0) * product());
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms[0] : Expr::sum(std::move(terms));
    }

    Expr product() {
        std::vector<Expr> factors{unary()};
        while (eat('*')) factors.push_back(unary());
        return factors.size() == 1 ? factors[0] : Expr::product(std::move(factors));
    }

    Expr unary() {
        skip_ws();
        if (*p == '-' && !std::isdigit((unsigned char)p[1]) && p[1] != '.') {
            ++p;
            return Expr::constant(-1.0) * unary();
        }
        return atom();
    }

    Expr atom() {
        skip_ws();
        if (*p == '(') {
            ++p;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit((unsigned char)*p) || *p == '.' || *p == '-')
            return Expr::constant(number());
        if (std::isalpha((unsigned char)*p)) {
            const char* start = p;
            while (std::isalnum((unsigned char)*p) || *p == '_') ++p;
            std::string name(start, p);
            skip_ws();
            if (*p != '(') {
                if (name == "s") return Expr::var();
                fail("unknown symbol '" + name + "'");
            }
            ++p;  // '('
            return call(name);
        }
        fail("unexpected character");
    }

    Expr call(const std::string& name) {
        if (name == "recipaug") {
            expect(')');
            return Expr::recip_aug();
        }
        if (name == "minclamp") {
            double r = number();
            expect(')');
            return Expr::min_clamp(r);
        }
        if (name == "pow") {
            Expr b = expr();
            expect(',');
            Expr e = expr();
            expect(')');
            return Expr::pow(std::move(b), std::move(e));
        }
        if (name == "log") {
            // shifted log: log(K + X)
            double K = number();
            expect('+');
            Expr arg = expr();
            expect(')');
            return Expr::shifted_log(K, std::move(arg));
        }
        if (name == "ilog") {
            double depth = number();
            expect(',');
            double K = number();
            Expr arg = Expr::var();
            if (eat(',')) arg = expr();
            expect(')');
            return Expr::iter_log((int)depth, K, std::move(arg));
        }
        if (name == "sin" || name == "cos" || name == "exp" || name == "abslog") {
            Expr arg = expr();
            expect(')');
            if (name == "sin") return Expr::sin(std::move(arg));
            if (name == "cos") return Expr::cos(std::move(arg));
            if (name == "exp") return Expr::exp(std::move(arg));
            return Expr::abs_log(std::move(arg));
        }
        if (name == "pw") {
            std::vector<Expr> kids;
            std::vector<double> breaks;
            kids.push_back(expr());
            while (eat(',')) {
                breaks.push_back(number());
                expect(',');
                kids.push_back(expr());
            }
            expect(')');
            return Expr::piecewise(std::move(breaks), std::move(kids));
        }
        fail("unknown function '" + name + "'");
    }
};

}  // namespace

Expr parse(const std::string& text) {
    Parser parser(text);
    Expr e = parser.expr();
    parser.skip_ws();
    if (*parser.p != '\0') parser.fail("trailing input");
    return e;
}

// --- critical exponents -----------------------------------------------------

CriticalExponents critical_exponents(int n, bool parabolic) {
    if (n < 1) throw PreconditionError("critical_exponents: n must be >= 1");
    CriticalExponents ce;
    ce.n = n;
    ce.parabolic = parabolic;
    double nn = n;
    ce.p_S = n >= 3 ? (nn + 2) / (nn - 2) : kInf;
    ce.p_sg = n >= 3 ? nn / (nn - 2) : kInf;
    ce.p_F = (nn + 2) / nn;
    ce.p_B = n >= 2 ? nn * (nn + 2) / ((nn - 1) * (nn - 1)) : kInf;
    ce.m_star = 2 * (nn + 2) / (3 * nn + 2);
    if (parabolic) {
        ce.p_c = ce.p_B;
        ce.p_star = ce.p_F;
        ce.n_star = 1;
        ce.p_dstar = 1 + 2 / (nn + 1);
    } else {
        ce.p_c = ce.p_S;
        ce.p_star = ce.p_sg;
        ce.n_star = 2;
        ce.p_dstar = n >= 2 ? (nn + 1) / (nn - 1) : kInf;
    }
    return ce;
}

// --- integral transforms ----------------------------------------------------

namespace {

// Probe integrability of z^{-1} f(z) at the origin: f must decay as z -> 0.
void probe_origin(const Expr& f) {
    double l_hi = f.eval_log(std::log(1e-2)).lg;
    double l_lo = f.eval_log(std::log(1e-14)).lg;
    if (!(l_lo < l_hi - 0.5))
        throw NumericError("tilde_f: divergent at origin (f does not decay as z->0)");
}

}  // namespace

double tilde_f(const Expr& f, double s, double tol) {
    if (!(s > 0.0)) throw PreconditionError("tilde_f: s must be positive");
    probe_origin(f);
    auto g = [&f](double u) { return f.eval_log(u).to_double(); };
    quad::Result r = quad::integrate_from_minus_inf(g, std::log(s), tol);
    if (r.abs_err > 10 * tol * std::fabs(r.value) + 1e-300)
        throw NumericError("tilde_f: quadrature did not converge (slow decay at origin?)");
    return r.value;
}

double antiderivative_F(const Expr& f, double s, double tol) {
    if (!(s > 0.0)) throw PreconditionError("antiderivative_F: s must be positive");
    auto g = [&f](double u) {
        return log_mul(f.eval_log(u), LogVal::pos(u)).to_double();
    };
    quad::Result r = quad::integrate_from_minus_inf(g, std::log(s), tol);
    return r.value;
}

// --- builders ---------------------------------------------------------------

Expr example1(double p, double q, double K) {
    if (!(p > 1.0)) throw PreconditionError("example1: requires p > 1");
    if (!(K >= 1.0)) throw PreconditionError("example1: requires K >= 1");
    if (q == 0.0) return Expr::pow_s(p);
    return Expr::pow_s(p) * Expr::pow(Expr::shifted_log(K), Expr::constant(q));
}

Expr example2(double p, double a) {
    if (!(p > 1.0)) throw PreconditionError("example2: requires p > 1");
    if (!(a > 0.0 && a < p - 1.0))
        throw PreconditionError("example2: requires 0 < a < p-1");
    Expr osc = Expr::constant(a) *
               Expr::sin(Expr::iter_log(2, 3.0, Expr::recip_aug()));
    return Expr::pow(Expr::var(), Expr::constant(p) + osc);
}

Expr example3_sum(double p, double q) {
    if (!(p > 1.0 && q > 1.0))
        throw PreconditionError("example3: requires p, q > 1");
    return Expr::pow_s(p) + Expr::pow_s(q);
}

Expr example3_piecewise(double p, double q) {
    if (!(p > 1.0 && q > 1.0))
        throw PreconditionError("example3: requires p, q > 1");
    return Expr::piecewise({1.0}, {Expr::pow_s(p), Expr::pow_s(q)});
}

void counterexample_coeffs(int n, double p, double& A, double& B) {
    double alpha = 1.0 / (p - 1.0);
    A = 2 * alpha * (n - 2 - 2 * alpha);
    B = 4 * alpha * (1 + alpha);
}

Expr counterexample_decay(int n, double p) {
    if (n < 3) throw PreconditionError("counterexample_decay: requires n >= 3");
    if (!(p > double(n) / (n - 2)))
        throw PreconditionError("counterexample_decay: requires p > n/(n-2)");
    double A, B;
    counterexample_coeffs(n, p, A, B);
    Expr f = (Expr::constant(A) +
              Expr::constant(B) * Expr::min_clamp(p - 1.0)) *
             Expr::pow_s(p);
    // Residual check: v(r) = (1+r^2)^{-alpha} must satisfy -Lap v = f(v).
    double alpha = 1.0 / (p - 1.0);
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
        double r = std::pow(10.0, -3.0 + 5.0 * i / 300.0);  // r in [1e-3, 1e2]
        double w = 1.0 + r * r;
        double v = std::pow(w, -alpha);
        double lap = 2 * alpha * std::pow(w, -alpha - 2) *
                     (n + (n - 2 - 2 * alpha) * r * r);
        double resid = std::fabs(lap - f.eval(v)) / std::max(lap, 1.0);
        worst = std::max(worst, resid);
    }
    if (worst > 1e-10)
        throw NumericError("counterexample_decay: residual check failed, max " +
                           fmt_double(worst));
    return f;
}

double lemma95_height(double m, double q, int n) {
    double p_B = critical_exponents(n, true).p_B;
    if (!(m > 1.0 && m < p_B && q > p_B))
        throw PreconditionError("lemma95: requires 1 < m < p_B < q");
    return std::pow((p_B - m) / (q - p_B), 1.0 / (q - m));
}

Expr lemma95_example(double m, double q, int n) {
    double a = lemma95_height(m, q, n);
    Expr low = Expr::pow_s(m) + Expr::pow_s(q);
    Expr high = Expr::constant(1.0 + std::pow(a, q - m)) * Expr::pow_s(m);
    return Expr::piecewise({a}, {low, high});
}

PiecewisePowerSpec build_piecewise_power(double ell, double m, double p,
                                         double p_star, int n_segments) {
    if (!(1.0 < ell && ell < m && m < p && p < p_star))
        throw PreconditionError(
            "build_piecewise_power: requires 1 < ell < m < p < p_star");
    if (n_segments < 2)
        throw PreconditionError("build_piecewise_power: n_segments must be >= 2");
    PiecewisePowerSpec spec;
    spec.ell = ell;
    spec.m = m;
    spec.p = p;
    spec.p_star = p_star;
    spec.m_bar = 0.5 * (ell + m);
    spec.p_bar = 0.5 * (p + p_star);

    spec.breakpoints.push_back(2.0);  // s_2
    spec.exponents.push_back(p);      // initial segment [0, s_2)
    spec.coefficients.push_back(1.0);
    for (int seg = 0; seg < n_segments; ++seg) {
        double lo = spec.breakpoints.back();
        bool even = (seg % 2 == 0);  // segment starting at an even-index breakpoint
        double expo = even ? spec.m_bar : spec.p_bar;
        // Matching coefficient: f(lo) = lo^p at even breakpoints, lo^m at odd.
        double coef_exp = even ? (p - spec.m_bar) : (m - spec.p_bar);
        spec.exponents.push_back(expo);
        spec.coefficients.push_back(std::pow(lo, coef_exp));
        double next = even
                          ? std::pow(lo, (p - spec.m_bar) / (m - spec.m_bar))
                          : std::pow(lo, (spec.p_bar - m) / (spec.p_bar - p));
        if (seg + 1 < n_segments) {
            if (next > 1e280)
                throw NumericError(
                    "build_piecewise_power: breakpoint overflow; reduce n_segments");
            spec.breakpoints.push_back(next);
        }
    }
    std::vector<Expr> kids;
    for (size_t i = 0; i < spec.exponents.size(); ++i) {
        Expr piece = Expr::pow_s(spec.exponents[i]);
        if (spec.coefficients[i] != 1.0)
            piece = Expr::constant(spec.coefficients[i]) * piece;
        kids.push_back(piece);
    }
    spec.expr = Expr::piecewise(spec.breakpoints, std::move(kids));
    return spec;
}

// --- compiled evaluator -----------------------------------------------------

namespace {

enum OpCode {
    kPushConst,
    kPushVar,
    kPowDyn,
    kPowSquare,
    kPowCube,
    kPowConst,
    kShiftedLog,
    kIterLog,
    kSin,
    kCos,
    kExp,
    kAbsLog,
    kRecipAug,
    kMinClamp,
    kSum,
    kProduct,
};

// returns false when the subtree cannot be flattened (Piecewise)
bool flatten(const Node& n, std::vector<CompiledExpr::Op>& prog) {
    using Op = CompiledExpr::Op;
    switch (n.kind) {
        case Kind::Const: prog.push_back(Op{kPushConst, n.a, 0}); return true;
        case Kind::Var: prog.push_back(Op{kPushVar, 0, 0}); return true;
        case Kind::Pow: {
            if (!flatten(n.kids[0].node(), prog)) return false;
            const Node& e = n.kids[1].node();
            if (e.kind == Kind::Const) {
                if (e.a == 2.0)
                    prog.push_back(Op{kPowSquare, 0, 0});
                else if (e.a == 3.0)
                    prog.push_back(Op{kPowCube, 0, 0});
                else
                    prog.push_back(Op{kPowConst, e.a, 0});
                return true;
            }
            if (!flatten(e, prog)) return false;
            prog.push_back(Op{kPowDyn, 0, 0});
            return true;
        }
        case Kind::ShiftedLog:
            if (!flatten(n.kids[0].node(), prog)) return false;
            prog.push_back(Op{kShiftedLog, n.a, 0});
            return true;
        case Kind::IterLog:
            if (!flatten(n.kids[0].node(), prog)) return false;
            prog.push_back(Op{kIterLog, n.a, n.depth});
            return true;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::AbsLog: {
            if (!flatten(n.kids[0].node(), prog)) return false;
            int code = n.kind == Kind::Sin   ? kSin
                       : n.kind == Kind::Cos ? kCos
                       : n.kind == Kind::Exp ? kExp
                                             : kAbsLog;
            prog.push_back(Op{code, 0, 0});
            return true;
        }
        case Kind::RecipAug: prog.push_back(Op{kRecipAug, 0, 0}); return true;
        case Kind::MinClamp: prog.push_back(Op{kMinClamp, n.a, 0}); return true;
        case Kind::Sum:
        case Kind::Product: {
            for (const auto& kid : n.kids)
                if (!flatten(kid.node(), prog)) return false;
            prog.push_back(Op{n.kind == Kind::Sum ? kSum : kProduct, 0,
                              int(n.kids.size())});
            return true;
        }
        case Kind::Piecewise: return false;
    }
    return false;
}

}  // namespace

double CompiledExpr::operator()(double s) const {
    if (prog_.empty()) return fallback_.eval(s);
    double st[64];
    int top = -1;
    for (const Op& op : prog_) {
        switch (op.code) {
            case kPushConst: st[++top] = op.a; break;
            case kPushVar: st[++top] = s; break;
            case kPowDyn: {
                double e = st[top--];
                double b = st[top];
                st[top] = b == 0.0 ? (e > 0 ? 0.0 : (e == 0 ? 1.0 : kInf))
                                   : std::pow(b, e);
                break;
            }
            case kPowSquare: st[top] *= st[top]; break;
            case kPowCube: st[top] = st[top] * st[top] * st[top]; break;
            case kPowConst: {
                double b = st[top];
                st[top] = b == 0.0 ? (op.a > 0 ? 0.0 : (op.a == 0 ? 1.0 : kInf))
                                   : std::pow(b, op.a);
                break;
            }
            case kShiftedLog: st[top] = std::log(op.a + st[top]); break;
            case kIterLog: {
                double v = op.a + st[top];
                for (int i = 0; i < op.k; ++i) v = std::log(v);
                st[top] = v;
                break;
            }
            case kSin: st[top] = std::sin(st[top]); break;
            case kCos: st[top] = std::cos(st[top]); break;
            case kExp: st[top] = std::exp(st[top]); break;
            case kAbsLog: st[top] = std::fabs(std::log(st[top])); break;
            case kRecipAug: st[++top] = s + 1.0 / s; break;
            case kMinClamp: st[++top] = std::min(std::pow(s, op.a), 1.0); break;
            case kSum: {
                double acc = 0.0;
                for (int i = 0; i < op.k; ++i) acc += st[top--];
                st[++top] = acc;
                break;
            }
            case kProduct: {
                double acc = 1.0;
                for (int i = 0; i < op.k; ++i) acc *= st[top--];
                st[++top] = acc;
                break;
            }
        }
    }
    return st[0];
}

CompiledExpr compile(const Expr& f) {
    CompiledExpr c;
    c.fallback_ = f;
    std::vector<CompiledExpr::Op> prog;
    // every op net-pushes at most one slot, so prog.size() bounds the stack
    if (flatten(f.node(), prog) && prog.size() < 64) c.prog_ = std::move(prog);
    return c;
}

std::vector<CatalogEntry> slow_variation_catalog() {
    using E = Expr;
    std::vector<CatalogEntry> cat;
    cat.push_back({"log(2+s)", E::shifted_log(2.0)});
    cat.push_back({"1/log(2+s)",
                   E::pow(E::shifted_log(2.0), E::constant(-1.0))});
    cat.push_back({"log(2+s+1/s)", E::shifted_log(2.0, E::recip_aug())});
    cat.push_back({"loglog(20+s+1/s)", E::iter_log(2, 20.0, E::recip_aug())});
    cat.push_back({"exp(|log s|^0.15)",
                   E::exp(E::pow(E::abs_log(E::var()), E::constant(0.15)))});
    {
        E w = E::pow(E::abs_log(E::var()), E::constant(0.15));
        cat.push_back({"exp(|log s|^0.15 cos(|log s|^0.15))",
                       E::exp(w * E::cos(w))});
    }
    // damped variant of log^{sin(loglog)}: the full-amplitude version drifts
    // like loglog(s)/log(s), which is still ~0.1 at s = 1e10
    cat.push_back({"log(3+s+1/s)^{0.2 sin(loglog(3+s+1/s))}",
                   E::pow(E::shifted_log(3.0, E::recip_aug()),
                          E::constant(0.2) *
                              E::sin(E::iter_log(2, 3.0, E::recip_aug())))});
    cat.push_back({"1+0.5 sin(log^0.25(2+s+1/s))",
                   E::constant(1.0) +
                       E::constant(0.5) *
                           E::sin(E::pow(E::shifted_log(2.0, E::recip_aug()),
                                         E::constant(0.25)))});
    return cat;
}

}  // namespace ulab::nonlin
