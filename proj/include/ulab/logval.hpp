#pragma once

#include <cmath>
#include <limits>

namespace ulab {

// Signed value carried in log-magnitude form: value = sign * exp(lg).
// sign == 0 encodes an exact zero (lg is then -inf by convention).
struct LogVal {
    double lg = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogVal zero() { return {}; }

    static LogVal from_double(double v) {
        if (v == 0.0) return {};
        return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
    }

    static LogVal pos(double lg_) { return {lg_, 1}; }

    // Clamp to double range; overflows become +-inf.
    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(lg);
    }

    bool finite() const {
        return sign == 0 || std::isfinite(lg);
    }
};

inline LogVal log_mul(const LogVal& a, const LogVal& b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.lg + b.lg, a.sign * b.sign};
}

// log-domain a + b via logsumexp with signs.
inline LogVal log_add(const LogVal& a, const LogVal& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const LogVal& hi = (a.lg >= b.lg) ? a : b;
    const LogVal& lo = (a.lg >= b.lg) ? b : a;
    double r = std::exp(lo.lg - hi.lg);  // in [0,1]
    double acc = 1.0 + hi.sign * lo.sign * r;
    if (acc == 0.0) return {};
    return {hi.lg + std::log(acc), hi.sign};
}

// log(x + e^t) for x > 0, stable for any t.
inline double log_shifted_exp(double shift, double t) {
    if (t > 40.0 + std::log(shift > 0 ? shift : 1.0))
        return t + std::log1p(shift * std::exp(-t));
    return std::log(shift + std::exp(t));
}

}  // namespace ulab
