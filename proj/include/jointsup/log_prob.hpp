#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace jointsup {

/// A probability carried in the log domain. `p` is the linear value when it
/// is a normal double; otherwise `underflow` is set and `p` is 0.
struct LogProb {
    double log_p = 0.0;
    double p = 1.0;
    bool underflow = false;

    static LogProb from_log(double log_p) {
        LogProb r;
        r.log_p = log_p;
        const double v = std::exp(log_p);
        if (v < std::numeric_limits<double>::min()) {
            r.p = 0.0;
            r.underflow = true;
        } else {
            r.p = v;
        }
        return r;
    }
};

/// log(exp(x) + exp(y)) without overflow; either argument may be -inf.
inline double log_add_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    if (x < y) std::swap(x, y);
    return x + std::log1p(std::exp(y - x));
}

/// log(exp(x) - exp(y)) for x >= y.
inline double log_sub_exp(double x, double y) {
    if (y == -std::numeric_limits<double>::infinity()) return x;
    if (y >= x) return -std::numeric_limits<double>::infinity();
    const double d = y - x;
    // Two regimes keep the relative error at a few ulp (Maechler's log1mexp).
    return x + (d > -M_LN2 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d)));
}

}  // namespace jointsup
