#include "jointsup/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jointsup/errors.hpp"
#include "jointsup/gauss.hpp"

namespace jointsup {

using gauss::BvnQuery;
using gauss::bvn_cdf;
using gauss::bvn_sf;
using gauss::norm_sf;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kClampSlack = 1e-10;
constexpr double kCancellationFloor = 1e-9;

// value * exp(log_factor) without overflowing the factor on its own.
double scaled(double log_factor, double value) {
    if (value == 0.0) return 0.0;
    if (log_factor < 700.0) return value * std::exp(log_factor);
    return std::copysign(std::exp(log_factor + std::log(std::abs(value))), value);
}

double checked_probability(double p, const char* what) {
    if (!std::isfinite(p)) {
        throw NumericalIntegrityError(std::string(what) + ": non-finite value");
    }
    if (p < -kClampSlack || p > 1.0 + kClampSlack) {
        throw NumericalIntegrityError(std::string(what) + ": value " + std::to_string(p) +
                                      " is outside [0, 1] beyond rounding");
    }
    return std::clamp(p, 0.0, 1.0);
}

ProbabilityResult make_result(double p, Branch branch) {
    ProbabilityResult r;
    r.p = p;
    r.log_p = p > 0.0 ? std::log(p) : kNegInf;
    r.branch = branch;
    return r;
}

// Shared geometry of the full-branch expressions.
struct FullGeometry {
    double t_star, sqrt_ts, sqrt_T, r;
    double log_e1, log_e2, log_e4;  // logs of the three exponential weights
};

FullGeometry full_geometry(const NormalizedParams& p, double T) {
    FullGeometry g;
    g.t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
    g.sqrt_ts = std::sqrt(g.t_star);
    g.sqrt_T = std::sqrt(T);
    g.r = std::sqrt(g.t_star / T);
    g.log_e1 = -2.0 * p.a1 * p.c1;
    g.log_e2 = -2.0 * p.a2 * p.c2;
    g.log_e4 = -2.0 * (p.a1 * (p.c1 - 2.0 * p.c2) + p.a2 * p.c2);
    return g;
}

void require_full_branch(const NormalizedParams& p, double T, const char* what) {
    if (p.degenerate) throw ValidationError("params", std::string(what) + " needs a non-degenerate instance");
    if (!((p.a2 - p.a1) / (p.c1 - p.c2) < T)) {
        throw ValidationError("T", std::string(what) + " requires t* < T");
    }
}

LogProb log_pi1d(double a, double c, double T) {
    const double st = std::sqrt(T);
    const double first = gauss::log_norm_sf((a + c * T) / st).log_p;
    const double second = -2.0 * a * c + gauss::log_norm_sf((a - c * T) / st).log_p;
    return LogProb::from_log(std::min(log_add_exp(first, second), 0.0));
}

// log Psi2 for any finite limits, including correlations at +-1.
double log_bvn_tail(double rho, double s, double t) {
    if (1.0 - std::abs(rho) < gauss::kDegenerateCorrelation) {
        if (rho > 0.0) return gauss::log_norm_sf(std::max(s, t)).log_p;
        const double lo = s;
        const double hi = -t;
        if (hi <= lo) return kNegInf;
        const double a = gauss::log_norm_sf(lo).log_p;
        const double b = gauss::log_norm_sf(hi).log_p;
        return log_sub_exp(a, b);
    }
    return gauss::log_bvn_sf(BvnQuery{rho, s, t}).log_p;
}

struct SignedLog {
    int sign = 0;  // -1, 0, +1
    double log_abs = kNegInf;
};

// P(N > x) - P(N > y) with relative precision in either tail.
SignedLog tail_difference(double x, double y) {
    if (x == y) return {};
    const int sign = x < y ? 1 : -1;
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    double v;
    if (lo >= 0.0) {
        v = log_sub_exp(gauss::log_norm_sf(lo).log_p, gauss::log_norm_sf(hi).log_p);
    } else if (hi <= 0.0) {
        v = log_sub_exp(gauss::log_norm_cdf(hi).log_p, gauss::log_norm_cdf(lo).log_p);
    } else {
        v = std::log1p(-(gauss::norm_cdf(lo) + norm_sf(hi)));
    }
    return {sign, v};
}

}  // namespace

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::dim_reduced: return "dim-reduced";
        case Branch::full: return "full";
        case Branch::infinite_horizon: return "infinite-horizon";
    }
    return "unknown";
}

ProbabilityResult pi1d(double a, double c, double T) {
    if (!std::isfinite(a) || !(a > 0.0)) throw ValidationError("a", "threshold must be > 0");
    if (!std::isfinite(c)) throw ValidationError("c", "drift must be finite");
    validate_horizon(T);
    const double st = std::sqrt(T);
    const double p = norm_sf((a + c * T) / st) + scaled(-2.0 * a * c, norm_sf((a - c * T) / st));
    ProbabilityResult r = make_result(checked_probability(p, "pi1d"), Branch::dim_reduced);
    if (r.p < 1e-280) r.log_p = log_pi1d(a, c, T).log_p;
    return r;
}

ProbabilityResult pi_joint(const NormalizedParams& p, double T) {
    validate_horizon(T);
    if (p.degenerate) return pi1d(p.binding->a, p.binding->c, T);
    const double t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
    if (t_star >= T) return pi1d(p.a2, p.c2, T);

    const FullGeometry g = full_geometry(p, T);
    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2;
    const double ts = g.t_star;

    FullBranchTerms terms;
    terms[0] = norm_sf((a1 + c1 * T) / g.sqrt_T) -
               bvn_sf({-g.r, (a1 + c1 * ts) / g.sqrt_ts, -(a2 + c2 * T) / g.sqrt_T});
    terms[1] = scaled(g.log_e1,
                      norm_sf((a1 - c1 * T) / g.sqrt_T) -
                          bvn_sf({g.r, (a1 - c1 * ts) / g.sqrt_ts,
                                  ((2.0 * a1 - a2) - c2 * T) / g.sqrt_T}));
    terms[2] = scaled(g.log_e2,
                      bvn_sf({g.r, (a2 - c2 * ts) / g.sqrt_ts, (a2 - c2 * T) / g.sqrt_T}));
    terms[3] = scaled(g.log_e4, bvn_sf({-g.r, ((2.0 * a1 - a2) + c2 * ts) / g.sqrt_ts,
                                        ((a2 - 2.0 * a1) - c2 * T) / g.sqrt_T}));

    const double sum = terms[0] + terms[1] + terms[2] + terms[3];
    ProbabilityResult r = make_result(checked_probability(sum, "pi_joint"), Branch::full);
    r.terms = terms;
    return r;
}

ProbabilityResult pi_infinite(const NormalizedParams& p) {
    const auto one_dim = [](double a, double c) {
        const double v = c > 0.0 ? std::exp(-2.0 * a * c) : 1.0;
        ProbabilityResult r = make_result(v, Branch::infinite_horizon);
        if (c > 0.0) r.log_p = -2.0 * a * c;
        return r;
    };
    if (p.degenerate) return one_dim(p.binding->a, p.binding->c);
    // sup (B(t) - c2 t) over [0, inf) is a.s. infinite when c2 <= 0.
    if (p.c2 <= 0.0) return one_dim(p.a1, p.c1);

    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2;
    const double ts = (a2 - a1) / (c1 - c2);
    const double st = std::sqrt(ts);
    const double k = c1 - 2.0 * c2;
    const double v = scaled(-2.0 * (a1 * k + a2 * c2), gauss::norm_cdf((k * ts - a1) / st)) +
                     scaled(-2.0 * a1 * c1, norm_sf((c1 * ts - a1) / st)) +
                     scaled(-2.0 * a2 * c2, norm_sf((k * ts + a1) / st)) -
                     norm_sf((c1 * ts + a1) / st);
    return make_result(checked_probability(v, "pi_infinite"), Branch::infinite_horizon);
}

double bridge_no_cross(double L, double y, double b) {
    if (!std::isfinite(L) || !(L > 0.0)) throw ValidationError("L", "bridge length must be > 0");
    if (!std::isfinite(y)) throw ValidationError("y", "endpoint must be finite");
    if (!std::isfinite(b) || b < 0.0) throw ValidationError("b", "level must be >= 0");
    if (b - y < 0.0) throw ValidationError("b", "level must not lie below the bridge endpoint");
    return -std::expm1(-2.0 * b * (b - y) / L);
}

double boundary_no_cross(const NormalizedParams& p, double T) {
    validate_horizon(T);
    require_full_branch(p, T, "boundary_no_cross");
    const FullGeometry g = full_geometry(p, T);
    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2;
    const double ts = g.t_star;
    const double k = c1 - 2.0 * c2;

    const double i1 = bvn_cdf({g.r, (a1 + c1 * ts) / g.sqrt_ts, (a2 + c2 * T) / g.sqrt_T});
    const double i2 = scaled(g.log_e1, bvn_cdf({g.r, (-a1 + c1 * ts) / g.sqrt_ts,
                                                ((a2 - 2.0 * a1) + c2 * T) / g.sqrt_T}));
    const double i3 = scaled(g.log_e2,
                             bvn_cdf({-g.r, (a1 + k * ts) / g.sqrt_ts, (-a2 + c2 * T) / g.sqrt_T}));
    const double i4 = scaled(g.log_e4, bvn_cdf({-g.r, (-a1 + k * ts) / g.sqrt_ts,
                                                ((2.0 * a1 - a2) + c2 * T) / g.sqrt_T}));
    return checked_probability(i1 - i2 - i3 + i4, "boundary_no_cross");
}

LogProb log_pi_joint(const NormalizedParams& p, double T) {
    validate_horizon(T);
    if (p.degenerate) return log_pi1d(p.binding->a, p.binding->c, T);
    const double t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
    if (t_star >= T) return log_pi1d(p.a2, p.c2, T);

    const FullGeometry g = full_geometry(p, T);
    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2;
    const double ts = g.t_star;

    const double alpha0 = (a1 + c1 * T) / g.sqrt_T;
    const double alpha1 = (a1 + c1 * ts) / g.sqrt_ts;
    const double alpha2 = (a1 - c1 * ts) / g.sqrt_ts;
    const double alpha3 = (a2 - c2 * ts) / g.sqrt_ts;
    const double alpha4 = ((2.0 * a1 - a2) + c2 * ts) / g.sqrt_ts;
    const double beta0 = (a1 - c1 * T) / g.sqrt_T;
    const double beta1 = (a2 + c2 * T) / g.sqrt_T;
    const double beta2 = ((2.0 * a1 - a2) - c2 * T) / g.sqrt_T;
    const double beta3 = (a2 - c2 * T) / g.sqrt_T;
    const double beta4 = ((a2 - 2.0 * a1) - c2 * T) / g.sqrt_T;

    // Psi2(-r; s, -t) = Psi(s) - Psi2(r; s, t) and
    // Psi2(r; s, t) = Psi(t) - Psi2(-r; -s, t) turn the two bracketed
    // differences into non-negative pieces.
    std::vector<SignedLog> parts;
    parts.push_back(tail_difference(alpha0, alpha1));
    parts.push_back({1, log_bvn_tail(g.r, alpha1, beta1)});
    SignedLog diff = tail_difference(beta0, beta2);
    diff.log_abs += g.log_e1;
    parts.push_back(diff);
    parts.push_back({1, g.log_e1 + log_bvn_tail(-g.r, -alpha2, beta2)});
    parts.push_back({1, g.log_e2 + log_bvn_tail(g.r, alpha3, beta3)});
    parts.push_back({1, g.log_e4 + log_bvn_tail(-g.r, alpha4, beta4)});

    double top = kNegInf;
    for (const auto& s : parts) {
        if (s.sign != 0) top = std::max(top, s.log_abs);
    }
    if (top == kNegInf) return LogProb::from_log(kNegInf);
    double pos = 0.0, neg = 0.0;
    for (const auto& s : parts) {
        if (s.sign > 0) pos += std::exp(s.log_abs - top);
        if (s.sign < 0) neg += std::exp(s.log_abs - top);
    }
    const double net = pos - neg;
    if (!(net > kCancellationFloor)) {
        throw CancellationError("log_pi_joint: signed terms cancel below 1e-9 of the largest term");
    }
    return LogProb::from_log(std::min(top + std::log(net), 0.0));
}

}  // namespace jointsup
