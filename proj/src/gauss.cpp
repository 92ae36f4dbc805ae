#include "jointsup/gauss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jointsup/errors.hpp"

namespace jointsup::gauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// Beyond this point the upper tail is taken from the Mills-ratio continued
// fraction instead of erfc.
constexpr double kContinuedFractionFrom = 30.0;
// bvn_sf values below this are recomputed by quadrature for relative accuracy.
constexpr double kRefineBelow = 1e-5;

// Mills ratio P(N > x) / pdf(x) by backward evaluation of
// 1 / (x + 1 / (x + 2 / (x + 3 / (x + ...)))). Converges fast for x >= 30.
double mills_ratio_cf(double x) {
    double tail = x;
    for (int k = 60; k >= 1; --k) tail = x + k / tail;
    return 1.0 / tail;
}

// log of the Mills ratio P(N > x) / pdf(x) for x >= 0.
double log_mills(double x);

void check_finite(double x, const char* field) {
    if (std::isnan(x)) throw ValidationError(field, "must not be NaN");
}

// Gauss-Legendre half-rules on [-1, 1] (positive nodes, matching weights)
// for 6, 12 and 20 points.
constexpr std::array<double, 3> kW6 = {0.1713244923791705, 0.3607615730481384,
                                       0.4679139345726904};
constexpr std::array<double, 3> kX6 = {0.9324695142031522, 0.6612093864662647,
                                       0.2386191860831970};
constexpr std::array<double, 6> kW12 = {0.04717533638651177, 0.1069393259953183,
                                        0.1600783285433464,  0.2031674267230659,
                                        0.2334925365383547,  0.2491470458134029};
constexpr std::array<double, 6> kX12 = {0.9815606342467191, 0.9041172563704750,
                                        0.7699026741943050, 0.5873179542866171,
                                        0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 10> kW20 = {
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
    0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
    0.1491729864726037,  0.1527533871307259};
constexpr std::array<double, 10> kX20 = {
    0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
    0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
    0.2277858511416451, 0.07652652113349733};

template <std::size_t N>
double upper_orthant_impl(double h, double k, double r, const std::array<double, N>& w,
                          const std::array<double, N>& x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double hk = h * k;
    double bvn = 0.0;
    if (std::abs(r) < 0.925) {
        // Integrate the density of the correlation parameter over [0, asin r].
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r) / 2.0;
        for (std::size_t i = 0; i < N; ++i) {
            for (const double node : {1.0 - x[i], 1.0 + x[i]}) {
                const double sn = std::sin(asr * node);
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        return bvn * asr / two_pi + norm_sf(h) * norm_sf(k);
    }
    // |r| close to one: expand around the perfectly correlated limit.
    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::abs(r) < 1.0) {
        const double as = 1.0 - r * r;
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 80.0;
        double asr = -(bs / as + hk) / 2.0;
        if (asr > -100.0) {
            bvn = a * std::exp(asr) *
                  (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        }
        if (hk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(two_pi) * norm_sf(b / a);
            bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a /= 2.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            for (const double node : {1.0 - x[i], 1.0 + x[i]}) {
                const double xs = (a * node) * (a * node);
                asr = -(bs / xs + hk) / 2.0;
                if (asr > -100.0) {
                    const double rs = std::sqrt(1.0 - xs);
                    const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                    const double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
                    acc += w[i] * std::exp(asr) * (sp - ep);
                }
            }
        }
        bvn = (a * acc - bvn) / two_pi;
    }
    if (r > 0.0) return bvn + norm_sf(std::max(h, k));
    if (h >= k) return -bvn;
    const double between = h < 0.0 ? norm_cdf(k) - norm_cdf(h) : norm_sf(h) - norm_sf(k);
    return between - bvn;
}

// P(X > h, Y > k) for finite h, k and |r| < 1 (Drezner-Wesolowsky / Genz).
double upper_orthant(double h, double k, double r) {
    // The kernel is symmetric in (h, k) mathematically; fix the order so it
    // is symmetric in floating point as well.
    if (h < k) std::swap(h, k);
    if (r == 0.0) return norm_sf(h) * norm_sf(k);
    double v;
    const double ar = std::abs(r);
    if (ar < 0.3) {
        v = upper_orthant_impl(h, k, r, kW6, kX6);
    } else if (ar < 0.75) {
        v = upper_orthant_impl(h, k, r, kW12, kX12);
    } else {
        v = upper_orthant_impl(h, k, r, kW20, kX20);
    }
    return std::clamp(v, 0.0, 1.0);
}

void check_rho(double rho) {
    check_finite(rho, "rho");
    if (std::abs(rho) > 1.0) throw ValidationError("rho", "correlation must lie in [-1, 1]");
}

bool is_degenerate(double rho) { return 1.0 - std::abs(rho) < kDegenerateCorrelation; }

// P(lo < N <= hi) for lo <= hi, accurate in either tail.
double normal_interval(double lo, double hi) {
    if (hi <= lo) return 0.0;
    if (lo >= 0.0) return norm_sf(lo) - norm_sf(hi);
    if (hi <= 0.0) return norm_cdf(hi) - norm_cdf(lo);
    return 1.0 - norm_cdf(lo) - norm_sf(hi);
}

}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return norm_sf(-x); }

double norm_sf(double x) {
    check_finite(x, "x");
    return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
}

LogProb log_norm_sf(double x) {
    check_finite(x, "x");
    if (std::isinf(x)) {
        return x > 0 ? LogProb{-kInf, 0.0, true} : LogProb{0.0, 1.0, false};
    }
    double lp;
    if (x < 0.0) {
        lp = std::log1p(-0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0));
    } else if (x <= kContinuedFractionFrom) {
        lp = std::log(0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0));
    } else {
        lp = -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio_cf(x));
    }
    return LogProb::from_log(std::min(lp, 0.0));
}

namespace {

double log_mills(double x) {
    if (x > kContinuedFractionFrom) return std::log(mills_ratio_cf(x));
    return log_norm_sf(x).log_p + 0.5 * x * x + kLogSqrt2Pi;
}

}  // namespace

double norm_sf_asym(double x) {
    check_finite(x, "x");
    if (!(x > 0.0)) throw ValidationError("x", "Mills-ratio asymptotic requires x > 0");
    return norm_pdf(x) / x;
}

double inv_mills(double x) {
    if (x > kContinuedFractionFrom) return 1.0 / mills_ratio_cf(x);
    if (x < -38.0) return 0.0;
    return std::exp(-0.5 * x * x - kLogSqrt2Pi - log_norm_sf(x).log_p);
}

double bvn_cdf(const BvnQuery& q) {
    check_rho(q.rho);
    check_finite(q.s, "s");
    check_finite(q.t, "t");
    if (q.s == -kInf || q.t == -kInf) return 0.0;
    if (q.s == kInf) return norm_cdf(q.t);
    if (q.t == kInf) return norm_cdf(q.s);
    if (is_degenerate(q.rho)) {
        if (q.rho > 0.0) return norm_cdf(std::min(q.s, q.t));
        return normal_interval(-q.t, q.s);
    }
    return upper_orthant(-q.s, -q.t, q.rho);
}

double bvn_sf(const BvnQuery& q) {
    check_rho(q.rho);
    check_finite(q.s, "s");
    check_finite(q.t, "t");
    if (q.s == kInf || q.t == kInf) return 0.0;
    if (q.s == -kInf) return norm_sf(q.t);
    if (q.t == -kInf) return norm_sf(q.s);
    if (is_degenerate(q.rho)) {
        if (q.rho > 0.0) return norm_sf(std::max(q.s, q.t));
        return normal_interval(q.s, -q.t);
    }
    const double v = upper_orthant(q.s, q.t, q.rho);
    if (v >= kRefineBelow) return v;
    return log_bvn_sf(q).p;
}

LogProb log_bvn_sf(const BvnQuery& in) {
    check_rho(in.rho);
    check_finite(in.s, "s");
    check_finite(in.t, "t");
    if (std::isinf(in.s)) throw ValidationError("s", "log_bvn_sf requires a finite limit");
    if (std::isinf(in.t)) throw ValidationError("t", "log_bvn_sf requires a finite limit");
    if (is_degenerate(in.rho)) {
        throw ValidationError("rho", "log_bvn_sf requires |rho| < 1 - 1e-12");
    }
    if (in.rho == 0.0) {
        return LogProb::from_log(log_norm_sf(in.s).log_p + log_norm_sf(in.t).log_p);
    }

    // Integrating over the larger limit keeps the conditional factor smooth
    // when |rho| is close to one.
    const BvnQuery q{in.rho, std::max(in.s, in.t), std::min(in.s, in.t)};
    const double rho = q.rho;
    const double qq = std::sqrt((1.0 - rho) * (1.0 + rho));
    const double slope = rho / qq;
    const auto u_of = [&](double x) { return (q.t - rho * x) / qq; };
    // log of the integrand and its derivative; the integrand is log-concave
    // with curvature at least one.
    const auto h = [&](double x) {
        return -0.5 * x * x - kLogSqrt2Pi + log_norm_sf(u_of(x)).log_p;
    };
    const auto dh = [&](double x) { return -x + slope * inv_mills(u_of(x)); };

    double mode = q.s;
    const double d_at_s = dh(q.s);
    if (d_at_s > 0.0) {
        double lo = q.s;
        double step = 1.0;
        double hi = q.s + step;
        while (dh(hi) > 0.0) {
            lo = hi;
            step *= 2.0;
            hi = q.s + step;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (dh(mid) > 0.0 ? lo : hi) = mid;
        }
        mode = 0.5 * (lo + hi);
    }

    const double um = u_of(mode);
    const double lam = inv_mills(um);
    const double curvature = 1.0 + slope * slope * std::max(lam * (lam - um), 0.0);
    double width = 1.0 / std::sqrt(curvature);
    if (mode == q.s && d_at_s < 0.0) width = std::min(width, 1.0 / -d_at_s);

    // exp(h(x) - h(mode)) with the quadratic parts differenced exactly;
    // h itself can be ~1e9 in magnitude when |rho| is close to one.
    const double h_mode = h(mode);
    const double u_mode = u_of(mode);
    const double log_mills_mode = u_mode > 0.0 ? log_mills(u_mode) : 0.0;
    const double sf_mode = log_norm_sf(u_mode).log_p;
    // Parametrized by the offset d from the mode so that nodes keep full
    // resolution on very narrow pieces.
    const auto g = [&](double d) {
        const double du = -rho * d / qq;
        const double ux = u_mode + du;
        double tail;
        if (u_mode > 0.0 && ux > 0.0) {
            tail = -0.5 * du * (ux + u_mode) + log_mills(ux) - log_mills_mode;
        } else {
            tail = log_norm_sf(ux).log_p - sf_mode;
        }
        return std::exp(-0.5 * d * (2.0 * mode + d) + tail);
    };
    // Concavity with curvature >= 1 bounds the integrand by exp(-r^2 / 2) at
    // distance r from the mode; 40 units leaves < e^-800 of the mass.
    constexpr double kReach = 40.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

    // The integrand decreases away from the mode, so once g(start) times the
    // remaining length is negligible against `scale` the side is finished.
    const auto integrate_side = [&](double dir, double limit, double scale) {
        double total = 0.0;
        double from = 0.0;
        double to = std::min(width, limit);
        while (from < limit) {
            const double a = dir * from;
            if (from > 0.0 && g(a) * (limit - from) < 1e-18 * (scale + total)) break;
            const double b = dir * to;
            // Boost 1.74 compares an unscaled error estimate with a scaled
            // tolerance, so every piece is mapped onto [0, 1].
            const double lo = std::min(a, b);
            const double len = std::abs(b - a);
            total += GK::integrate([&](double tau) { return len * g(lo + len * tau); }, 0.0, 1.0,
                                   15, 1e-12);
            from = to;
            to = std::min(to * 2.0, limit);
        }
        return total;
    };

    double mass = integrate_side(1.0, kReach, 0.0);
    if (mode > q.s) mass += integrate_side(-1.0, std::min(kReach, mode - q.s), mass);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw NumericalIntegrityError("log_bvn_sf: quadrature produced a non-positive mass");
    }
    return LogProb::from_log(std::min(h_mode + std::log(mass), 0.0));
}

}  // namespace jointsup::gauss
