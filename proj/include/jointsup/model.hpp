#pragma once

#include <limits>
#include <optional>

namespace jointsup {

/// Relative tolerance for equality comparisons between critical times and
/// the horizon. Case boundaries of the many-source classification are exact
/// equalities and must be reachable from exact decimal inputs.
inline constexpr double kTieTolerance = 1e-12;

/// |x - y| <= tol * max(|x|, |y|).
bool nearly_equal(double x, double y, double tol = kTieTolerance);

/// Two drifted Brownian boundaries driven by the same Brownian motion:
/// sup (sigma_i B(t) - c_i t) > a_i, i = 1, 2.
struct ModelParams {
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double a1 = 1.0;
    double a2 = 1.0;
};

/// The single (threshold, drift) pair that decides a degenerate problem.
struct BindingPair {
    double a = 0.0;
    double c = 0.0;
};

/// Unit-volatility form with c1 >= c2. A non-degenerate instance satisfies
/// c1 > c2 and 0 < a1 < a2; otherwise `binding` carries the pair whose
/// one-dimensional crossing probability equals the joint one.
struct NormalizedParams {
    double c1 = 0.0;
    double c2 = 0.0;
    double a1 = 1.0;
    double a2 = 1.0;
    bool degenerate = false;
    std::optional<BindingPair> binding;
    bool swapped = false;  ///< components were exchanged relative to the input
};

/// Divides drifts and thresholds by the volatilities, orders the components
/// by decreasing drift and detects degeneracy. Throws ValidationError for
/// non-positive volatilities or thresholds and for non-finite inputs.
NormalizedParams normalize(const ModelParams& p);

/// Shorthand for unit volatilities.
NormalizedParams normalize(double a1, double a2, double c1, double c2);

/// Critical times of a non-degenerate instance. t1, t2 and t_tilde are only
/// defined when the relevant drift is positive.
struct CriticalTimes {
    double t_star = 0.0;                 ///< (a2 - a1) / (c1 - c2): boundaries intersect
    std::optional<double> t1;            ///< a1 / c1
    std::optional<double> t2;            ///< a2 / c2
    std::optional<double> t_tilde;       ///< (a2 - 2 a1) / c2
};

CriticalTimes critical_times(const NormalizedParams& p);

/// Finite horizon T > 0 or the infinite sentinel.
struct Horizon {
    double T = 1.0;

    static Horizon infinite() { return Horizon{std::numeric_limits<double>::infinity()}; }
    bool is_infinite() const { return T == std::numeric_limits<double>::infinity(); }
};

/// Throws ValidationError unless T is finite and positive.
void validate_horizon(double T, const char* field = "T");

}  // namespace jointsup
