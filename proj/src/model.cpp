#include "jointsup/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "jointsup/errors.hpp"

namespace jointsup {

bool nearly_equal(double x, double y, double tol) {
    if (x == y) return true;
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

namespace {

void require_positive(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
    if (!(v > 0.0)) throw ValidationError(field, "must be > 0");
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

}  // namespace

NormalizedParams normalize(const ModelParams& p) {
    require_positive(p.sigma1, "sigma1");
    require_positive(p.sigma2, "sigma2");
    require_finite(p.c1, "c1");
    require_finite(p.c2, "c2");
    require_positive(p.a1, "a1");
    require_positive(p.a2, "a2");

    NormalizedParams n;
    n.c1 = p.c1 / p.sigma1;
    n.a1 = p.a1 / p.sigma1;
    n.c2 = p.c2 / p.sigma2;
    n.a2 = p.a2 / p.sigma2;

    // Order by decreasing drift; equal drifts put the smaller threshold first
    // so the result does not depend on the input order.
    if (n.c1 < n.c2 || (n.c1 == n.c2 && n.a1 > n.a2)) {
        std::swap(n.c1, n.c2);
        std::swap(n.a1, n.a2);
        n.swapped = true;
    }

    if (nearly_equal(n.c1, n.c2)) {
        // Parallel boundaries: the upper one is crossed only after the lower.
        n.degenerate = true;
        n.binding = n.a1 >= n.a2 ? BindingPair{n.a1, n.c1} : BindingPair{n.a2, n.c2};
    } else if (n.a1 >= n.a2) {
        // a1 + c1 t >= a2 + c2 t for all t >= 0.
        n.degenerate = true;
        n.binding = BindingPair{n.a1, n.c1};
    }
    return n;
}

NormalizedParams normalize(double a1, double a2, double c1, double c2) {
    return normalize(ModelParams{1.0, 1.0, c1, c2, a1, a2});
}

CriticalTimes critical_times(const NormalizedParams& p) {
    if (p.degenerate) {
        throw ValidationError("params", "critical times need a non-degenerate instance");
    }
    CriticalTimes ct;
    ct.t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
    if (p.c1 > 0.0) ct.t1 = p.a1 / p.c1;
    if (p.c2 > 0.0) {
        ct.t2 = p.a2 / p.c2;
        ct.t_tilde = (p.a2 - 2.0 * p.a1) / p.c2;
    }
    return ct;
}

void validate_horizon(double T, const char* field) {
    if (std::isnan(T) || std::isinf(T)) throw ValidationError(field, "horizon must be finite");
    if (!(T > 0.0)) throw ValidationError(field, "horizon must be > 0");
}

}  // namespace jointsup
