#include "jointsup/asymptotics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "jointsup/errors.hpp"
#include "jointsup/exact.hpp"
#include "jointsup/gauss.hpp"

namespace jointsup {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_many_source(const NormalizedParams& p, double T) {
    validate_horizon(T);
    if (p.degenerate) {
        throw ValidationError("params", "many-source asymptotics need a non-degenerate instance");
    }
    if (!(p.c2 > 0.0)) {
        throw ValidationError("c2", "many-source asymptotics need c1 > c2 > 0");
    }
}

AsymptoticForm power_law(double sqrt_prefactor_sum, double rate) {
    return AsymptoticForm{kInvSqrt2Pi * sqrt_prefactor_sum, -0.5, rate, FormKind::equivalence};
}

AsymptoticForm pure_exponential(double prefactor, double rate) {
    return AsymptoticForm{prefactor, 0.0, rate, FormKind::equivalence};
}

}  // namespace

std::string_view to_string(FormKind k) {
    switch (k) {
        case FormKind::equivalence: return "equivalence";
        case FormKind::upper_bound: return "upper-bound";
        case FormKind::two_sided_bound: return "two-sided-bound";
    }
    return "unknown";
}

std::string_view to_string(RegimeCase c) {
    static constexpr std::array<std::string_view, kRegimeCaseCount> labels = {
        "T21-i",    "T21-ii",   "T21-iii",  "T25-ia",   "T25-ib",   "T25-ic", "T25-ii",
        "T25-iiia", "T25-iiib", "T25-iiic", "T25-iiid", "T25-iiie", "T25-iv", "T25-v"};
    return labels[static_cast<std::size_t>(c)];
}

RegimeCase many_source_classify(const NormalizedParams& p, double T) {
    require_many_source(p, T);
    const CriticalTimes ct = critical_times(p);
    const double ts = ct.t_star;
    const double t1 = *ct.t1;
    const double t2 = *ct.t2;
    const double tt = *ct.t_tilde;

    if (ts > T || nearly_equal(ts, T)) {
        if (nearly_equal(t2, T)) return RegimeCase::T21_ii;
        return t2 > T ? RegimeCase::T21_i : RegimeCase::T21_iii;
    }
    if (nearly_equal(ts, t1)) return RegimeCase::T25_ii;
    if (ts < t1) {
        if (nearly_equal(T, t1)) return RegimeCase::T25_ib;
        return T < t1 ? RegimeCase::T25_ia : RegimeCase::T25_ic;
    }
    if (nearly_equal(ts, t2)) return RegimeCase::T25_iv;
    if (t2 < ts) return RegimeCase::T25_v;
    // t1 < t* < t2
    if (nearly_equal(T, tt)) return RegimeCase::T25_iiib;
    if (T < tt) return RegimeCase::T25_iiia;
    if (nearly_equal(tt, ts)) return RegimeCase::T25_iiid;
    return tt < ts ? RegimeCase::T25_iiic : RegimeCase::T25_iiie;
}

AsymptoticForm many_source_asym(const NormalizedParams& p, double T) {
    const RegimeCase rc = many_source_classify(p, T);
    const double a1 = p.a1, a2 = p.a2, c1 = p.c1, c2 = p.c2;
    const double ts = (a2 - a1) / (c1 - c2);
    const double sT = std::sqrt(T);
    const double sts = std::sqrt(ts);
    const double rate_joint = 2.0 * (a1 * (c1 - 2.0 * c2) + a2 * c2);

    AsymptoticForm f;
    switch (rc) {
        case RegimeCase::T21_i:
            f = power_law(sT / (a2 + c2 * T) + sT / (a2 - c2 * T),
                          (a2 + c2 * T) * (a2 + c2 * T) / (2.0 * T));
            break;
        case RegimeCase::T21_ii: f = pure_exponential(0.5, 2.0 * a2 * c2); break;
        case RegimeCase::T21_iii: f = pure_exponential(1.0, 2.0 * a2 * c2); break;
        case RegimeCase::T25_ia:
            f = power_law(sT / (a1 + c1 * T) + sT / (a1 - c1 * T),
                          (a1 + c1 * T) * (a1 + c1 * T) / (2.0 * T));
            break;
        case RegimeCase::T25_ib: f = pure_exponential(0.5, 2.0 * a1 * c1); break;
        case RegimeCase::T25_ic: f = pure_exponential(1.0, 2.0 * a1 * c1); break;
        case RegimeCase::T25_ii: f = pure_exponential(0.5, 2.0 * a1 * c1); break;
        case RegimeCase::T25_iiia: {
            const double d = (2.0 * a1 - a2) - c2 * T;
            f = power_law(sT / ((a2 - 2.0 * a1) - c2 * T) - sT / d,
                          (d * d + 4.0 * a1 * c1 * T) / (2.0 * T));
            break;
        }
        case RegimeCase::T25_iiib: f = pure_exponential(0.5, rate_joint); break;
        case RegimeCase::T25_iiic:
            f = power_law(sts / (a2 - c2 * ts) + sts / ((2.0 * a1 - a2) + c2 * ts) -
                              sts / (a1 + c1 * ts) - sts / (a1 - c1 * ts),
                          (a1 + c1 * ts) * (a1 + c1 * ts) / (2.0 * ts));
            break;
        case RegimeCase::T25_iiid: f = pure_exponential(0.5, rate_joint); break;
        case RegimeCase::T25_iiie: f = pure_exponential(1.0, rate_joint); break;
        case RegimeCase::T25_iv: f = pure_exponential(0.5, 2.0 * a2 * c2); break;
        case RegimeCase::T25_v: f = pure_exponential(1.0, 2.0 * a2 * c2); break;
    }
    // Positivity of the summed prefactor is not guaranteed analytically in
    // every configuration; surface a violation instead of returning it.
    if (!(f.prefactor > 0.0) || !std::isfinite(f.prefactor)) {
        throw NumericalIntegrityError("many_source_asym: non-positive prefactor " +
                                      std::to_string(f.prefactor) + " in case " +
                                      std::string(to_string(rc)));
    }
    if (!(f.rate > 0.0)) {
        throw NumericalIntegrityError("many_source_asym: non-positive rate in case " +
                                      std::string(to_string(rc)));
    }
    return f;
}

LogProb eval_asym(const AsymptoticForm& f, double N) {
    if (!std::isfinite(N) || !(N > 0.0)) throw ValidationError("N", "must be > 0");
    return LogProb::from_log(std::log(f.prefactor) + f.power * std::log(N) - f.rate * N);
}

NormalizedParams many_source_scaled(const NormalizedParams& p, double N) {
    if (!std::isfinite(N) || !(N > 0.0)) throw ValidationError("N", "must be > 0");
    const double s = std::sqrt(N);
    NormalizedParams q = p;
    q.a1 *= s;
    q.a2 *= s;
    q.c1 *= s;
    q.c2 *= s;
    if (q.binding) {
        q.binding->a *= s;
        q.binding->c *= s;
    }
    return q;
}

LogProb log_many_source(const NormalizedParams& p, double T, double N) {
    return log_pi_joint(many_source_scaled(p, N), T);
}

LogProb high_threshold(double a, double c1, double c2, double T, double b) {
    if (!(a > 0.0 && a < 1.0)) throw ValidationError("a", "threshold ratio must lie in (0, 1)");
    if (!std::isfinite(c1) || !std::isfinite(c2) || !(c2 > 0.0)) {
        throw ValidationError("c2", "high-threshold asymptotics need c1 > c2 > 0");
    }
    if (!(c1 > c2)) throw ValidationError("c1", "high-threshold asymptotics need c1 > c2 > 0");
    validate_horizon(T);
    if (!std::isfinite(b) || !(b > 0.0)) throw ValidationError("b", "must be > 0");
    const double z = b + c2 * T;
    const double log_v = 0.5 * std::log(2.0 * T / std::numbers::pi) - std::log(b) - z * z / (2.0 * T);
    return LogProb::from_log(log_v);
}

std::string_view to_string(LemmaCase c) {
    switch (c) {
        case LemmaCase::c1i: return "1i";
        case LemmaCase::c2i: return "2i";
        case LemmaCase::c3i: return "3i";
        case LemmaCase::c3ii: return "3ii";
        case LemmaCase::c3iii: return "3iii";
        case LemmaCase::c4i: return "4i";
        case LemmaCase::c4ii: return "4ii";
        case LemmaCase::c4iii: return "4iii";
        case LemmaCase::c5i: return "5i";
        case LemmaCase::c5ii: return "5ii";
        case LemmaCase::c5iii: return "5iii";
    }
    return "unknown";
}

namespace {

enum class Family { one, two, three, four, five };

std::optional<Family> family_of(double x, double y) {
    if (x > 0.0 && nearly_equal(y, -x)) return Family::one;
    if (x < 0.0 && y > 0.0 && !nearly_equal(-x, y)) {
        return -x > y ? Family::two : Family::three;
    }
    if (x > 0.0 && y > 0.0 && (x <= y || nearly_equal(x, y))) return Family::four;
    if (x == 0.0 && y > 0.0) return Family::five;
    return std::nullopt;
}

void require_interior_rho(double rho, LemmaCase c) {
    if (1.0 - std::abs(rho) < gauss::kDegenerateCorrelation) {
        throw ValidationError("rho", std::string("case ") + std::string(to_string(c)) +
                                         " needs |rho| < 1");
    }
}

}  // namespace

BivariateTailResult bvn_tail_asym(double rho, double alpha, double beta) {
    if (!std::isfinite(rho) || std::abs(rho) > 1.0) {
        throw ValidationError("rho", "correlation must lie in [-1, 1]");
    }
    if (!std::isfinite(alpha)) throw ValidationError("alpha", "must be finite");
    if (!std::isfinite(beta)) throw ValidationError("beta", "must be finite");

    BivariateTailResult r;
    r.rho = rho;
    std::optional<Family> fam = family_of(alpha, beta);
    if (fam) {
        r.alpha = alpha;
        r.beta = beta;
    } else if ((fam = family_of(beta, alpha))) {
        r.alpha = beta;
        r.beta = alpha;
        r.swapped = true;
    } else {
        throw ValidationError("alpha", "(alpha, beta) matches no bivariate tail case");
    }
    const double x = r.alpha;
    const double y = r.beta;

    // Leading Mills term of P(N > y t).
    const AsymptoticForm mills_y{kInvSqrt2Pi / y, -1.0, 0.5 * y * y, FormKind::equivalence};

    const auto ratio_case = [&](LemmaCase above, LemmaCase tie, LemmaCase below) {
        const double m = x / y;
        if (nearly_equal(rho, m)) return tie;
        return rho > m ? above : below;
    };

    switch (*fam) {
        case Family::one:
            r.lemma_case = LemmaCase::c1i;
            r.form = {kInvSqrt2Pi / x, -1.0, 0.5 * x * x, FormKind::equivalence};
            break;
        case Family::two:
            r.lemma_case = LemmaCase::c2i;
            r.form = mills_y;
            break;
        case Family::three:
            r.lemma_case = ratio_case(LemmaCase::c3i, LemmaCase::c3ii, LemmaCase::c3iii);
            break;
        case Family::four:
            r.lemma_case = ratio_case(LemmaCase::c4i, LemmaCase::c4ii, LemmaCase::c4iii);
            break;
        case Family::five:
            if (std::abs(rho) <= kTieTolerance) {
                r.lemma_case = LemmaCase::c5ii;
            } else {
                r.lemma_case = rho > 0.0 ? LemmaCase::c5i : LemmaCase::c5iii;
            }
            break;
    }

    const double quad = (x * x + y * y - 2.0 * rho * x * y) / (1.0 - rho * rho);
    switch (r.lemma_case) {
        case LemmaCase::c1i:
        case LemmaCase::c2i:
            break;
        case LemmaCase::c3i:
        case LemmaCase::c4i:
        case LemmaCase::c5i:
            r.form = mills_y;
            break;
        case LemmaCase::c5ii:
            r.form = mills_y;
            r.form.prefactor *= 0.5;
            break;
        case LemmaCase::c3ii:
            r.form = mills_y;
            r.form.prefactor *= 0.5;
            r.form.kind = FormKind::upper_bound;
            break;
        case LemmaCase::c3iii:
            require_interior_rho(rho, r.lemma_case);
            r.form = {std::sqrt(1.0 - rho * rho) / (kTwoPi * std::abs(x - rho * y) * y), -2.0,
                      0.5 * quad, FormKind::upper_bound};
            break;
        case LemmaCase::c4ii:
            r.form = mills_y;
            r.form.kind = FormKind::two_sided_bound;
            break;
        case LemmaCase::c4iii:
            require_interior_rho(rho, r.lemma_case);
            r.form = {std::pow(1.0 - rho * rho, 1.5) / (kTwoPi * (x - rho * y) * (y - rho * x)),
                      -2.0, 0.5 * quad, FormKind::equivalence};
            break;
        case LemmaCase::c5iii:
            require_interior_rho(rho, r.lemma_case);
            r.form = mills_y;
            r.form.kind = FormKind::upper_bound;
            break;
    }
    r.kind = r.form.kind;
    return r;
}

double BivariateTailResult::log_value(double t) const {
    if (!std::isfinite(t) || !(t > 0.0)) throw ValidationError("t", "must be > 0");
    const double log_sf_y = gauss::log_norm_sf(beta * t).log_p;
    switch (lemma_case) {
        case LemmaCase::c3ii: return std::log(0.5) + log_sf_y;
        case LemmaCase::c4ii: return log_sf_y;
        case LemmaCase::c5iii:
            return log_sf_y +
                   gauss::log_norm_cdf(-rho * beta * t / std::sqrt(1.0 - rho * rho)).log_p;
        default:
            return std::log(form.prefactor) + form.power * std::log(t) - form.rate * t * t;
    }
}

double BivariateTailResult::log_lower(double t) const {
    if (kind != FormKind::two_sided_bound) {
        throw ValidationError("kind", "lower bound exists only for the two-sided case");
    }
    return std::log(0.5) + gauss::log_norm_sf(beta * t).log_p;
}

}  // namespace jointsup
