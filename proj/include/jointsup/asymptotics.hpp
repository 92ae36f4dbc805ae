#pragma once

#include <string_view>

#include "jointsup/log_prob.hpp"
#include "jointsup/model.hpp"

namespace jointsup {

enum class FormKind { equivalence, upper_bound, two_sided_bound };

std::string_view to_string(FormKind k);

/// prefactor * x^power * exp(-rate * x) in the large parameter x.
///
/// Many-source forms use x = N. Bivariate-tail forms (see `BivariateTailResult`)
/// use the convention prefactor * t^power * exp(-rate * t^2).
struct AsymptoticForm {
    double prefactor = 1.0;
    double power = 0.0;
    double rate = 0.0;
    FormKind kind = FormKind::equivalence;
};

/// Many-source regime labels, ordered as the case lists.
enum class RegimeCase {
    T21_i, T21_ii, T21_iii,
    T25_ia, T25_ib, T25_ic,
    T25_ii,
    T25_iiia, T25_iiib, T25_iiic, T25_iiid, T25_iiie,
    T25_iv, T25_v,
};

inline constexpr int kRegimeCaseCount = 14;

/// External label, e.g. "T25-iiic".
std::string_view to_string(RegimeCase c);

/// Picks the many-source regime of (p, T) from the order of t*, t1, t2,
/// t_tilde and T. Ties within the model tolerance resolve to the equality
/// cases. Requires c1 > c2 > 0 and a non-degenerate instance.
RegimeCase many_source_classify(const NormalizedParams& p, double T);

/// Leading-order asymptotics of psi_T(N) as N -> infinity in the variable N.
AsymptoticForm many_source_asym(const NormalizedParams& p, double T);

/// log(prefactor) + power * log(N) - rate * N.
LogProb eval_asym(const AsymptoticForm& f, double N);

/// Instance whose joint probability equals psi_T(N) by self-similarity:
/// thresholds and drifts multiplied by sqrt(N).
NormalizedParams many_source_scaled(const NormalizedParams& p, double N);

/// log psi_T(N), evaluated exactly through `many_source_scaled`.
LogProb log_many_source(const NormalizedParams& p, double T, double N);

/// High-threshold asymptotic sqrt(2T/pi) / b * exp(-(b + c2 T)^2 / (2 T)) of
/// the joint probability with thresholds (a b, b). Requires a in (0, 1),
/// c1 > c2 > 0, T > 0, b > 0. The value does not depend on a or c1.
LogProb high_threshold(double a, double c1, double c2, double T, double b);

/// Bivariate-normal tail cases, labelled by family (1..5) and sub-case.
enum class LemmaCase { c1i, c2i, c3i, c3ii, c3iii, c4i, c4ii, c4iii, c5i, c5ii, c5iii };

std::string_view to_string(LemmaCase c);

/// Leading behaviour of Psi2(rho; alpha t, beta t) as t -> infinity.
struct BivariateTailResult {
    LemmaCase lemma_case = LemmaCase::c1i;
    FormKind kind = FormKind::equivalence;
    /// prefactor * t^power * exp(-rate * t^2); for bound kinds this is the
    /// leading order of the bound.
    AsymptoticForm form;
    double rho = 0.0;
    double alpha = 0.0;  ///< after reordering into the case convention
    double beta = 0.0;
    bool swapped = false;

    /// log of the equivalent (equivalence kind) or of the stated upper bound.
    double log_value(double t) const;
    /// log of the lower bound; two-sided kind only.
    double log_lower(double t) const;
};

/// Classifies (rho, alpha, beta) into the bivariate tail cases, swapping the
/// two limits if that is what makes a case apply. Throws ValidationError when
/// no case matches.
BivariateTailResult bvn_tail_asym(double rho, double alpha, double beta);

}  // namespace jointsup
