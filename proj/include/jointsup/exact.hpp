#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "jointsup/log_prob.hpp"
#include "jointsup/model.hpp"

namespace jointsup {

enum class Branch {
    dim_reduced,       ///< one boundary dominates on [0, T]; one-dimensional formula
    full,              ///< both boundaries matter; bivariate-normal expression
    infinite_horizon,  ///< T = infinity
};

std::string_view to_string(Branch b);

/// The four summands of the full-branch expression, in printed order:
///   [0] P(N > alpha0) - Psi2(-r; .)
///   [1] e^{-2 a1 c1} (P(N > beta0) - Psi2(r; .))
///   [2] e^{-2 a2 c2} Psi2(r; .)
///   [3] e^{-2 (a1 (c1 - 2 c2) + a2 c2)} Psi2(-r; .)
/// Kept for diagnostics; not part of the stable interface.
using FullBranchTerms = std::array<double, 4>;

struct ProbabilityResult {
    double p = 0.0;
    double log_p = 0.0;
    Branch branch = Branch::dim_reduced;
    std::optional<FullBranchTerms> terms;
};

/// Probability that sup_{[0,T]} (B(t) - c t) exceeds a, for a > 0, T > 0.
ProbabilityResult pi1d(double a, double c, double T);

/// Joint probability that both drifted suprema over [0, T] exceed their
/// thresholds. Uses the one-dimensional formula for degenerate instances and
/// when the boundaries do not intersect before T.
ProbabilityResult pi_joint(const NormalizedParams& p, double T);

/// T = infinity counterpart of `pi_joint`.
ProbabilityResult pi_infinite(const NormalizedParams& p);

/// P(sup_{[0,L]} (bridge from 0 to y) < b) = 1 - exp(-2 b (b - y) / L).
/// Requires L > 0, b >= 0 and b >= y.
double bridge_no_cross(double L, double y, double b);

/// P(B(t) <= min(a1 + c1 t, a2 + c2 t) for all t in [0, T]) for a
/// non-degenerate instance with t* < T, as the four-term bivariate normal
/// distribution-function expression.
double boundary_no_cross(const NormalizedParams& p, double T);

/// Tail-stable log of `pi_joint`. The full branch is re-expressed as a sum of
/// positive bivariate tails plus a single signed univariate difference, each
/// evaluated in the log domain. Throws CancellationError if the signed sum
/// falls below 1e-9 of its largest term.
LogProb log_pi_joint(const NormalizedParams& p, double T);

}  // namespace jointsup
