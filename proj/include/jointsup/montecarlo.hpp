#pragma once

#include <cstdint>

#include "jointsup/model.hpp"

namespace jointsup {

struct SimConfig {
    std::uint64_t paths = 100000;
    std::uint64_t steps = 512;
    std::uint64_t seed = 0;
    bool bridge_correction = true;
    /// Upper bound on paths * steps.
    double budget = 5e10;
    /// Worker threads; 0 picks std::thread::hardware_concurrency(). The
    /// estimate does not depend on this value.
    unsigned workers = 0;
};

struct SimEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;  ///< sqrt(p_hat (1 - p_hat) / paths)
    std::uint64_t paths = 0;
    std::uint64_t steps = 0;
};

/// Monte Carlo estimate of the joint crossing probability over [0, T].
///
/// Each path is sampled on a uniform grid; a boundary counts as crossed when
/// a grid value reaches it or, with bridge correction, when a Bernoulli draw
/// with the Brownian-bridge crossing probability exp(-2 d0 d1 / dt) succeeds
/// on a segment. Per segment the draws are made for boundary 1, then
/// boundary 2, independently of each other. Degenerate instances simulate
/// only the binding boundary. Path i uses substream i of the seed, so the
/// result is bit-identical for any worker count.
SimEstimate simulate_joint(const NormalizedParams& p, double T, const SimConfig& cfg);

/// Monte Carlo estimate of P(sup of a Brownian bridge from 0 to y on [0, L]
/// stays below b), sampled on cfg.steps segments with the same per-segment
/// crossing correction.
SimEstimate simulate_bridge_check(double L, double y, double b, const SimConfig& cfg);

}  // namespace jointsup
