#include "jointsup/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "jointsup/errors.hpp"
#include "jointsup/rng.hpp"

namespace jointsup {

namespace {

// exp(-40) is below the resolution of a 53-bit uniform, so no draw is made.
constexpr double kNegligibleExponent = 40.0;

void validate_config(const SimConfig& cfg) {
    if (cfg.paths < 1) throw ValidationError("paths", "must be >= 1");
    if (cfg.steps < 1) throw ValidationError("steps", "must be >= 1");
    if (static_cast<double>(cfg.paths) * static_cast<double>(cfg.steps) > cfg.budget) {
        throw ValidationError("paths", "paths * steps exceeds the simulation budget");
    }
}

// Runs `count_path(index)` over all paths on the configured workers and
// returns the number of paths for which it returned true.
template <typename PathFn>
std::uint64_t count_hits(const SimConfig& cfg, PathFn count_path) {
    unsigned workers = cfg.workers != 0 ? cfg.workers : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(
        std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, cfg.paths));
    std::vector<std::uint64_t> hits(workers, 0);
    const auto run = [&](unsigned w) {
        const std::uint64_t begin = cfg.paths * w / workers;
        const std::uint64_t end = cfg.paths * (w + 1) / workers;
        std::uint64_t local = 0;
        for (std::uint64_t i = begin; i < end; ++i) local += count_path(i) ? 1 : 0;
        hits[w] = local;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    return total;
}

SimEstimate make_estimate(std::uint64_t hits, const SimConfig& cfg) {
    SimEstimate e;
    e.paths = cfg.paths;
    e.steps = cfg.steps;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(cfg.paths);
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(cfg.paths));
    return e;
}

struct Line {
    double a;
    double c;
};

}  // namespace

SimEstimate simulate_joint(const NormalizedParams& p, double T, const SimConfig& cfg) {
    validate_horizon(T);
    validate_config(cfg);

    std::array<Line, 2> lines{};
    std::size_t n_lines = 2;
    if (p.degenerate) {
        lines[0] = {p.binding->a, p.binding->c};
        n_lines = 1;
    } else {
        lines[0] = {p.a1, p.c1};
        lines[1] = {p.a2, p.c2};
    }
    const std::uint64_t steps = cfg.steps;
    const double dt = T / static_cast<double>(steps);
    const double sdt = std::sqrt(dt);
    const bool correct = cfg.bridge_correction;

    const auto path = [&](std::uint64_t index) {
        Xoshiro256 rng = Xoshiro256::substream(cfg.seed, index);
        boost::random::normal_distribution<double> normal;
        std::array<bool, 2> crossed{false, false};
        std::size_t remaining = n_lines;
        double x = 0.0;
        for (std::uint64_t k = 1; k <= steps; ++k) {
            const double t0 = static_cast<double>(k - 1) * dt;
            const double t1 = static_cast<double>(k) * dt;
            const double x1 = x + sdt * normal(rng);
            for (std::size_t j = 0; j < n_lines; ++j) {
                if (crossed[j]) continue;
                const double d1 = lines[j].a + lines[j].c * t1 - x1;
                bool hit = d1 <= 0.0;
                if (!hit && correct) {
                    const double d0 = lines[j].a + lines[j].c * t0 - x;
                    const double e = 2.0 * d0 * d1 / dt;
                    if (e < kNegligibleExponent) hit = rng.uniform() < std::exp(-e);
                }
                if (hit) {
                    crossed[j] = true;
                    --remaining;
                }
            }
            if (remaining == 0) return true;
            x = x1;
        }
        return false;
    };
    return make_estimate(count_hits(cfg, path), cfg);
}

SimEstimate simulate_bridge_check(double L, double y, double b, const SimConfig& cfg) {
    if (!std::isfinite(L) || !(L > 0.0)) throw ValidationError("L", "bridge length must be > 0");
    if (!std::isfinite(y)) throw ValidationError("y", "endpoint must be finite");
    if (!std::isfinite(b) || b < 0.0) throw ValidationError("b", "level must be >= 0");
    if (b - y < 0.0) throw ValidationError("b", "level must not lie below the bridge endpoint");
    validate_config(cfg);

    const std::uint64_t steps = cfg.steps;
    const double dt = L / static_cast<double>(steps);
    const double sdt = std::sqrt(dt);
    const bool correct = cfg.bridge_correction;

    // Counts paths that stay below b.
    const auto path = [&](std::uint64_t index) {
        Xoshiro256 rng = Xoshiro256::substream(cfg.seed, index);
        boost::random::normal_distribution<double> normal;
        thread_local std::vector<double> w;
        w.assign(steps + 1, 0.0);
        for (std::uint64_t k = 1; k <= steps; ++k) w[k] = w[k - 1] + sdt * normal(rng);
        const double pull = w[steps] - y;
        if (b <= 0.0) return false;
        double prev = 0.0;
        for (std::uint64_t k = 1; k <= steps; ++k) {
            const double t = static_cast<double>(k) * dt;
            const double cur = w[k] - (t / L) * pull;
            const double d1 = b - cur;
            if (d1 <= 0.0) return false;
            if (correct) {
                const double e = 2.0 * (b - prev) * d1 / dt;
                if (e < kNegligibleExponent && rng.uniform() < std::exp(-e)) return false;
            }
            prev = cur;
        }
        return true;
    };
    return make_estimate(count_hits(cfg, path), cfg);
}

}  // namespace jointsup
