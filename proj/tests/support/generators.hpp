#pragma once

// Seeded random draws of parameters and interior states for property tests.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "twosector/bgp.hpp"
#include "twosector/errors.hpp"
#include "twosector/params.hpp"

namespace twosector::testing {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

    CesParams ces_strict() {
        CesParams p;
        p.A1 = uniform(0.5, 2.0);
        p.A2 = uniform(0.1, 1.0);
        p.alpha1 = uniform(0.2, 0.8);
        p.alpha2 = uniform(0.2, 0.8);
        do {
            p.psi1 = uniform(0.05, 0.9);
            p.psi2 = uniform(0.05, 0.9);
        } while (std::abs(p.psi1 - p.psi2) < 0.05);
        p.delta_k = uniform(0.0, 0.1);
        p.delta_h = uniform(0.0, 0.1);
        p.epsilon = uniform(1.2, 4.0);
        p.rho = uniform(0.01, 0.1);
        return p;
    }

    CdParams cd() {
        CdParams p;
        p.A1 = uniform(0.5, 2.0);
        p.A2 = uniform(0.1, 1.0);
        do {
            p.alpha = uniform(0.2, 0.8);
            p.beta = uniform(0.2, 0.8);
        } while (std::abs(p.alpha - p.beta) < 0.05);
        p.delta_k = uniform(0.0, 0.1);
        p.delta_h = uniform(0.0, 0.1);
        p.epsilon = uniform(1.2, 4.0);
        p.rho = uniform(0.01, 0.1);
        return p;
    }

    /// Interior share pair kept clear of the u = v band.
    std::pair<double, double> shares_apart(double gap = 0.02) {
        for (;;) {
            const double u = uniform(0.05, 0.95);
            const double v = uniform(0.05, 0.95);
            if (std::abs(u - v) >= gap) return {u, v};
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct CesDraw {
    CesParams params;
    SteadyState steady;
};

struct CdDraw {
    CdParams params;
    SteadyState steady;
};

/// Gate-valid draws that did not enter a suite.
struct Skipped {
    int unresolved = 0;     ///< no steady state inside the bracketing policy
    int near_boundary = 0;  ///< a steady-state share within kInteriorMargin of 0 or 1
};

/// Shares closer than this to 0 or 1 make the stationary variables
/// ill-conditioned in double precision (1 - v loses digits), so such draws
/// are kept out of the absolute-tolerance suites.
inline constexpr double kInteriorMargin = 1e-4;

inline bool well_interior(const SteadyState& ss) {
    return std::min({ss.u_star, 1.0 - ss.u_star, ss.v_star, 1.0 - ss.v_star}) >= kInteriorMargin;
}

/// Draws until `count` parameter sets pass validation and yield a
/// well-interior steady state.
inline std::vector<CesDraw> valid_ces_sets(std::size_t count, std::uint64_t seed, Skipped* skipped = nullptr,
                                           std::vector<CesDraw>* boundary = nullptr) {
    Draw d(seed);
    Skipped local;
    std::vector<CesDraw> out;
    while (out.size() < count) {
        const CesParams p = d.ces_strict();
        if (!validate(p, ParamMode::strict).ok) continue;
        try {
            const SteadyState ss = steady_state_ces(p);
            if (well_interior(ss)) {
                out.push_back({p, ss});
            } else {
                ++local.near_boundary;
                if (boundary) boundary->push_back({p, ss});
            }
        } catch (const Error&) {
            ++local.unresolved;
        }
    }
    if (skipped) *skipped = local;
    return out;
}

inline std::vector<CdDraw> valid_cd_sets(std::size_t count, std::uint64_t seed, Skipped* skipped = nullptr) {
    Draw d(seed);
    Skipped local;
    std::vector<CdDraw> out;
    while (out.size() < count) {
        const CdParams p = d.cd();
        if (!validate(p).ok) continue;
        try {
            const SteadyState ss = steady_state_cd(p);
            if (well_interior(ss)) {
                out.push_back({p, ss});
            } else {
                ++local.near_boundary;
            }
        } catch (const Error&) {
            ++local.unresolved;
        }
    }
    if (skipped) *skipped = local;
    return out;
}

inline SolverOptions permissive() {
    SolverOptions o;
    o.mode = ParamMode::permissive;
    return o;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace twosector::testing
