#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "twosector/bgp.hpp"
#include "twosector/params.hpp"
#include "twosector/stability.hpp"

namespace twosector {

enum class Method { rk4_fixed, rk45_adaptive };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct IntegratorOptions {
    Method method = Method::rk45_adaptive;
    double dt = 1e-3;   ///< fixed step (rk4) or initial step (rk45)
    double rtol = 1e-9;
    double atol = 1e-12;
    double t_end = 100.0;
    /// Step cap for the adaptive method; also bounds the sampling interval.
    double max_dt = 0.1;
    std::size_t max_steps = 5'000'000;
    double uv_guard = kUvGuard;
    double positivity_floor = 0.0;  ///< stocks, z and q must stay above this
};

/// Returns a reason when a state must not be accepted.
using GuardFn = std::function<std::optional<std::string>(const Eigen::VectorXd&)>;
/// Returns a reason to end the integration successfully after an accepted step.
using StopFn = std::function<std::optional<std::string>(double, const Eigen::VectorXd&)>;

struct Trajectory {
    std::vector<std::string> state_names;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<std::string> diagnostic_names;
    std::vector<std::vector<double>> diagnostics;  ///< one row per sample
    bool truncated = false;  ///< halted by a guard event
    std::string stop_reason = "t_end";
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    std::size_t size() const { return times.size(); }
};

/// Integrates x' = rhs(x) from t = 0. Guard events stop the run cleanly with
/// truncated = true; the offending state is not stored. Throws
/// ConvergenceError on adaptive step-size underflow.
Trajectory integrate(const VectorFn& rhs, const Eigen::VectorXd& x0, const IntegratorOptions& opts,
                     const GuardFn& guard = {}, const StopFn& stop = {});

enum class System { full, reduced };

std::string_view to_string(System s);

/// Integrates the chosen system and fills diagnostics.
///
/// Full systems record the growth rates of k, h, c, y1, y2; reduced CES
/// records the z-constraint residual; every variant records the distance of
/// the stationary variables (z, q, u[, v]) to the steady state.
Trajectory simulate(System system, const CesParams& p, const Eigen::VectorXd& x0,
                    const IntegratorOptions& opts = {}, const SolverOptions& solver = {});
Trajectory simulate(System system, const CdParams& p, const Eigen::VectorXd& x0,
                    const IntegratorOptions& opts = {}, const SolverOptions& solver = {});

/// Steady state as an initial point of the chosen system (h = 1 for full).
Eigen::VectorXd bgp_point(System system, const SteadyState& ss);

enum class Direction { stable, unstable };

struct ProbeOptions {
    double t_end = 200.0;
    double tol = 1e-6;           ///< convergence radius for the stable probe
    double growth_factor = 10.0; ///< divergence threshold for the unstable probe
    double rtol = 1e-12;
    double atol = 1e-14;
    double max_dt = 0.1;
};

struct ProbeReport {
    Direction direction = Direction::stable;
    double eigenvalue = 0.0;
    Eigen::VectorXd eigenvector;  ///< unit norm, z component >= 0
    double magnitude = 0.0;
    double initial_distance = 0.0;
    double min_distance = 0.0;
    double time_of_min = 0.0;
    double terminal_distance = 0.0;
    double terminal_time = 0.0;
    bool converged = false;        ///< stable: reached tol
    bool diverged = false;         ///< unstable: exceeded growth_factor * initial
    double divergence_time = 0.0;
    bool monotone_growth = false;  ///< unstable: distance never decreased before divergence
    Trajectory trajectory;
};

/// Perturbs the CD steady state along the eigenvector of the negative
/// (stable) or most positive (unstable) eigenvalue of the reduced Jacobian
/// and integrates forward. The stable run ends once within tol of the steady
/// state; the unstable run once the distance exceeds growth_factor times its
/// initial value. Requires a saddle_path classification.
ProbeReport stable_manifold_probe(const CdParams& p, double magnitude, Direction direction,
                                  const ProbeOptions& opts = {});

struct Preferences {
    double rho = 0.0;
    double epsilon = 0.0;
};

inline Preferences preferences(const CesParams& p) { return {p.rho, p.epsilon}; }
inline Preferences preferences(const CdParams& p) { return {p.rho, p.epsilon}; }

struct WelfareEstimate {
    double quadrature = 0.0;  ///< integral over the sampled horizon
    double tail = 0.0;        ///< closed-form continuation beyond the horizon
    double total = 0.0;
    double terminal_rate = 0.0;
};

/// Discounted isoelastic utility of a sampled consumption path: composite
/// Simpson on the (possibly uneven) samples plus the exact tail for
/// c(t) = c_T exp(g (t - T)), g the terminal growth rate (estimated from the
/// last two samples unless given).
WelfareEstimate welfare(const std::vector<double>& times, const std::vector<double>& consumption,
                        const Preferences& prefs, std::optional<double> terminal_rate = {});

}  // namespace twosector
