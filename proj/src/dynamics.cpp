#include "twosector/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "twosector/cd_model.hpp"
#include "twosector/ces_model.hpp"
#include "twosector/errors.hpp"
#include "twosector/math.hpp"

namespace twosector {

namespace odeint = boost::numeric::odeint;

std::string_view to_string(Method m) {
    return m == Method::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
}

Method method_from_string(std::string_view s) {
    if (s == "rk4_fixed" || s == "rk4") return Method::rk4_fixed;
    if (s == "rk45_adaptive" || s == "rk45") return Method::rk45_adaptive;
    throw ConfigError(fmt::format("unknown integration method '{}'", s));
}

std::string_view to_string(System s) { return s == System::full ? "full" : "reduced"; }

namespace {

using StdState = std::vector<double>;

StdState to_std(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

Eigen::VectorXd to_eigen(const StdState& x) {
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace

Trajectory integrate(const VectorFn& rhs, const Eigen::VectorXd& x0, const IntegratorOptions& opts,
                     const GuardFn& guard, const StopFn& stop) {
    if (!(opts.t_end > 0.0)) throw ConfigError("integrator t_end must be positive");
    if (opts.method == Method::rk4_fixed && !(opts.dt > 0.0)) {
        throw ConfigError("integrator dt must be positive");
    }
    if (opts.method == Method::rk45_adaptive && !(opts.rtol > 0.0 && opts.atol > 0.0)) {
        throw ConfigError("integrator rtol and atol must be positive");
    }

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    if (guard) {
        if (auto reason = guard(x0)) {
            traj.truncated = true;
            traj.stop_reason = "guard: " + *reason;
            return traj;
        }
    }
    if (stop) {
        if (auto reason = stop(0.0, x0)) {
            traj.stop_reason = *reason;
            return traj;
        }
    }

    const auto system = [&rhs](const StdState& x, StdState& dxdt, double /*t*/) {
        const Eigen::VectorXd d = rhs(to_eigen(x));
        dxdt.assign(d.data(), d.data() + d.size());
    };

    StdState x = to_std(x0);
    double t = 0.0;
    const double t_end = opts.t_end;
    const double min_dt = 1e-14;

    // An accepted step is guarded before it is recorded.
    const auto accept = [&](const StdState& next, double t_next) -> bool {
        const Eigen::VectorXd xe = to_eigen(next);
        if (guard) {
            if (auto reason = guard(xe)) {
                traj.truncated = true;
                traj.stop_reason = "guard: " + *reason;
                return false;
            }
        }
        x = next;
        t = t_next;
        ++traj.accepted_steps;
        traj.times.push_back(t);
        traj.states.push_back(xe);
        if (stop) {
            if (auto reason = stop(t, xe)) {
                traj.stop_reason = *reason;
                return false;
            }
        }
        return true;
    };

    if (opts.method == Method::rk4_fixed) {
        odeint::runge_kutta4<StdState> stepper;
        const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / opts.dt - 1e-9));
        for (std::size_t i = 1; i <= n_steps; ++i) {
            if (traj.accepted_steps >= opts.max_steps) {
                traj.truncated = true;
                traj.stop_reason = "max_steps";
                break;
            }
            const double t_next = i == n_steps ? t_end : static_cast<double>(i) * opts.dt;
            StdState next = x;
            try {
                stepper.do_step(system, next, t, t_next - t);
            } catch (const NumericalError& e) {
                traj.truncated = true;
                traj.stop_reason = fmt::format("guard: right-hand side failed ({})", e.what());
                break;
            }
            if (!accept(next, t_next)) break;
        }
        return traj;
    }

    auto stepper = odeint::make_controlled(opts.atol, opts.rtol,
                                           odeint::runge_kutta_dopri5<StdState>());
    double dt = std::min(opts.dt, opts.max_dt);
    while (t < t_end) {
        if (traj.accepted_steps >= opts.max_steps) {
            traj.truncated = true;
            traj.stop_reason = "max_steps";
            break;
        }
        double h = std::min({dt, opts.max_dt, t_end - t});
        // Land exactly on t_end instead of leaving a sliver step.
        if (t_end - (t + h) < 1e-12 * std::max(1.0, t_end)) h = t_end - t;
        StdState next = x;
        double t_try = t;
        odeint::controlled_step_result res;
        try {
            res = stepper.try_step(system, next, t_try, h);
        } catch (const NumericalError& e) {
            // a stage left the domain; shrink and retry until the step underflows
            ++traj.rejected_steps;
            dt = 0.25 * h;
            if (dt < min_dt * std::max(1.0, t)) {
                traj.truncated = true;
                traj.stop_reason = fmt::format("guard: right-hand side failed ({})", e.what());
                break;
            }
            continue;
        }
        if (res == odeint::fail) {
            ++traj.rejected_steps;
            dt = h;  // try_step already shrank it
            if (dt < min_dt * std::max(1.0, t)) {
                throw ConvergenceError(fmt::format("adaptive step size underflow at t = {}", t));
            }
            continue;
        }
        dt = h;  // proposal for the next step
        if (!accept(next, t_try)) break;
    }
    return traj;
}

namespace {

std::optional<std::string> check_share(double s, std::string_view name) {
    if (!(s > 0.0 && s < 1.0)) return fmt::format("{} = {} left (0,1)", name, s);
    return std::nullopt;
}

std::optional<std::string> check_floor(double x, double floor, std::string_view name) {
    if (!(x > floor)) return fmt::format("{} = {} fell to the positivity floor", name, x);
    return std::nullopt;
}

GuardFn ces_guard(System system, const IntegratorOptions& opts) {
    return [system, opts](const Eigen::VectorXd& x) -> std::optional<std::string> {
        const int iu = system == System::full ? 3 : 2;
        const int n_pos = system == System::full ? 3 : 2;
        static constexpr const char* full_names[] = {"k", "h", "c"};
        static constexpr const char* red_names[] = {"z", "q"};
        for (int i = 0; i < n_pos; ++i) {
            if (auto r = check_floor(x(i), opts.positivity_floor,
                                     system == System::full ? full_names[i] : red_names[i])) {
                return r;
            }
        }
        if (auto r = check_share(x(iu), "u")) return r;
        if (auto r = check_share(x(iu + 1), "v")) return r;
        if (std::abs(x(iu) - x(iu + 1)) < opts.uv_guard) {
            return fmt::format("|u - v| = {:.3g} inside the singular band", std::abs(x(iu) - x(iu + 1)));
        }
        return std::nullopt;
    };
}

GuardFn cd_guard(System system, const IntegratorOptions& opts) {
    return [system, opts](const Eigen::VectorXd& x) -> std::optional<std::string> {
        const int iu = system == System::full ? 3 : 2;
        const int n_pos = system == System::full ? 3 : 2;
        static constexpr const char* full_names[] = {"k", "h", "c"};
        static constexpr const char* red_names[] = {"z", "q"};
        for (int i = 0; i < n_pos; ++i) {
            if (auto r = check_floor(x(i), opts.positivity_floor,
                                     system == System::full ? full_names[i] : red_names[i])) {
                return r;
            }
        }
        return check_share(x(iu), "u");
    };
}

}  // namespace

Eigen::VectorXd bgp_point(System system, const SteadyState& ss) {
    const bool ces = ss.variant == Variant::ces;
    if (system == System::reduced) {
        if (ces) return ReducedStateCes{ss.z_star, ss.q_star, ss.u_star, ss.v_star}.to_vector();
        return ReducedStateCd{ss.z_star, ss.q_star, ss.u_star}.to_vector();
    }
    const double k = ss.z_star;
    if (ces) return FullState{k, 1.0, ss.q_star * k, ss.u_star, ss.v_star}.to_vector();
    return CdFullState{k, 1.0, ss.q_star * k, ss.u_star}.to_vector();
}

Trajectory simulate(System system, const CesParams& p, const Eigen::VectorXd& x0,
                    const IntegratorOptions& opts, const SolverOptions& solver) {
    const SteadyState ss = steady_state_ces(p, solver);
    const Eigen::Vector4d ref(ss.z_star, ss.q_star, ss.u_star, ss.v_star);
    Trajectory traj;
    if (system == System::full) {
        if (x0.size() != FullState::dim) throw ConfigError("CES full state has 5 components");
        const VectorFn rhs = [&p](const Eigen::VectorXd& x) {
            return ces::full_rhs(FullState::from_vector(x), p).to_vector();
        };
        traj = integrate(rhs, x0, opts, ces_guard(system, opts));
        traj.state_names = {"k", "h", "c", "u", "v"};
        traj.diagnostic_names = {"g_k", "g_h", "g_c", "g_y1", "g_y2", "distance"};
        for (const auto& xv : traj.states) {
            const FullState x = FullState::from_vector(xv);
            std::vector<double> row(6, std::numeric_limits<double>::quiet_NaN());
            try {
                const FullState d = ces::full_rhs(x, p);
                const Outputs gy = ces::output_growth(x, d, p);
                row = {d.k / x.k, d.h / x.h, d.c / x.c, gy.y1, gy.y2, 0.0};
            } catch (const NumericalError&) {
            }
            row[5] = (Eigen::Vector4d(x.k / x.h, x.c / x.k, x.u, x.v) - ref).norm();
            traj.diagnostics.push_back(std::move(row));
        }
    } else {
        if (x0.size() != ReducedStateCes::dim) throw ConfigError("CES reduced state has 4 components");
        traj = integrate(reduced_system(p), x0, opts, ces_guard(system, opts));
        traj.state_names = {"z", "q", "u", "v"};
        traj.diagnostic_names = {"constraint_residual", "distance"};
        for (const auto& xv : traj.states) {
            double residual = std::numeric_limits<double>::quiet_NaN();
            try {
                residual = ces_constraint_residual(ReducedStateCes::from_vector(xv), p);
            } catch (const NumericalError&) {
            }
            traj.diagnostics.push_back({residual, (xv - Eigen::VectorXd(ref)).norm()});
        }
    }
    return traj;
}

Trajectory simulate(System system, const CdParams& p, const Eigen::VectorXd& x0,
                    const IntegratorOptions& opts, const SolverOptions& solver) {
    const SteadyState ss = steady_state_cd(p, solver);
    const Eigen::Vector3d ref(ss.z_star, ss.q_star, ss.u_star);
    Trajectory traj;
    if (system == System::full) {
        if (x0.size() != CdFullState::dim) throw ConfigError("CD full state has 4 components");
        const VectorFn rhs = [&p](const Eigen::VectorXd& x) {
            return cd::full_rhs(CdFullState::from_vector(x), p).derivative.to_vector();
        };
        traj = integrate(rhs, x0, opts, cd_guard(system, opts));
        traj.state_names = {"k", "h", "c", "u"};
        traj.diagnostic_names = {"g_k", "g_h", "g_c", "g_y1", "g_y2", "distance"};
        for (const auto& xv : traj.states) {
            const CdFullState x = CdFullState::from_vector(xv);
            std::vector<double> row(6, std::numeric_limits<double>::quiet_NaN());
            try {
                const CdFullState d = cd::full_rhs(x, p).derivative;
                const Outputs gy = cd::output_growth(x, d, p);
                row = {d.k / x.k, d.h / x.h, d.c / x.c, gy.y1, gy.y2, 0.0};
            } catch (const NumericalError&) {
            }
            row[5] = (Eigen::Vector3d(x.k / x.h, x.c / x.k, x.u) - ref).norm();
            traj.diagnostics.push_back(std::move(row));
        }
    } else {
        if (x0.size() != ReducedStateCd::dim) throw ConfigError("CD reduced state has 3 components");
        traj = integrate(reduced_system(p), x0, opts, cd_guard(system, opts));
        traj.state_names = {"z", "q", "u"};
        traj.diagnostic_names = {"distance"};
        for (const auto& xv : traj.states) {
            traj.diagnostics.push_back({(xv - Eigen::VectorXd(ref)).norm()});
        }
    }
    return traj;
}

ProbeReport stable_manifold_probe(const CdParams& p, double magnitude, Direction direction,
                                  const ProbeOptions& opts) {
    const StabilityReport stab = stability_report(p);
    if (stab.classification != Classification::saddle_path) {
        throw InvariantError(fmt::format("manifold probe needs a saddle path, got {}",
                                         to_string(stab.classification)));
    }
    const auto pairs = eigen_pairs_small(stab.jacobian);
    // sorted by real part descending: front is most unstable, back is stable
    const EigenPair& pick = direction == Direction::stable ? pairs.back() : pairs.front();

    ProbeReport rep;
    rep.direction = direction;
    rep.magnitude = magnitude;
    rep.eigenvalue = pick.value.real();
    Eigen::VectorXd vec = pick.vector.real();
    vec.normalize();
    // fix the sign: perturb the predetermined variable z upward
    Eigen::Index lead = 0;
    for (Eigen::Index i = 0; i < vec.size(); ++i) {
        if (std::abs(vec(i)) > 1e-12) {
            lead = i;
            break;
        }
    }
    if (vec(lead) < 0) vec = -vec;
    rep.eigenvector = vec;

    const SteadyState& ss = stab.steady_state;
    const Eigen::Vector3d ref(ss.z_star, ss.q_star, ss.u_star);
    const Eigen::VectorXd x0 = Eigen::VectorXd(ref) + magnitude * vec;
    rep.initial_distance = (x0 - Eigen::VectorXd(ref)).norm();

    IntegratorOptions io;
    io.method = Method::rk45_adaptive;
    io.rtol = opts.rtol;
    io.atol = opts.atol;
    io.max_dt = opts.max_dt;
    io.t_end = opts.t_end;

    const double threshold = opts.growth_factor * rep.initial_distance;
    StopFn stop;
    if (direction == Direction::stable) {
        stop = [&](double, const Eigen::VectorXd& x) -> std::optional<std::string> {
            if ((x - Eigen::VectorXd(ref)).norm() <= opts.tol) return std::string("converged");
            return std::nullopt;
        };
    } else {
        stop = [&](double, const Eigen::VectorXd& x) -> std::optional<std::string> {
            if ((x - Eigen::VectorXd(ref)).norm() > threshold) return std::string("diverged");
            return std::nullopt;
        };
    }
    rep.trajectory = integrate(reduced_system(p), x0, io, cd_guard(System::reduced, io), stop);
    rep.trajectory.state_names = {"z", "q", "u"};
    rep.trajectory.diagnostic_names = {"distance"};

    rep.min_distance = std::numeric_limits<double>::infinity();
    double prev = -1.0;
    rep.monotone_growth = true;
    for (std::size_t i = 0; i < rep.trajectory.size(); ++i) {
        const double d = (rep.trajectory.states[i] - Eigen::VectorXd(ref)).norm();
        rep.trajectory.diagnostics.push_back({d});
        if (d < rep.min_distance) {
            rep.min_distance = d;
            rep.time_of_min = rep.trajectory.times[i];
        }
        if (d < prev) rep.monotone_growth = false;
        prev = d;
    }
    rep.terminal_time = rep.trajectory.times.back();
    rep.terminal_distance = rep.trajectory.diagnostics.back()[0];
    if (direction == Direction::stable) {
        rep.converged = rep.terminal_distance <= opts.tol;
        rep.monotone_growth = false;
    } else {
        rep.diverged = rep.terminal_distance > threshold;
        rep.divergence_time = rep.diverged ? rep.terminal_time : 0.0;
        if (!rep.diverged) rep.monotone_growth = false;
    }
    return rep;
}

WelfareEstimate welfare(const std::vector<double>& times, const std::vector<double>& consumption,
                        const Preferences& prefs, std::optional<double> terminal_rate) {
    if (times.size() != consumption.size() || times.size() < 2) {
        throw DomainError("welfare needs at least two matched (t, c) samples");
    }
    const double eps = prefs.epsilon;
    const double rho = prefs.rho;
    std::vector<double> f(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        require_positive(consumption[i], "consumption");
        if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("welfare: times must increase");
        const double util = (pos_pow(consumption[i], 1.0 - eps) - 1.0) / (1.0 - eps);
        f[i] = util * std::exp(-rho * times[i]);
    }

    WelfareEstimate est;
    const std::size_t n = times.size() - 1;  // intervals
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const double h0 = times[i + 1] - times[i];
        const double h1 = times[i + 2] - times[i + 1];
        est.quadrature += (h0 + h1) / 6.0 *
                          ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
                           (2.0 - h0 / h1) * f[i + 2]);
    }
    if (i < n) {
        const double h1 = times[i + 1] - times[i];
        if (i == 0) {
            est.quadrature += 0.5 * h1 * (f[0] + f[1]);
        } else {
            // last interval of the quadratic through the final three samples
            const double h0 = times[i] - times[i - 1];
            est.quadrature += h1 * (f[i + 1] * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1)) +
                                    f[i] * (h1 + 3.0 * h0) / (6.0 * h0) -
                                    f[i - 1] * h1 * h1 / (6.0 * h0 * (h0 + h1)));
        }
    }

    const double t_last = times.back();
    const double c_last = consumption.back();
    est.terminal_rate = terminal_rate.value_or(
        std::log(c_last / consumption[n - 1]) / (t_last - times[n - 1]));
    const double decay = rho - (1.0 - eps) * est.terminal_rate;
    if (!(decay > 0.0)) {
        throw DomainError("welfare tail diverges: rho - (1 - epsilon) g <= 0");
    }
    est.tail = std::exp(-rho * t_last) / (1.0 - eps) *
               (pos_pow(c_last, 1.0 - eps) / decay - 1.0 / rho);
    est.total = est.quadrature + est.tail;
    return est;
}

}  // namespace twosector
