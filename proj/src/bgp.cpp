#include "twosector/bgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "twosector/cd_model.hpp"
#include "twosector/ces_model.hpp"
#include "twosector/errors.hpp"
#include "twosector/math.hpp"
#include "twosector/states.hpp"

namespace twosector {

std::string_view to_string(Variant v) { return v == Variant::ces ? "ces" : "cd"; }

double transversality(double r_star, double rho, double epsilon) {
    return -(rho + (epsilon - 1.0) * r_star);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void add_gate_messages(ValidationReport& rep, double rho) {
    if (std::isnan(rep.left_bound) || std::isnan(rep.right_bound_1) || std::isnan(rep.right_bound_2)) {
        rep.messages.push_back("existence gates not evaluated");
        return;
    }
    if (!(rep.left_bound < rho)) {
        rep.messages.push_back(fmt::format("left bound violated: {} >= rho = {}", rep.left_bound, rho));
    }
    if (!(rho < rep.right_bound_1)) {
        rep.messages.push_back(
            fmt::format("right bound 1 violated: rho = {} >= {}", rho, rep.right_bound_1));
    }
    if (!(rho < rep.right_bound_2)) {
        rep.messages.push_back(
            fmt::format("right bound 2 violated: rho = {} >= {}", rho, rep.right_bound_2));
    }
}

void finish(ValidationReport& rep, double rho, double epsilon) {
    rep.epsilon_gt_one = epsilon > 1.0;
    add_gate_messages(rep, rho);
    rep.ok = rep.messages.empty();
}

/// Strict monotonicity of f on a geometric grid over [lo, hi].
void audit_monotone(const ScalarFn& f, double lo, double hi, std::size_t samples, int direction,
                    std::string_view name) {
    if (samples < 2 || !(hi > lo)) return;
    const double step = std::log(hi / lo) / static_cast<double>(samples - 1);
    double prev = f(lo);
    for (std::size_t i = 1; i < samples; ++i) {
        const double w = lo * std::exp(step * static_cast<double>(i));
        const double cur = f(w);
        const bool ok = direction < 0 ? cur < prev : cur > prev;
        if (!ok) {
            throw InvariantError(fmt::format(
                "paper-deviation: {} is not strictly {} near w = {} ({} -> {})", name,
                direction < 0 ? "decreasing" : "increasing", w, prev, cur));
        }
        prev = cur;
    }
}

RootResult solve_gap(const ScalarFn& f, const SolverOptions& opts, Bracket& br) {
    br = expand_bracket(f, opts.bracket);
    RootResult res = find_bracketed_root(f, br.lo, br.hi, opts.root);
    // Steep gaps can meet the width tolerance before the residual certificate;
    // keep narrowing down to adjacent doubles in that case.
    const double cert = kRootCertificate * std::max(1.0, std::abs(f(1.0)));
    if (std::abs(res.f_root) > cert && res.lo < res.hi) {
        RootOptions polish = opts.root;
        polish.tol = 0.0;
        polish.f_tol = cert;
        const std::size_t used = res.iterations;
        try {
            res = find_bracketed_root(f, res.lo, res.hi, polish);
        } catch (const BracketError&) {
            // an endpoint of the final bracket is already a root
        }
        res.iterations += used;
    }
    return res;
}

void require_interior(double x, std::string_view name) {
    if (!(x > kShareMargin && x < 1.0 - kShareMargin)) {
        throw InvariantError(fmt::format("steady state violates {} in (0,1): {} = {}", name, name, x));
    }
}

void check_common(const SteadyState& ss, double scale) {
    if (!(ss.r_star > 0.0)) {
        throw InvariantError(fmt::format("steady state violates r* > 0: r* = {}", ss.r_star));
    }
    require_interior(ss.u_star, "u*");
    require_interior(ss.v_star, "v*");
    if (!(ss.q_star > 0.0)) {
        throw InvariantError(fmt::format("steady state violates q* > 0: q* = {}", ss.q_star));
    }
    if (!(ss.z_star > 0.0) || !std::isfinite(ss.z_star)) {
        throw InvariantError(fmt::format("steady state violates z* > 0: z* = {}", ss.z_star));
    }
    if (!(ss.transversality < 0.0)) {
        throw InvariantError(fmt::format("transversality fails: l = {}", ss.transversality));
    }
    if (!(ss.residual <= kRootCertificate * std::max(1.0, scale))) {
        throw InvariantError(fmt::format("root certificate fails: |P(w*)| = {}", ss.residual));
    }
}

}  // namespace

ValidationReport validate(const CesParams& p, ParamMode mode) {
    ValidationReport rep;
    rep.variant = Variant::ces;
    rep.mode = mode;
    rep.messages = structural_violations(p, mode);

    const bool computable = std::isfinite(p.psi1) && std::isfinite(p.psi2) && p.psi1 != 0 &&
                            p.psi2 != 0 && p.alpha1 > 0 && p.alpha1 < 1 && p.alpha2 > 0 &&
                            p.alpha2 < 1;
    if (computable) {
        const double g_h0 = p.A2 * std::pow(1.0 - p.alpha2, 1.0 / p.psi2);
        rep.left_bound = (p.epsilon - 1.0) * (p.delta_h - g_h0);
        rep.right_bound_1 = p.A1 * std::pow(p.alpha1, 1.0 / p.psi1) - p.delta_k;
        rep.right_bound_2 = g_h0 + (p.epsilon - 1.0) * p.delta_h;
        rep.s2_at_0 = g_h0 - p.rho + (p.epsilon - 1.0) * p.delta_h;
        rep.s3_at_0 = (p.epsilon - 1.0) * g_h0 + p.rho - (p.epsilon - 1.0) * p.delta_h;
    } else {
        rep.left_bound = rep.right_bound_1 = rep.right_bound_2 = kNaN;
        rep.s2_at_0 = rep.s3_at_0 = kNaN;
    }
    finish(rep, p.rho, p.epsilon);
    return rep;
}

ValidationReport validate(const CdParams& p, ParamMode mode) {
    ValidationReport rep;
    rep.variant = Variant::cd;
    rep.mode = mode;
    rep.cd_adapted = true;
    rep.messages = structural_violations(p);
    rep.left_bound = rep.right_bound_1 = rep.right_bound_2 = kNaN;
    rep.s2_at_0 = rep.s3_at_0 = kNaN;

    if (rep.messages.empty()) {
        try {
            const ScalarFn f = [&p](double w) { return cd::gap(w, p); };
            Bracket br;
            const double w = solve_gap(f, SolverOptions{}, br).root;
            const double th = cd::structural(p).theta;
            const double x = p.A2 * std::pow(th, p.alpha) * std::pow(w, p.alpha);  // g / (h(1-u))
            const double g_h = cd::marginal_product_h(w, p);
            rep.left_bound = (p.epsilon - 1.0) * p.delta_h - (p.epsilon - 1.0 + p.alpha) * x;
            rep.right_bound_1 = cd::marginal_product_k(w, p) - p.delta_k;
            rep.right_bound_2 = g_h + (p.epsilon - 1.0) * p.delta_h;
            rep.s2_at_0 = rep.right_bound_2 - p.rho;
            rep.s3_at_0 = p.rho - rep.left_bound;
        } catch (const NumericalError& e) {
            rep.messages.push_back(fmt::format("CD-adapted gates not evaluable: {}", e.what()));
        }
    }
    finish(rep, p.rho, p.epsilon);
    return rep;
}

namespace {

void require_validated(const ValidationReport& rep) {
    if (rep.ok) return;
    std::string msg = fmt::format("{} parameters fail validation", to_string(rep.variant));
    for (const auto& m : rep.messages) msg += "; " + m;
    throw ParameterError(msg);
}

}  // namespace

SteadyState steady_state_ces(const CesParams& p, const SolverOptions& opts) {
    require_validated(validate(p, opts.mode));

    const ScalarFn f = [&p](double w) { return ces::gap(w, p); };
    Bracket br;
    const RootResult root = solve_gap(f, opts, br);
    audit_monotone(f, br.scanned_lo, br.scanned_hi, opts.monotonicity_samples, -1, "P_ces");

    SteadyState ss;
    ss.variant = Variant::ces;
    ss.w_star = root.root;
    ss.residual = std::abs(f(ss.w_star));
    ss.bracket_lo = root.lo;
    ss.bracket_hi = root.hi;
    ss.iterations = root.iterations;

    const double w = ss.w_star;
    const double th = ces::theta(p);
    const auto [P1, P2] = ces::shares(w, p);
    const double eps = p.epsilon;
    ss.r_star = (ces::marginal_product_k(w, p) - p.rho - p.delta_k) / eps;
    ss.u_star = 1.0 - (ss.r_star + p.delta_h) / (p.A2 * pos_pow(P2, 1.0 / p.psi2));
    const double tau = pos_pow(w, (p.psi1 - p.psi2) / (1.0 - p.psi2));
    ss.v_star = tau * ss.u_star / (1.0 + (tau - 1.0) * ss.u_star);
    const double P_eps = p.alpha1 * (eps * ss.v_star - 1.0) * pos_pow(th * w, p.psi1) +
                         eps * (1.0 - p.alpha1) * ss.v_star;
    ss.q_star = (p.A1 / (th * w) * P_eps * pos_pow(P1, 1.0 / p.psi1 - 1.0) + p.rho -
                 p.delta_k * (eps - 1.0)) /
                eps;
    ss.z_star = th * w * ss.u_star / ss.v_star;
    ss.transversality = transversality(ss.r_star, p.rho, eps);

    check_common(ss, std::abs(f(1.0)));
    if (std::abs(ss.u_star - ss.v_star) < kUvGuard) {
        throw InvariantError("steady state lies on the singular locus u* = v*");
    }
    const double q_at_rest =
        p.A1 * ss.v_star / (th * w) * pos_pow(P1, 1.0 / p.psi1) - p.delta_k - ss.r_star;
    if (std::abs(q_at_rest - ss.q_star) > 1e-9 * std::max(1.0, ss.q_star)) {
        throw InvariantError(fmt::format("q* = {} disagrees with capital accumulation at rest ({})",
                                         ss.q_star, q_at_rest));
    }
    return ss;
}

SteadyState steady_state_cd(const CdParams& p, const SolverOptions& opts) {
    require_validated(validate(p, opts.mode));

    const ScalarFn f = [&p](double w) { return cd::gap(w, p); };
    Bracket br;
    const RootResult root = solve_gap(f, opts, br);
    audit_monotone(f, br.scanned_lo, br.scanned_hi, opts.monotonicity_samples, +1, "P_cd");

    SteadyState ss;
    ss.variant = Variant::cd;
    ss.w_star = root.root;
    ss.residual = std::abs(f(ss.w_star));
    ss.bracket_lo = root.lo;
    ss.bracket_hi = root.hi;
    ss.iterations = root.iterations;

    const double w = ss.w_star;
    const auto st = cd::structural(p);
    const double th = st.theta;
    const double eps = p.epsilon;
    ss.r_star = (p.A1 * p.beta * pos_pow(w, p.beta - 1.0) - p.delta_k - p.rho) / eps;
    ss.u_star = 1.0 - (ss.r_star + p.delta_h) / (p.A2 * pos_pow(th, p.alpha) * pos_pow(w, p.alpha));
    ss.v_star = st.v_of_u(ss.u_star);
    const double mix = ss.u_star + th * (1.0 - ss.u_star);
    const double P_eps = ((eps - p.beta) * ss.u_star - p.beta * th * (1.0 - ss.u_star)) / mix;
    ss.q_star = (p.A1 * pos_pow(w, p.beta - 1.0) * P_eps + p.rho - p.delta_k * (eps - 1.0)) / eps;
    ss.z_star = w * mix;
    ss.transversality = transversality(ss.r_star, p.rho, eps);

    check_common(ss, std::abs(f(1.0)));
    return ss;
}

}  // namespace twosector
