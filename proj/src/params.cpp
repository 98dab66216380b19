#include "twosector/params.hpp"

#include <cmath>

#include <fmt/format.h>

#include "twosector/errors.hpp"

namespace twosector {

std::string_view to_string(ParamMode mode) {
    return mode == ParamMode::strict ? "strict" : "permissive";
}

ParamMode param_mode_from_string(std::string_view s) {
    if (s == "strict") return ParamMode::strict;
    if (s == "permissive") return ParamMode::permissive;
    throw ConfigError(fmt::format("unknown parameter mode '{}'", s));
}

namespace {

void check_finite(std::vector<std::string>& out, std::string_view name, double x) {
    if (!std::isfinite(x)) out.push_back(fmt::format("{} is not finite", name));
}

void check_common(std::vector<std::string>& out, double A1, double A2, double delta_k,
                  double delta_h, double rho, double epsilon) {
    if (!(A1 > 0)) out.push_back(fmt::format("A1 must be > 0 (got {})", A1));
    if (!(A2 > 0)) out.push_back(fmt::format("A2 must be > 0 (got {})", A2));
    if (!(delta_k >= 0)) out.push_back(fmt::format("delta_k must be >= 0 (got {})", delta_k));
    if (!(delta_h >= 0)) out.push_back(fmt::format("delta_h must be >= 0 (got {})", delta_h));
    if (!(rho > 0)) out.push_back(fmt::format("rho must be > 0 (got {})", rho));
    if (!(epsilon > 1)) out.push_back(fmt::format("epsilon must be > 1 (got {})", epsilon));
}

void check_unit(std::vector<std::string>& out, std::string_view name, double x) {
    if (!(x > 0 && x < 1)) out.push_back(fmt::format("{} must lie in (0,1) (got {})", name, x));
}

void throw_if_any(const std::vector<std::string>& v, std::string_view what) {
    if (v.empty()) return;
    std::string msg(what);
    for (const auto& m : v) msg += "; " + m;
    throw ParameterError(msg);
}

}  // namespace

std::vector<std::string> structural_violations(const CesParams& p, ParamMode mode) {
    std::vector<std::string> out;
    check_finite(out, "A1", p.A1);
    check_finite(out, "A2", p.A2);
    check_finite(out, "alpha1", p.alpha1);
    check_finite(out, "alpha2", p.alpha2);
    check_finite(out, "psi1", p.psi1);
    check_finite(out, "psi2", p.psi2);
    check_finite(out, "delta_k", p.delta_k);
    check_finite(out, "delta_h", p.delta_h);
    check_finite(out, "rho", p.rho);
    check_finite(out, "epsilon", p.epsilon);
    check_common(out, p.A1, p.A2, p.delta_k, p.delta_h, p.rho, p.epsilon);
    check_unit(out, "alpha1", p.alpha1);
    check_unit(out, "alpha2", p.alpha2);
    if (!(p.psi1 < 1)) out.push_back(fmt::format("psi1 must be < 1 (got {})", p.psi1));
    if (!(p.psi2 < 1)) out.push_back(fmt::format("psi2 must be < 1 (got {})", p.psi2));
    if (p.psi1 == 0) out.push_back("psi1 must be nonzero");
    if (p.psi2 == 0) out.push_back("psi2 must be nonzero");
    if (p.psi1 == p.psi2) out.push_back("psi1 and psi2 must differ");
    if (mode == ParamMode::strict) {
        if (!(p.psi1 > 0)) out.push_back(fmt::format("strict mode requires psi1 in (0,1) (got {})", p.psi1));
        if (!(p.psi2 > 0)) out.push_back(fmt::format("strict mode requires psi2 in (0,1) (got {})", p.psi2));
    }
    return out;
}

std::vector<std::string> structural_violations(const CdParams& p) {
    std::vector<std::string> out;
    check_finite(out, "A1", p.A1);
    check_finite(out, "A2", p.A2);
    check_finite(out, "alpha", p.alpha);
    check_finite(out, "beta", p.beta);
    check_finite(out, "delta_k", p.delta_k);
    check_finite(out, "delta_h", p.delta_h);
    check_finite(out, "rho", p.rho);
    check_finite(out, "epsilon", p.epsilon);
    check_common(out, p.A1, p.A2, p.delta_k, p.delta_h, p.rho, p.epsilon);
    check_unit(out, "alpha", p.alpha);
    check_unit(out, "beta", p.beta);
    if (p.alpha == p.beta) out.push_back("alpha and beta must differ");
    return out;
}

void require_valid(const CesParams& p, ParamMode mode) {
    throw_if_any(structural_violations(p, mode), "invalid CES parameters");
}

void require_valid(const CdParams& p) {
    throw_if_any(structural_violations(p), "invalid Cobb-Douglas parameters");
}

namespace benchmarks {

CdParams cd_case1() {
    return CdParams{.A1 = 1.05, .A2 = 0.20, .alpha = 0.45, .beta = 0.75,
                    .delta_k = 0.06, .delta_h = 0.05, .rho = 0.06, .epsilon = 2.0};
}

CdParams cd_case2() {
    return CdParams{.A1 = 1.05, .A2 = 0.20, .alpha = 0.75, .beta = 0.45,
                    .delta_k = 0.06, .delta_h = 0.05, .rho = 0.06, .epsilon = 2.0};
}

CesParams ces_canonical() {
    return CesParams{.A1 = 1.05, .A2 = 0.20, .alpha1 = 0.75, .alpha2 = 0.45,
                     .psi1 = 0.2, .psi2 = -0.2, .delta_k = 0.06, .delta_h = 0.05,
                     .rho = 0.06, .epsilon = 2.0};
}

}  // namespace benchmarks

}  // namespace twosector
