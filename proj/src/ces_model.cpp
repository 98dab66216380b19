#include "twosector/ces_model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "twosector/errors.hpp"
#include "twosector/math.hpp"

namespace twosector::ces {

double theta(const CesParams& p) {
    if (p.psi1 == p.psi2) {
        throw ParameterError("theta undefined: psi1 == psi2");
    }
    const double ratio = p.alpha2 * (1.0 - p.alpha1) / (p.alpha1 * (1.0 - p.alpha2));
    return pos_pow(ratio, 1.0 / (p.psi1 - p.psi2), "distribution ratio");
}

WTau w_tau(double u, double v, const CesParams& p) {
    require_share(u, "u");
    require_share(v, "v");
    const double ratio = v * (1.0 - u) / (u * (1.0 - v));
    const double w = pos_pow(ratio, (1.0 - p.psi2) / (p.psi1 - p.psi2), "share ratio");
    return {w, pos_pow(w, (p.psi1 - p.psi2) / (1.0 - p.psi2), "w")};
}

Shares shares(double w, const CesParams& p) {
    const double th = theta(p);
    const double P1 = p.alpha1 * pos_pow(th * w, p.psi1, "theta*w") + 1.0 - p.alpha1;
    const double P2 = p.alpha2 * pos_pow(th, p.psi2) *
                          pos_pow(w, p.psi2 * (1.0 - p.psi1) / (1.0 - p.psi2), "w") +
                      1.0 - p.alpha2;
    return {P1, P2};
}

Outputs production(double k, double h, double u, double v, const CesParams& p) {
    require_positive(k, "k");
    require_positive(h, "h");
    require_share(u, "u");
    require_share(v, "v");
    const double goods = p.alpha1 * pos_pow(k * v, p.psi1) +
                         (1.0 - p.alpha1) * pos_pow(h * u, p.psi1);
    const double educ = p.alpha2 * pos_pow(k * (1.0 - v), p.psi2) +
                        (1.0 - p.alpha2) * pos_pow(h * (1.0 - u), p.psi2);
    return {p.A1 * pos_pow(goods, 1.0 / p.psi1, "goods aggregate"),
            p.A2 * pos_pow(educ, 1.0 / p.psi2, "education aggregate")};
}

double marginal_product_k(double w, const CesParams& p) {
    const double th = theta(p);
    const auto [P1, P2] = shares(w, p);
    return p.alpha1 * p.A1 * pos_pow(th * w, p.psi1 - 1.0) * pos_pow(P1, 1.0 / p.psi1 - 1.0, "P1");
}

double marginal_product_h(double w, const CesParams& p) {
    const auto [P1, P2] = shares(w, p);
    return (1.0 - p.alpha2) * p.A2 * pos_pow(P2, 1.0 / p.psi2 - 1.0, "P2");
}

double gap(double w, const CesParams& p) {
    return marginal_product_k(w, p) - marginal_product_h(w, p) - (p.delta_k - p.delta_h);
}

double implied_z(double u, double v, const CesParams& p) {
    return theta(p) * w_tau(u, v, p).w * u / v;
}

CesAux aux(double u, double v, const CesParams& p) {
    if (std::abs(u - v) < kUvGuard) {
        throw SingularityError(fmt::format("|u - v| = {:.3g} inside the singular band (w = 1, R = 0)",
                                           std::abs(u - v)));
    }
    CesAux a;
    a.theta = theta(p);
    const auto wt = w_tau(u, v, p);
    a.w = wt.w;
    a.tau = wt.tau;
    const auto s = shares(a.w, p);
    a.P1 = s.P1;
    a.P2 = s.P2;

    const double tw = a.theta * a.w;
    const double f_over_k = p.A1 * v / tw * pos_pow(a.P1, 1.0 / p.psi1, "P1");
    const double g_over_h = p.A2 * (1.0 - u) * pos_pow(a.P2, 1.0 / p.psi2, "P2");
    a.D_ces = g_over_h - f_over_k + p.delta_k - p.delta_h;
    a.P_ces = p.alpha1 * p.A1 * pos_pow(tw, p.psi1 - 1.0) * pos_pow(a.P1, 1.0 / p.psi1 - 1.0) -
              (1.0 - p.alpha2) * p.A2 * pos_pow(a.P2, 1.0 / p.psi2 - 1.0) -
              (p.delta_k - p.delta_h);
    a.T = p.alpha1 * (1.0 - p.alpha2) * pos_pow(tw, p.psi1) * (a.tau - 1.0) / a.tau;
    a.Q = a.P1 * a.P2;
    a.R = (1.0 - p.psi1) * (1.0 - p.psi2) * a.T;
    a.G1 = (p.psi1 - p.psi2) * u + 1.0 - p.psi1;
    a.G2 = (p.psi1 - p.psi2) * v + 1.0 - p.psi1;
    a.P_eps = p.alpha1 * (p.epsilon * v - 1.0) * pos_pow(tw, p.psi1) +
              p.epsilon * (1.0 - p.alpha1) * v;
    return a;
}

CostateRates costates(double u, double v, const CesParams& p) {
    const double th = theta(p);
    const double w = w_tau(u, v, p).w;
    const auto [P1, P2] = shares(w, p);
    CostateRates r;
    r.g_lambda = p.rho + p.delta_k - marginal_product_k(w, p);
    r.g_mu = p.rho + p.delta_h - marginal_product_h(w, p);
    r.ratio_mu_lambda = p.A1 * p.alpha1 * pos_pow(th, p.psi1 - p.psi2) / (p.A2 * p.alpha2) *
                        pos_pow(P1, 1.0 / p.psi1 - 1.0) / pos_pow(P2, 1.0 / p.psi2 - 1.0);
    return r;
}

double consumption_growth(double w, const CesParams& p) {
    const double th = theta(p);
    const double P1 = shares(w, p).P1;
    return -(p.rho + p.delta_k) / p.epsilon +
           p.alpha1 * p.A1 * pos_pow(th * w, p.psi1 - 1.0) / p.epsilon *
               pos_pow(P1, 1.0 / p.psi1 - 1.0);
}

FullState full_rhs(const FullState& x, const CesParams& p) {
    require_positive(x.k, "k");
    require_positive(x.h, "h");
    require_positive(x.c, "c");
    const CesAux a = aux(x.u, x.v, p);
    const double c_over_k = x.c / x.k;
    const double tw = a.theta * a.w;

    const double gk = p.A1 * x.v / tw * pos_pow(a.P1, 1.0 / p.psi1) - c_over_k - p.delta_k;
    const double gh = p.A2 * pos_pow(a.P2, 1.0 / p.psi2) * (1.0 - x.u) - p.delta_h;
    const double gc = consumption_growth(a.w, p);
    const double base = a.D_ces + c_over_k;
    const double gu = (base + a.Q * a.G2 * a.P_ces / a.R) * (1.0 - x.u) / (x.u - x.v);
    const double gv = (base + a.Q * a.G1 * a.P_ces / a.R) * (1.0 - x.v) / (x.u - x.v);
    return {gk * x.k, gh * x.h, gc * x.c, gu * x.u, gv * x.v};
}

ReducedStateCes reduced_rhs(const ReducedStateCes& x, const CesParams& p) {
    require_positive(x.z, "z");
    require_positive(x.q, "q");
    const CesAux a = aux(x.u, x.v, p);
    const double eps = p.epsilon;
    const double base = a.D_ces + x.q;

    ReducedStateCes d;
    d.z = -base * x.z;
    d.q = (x.q - p.A1 * a.P_eps * pos_pow(a.P1, 1.0 / p.psi1 - 1.0) / (eps * a.theta * a.w) -
           (p.rho - (eps - 1.0) * p.delta_k) / eps) *
          x.q;
    d.u = (base + a.G2 * a.Q * a.P_ces / a.R) * x.u * (1.0 - x.u) / (x.u - x.v);
    d.v = (base + a.G1 * a.Q * a.P_ces / a.R) * x.v * (1.0 - x.v) / (x.u - x.v);
    return d;
}

Outputs output_growth(const FullState& x, const FullState& xdot, const CesParams& p) {
    const double kv = pos_pow(x.k * x.v, p.psi1);
    const double hu = pos_pow(x.h * x.u, p.psi1);
    const double s1 = p.alpha1 * kv / (p.alpha1 * kv + (1.0 - p.alpha1) * hu);
    const double kv2 = pos_pow(x.k * (1.0 - x.v), p.psi2);
    const double hu2 = pos_pow(x.h * (1.0 - x.u), p.psi2);
    const double s2 = p.alpha2 * kv2 / (p.alpha2 * kv2 + (1.0 - p.alpha2) * hu2);

    const double gk = xdot.k / x.k;
    const double gh = xdot.h / x.h;
    const double gy1 = s1 * (gk + xdot.v / x.v) + (1.0 - s1) * (gh + xdot.u / x.u);
    const double gy2 = s2 * (gk - xdot.v / (1.0 - x.v)) + (1.0 - s2) * (gh - xdot.u / (1.0 - x.u));
    return {gy1, gy2};
}

}  // namespace twosector::ces
