#include "twosector/cd_model.hpp"

#include "twosector/errors.hpp"
#include "twosector/math.hpp"

namespace twosector::cd {

Structure structural(const CdParams& p) {
    if (p.alpha == p.beta) {
        throw ParameterError("Cobb-Douglas variant requires alpha != beta");
    }
    return {p.alpha * (1.0 - p.beta) / (p.beta * (1.0 - p.alpha))};
}

double share_mix(double u, const CdParams& p) {
    const double s = u + structural(p).theta * (1.0 - u);
    if (!(s > 0.0)) {
        throw DomainError("u + theta(1-u) must be positive");
    }
    return s;
}

double w_of(double z, double u, const CdParams& p) {
    require_positive(z, "z");
    return z / share_mix(u, p);
}

Outputs production(double k, double h, double u, const CdParams& p) {
    require_positive(k, "k");
    require_positive(h, "h");
    require_share(u, "u");
    const double v = structural(p).v_of_u(u);
    return {p.A1 * pos_pow(k * v, p.beta) * pos_pow(h * u, 1.0 - p.beta),
            p.A2 * pos_pow(k * (1.0 - v), p.alpha) * pos_pow(h * (1.0 - u), 1.0 - p.alpha)};
}

double marginal_product_k(double w, const CdParams& p) {
    return p.A1 * p.beta * pos_pow(w, p.beta - 1.0, "w");
}

double marginal_product_h(double w, const CdParams& p) {
    const double th = structural(p).theta;
    return p.A2 * (1.0 - p.alpha) * pos_pow(th, p.alpha) * pos_pow(w, p.alpha, "w");
}

double gap(double w, const CdParams& p) {
    return marginal_product_h(w, p) - marginal_product_k(w, p) + p.delta_k - p.delta_h;
}

double D_cd(double z, double u, const CdParams& p) {
    const double th = structural(p).theta;
    const double s = share_mix(u, p);
    require_positive(z, "z");
    return p.A1 * u * pos_pow(z, p.beta - 1.0) / pos_pow(s, p.beta) -
           p.A2 * pos_pow(th, p.alpha) * (1.0 - u) * pos_pow(z, p.alpha) / pos_pow(s, p.alpha) +
           p.delta_h - p.delta_k;
}

double P_cd(double z, double u, const CdParams& p) {
    const double th = structural(p).theta;
    const double s = share_mix(u, p);
    require_positive(z, "z");
    return p.A2 * (1.0 - p.alpha) * pos_pow(th, p.alpha) * pos_pow(z, p.alpha) / pos_pow(s, p.alpha) -
           p.A1 * p.beta * pos_pow(z, p.beta - 1.0) / pos_pow(s, p.beta - 1.0) + p.delta_k -
           p.delta_h;
}

double P_eps(double u, const CdParams& p) {
    const double th = structural(p).theta;
    return ((p.epsilon - p.beta) * u - p.beta * th * (1.0 - u)) / share_mix(u, p);
}

double H_cd(double z, double u, const CdParams& p) {
    require_positive(z, "z");
    return pos_pow(z, p.beta - 1.0) * P_eps(u, p) / pos_pow(share_mix(u, p), p.beta - 1.0);
}

FullRhs full_rhs(const CdFullState& x, const CdParams& p) {
    require_positive(x.k, "k");
    require_positive(x.h, "h");
    require_positive(x.c, "c");
    require_share(x.u, "u");
    const double th = structural(p).theta;
    const double s = share_mix(x.u, p);
    const double w = w_of(x.k / x.h, x.u, p);
    const double c_over_k = x.c / x.k;

    const double wb = pos_pow(w, p.beta - 1.0);
    const double wa = pos_pow(th, p.alpha) * pos_pow(w, p.alpha);
    const double f_over_k = p.A1 * x.u * wb / s;
    const double g_over_h = p.A2 * wa * (1.0 - x.u);
    const double D = f_over_k - g_over_h + p.delta_h - p.delta_k;
    const double P = p.A2 * (1.0 - p.alpha) * wa - p.A1 * p.beta * wb + p.delta_k - p.delta_h;

    const double gk = f_over_k - c_over_k - p.delta_k;
    const double gh = g_over_h - p.delta_h;
    const double gc = (p.A1 * p.beta * wb - p.delta_k - p.rho) / p.epsilon;
    const double gu = ((p.beta - p.alpha) * (D - c_over_k) + P) * s /
                      ((p.beta - p.alpha) * (1.0 - th) * x.u);

    FullRhs out;
    out.derivative = {gk * x.k, gh * x.h, gc * x.c, gu * x.u};
    out.costates.g_lambda = p.rho + p.delta_k - p.A1 * p.beta * wb;
    out.costates.g_mu = p.rho + p.delta_h - p.A2 * (1.0 - p.alpha) * wa;
    // mu/lambda = f_k / g_k
    out.costates.ratio_mu_lambda =
        p.A1 * p.beta * wb / (p.A2 * p.alpha * pos_pow(th * w, p.alpha - 1.0));
    return out;
}

ReducedStateCd reduced_rhs(const ReducedStateCd& x, const CdParams& p) {
    require_positive(x.z, "z");
    require_positive(x.q, "q");
    const double th = structural(p).theta;
    const double s = share_mix(x.u, p);
    const double D = D_cd(x.z, x.u, p);
    const double P = P_cd(x.z, x.u, p);
    const double H = H_cd(x.z, x.u, p);
    const double eps = p.epsilon;

    ReducedStateCd d;
    d.z = (D - x.q) * x.z;
    d.q = (-p.A1 * H / eps + x.q + ((eps - 1.0) * p.delta_k - p.rho) / eps) * x.q;
    d.u = ((p.beta - p.alpha) * (D - x.q) + P) * s / ((p.beta - p.alpha) * (1.0 - th));
    return d;
}

Outputs output_growth(const CdFullState& x, const CdFullState& xdot, const CdParams& p) {
    const double th = structural(p).theta;
    const double s = share_mix(x.u, p);
    const double gk = xdot.k / x.k;
    const double gh = xdot.h / x.h;
    const double gu = xdot.u / x.u;
    const double dlog_s = (1.0 - th) * xdot.u / s;
    const double gv = gu - dlog_s;                              // v = u/s
    const double g1mv = -xdot.u / (1.0 - x.u) - dlog_s;         // 1-v = theta(1-u)/s
    const double g1mu = -xdot.u / (1.0 - x.u);
    return {p.beta * (gk + gv) + (1.0 - p.beta) * (gh + gu),
            p.alpha * (gk + g1mv) + (1.0 - p.alpha) * (gh + g1mu)};
}

}  // namespace twosector::cd
