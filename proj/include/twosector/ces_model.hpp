#pragma once

#include "twosector/params.hpp"
#include "twosector/states.hpp"

/// Algebra of the two-CES economy. Every function is pure.
///
/// Notation: theta and w map the share pair (u, v) to the goods-sector
/// capital intensity kv/(hu) = theta * w, and P1, P2 are the CES aggregates
/// normalized by the effective-labour input of each sector.
namespace twosector::ces {

struct WTau {
    double w = 0.0;
    double tau = 0.0;  ///< w^((psi1-psi2)/(1-psi2)) = v(1-u)/(u(1-v))
};

struct Shares {
    double P1 = 0.0;
    double P2 = 0.0;
};

/// Auxiliary quantities of the closed CES dynamics at a share pair.
struct CesAux {
    double theta = 0.0;
    double w = 0.0;
    double tau = 0.0;
    double P1 = 0.0;
    double P2 = 0.0;
    double D_ces = 0.0;  ///< g/h - f/k + delta_k - delta_h
    double P_ces = 0.0;  ///< f_k - g_h - (delta_k - delta_h) = g_mu - g_lambda
    double Q = 0.0;      ///< P1 * P2
    double R = 0.0;      ///< (1-psi1)(1-psi2) T
    double T = 0.0;
    double G1 = 0.0;
    double G2 = 0.0;
    double P_eps = 0.0;
};

/// [alpha2(1-alpha1) / (alpha1(1-alpha2))]^(1/(psi1-psi2)).
double theta(const CesParams& p);

WTau w_tau(double u, double v, const CesParams& p);

Shares shares(double w, const CesParams& p);

/// Goods output y1 and education output y2.
Outputs production(double k, double h, double u, double v, const CesParams& p);

/// Throws SingularityError when |u - v| < kUvGuard (T = R = 0 at u = v).
CesAux aux(double u, double v, const CesParams& p);

/// Marginal product of physical capital in goods, f_k, at intensity w.
double marginal_product_k(double w, const CesParams& p);
/// Marginal product of human capital in education, g_h, at intensity w.
double marginal_product_h(double w, const CesParams& p);

/// Balanced-growth gap P(w) = f_k - g_h - (delta_k - delta_h). Strictly
/// decreasing in w; its root is w*.
double gap(double w, const CesParams& p);

/// z implied by the shares, theta * w(u,v) * u / v.
double implied_z(double u, double v, const CesParams& p);

CostateRates costates(double u, double v, const CesParams& p);

/// Consumption growth (f_k - rho - delta_k)/epsilon, written as in the
/// third line of the full system.
double consumption_growth(double w, const CesParams& p);

/// Time derivatives (k', h', c', u', v').
FullState full_rhs(const FullState& x, const CesParams& p);

/// Time derivatives (z', q', u', v') of the stationary system.
ReducedStateCes reduced_rhs(const ReducedStateCes& x, const CesParams& p);

/// Growth rates of y1, y2 along a full-system trajectory with derivative xdot.
Outputs output_growth(const FullState& x, const FullState& xdot, const CesParams& p);

}  // namespace twosector::ces
