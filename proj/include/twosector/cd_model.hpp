#pragma once

#include "twosector/params.hpp"
#include "twosector/states.hpp"

/// Algebra of the two-Cobb-Douglas economy.
///
/// The sectoral intensity w = kv/(hu) = z / (u + theta(1-u)) closes the
/// four-equation system; with it the stationary (z, q, u) system follows
/// from the full one by z = k/h, q = c/k. D_cd and P_cd carry the sign
/// conventions of this variant and are unrelated to CesAux::D_ces/P_ces.
namespace twosector::cd {

struct Structure {
    double theta = 0.0;  ///< alpha(1-beta) / (beta(1-alpha))

    /// Physical-capital share implied by the human-capital share.
    double v_of_u(double u) const { return u / (u + theta * (1.0 - u)); }
};

Structure structural(const CdParams& p);

/// u + theta(1-u); the denominator shared by v(u), w and the u' equation.
double share_mix(double u, const CdParams& p);

double w_of(double z, double u, const CdParams& p);

Outputs production(double k, double h, double u, const CdParams& p);

/// f_k = A1 beta w^(beta-1).
double marginal_product_k(double w, const CdParams& p);
/// g_h = A2 (1-alpha) theta^alpha w^alpha.
double marginal_product_h(double w, const CdParams& p);

/// P_cd(w) = g_h - f_k + delta_k - delta_h = g_lambda - g_mu; strictly
/// increasing in w.
double gap(double w, const CdParams& p);

/// D_cd(z,u) = f/k - g/h + delta_h - delta_k.
double D_cd(double z, double u, const CdParams& p);
/// P_cd(z,u), i.e. gap(w_of(z,u)).
double P_cd(double z, double u, const CdParams& p);
/// H(z,u) = w^(beta-1) P_eps(u).
double H_cd(double z, double u, const CdParams& p);
/// ((epsilon-beta)u - beta theta (1-u)) / (u + theta(1-u)).
double P_eps(double u, const CdParams& p);

struct FullRhs {
    CdFullState derivative;
    CostateRates costates;
};

FullRhs full_rhs(const CdFullState& x, const CdParams& p);

ReducedStateCd reduced_rhs(const ReducedStateCd& x, const CdParams& p);

Outputs output_growth(const CdFullState& x, const CdFullState& xdot, const CdParams& p);

}  // namespace twosector::cd
