#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "twosector/params.hpp"
#include "twosector/roots.hpp"

namespace twosector {

enum class Variant { ces, cd };

std::string_view to_string(Variant v);

/// Outcome of checking an economy against the balanced-growth existence
/// gates: left_bound < rho < min(right_bound_1, right_bound_2), epsilon > 1
/// and the structural invariants of the parameter type.
///
/// For CES the bounds are the w -> 0 / w -> infinity limits of the gap
/// function and s2_at_0, s3_at_0 the matching proof quantities. The
/// Cobb-Douglas marginal products have no finite limits, so the CD gates are
/// evaluated at the solved w* instead (cd_adapted = true); there they are
/// exactly r* > 0 and 0 < u* < 1.
struct ValidationReport {
    bool ok = false;
    Variant variant = Variant::ces;
    ParamMode mode = ParamMode::strict;
    double left_bound = 0.0;
    double right_bound_1 = 0.0;
    double right_bound_2 = 0.0;
    double s2_at_0 = 0.0;
    double s3_at_0 = 0.0;
    bool epsilon_gt_one = false;
    bool cd_adapted = false;
    std::vector<std::string> messages;
};

/// Never throws on a violation; every failed gate becomes a message.
ValidationReport validate(const CesParams& p, ParamMode mode);
ValidationReport validate(const CdParams& p, ParamMode mode = ParamMode::strict);

struct SolverOptions {
    BracketPolicy bracket;
    RootOptions root;
    ParamMode mode = ParamMode::strict;
    std::size_t monotonicity_samples = 1000;
};

/// Margin kept from the closed unit interval for accepted shares.
inline constexpr double kShareMargin = 1e-10;
/// Accepted |P(w*)| relative to max(1, |P(1)|).
inline constexpr double kRootCertificate = 1e-10;

struct SteadyState {
    Variant variant = Variant::ces;
    double w_star = 0.0;
    double r_star = 0.0;  ///< common growth rate of k, h, c, y1, y2
    double u_star = 0.0;
    double v_star = 0.0;
    double q_star = 0.0;  ///< c/k
    double z_star = 0.0;  ///< k/h
    double transversality = 0.0;
    double residual = 0.0;  ///< |P(w*)|
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::size_t iterations = 0;
};

/// Throws ParameterError on a failed validation, BracketError/ConvergenceError
/// when the root search fails, InvariantError when a post-condition of the
/// steady state (or the monotonicity audit of the gap function) fails.
SteadyState steady_state_ces(const CesParams& p, const SolverOptions& opts = {});
SteadyState steady_state_cd(const CdParams& p, const SolverOptions& opts = {});

/// Limit of the transversality expressions on the balanced growth path,
/// -(rho + (epsilon - 1) r*). Negative means both conditions hold.
double transversality(double r_star, double rho, double epsilon);

}  // namespace twosector
