#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace twosector {

/// How strictly CES substitution parameters are checked. Strict mode keeps
/// psi in (0,1), the range where the balanced-growth limit arguments hold;
/// permissive mode also admits psi < 0 and leaves existence to the bracket
/// search.
enum class ParamMode { strict, permissive };

std::string_view to_string(ParamMode mode);
ParamMode param_mode_from_string(std::string_view s);

/// Two distinct CES technologies: goods sector (A1, alpha1, psi1) and
/// education sector (A2, alpha2, psi2).
struct CesParams {
    double A1 = 0.0;
    double A2 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;
    double delta_k = 0.0;
    double delta_h = 0.0;
    double rho = 0.0;
    double epsilon = 0.0;

    bool operator==(const CesParams&) const = default;
};

/// Two distinct Cobb-Douglas technologies: f = A1 (kv)^beta (hu)^(1-beta),
/// g = A2 [k(1-v)]^alpha [h(1-u)]^(1-alpha).
struct CdParams {
    double A1 = 0.0;
    double A2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double delta_k = 0.0;
    double delta_h = 0.0;
    double rho = 0.0;
    double epsilon = 0.0;

    bool operator==(const CdParams&) const = default;
};

/// Violations of the structural invariants (positivity, share ranges,
/// distinct technologies, epsilon > 1). Empty means the type invariants hold.
std::vector<std::string> structural_violations(const CesParams& p, ParamMode mode);
std::vector<std::string> structural_violations(const CdParams& p);

/// Throws ParameterError listing every violation.
void require_valid(const CesParams& p, ParamMode mode);
void require_valid(const CdParams& p);

/// Benchmark economies used throughout the tests and shipped configs.
namespace benchmarks {
CdParams cd_case1();
CdParams cd_case2();
/// Mild substitution asymmetry around CD case 1 (psi2 < 0: permissive mode).
CesParams ces_canonical();
}  // namespace benchmarks

}  // namespace twosector
