#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "twosector/bgp.hpp"
#include "twosector/params.hpp"
#include "twosector/states.hpp"

namespace twosector {

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline constexpr double kJacobianRelStep = 1e-6;

/// Central-difference Jacobian; column j uses h_j = rel_step * max(|x0_j|, 1).
Eigen::MatrixXd numeric_jacobian(const VectorFn& f, const Eigen::VectorXd& x0,
                                 double rel_step = kJacobianRelStep);

/// Eigenvalues of a real n x n matrix, n <= 4, sorted by real part
/// descending, then imaginary part descending.
std::vector<std::complex<double>> eigen_small(const Eigen::MatrixXd& m);

struct EigenPair {
    std::complex<double> value;
    Eigen::VectorXcd vector;  ///< unit 2-norm
};

/// Eigenpairs in the order of eigen_small.
std::vector<EigenPair> eigen_pairs_small(const Eigen::MatrixXd& m);

enum class Classification { saddle_path, degenerate, unstable, indeterminate };

std::string_view to_string(Classification c);

struct StabilityReport {
    Variant variant = Variant::ces;
    SteadyState steady_state;
    Eigen::MatrixXd jacobian;
    std::vector<std::complex<double>> eigenvalues;
    double determinant = 0.0;
    double det_tol = 0.0;       ///< 1e-6 * max(1, ||J||_inf)^n
    double eig_zero_tol = 0.0;  ///< 1e-6 * max(1, spectral radius)
    int n_stable = 0;
    int n_unstable = 0;
    int n_center = 0;
    Classification classification = Classification::indeterminate;
    /// CES only (NaN for CD): z - theta w u / v at the steady state, and
    /// ||g^T J|| / (||g|| ||J||_F) for the gradient g of that residual.
    double constraint_residual = 0.0;
    double null_vector_residual = 0.0;
    bool paper_deviation = false;
    std::vector<std::string> findings;
};

inline constexpr double kNullVectorTol = 1e-5;

/// Steady state, reduced-system Jacobian there, its spectrum and verdict.
///
/// CD: saddle_path iff exactly one eigenvalue has negative real part (z is
/// the one predetermined variable). CES: degenerate when the determinant
/// and the smallest |eigenvalue| are both numerically zero; otherwise
/// indeterminate with paper_deviation set.
StabilityReport stability_report(const CesParams& p, const SolverOptions& opts = {});
StabilityReport stability_report(const CdParams& p, const SolverOptions& opts = {});

/// z - theta * w(u,v) * u / v; zero on states obtained from a full state.
double ces_constraint_residual(const ReducedStateCes& x, const CesParams& p);

/// Central-difference gradient of ces_constraint_residual in (z, q, u, v).
Eigen::Vector4d ces_constraint_gradient(const ReducedStateCes& x, const CesParams& p);

VectorFn reduced_system(const CesParams& p);
VectorFn reduced_system(const CdParams& p);

}  // namespace twosector
