#pragma once

#include <Eigen/Core>

namespace twosector {

/// |u - v| below this is the singular locus of the CES dynamics.
inline constexpr double kUvGuard = 1e-8;

/// Point of the five-variable CES system. Also used for its time derivative.
struct FullState {
    static constexpr int dim = 5;
    double k = 0.0;  ///< physical capital per worker
    double h = 0.0;  ///< human capital
    double c = 0.0;  ///< consumption
    double u = 0.0;  ///< human-capital share in the goods sector
    double v = 0.0;  ///< physical-capital share in the goods sector

    Eigen::VectorXd to_vector() const { return Eigen::Vector<double, 5>(k, h, c, u, v); }
    static FullState from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
        return {x(0), x(1), x(2), x(3), x(4)};
    }
};

/// Cobb-Douglas full state; v follows from u through the static efficiency
/// condition and is not carried.
struct CdFullState {
    static constexpr int dim = 4;
    double k = 0.0;
    double h = 0.0;
    double c = 0.0;
    double u = 0.0;

    Eigen::VectorXd to_vector() const { return Eigen::Vector4d(k, h, c, u); }
    static CdFullState from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
        return {x(0), x(1), x(2), x(3)};
    }
};

/// Stationary CES variables: z = k/h, q = c/k and the two shares.
struct ReducedStateCes {
    static constexpr int dim = 4;
    double z = 0.0;
    double q = 0.0;
    double u = 0.0;
    double v = 0.0;

    Eigen::VectorXd to_vector() const { return Eigen::Vector4d(z, q, u, v); }
    static ReducedStateCes from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
        return {x(0), x(1), x(2), x(3)};
    }
};

struct ReducedStateCd {
    static constexpr int dim = 3;
    double z = 0.0;
    double q = 0.0;
    double u = 0.0;

    Eigen::VectorXd to_vector() const { return Eigen::Vector3d(z, q, u); }
    static ReducedStateCd from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
        return {x(0), x(1), x(2)};
    }
};

/// The two sectoral outputs, or their proportional growth rates.
struct Outputs {
    double y1 = 0.0;
    double y2 = 0.0;
};

/// Proportional growth rates of the shadow prices of k (lambda) and h (mu).
struct CostateRates {
    double g_lambda = 0.0;
    double g_mu = 0.0;
    double ratio_mu_lambda = 0.0;
};

}  // namespace twosector
