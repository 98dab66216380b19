#include "twosector/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "twosector/cd_model.hpp"
#include "twosector/ces_model.hpp"
#include "twosector/errors.hpp"

namespace twosector {

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::saddle_path: return "saddle_path";
        case Classification::degenerate: return "degenerate";
        case Classification::unstable: return "unstable";
        case Classification::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

Eigen::MatrixXd numeric_jacobian(const VectorFn& f, const Eigen::VectorXd& x0, double rel_step) {
    const Eigen::Index n = x0.size();
    Eigen::MatrixXd jac;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = rel_step * std::max(std::abs(x0(j)), 1.0);
        Eigen::VectorXd xp = x0;
        Eigen::VectorXd xm = x0;
        xp(j) += h;
        xm(j) -= h;
        const Eigen::VectorXd fp = f(xp);
        const Eigen::VectorXd fm = f(xm);
        if (j == 0) jac.resize(fp.size(), n);
        // divide by the representable step actually taken
        jac.col(j) = (fp - fm) / (xp(j) - xm(j));
    }
    return jac;
}

namespace {

bool eig_order(const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

void require_small_square(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1 || m.rows() > 4) {
        throw DomainError(fmt::format("eigen_small expects a square matrix of order 1..4, got {}x{}",
                                      m.rows(), m.cols()));
    }
    if (!m.allFinite()) throw DomainError("eigen_small: non-finite matrix entry");
}

}  // namespace

std::vector<EigenPair> eigen_pairs_small(const Eigen::MatrixXd& m) {
    require_small_square(m);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigenvalue iteration did not converge");
    }
    std::vector<EigenPair> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Eigen::VectorXcd vec = solver.eigenvectors().col(i);
        vec.normalize();
        out.push_back({solver.eigenvalues()(i), vec});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const EigenPair& a, const EigenPair& b) { return eig_order(a.value, b.value); });
    return out;
}

std::vector<std::complex<double>> eigen_small(const Eigen::MatrixXd& m) {
    require_small_square(m);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigenvalue iteration did not converge");
    }
    std::vector<std::complex<double>> ev(solver.eigenvalues().begin(), solver.eigenvalues().end());
    std::stable_sort(ev.begin(), ev.end(), eig_order);
    return ev;
}

double ces_constraint_residual(const ReducedStateCes& x, const CesParams& p) {
    return x.z - ces::implied_z(x.u, x.v, p);
}

Eigen::Vector4d ces_constraint_gradient(const ReducedStateCes& x, const CesParams& p) {
    const VectorFn g = [&p](const Eigen::VectorXd& y) {
        Eigen::VectorXd r(1);
        r(0) = ces_constraint_residual(ReducedStateCes::from_vector(y), p);
        return r;
    };
    return numeric_jacobian(g, x.to_vector()).row(0).transpose();
}

VectorFn reduced_system(const CesParams& p) {
    return [p](const Eigen::VectorXd& x) {
        return ces::reduced_rhs(ReducedStateCes::from_vector(x), p).to_vector();
    };
}

VectorFn reduced_system(const CdParams& p) {
    return [p](const Eigen::VectorXd& x) {
        return cd::reduced_rhs(ReducedStateCd::from_vector(x), p).to_vector();
    };
}

namespace {

void fill_spectrum(StabilityReport& rep) {
    const auto n = static_cast<int>(rep.jacobian.rows());
    rep.eigenvalues = eigen_small(rep.jacobian);
    rep.determinant = rep.jacobian.determinant();

    const double norm_inf = rep.jacobian.cwiseAbs().rowwise().sum().maxCoeff();
    double radius = 0.0;
    for (const auto& e : rep.eigenvalues) radius = std::max(radius, std::abs(e));
    rep.det_tol = 1e-6 * std::pow(std::max(1.0, norm_inf), n);
    rep.eig_zero_tol = 1e-6 * std::max(1.0, radius);

    rep.n_stable = rep.n_unstable = rep.n_center = 0;
    for (const auto& e : rep.eigenvalues) {
        if (e.real() < -rep.eig_zero_tol) {
            ++rep.n_stable;
        } else if (e.real() > rep.eig_zero_tol) {
            ++rep.n_unstable;
        } else {
            ++rep.n_center;
        }
    }

    std::complex<double> product = 1.0;
    for (const auto& e : rep.eigenvalues) product *= e;
    if (std::abs(product - rep.determinant) > 1e-6 * std::max(1.0, std::abs(rep.determinant))) {
        rep.findings.push_back(fmt::format("determinant {} disagrees with eigenvalue product {}",
                                           rep.determinant, product.real()));
    }
}

}  // namespace

StabilityReport stability_report(const CesParams& p, const SolverOptions& opts) {
    StabilityReport rep;
    rep.variant = Variant::ces;
    rep.steady_state = steady_state_ces(p, opts);
    const auto& ss = rep.steady_state;
    const ReducedStateCes x{ss.z_star, ss.q_star, ss.u_star, ss.v_star};

    rep.jacobian = numeric_jacobian(reduced_system(p), x.to_vector());
    fill_spectrum(rep);

    rep.constraint_residual = ces_constraint_residual(x, p);
    const Eigen::Vector4d g = ces_constraint_gradient(x, p);
    rep.null_vector_residual =
        (g.transpose() * rep.jacobian).norm() / (g.norm() * rep.jacobian.norm());

    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& e : rep.eigenvalues) min_abs = std::min(min_abs, std::abs(e));

    const bool det_zero = std::abs(rep.determinant) <= rep.det_tol;
    const bool eig_zero = min_abs <= rep.eig_zero_tol;
    if (det_zero && eig_zero) {
        rep.classification = Classification::degenerate;
    } else {
        rep.classification = Classification::indeterminate;
        rep.paper_deviation = true;
        rep.findings.push_back(fmt::format(
            "paper-deviation: reduced CES Jacobian is not singular (|det| = {}, min |lambda| = {})",
            std::abs(rep.determinant), min_abs));
    }
    if (!(rep.null_vector_residual <= kNullVectorTol)) {
        rep.paper_deviation = true;
        rep.findings.push_back(fmt::format(
            "paper-deviation: constraint gradient is not a left null vector (residual {})",
            rep.null_vector_residual));
    }
    return rep;
}

StabilityReport stability_report(const CdParams& p, const SolverOptions& opts) {
    StabilityReport rep;
    rep.variant = Variant::cd;
    rep.steady_state = steady_state_cd(p, opts);
    const auto& ss = rep.steady_state;
    const ReducedStateCd x{ss.z_star, ss.q_star, ss.u_star};

    rep.jacobian = numeric_jacobian(reduced_system(p), x.to_vector());
    fill_spectrum(rep);
    rep.constraint_residual = std::numeric_limits<double>::quiet_NaN();
    rep.null_vector_residual = std::numeric_limits<double>::quiet_NaN();

    if (rep.n_center > 0) {
        rep.classification = Classification::degenerate;
    } else if (rep.n_stable == 1) {
        rep.classification = Classification::saddle_path;
    } else if (rep.n_stable == 0) {
        rep.classification = Classification::unstable;
    } else {
        rep.classification = Classification::indeterminate;
    }
    return rep;
}

}  // namespace twosector
