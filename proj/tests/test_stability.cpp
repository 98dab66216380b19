#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/generators.hpp"
#include "twosector/ces_model.hpp"
#include "twosector/errors.hpp"
#include "twosector/stability.hpp"

using namespace twosector;

namespace {

const SolverOptions kPermissive = testing::permissive();

// Richardson extrapolation of two central-difference Jacobians.
Eigen::MatrixXd richardson_jacobian(const VectorFn& f, const Eigen::VectorXd& x, double rel_step) {
    const Eigen::MatrixXd coarse = numeric_jacobian(f, x, rel_step);
    const Eigen::MatrixXd fine = numeric_jacobian(f, x, 0.5 * rel_step);
    return (4.0 * fine - coarse) / 3.0;
}

void check_eigs(const std::vector<std::complex<double>>& got, std::vector<double> want, double tol) {
    REQUIRE(got.size() == want.size());
    std::sort(want.begin(), want.end(), std::greater<>());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(std::abs(got[i].real() - want[i]) <= tol);
        CHECK(std::abs(got[i].imag()) <= tol);
    }
}

void check_consistency(const StabilityReport& r) {
    std::complex<double> prod = 1.0;
    for (const auto& e : r.eigenvalues) prod *= e;
    CHECK(std::abs(prod - r.determinant) <= 1e-6 * std::max(1.0, std::abs(r.determinant)));
    CHECK(r.n_stable + r.n_unstable + r.n_center == r.jacobian.rows());
}

}  // namespace

TEST_CASE("jacobian of a linear map") {
    Eigen::Matrix3d A;
    A << 1, -2, 3, 0.5, 4, -1, 2, 0, 7;
    const VectorFn f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
    const Eigen::MatrixXd J = numeric_jacobian(f, Eigen::Vector3d(0.3, -2.0, 5.0));
    CHECK((J - A).cwiseAbs().maxCoeff() <= 1e-8);  // rounding: eps * abs(f) / h
}

TEST_CASE("jacobian of x^2 at 3") {
    const VectorFn f = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x.array().square(); };
    Eigen::VectorXd x(1);
    x << 3.0;
    CHECK(std::abs(numeric_jacobian(f, x)(0, 0) - 6.0) <= 1e-7);
}

TEST_CASE("eigenvalues of small matrices") {
    check_eigs(eigen_small(Eigen::Matrix3d::Identity()), {1, 1, 1}, 1e-14);
    Eigen::Matrix2d rot;
    rot << 0, 1, -1, 0;
    const auto ev = eigen_small(rot);
    CHECK(std::abs(ev[0] - std::complex<double>(0, 1)) < 1e-14);
    CHECK(std::abs(ev[1] - std::complex<double>(0, -1)) < 1e-14);

    Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();  // roots 1, 2, -3, 4
    companion.row(0) << 4, 7, -34, 24;
    companion(1, 0) = companion(2, 1) = companion(3, 2) = 1;
    check_eigs(eigen_small(companion), {4, 2, 1, -3}, 1e-10);

    Eigen::MatrixXd one(1, 1);
    one << -2.5;
    CHECK(eigen_small(one)[0] == std::complex<double>(-2.5, 0));
}

TEST_CASE("eigenvalues are sorted by real then imaginary part") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m.block<2, 2>(0, 0) << 1, 2, -2, 1;  // 1 +- 2i
    m(2, 2) = 3;
    m(3, 3) = -1;
    const auto ev = eigen_small(m);
    CHECK(ev[0].real() == doctest::Approx(3));
    CHECK(ev[1].imag() == doctest::Approx(2));
    CHECK(ev[2].imag() == doctest::Approx(-2));
    CHECK(ev[3].real() == doctest::Approx(-1));
}

TEST_CASE("eigen_small rejects oversize and non-finite input") {
    CHECK_THROWS_AS(eigen_small(Eigen::MatrixXd::Identity(5, 5)), DomainError);
    Eigen::Matrix2d bad;
    bad << 1, NAN, 0, 1;
    CHECK_THROWS_AS(eigen_small(bad), DomainError);
}

TEST_CASE("eigenvectors satisfy their eigen equation") {
    const auto rep = stability_report(benchmarks::cd_case1());
    for (const auto& pr : eigen_pairs_small(rep.jacobian)) {
        const Eigen::VectorXcd lhs = rep.jacobian.cast<std::complex<double>>() * pr.vector;
        CHECK((lhs - pr.value * pr.vector).norm() < 1e-10 * std::max(1.0, std::abs(pr.value)));
        CHECK(pr.vector.norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("CD case 1 is a saddle path") {
    const auto r = stability_report(benchmarks::cd_case1());
    CHECK(r.classification == Classification::saddle_path);
    CHECK(r.n_stable == 1);
    check_eigs(r.eigenvalues, {0.16, 0.89, -0.73}, 0.02);
    check_eigs(r.eigenvalues, {0.89173, 0.16001, -0.73172}, 1e-5);
    CHECK(r.determinant == doctest::Approx(-0.1044).epsilon(1e-3));
    check_consistency(r);
}

TEST_CASE("CD case 2 is a saddle path") {
    const auto r = stability_report(benchmarks::cd_case2());
    CHECK(r.classification == Classification::saddle_path);
    check_eigs(r.eigenvalues, {0.14, 1.19, -1.05}, 0.02);
    check_consistency(r);
}

TEST_CASE("canonical CES Jacobian is degenerate") {
    const auto r = stability_report(benchmarks::ces_canonical(), kPermissive);
    CHECK(r.classification == Classification::degenerate);
    CHECK_FALSE(r.paper_deviation);
    CHECK(std::abs(r.determinant) <= r.det_tol);
    check_eigs(r.eigenvalues, {0.465368027799, 0.189369505329, 0.0, -0.27599852247}, 1e-6);
    CHECK(r.null_vector_residual <= kNullVectorTol);
    CHECK(std::abs(r.constraint_residual) <= 1e-12 * r.steady_state.z_star);
    check_consistency(r);
}

TEST_CASE("central differences agree with Richardson extrapolation") {
    const auto check = [](const VectorFn& f, const Eigen::VectorXd& x) {
        const Eigen::MatrixXd J = numeric_jacobian(f, x);
        const Eigen::MatrixXd R = richardson_jacobian(f, x, 1e-3);
        for (Eigen::Index i = 0; i < J.rows(); ++i) {
            for (Eigen::Index j = 0; j < J.cols(); ++j) {
                CHECK(std::abs(J(i, j) - R(i, j)) <= 1e-6 * std::max(1.0, std::abs(R(i, j))));
            }
        }
    };
    for (const auto& p : {benchmarks::cd_case1(), benchmarks::cd_case2()}) {
        const auto ss = steady_state_cd(p);
        check(reduced_system(p), ReducedStateCd{ss.z_star, ss.q_star, ss.u_star}.to_vector());
    }
    const CesParams c = benchmarks::ces_canonical();
    const auto ss = steady_state_ces(c, kPermissive);
    check(reduced_system(c), ReducedStateCes{ss.z_star, ss.q_star, ss.u_star, ss.v_star}.to_vector());
}

TEST_CASE("constraint residual is linear in z and zero on the constraint") {
    const CesParams p = benchmarks::ces_canonical();
    testing::Draw d(41);
    for (int i = 0; i < 100; ++i) {
        const auto [u, v] = d.shares_apart();
        const double z = ces::implied_z(u, v, p);
        const ReducedStateCes x{z, 0.2, u, v};
        CHECK(std::abs(ces_constraint_residual(x, p)) <= 1e-12 * z);
        CHECK(ces_constraint_residual({z + 1.0, 0.2, u, v}, p) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("random strict CES sets are degenerate") {
    int checked = 0;
    for (const auto& [p, ss] : testing::valid_ces_sets(25, 42)) {
        const auto r = stability_report(p);
        CHECK_MESSAGE(r.classification == Classification::degenerate, r.findings.size());
        CHECK(std::abs(r.determinant) <= r.det_tol);
        CHECK(r.null_vector_residual <= kNullVectorTol);
        CHECK_FALSE(r.paper_deviation);
        check_consistency(r);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("random CD sets: saddle-path share is reported") {
    int saddle = 0;
    const auto sets = testing::valid_cd_sets(20, 43);
    for (const auto& [p, ss] : sets) {
        const auto r = stability_report(p);
        check_consistency(r);
        saddle += r.classification == Classification::saddle_path ? 1 : 0;
    }
    MESSAGE("saddle_path in " << saddle << " of " << sets.size() << " random CD sets");
}
