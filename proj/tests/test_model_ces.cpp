#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/generators.hpp"
#include "twosector/bgp.hpp"
#include "twosector/ces_model.hpp"
#include "twosector/errors.hpp"

using namespace twosector;
using twosector::testing::Draw;
using twosector::testing::rel_diff;

namespace {

const CesParams kCanon = benchmarks::ces_canonical();

CesParams with_psi(double psi1, double psi2) {
    CesParams p = kCanon;
    p.psi1 = psi1;
    p.psi2 = psi2;
    return p;
}

// Both sides of the first-order conditions for u and v, evaluated from the
// raw aggregates with mu/lambda taken from the closed-form ratio.
struct FocSides {
    double u_lhs, u_rhs, v_lhs, v_rhs;
};

FocSides foc_sides(double k, double h, double u, double v, const CesParams& p) {
    const double bar1 = p.alpha1 * std::pow(k * v, p.psi1) + (1 - p.alpha1) * std::pow(h * u, p.psi1);
    const double bar2 = p.alpha2 * std::pow(k * (1 - v), p.psi2) +
                        (1 - p.alpha2) * std::pow(h * (1 - u), p.psi2);
    const double mu_over_lambda = ces::costates(u, v, p).ratio_mu_lambda;
    const double a2 = p.A2 * std::pow(bar2, 1 / p.psi2 - 1) * mu_over_lambda;
    const double a1 = p.A1 * std::pow(bar1, 1 / p.psi1 - 1);
    return {a2 * (1 - p.alpha2) * std::pow(h * (1 - u), p.psi2) / (1 - u),
            a1 * (1 - p.alpha1) * std::pow(h * u, p.psi1) / u,
            a2 * p.alpha2 * std::pow(k * (1 - v), p.psi2) / (1 - v),
            a1 * p.alpha1 * std::pow(k * v, p.psi1) / v};
}

}  // namespace

TEST_CASE("theta equals one for equal distribution parameters") {
    CesParams p = kCanon;
    p.alpha2 = p.alpha1;
    CHECK(ces::theta(p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("theta of the canonical set is (3/11)^2.5") {
    CHECK(rel_diff(ces::theta(kCanon), 0.038843774469453236618) < 1e-14);
    CHECK(rel_diff(ces::theta(kCanon), std::pow(3.0 / 11.0, 2.5)) < 1e-14);
}

TEST_CASE("theta rejects equal substitution parameters") {
    CHECK_THROWS_AS(ces::theta(with_psi(0.3, 0.3)), ParameterError);
}

TEST_CASE("w and tau at symmetric shares") {
    const auto wt = ces::w_tau(0.5, 0.5, kCanon);
    CHECK(wt.w == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(wt.tau == doctest::Approx(1.0).epsilon(1e-15));
    const auto wt2 = ces::w_tau(0.3, 0.3, kCanon);
    CHECK(wt2.w == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("w by hand evaluation") {
    const auto wt = ces::w_tau(0.5, 0.75, with_psi(0.5, -0.5));
    CHECK(rel_diff(wt.w, std::pow(3.0, 1.5)) < 1e-14);
    CHECK(rel_diff(wt.tau, 3.0) < 1e-14);
}

TEST_CASE("w rejects boundary shares") {
    CHECK_THROWS_AS(ces::w_tau(0.0, 0.5, kCanon), DomainError);
    CHECK_THROWS_AS(ces::w_tau(0.5, 1.0, kCanon), DomainError);
    CHECK_THROWS_AS(ces::w_tau(1.0, 0.5, kCanon), DomainError);
}

TEST_CASE("tau round trip over random shares") {
    Draw d(11);
    for (int i = 0; i < 200; ++i) {
        const auto [u, v] = d.shares_apart(0.0);
        const auto wt = ces::w_tau(u, v, kCanon);
        CHECK(rel_diff(wt.tau, v * (1 - u) / (u * (1 - v))) < 1e-12);
    }
}

TEST_CASE("shares at reference points") {
    const double th = ces::theta(kCanon);
    CHECK(ces::shares(1.0 / th, kCanon).P1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rel_diff(ces::shares(1.0, kCanon).P2,
                   kCanon.alpha2 * std::pow(th, kCanon.psi2) + 1 - kCanon.alpha2) < 1e-14);
    const auto s = ces::shares(2.0, kCanon);
    CHECK(rel_diff(s.P1, 0.69991611333561232118) < 1e-13);
    CHECK(rel_diff(s.P2, 1.3356170427670341249) < 1e-13);
}

TEST_CASE("production collapses when effective inputs coincide") {
    const auto y = ces::production(2.0, 3.0, 0.4, 0.6, kCanon);  // kv = hu = 1.2
    CHECK(rel_diff(y.y1, kCanon.A1 * 1.2) < 1e-14);
}

TEST_CASE("production rejects non-positive inputs") {
    CHECK_THROWS_AS(ces::production(-1.0, 1.0, 0.5, 0.4, kCanon), DomainError);
    CHECK_THROWS_AS(ces::production(1.0, 0.0, 0.5, 0.4, kCanon), DomainError);
}

TEST_CASE("production is homogeneous of degree one") {
    Draw d(12);
    for (int i = 0; i < 200; ++i) {
        const CesParams p = d.ces_strict();
        const double k = d.log_uniform(0.01, 100), h = d.log_uniform(0.01, 100);
        const auto [u, v] = d.shares_apart(0.0);
        const double lam = d.log_uniform(0.1, 10);
        const auto y = ces::production(k, h, u, v, p);
        const auto ys = ces::production(lam * k, lam * h, u, v, p);
        CHECK(rel_diff(ys.y1, lam * y.y1) < 1e-12);
        CHECK(rel_diff(ys.y2, lam * y.y2) < 1e-12);
    }
}

TEST_CASE("aux golden values at (0.6, 0.4)") {
    const auto a = ces::aux(0.6, 0.4, kCanon);
    CHECK(rel_diff(a.w, 0.08779149519890260631) < 1e-13);
    CHECK(rel_diff(a.tau, 0.44444444444444444444) < 1e-13);
    CHECK(rel_diff(a.P1, 0.49077757565341492355) < 1e-13);
    CHECK(rel_diff(a.P2, 1.7418489994844038716) < 1e-13);
    CHECK(rel_diff(a.D_ces, -3.4917136497455895227) < 1e-12);
    CHECK(rel_diff(a.P_ces, 4.2870701077159511944) < 1e-12);
    CHECK(rel_diff(a.Q, 0.85486042912128211324) < 1e-13);
    CHECK(rel_diff(a.R, -0.15891319993125384954) < 1e-12);
    CHECK(rel_diff(a.T, -0.16553458326172275994) < 1e-12);
    CHECK(rel_diff(a.G1, 1.04) < 1e-14);
    CHECK(rel_diff(a.G2, 0.96) < 1e-14);
    CHECK(rel_diff(a.P_eps, 0.15184448486931701529) < 1e-12);
}

TEST_CASE("aux G1 tends to 1 - psi2 as u tends to 1") {
    const auto a = ces::aux(1.0 - 1e-12, 0.4, kCanon);
    CHECK(a.G1 == doctest::Approx(1.0 - kCanon.psi2).epsilon(1e-11));
}

TEST_CASE("aux is singular on the u = v band") {
    CHECK_THROWS_AS(ces::aux(0.5, 0.5, kCanon), SingularityError);
    CHECK_THROWS_AS(ces::aux(0.5, 0.5 + 1e-9, kCanon), SingularityError);
    CHECK_NOTHROW(ces::aux(0.5, 0.5 + 1e-6, kCanon));
    CHECK_THROWS_AS(ces::full_rhs({1, 1, 0.2, 0.4, 0.4}, kCanon), SingularityError);
}

TEST_CASE("costate gap matches the auxiliary P") {
    Draw d(13);
    for (int i = 0; i < 200; ++i) {
        const CesParams p = d.ces_strict();
        const auto [u, v] = d.shares_apart();
        const auto cs = ces::costates(u, v, p);
        const auto a = ces::aux(u, v, p);
        CHECK(std::abs((cs.g_mu - cs.g_lambda) - a.P_ces) <= 1e-12 * std::max(1.0, std::abs(a.P_ces)));
        CHECK(cs.ratio_mu_lambda > 0.0);
    }
}

TEST_CASE("first-order conditions hold with the closed-form costate ratio") {
    Draw d(14);
    for (int i = 0; i < 200; ++i) {
        const CesParams p = d.ces_strict();
        const auto [u, v] = d.shares_apart();
        const double h = d.log_uniform(0.1, 10);
        const double k = h * ces::implied_z(u, v, p);
        const auto s = foc_sides(k, h, u, v, p);
        CHECK(rel_diff(s.u_lhs, s.u_rhs) < 1e-10);
        CHECK(rel_diff(s.v_lhs, s.v_rhs) < 1e-10);
    }
}

TEST_CASE("consumption growth equals -g_lambda / epsilon") {
    Draw d(15);
    for (int i = 0; i < 200; ++i) {
        const CesParams p = d.ces_strict();
        const auto [u, v] = d.shares_apart();
        const FullState x{d.log_uniform(0.1, 10), d.log_uniform(0.1, 10), d.log_uniform(0.01, 1), u, v};
        const FullState dx = ces::full_rhs(x, p);
        const double gl = ces::costates(u, v, p).g_lambda;
        CHECK(std::abs(dx.c / x.c + gl / p.epsilon) <= 1e-14 * std::max(1.0, std::abs(gl)));
    }
}

TEST_CASE("full system growth rates are scale invariant") {
    Draw d(16);
    for (int i = 0; i < 100; ++i) {
        const CesParams p = d.ces_strict();
        const auto [u, v] = d.shares_apart();
        const FullState x{d.log_uniform(0.1, 10), d.log_uniform(0.1, 10), d.log_uniform(0.01, 1), u, v};
        const double lam = d.log_uniform(0.1, 10);
        const FullState xs{lam * x.k, lam * x.h, lam * x.c, u, v};
        const FullState a = ces::full_rhs(x, p);
        const FullState b = ces::full_rhs(xs, p);
        CHECK(rel_diff(a.k / x.k, b.k / xs.k) < 1e-12);
        CHECK(rel_diff(a.h / x.h, b.h / xs.h) < 1e-12);
        CHECK(rel_diff(a.c / x.c, b.c / xs.c) < 1e-12);
        CHECK(rel_diff(a.u, b.u) < 1e-12);
        CHECK(rel_diff(a.v, b.v) < 1e-12);
    }
}

TEST_CASE("consumption enters capital accumulation linearly") {
    const FullState x{3.0, 1.5, 0.4, 0.6, 0.4};
    const FullState a = ces::full_rhs(x, kCanon);
    FullState y = x;
    y.c += 0.1;
    const FullState b = ces::full_rhs(y, kCanon);
    CHECK(a.k - b.k == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("reduced system matches the full system") {
    Draw d(17);
    for (int i = 0; i < 200; ++i) {
        const CesParams p = d.ces_strict();
        const auto [u, v] = d.shares_apart();
        const FullState x{d.log_uniform(0.1, 10), d.log_uniform(0.1, 10), d.log_uniform(0.01, 1), u, v};
        const FullState dx = ces::full_rhs(x, p);
        const ReducedStateCes r{x.k / x.h, x.c / x.k, u, v};
        const ReducedStateCes dr = ces::reduced_rhs(r, p);
        CHECK(rel_diff(dr.z / r.z, dx.k / x.k - dx.h / x.h) < 1e-12);
        CHECK(rel_diff(dr.q / r.q, dx.c / x.c - dx.k / x.k) < 1e-12);
        CHECK(rel_diff(dr.u, dx.u) < 1e-14);
        CHECK(rel_diff(dr.v, dx.v) < 1e-14);
    }
}

TEST_CASE("reduced system: q enters z' linearly") {
    const ReducedStateCes x{3.0, 0.2, 0.6, 0.4};
    ReducedStateCes y = x;
    y.q += 0.05;
    const double dz = ces::reduced_rhs(y, kCanon).z - ces::reduced_rhs(x, kCanon).z;
    CHECK(dz == doctest::Approx(-0.05 * x.z).epsilon(1e-12));
}

TEST_CASE("full and reduced systems are stationary at the steady state") {
    const SteadyState ss = steady_state_ces(kCanon, testing::permissive());
    const FullState x{ss.z_star, 1.0, ss.q_star * ss.z_star, ss.u_star, ss.v_star};
    const FullState dx = ces::full_rhs(x, kCanon);
    CHECK(std::abs(dx.k / x.k - ss.r_star) < 1e-9);
    CHECK(std::abs(dx.h / x.h - ss.r_star) < 1e-9);
    CHECK(std::abs(dx.c / x.c - ss.r_star) < 1e-9);
    CHECK(std::abs(dx.u) < 1e-9);
    CHECK(std::abs(dx.v) < 1e-9);
    const auto gy = ces::output_growth(x, dx, kCanon);
    CHECK(std::abs(gy.y1 - ss.r_star) < 1e-9);
    CHECK(std::abs(gy.y2 - ss.r_star) < 1e-9);

    const ReducedStateCes r{ss.z_star, ss.q_star, ss.u_star, ss.v_star};
    CHECK(ces::reduced_rhs(r, kCanon).to_vector().norm() < 1e-9);

    const auto cs = ces::costates(ss.u_star, ss.v_star, kCanon);
    CHECK(std::abs(cs.g_lambda - cs.g_mu) < 1e-10);
    CHECK(std::abs(cs.g_lambda + kCanon.epsilon * ss.r_star) < 1e-10);
}

TEST_CASE("output growth matches a finite difference of production") {
    Draw d(18);
    for (int i = 0; i < 50; ++i) {
        const CesParams p = d.ces_strict();
        const auto [u, v] = d.shares_apart(0.05);
        const FullState x{d.log_uniform(0.5, 2), d.log_uniform(0.5, 2), 0.1, u, v};
        const FullState dx = ces::full_rhs(x, p);
        // step scaled so no share moves by more than 1e-6 of its distance to 0 or 1
        const double rate = std::max({1.0, std::abs(dx.u) / std::min(u, 1 - u), std::abs(dx.v) / std::min(v, 1 - v),
                                      std::abs(dx.k / x.k), std::abs(dx.h / x.h)});
        const double dt = 1e-6 / rate;
        const auto at = [&](double s) {
            return ces::production(x.k + s * dx.k, x.h + s * dx.h, x.u + s * dx.u, x.v + s * dx.v, p);
        };
        const auto yp = at(dt), ym = at(-dt), y0 = at(0);
        const auto g = ces::output_growth(x, dx, p);
        CHECK(std::abs((yp.y1 - ym.y1) / (2 * dt * y0.y1) - g.y1) < 1e-6 * std::max(1.0, std::abs(g.y1)));
        CHECK(std::abs((yp.y2 - ym.y2) / (2 * dt * y0.y2) - g.y2) < 1e-6 * std::max(1.0, std::abs(g.y2)));
    }
}
