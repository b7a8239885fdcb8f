#include <doctest.h>

#include <cmath>
#include <vector>

#include "arakelov/exceptions.hpp"
#include "arakelov/rng.hpp"
#include "arakelov/suite.hpp"
#include "arakelov/surface.hpp"
#include "arakelov/theta.hpp"
#include "oracles.hpp"

using namespace arakelov;

TEST_CASE("theta series anchors") {
    const PeriodMatrix pm_i = PeriodMatrix::from_tau(cd(0, 1));

    SUBCASE("theta(0; i) against direct summation") {
        const ThetaValue v = theta_series(JacobianPoint::scalar(cd(0, 0)), pm_i);
        const cd naive = oracles::naive_theta({cd(0, 0)}, pm_i, 30);
        CHECK(std::abs(v.value - naive) < 1e-13);
        CHECK(v.value.real() == doctest::Approx(1.0864348113).epsilon(1e-9));
        CHECK(v.norm == doctest::Approx(1.0864348113).epsilon(1e-9));
        CHECK(v.tail_bound <= 1e-12);
    }
    SUBCASE("odd characteristic zero") {
        const ThetaValue v = theta_series(JacobianPoint::scalar(cd(0.5, 0.5)), pm_i);
        CHECK(std::abs(v.value) < 1e-10);
        CHECK(v.norm < 1e-10);
    }
    SUBCASE("diagonal period matrix factorizes") {
        const PeriodMatrix pm2 =
            PeriodMatrix::validate({{cd(0, 1), cd(0, 0)}, {cd(0, 0), cd(0, 1)}});
        const double t2 = theta_norm(JacobianPoint({cd(0, 0), cd(0, 0)}), pm2);
        const double t1 = theta_norm(JacobianPoint::scalar(cd(0, 0)), pm_i);
        CHECK(t2 == doctest::Approx(t1 * t1).epsilon(1e-10));
        CHECK(t2 == doctest::Approx(1.18034).epsilon(1e-5));
    }
    SUBCASE("block-diagonal period matrix factorizes") {
        // 3 = 1 + 2 block structure with generic blocks.
        const cd tau(0.3, 1.2);
        const std::vector<std::vector<cd>> block2 = {{cd(-0.1, 0.9), cd(0.2, 0.3)},
                                                     {cd(0.2, 0.3), cd(0.4, 1.1)}};
        const PeriodMatrix pm1 = PeriodMatrix::from_tau(tau);
        const PeriodMatrix pm2 = PeriodMatrix::validate(block2);
        const PeriodMatrix pm3 = PeriodMatrix::validate(
            {{tau, cd(0, 0), cd(0, 0)},
             {cd(0, 0), block2[0][0], block2[0][1]},
             {cd(0, 0), block2[1][0], block2[1][1]}});
        const double whole = theta_norm(JacobianPoint({cd(0, 0), cd(0, 0), cd(0, 0)}), pm3);
        const double part1 = theta_norm(JacobianPoint::scalar(cd(0, 0)), pm1);
        const double part2 = theta_norm(JacobianPoint({cd(0, 0), cd(0, 0)}), pm2);
        CHECK(whole == doctest::Approx(part1 * part2).epsilon(1e-10));
    }
}

TEST_CASE("theta against the naive box oracle") {
    SeededSampler sampler(314);
    for (int g = 1; g <= 2; ++g) {
        for (int trial = 0; trial < 100; ++trial) {
            SeededSampler s = sampler.split(static_cast<std::uint64_t>(g * 1000 + trial));
            const PeriodMatrix pm = random_period_matrix(g, s);
            const JacobianPoint z = uniform_jacobian_sample(pm, s);
            const ThetaValue fast = theta_series(z, pm);
            const cd naive = oracles::naive_theta(z.z, pm, 30);
            const double norm_naive = oracles::naive_theta_norm(z.z, pm, 30);
            CHECK(std::abs(fast.norm - norm_naive) < 1e-12);
            // The raw value scales with exp(pi y^T Y^{-1} y); compare
            // relative to that scale (the naive accumulation itself
            // round-trips through terms of this size).
            double quad = 0.0;
            for (int i = 0; i < g; ++i) {
                double row = 0.0;
                for (int j = 0; j < g; ++j) {
                    row += pm.y_inverse(i, j) * z.z[static_cast<size_t>(j)].imag();
                }
                quad += row * z.z[static_cast<size_t>(i)].imag();
            }
            const double scale = std::max(1.0, std::exp(oracles::kPi * quad));
            CHECK(std::abs(fast.value - naive) < 1e-12 * scale);
            // The certified tail bound covers the truncation error (with
            // a small roundoff allowance on top).
            CHECK(std::abs(fast.norm - norm_naive) <= fast.tail_bound + 5e-13);
        }
    }
}

TEST_CASE("high genus support") {
    SUBCASE("diagonal factorization up to the genus cap") {
        const double t1 = theta_norm(JacobianPoint::scalar(cd(0, 0)),
                                     PeriodMatrix::from_tau(cd(0, 1)));
        for (int g : {4, 5, 6}) {
            std::vector<std::vector<cd>> omega(static_cast<size_t>(g),
                                               std::vector<cd>(static_cast<size_t>(g)));
            for (size_t i = 0; i < static_cast<size_t>(g); ++i) omega[i][i] = cd(0, 1);
            const PeriodMatrix pm = PeriodMatrix::validate(omega);
            const double whole =
                theta_norm(JacobianPoint(std::vector<cd>(static_cast<size_t>(g))), pm);
            CHECK(whole == doctest::Approx(std::pow(t1, g)).epsilon(1e-10));
        }
    }
    SUBCASE("periodicity and evenness at genus 6") {
        SeededSampler sampler(606);
        for (int trial = 0; trial < 5; ++trial) {
            SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
            const PeriodMatrix pm = random_period_matrix(6, s);
            const JacobianPoint z = uniform_jacobian_sample(pm, s);
            const double base = theta_norm(z, pm);
            JacobianPoint shifted;
            shifted.z = z.z;
            shifted.z[2] += pm.omega(2, 2) + cd(1.0, 0.0);
            shifted.z[0] += pm.omega(0, 2);
            shifted.z[1] += pm.omega(1, 2);
            shifted.z[3] += pm.omega(3, 2);
            shifted.z[4] += pm.omega(4, 2);
            shifted.z[5] += pm.omega(5, 2);
            CHECK(theta_norm(shifted, pm) == doctest::Approx(base).epsilon(1e-10));
            JacobianPoint negated;
            negated.z.resize(6);
            for (size_t i = 0; i < 6; ++i) negated.z[i] = -z.z[i];
            CHECK(theta_norm(negated, pm) == doctest::Approx(base).epsilon(1e-10));
        }
    }
}

TEST_CASE("theta norm symmetries") {
    SeededSampler sampler(99);
    const PeriodMatrix pm = PeriodMatrix::from_tau(cd(0.3, 1.4));
    for (int trial = 0; trial < 50; ++trial) {
        SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
        const JacobianPoint z = uniform_jacobian_sample(pm, s);
        const double base = theta_norm(z, pm);
        // z + Omega m + n.
        const double m = std::floor(s.next_unit() * 7.0) - 3.0;
        const double n = std::floor(s.next_unit() * 7.0) - 3.0;
        const JacobianPoint shifted =
            JacobianPoint::scalar(z.z[0] + cd(n, 0.0) + pm.omega(0, 0) * m);
        CHECK(theta_norm(shifted, pm) == doctest::Approx(base).epsilon(1e-10));
        const JacobianPoint negated = JacobianPoint::scalar(-z.z[0]);
        CHECK(theta_norm(negated, pm) == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("theta log form is consistent with the raw value") {
    SeededSampler sampler(55);
    const PeriodMatrix pm = PeriodMatrix::from_tau(cd(-0.2, 0.9));
    for (int trial = 0; trial < 20; ++trial) {
        SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
        const JacobianPoint z = uniform_jacobian_sample(pm, s);
        const ThetaValue v = theta_series(z, pm);
        const ThetaLog lg = theta_log(z, pm);
        const cd rebuilt = lg.phase * std::exp(lg.log_abs);
        CHECK(std::abs(rebuilt - v.value) < 1e-10 * std::max(1.0, std::abs(v.value)));
        CHECK(std::exp(lg.log_norm) == doctest::Approx(v.norm).epsilon(1e-12));
    }
}

TEST_CASE("pic0 norm at genus 1") {
    const EllipticSurface surface(cd(0, 1));
    SUBCASE("vanishes exactly at the origin") {
        CHECK(theta_norm_pic0(cd(0, 0), surface) < 1e-10);
    }
    SUBCASE("positive away from the origin") {
        CHECK(theta_norm_pic0(cd(0.5, 0.0), surface) > 0.1);
        // The other two-torsion points are not zeros.
        CHECK(theta_norm_pic0(cd(0.0, 0.5), surface) > 0.1);
        CHECK(theta_norm_pic0(cd(0.5, 0.5), surface) > 0.1);
    }
    SUBCASE("even") {
        SeededSampler s(17);
        for (int trial = 0; trial < 20; ++trial) {
            const cd w(s.next_unit(), s.next_unit() * 0.9);
            CHECK(theta_norm_pic0(-w, surface) ==
                  doctest::Approx(theta_norm_pic0(w, surface)).epsilon(1e-10));
        }
    }
}

TEST_CASE("truncation radius guard") {
    CHECK_THROWS_AS(theta_norm(JacobianPoint::scalar(cd(0, 0)),
                               PeriodMatrix::from_tau(cd(0, 1e-6))),
                    TruncationRadiusError);
}

TEST_CASE("c_{g,rho}") {
    SUBCASE("hand values") {
        CHECK(c_g_rho(1, 1.0).value == doctest::Approx(std::log(1.5)).epsilon(1e-14));
        CHECK(c_g_rho(1, 1.0).value == doctest::Approx(0.405465).epsilon(1e-5));
        const double expected4 = std::log(3.0) +
                                 2.0 * std::log(6.0 / (oracles::kPi * std::sqrt(3.0))) +
                                 1.25 * std::log(2.5);
        CHECK(c_g_rho(4, 0.25).value == doctest::Approx(expected4).epsilon(1e-14));
        CHECK(c_g_rho(4, 0.25).value == doctest::Approx(2.4395).epsilon(1e-3));
    }
    SUBCASE("epsilon switch at g = 4") {
        CHECK(c_g_rho(3, 1.0 / 3.0).epsilon_g == 0);
        CHECK(c_g_rho(4, 0.25).epsilon_g == 1);
        // For g <= 3 the middle term is absent.
        const double no_middle =
            std::log(2.5) + (3.0 * (1.0 + 1.0 / 3.0) / 4.0) * std::log((4.0 / 3.0) / (2.0 / 3.0));
        CHECK(c_g_rho(3, 1.0 / 3.0).value == doctest::Approx(no_middle).epsilon(1e-14));
    }
    SUBCASE("domain") {
        CHECK_THROWS_AS(c_g_rho(0, 1.0), InvalidInputsError);
        CHECK_THROWS_AS(c_g_rho(2, 0.0), InvalidInputsError);
    }
}

TEST_CASE("theta upper bound report") {
    const PeriodMatrix pm = PeriodMatrix::from_tau(cd(0, 1));
    SUBCASE("vanishing norm gives minus-infinity margin") {
        const ThetaBoundReport rep =
            check_theta_upper_bound(JacobianPoint::scalar(cd(0.5, 0.5)), pm, -0.26, 0.002, 1.0);
        CHECK(rep.margin < -10.0);
        CHECK_FALSE(rep.violation);
    }
    SUBCASE("small random sweep has no violations") {
        SeededSampler sampler(5);
        for (int trial = 0; trial < 100; ++trial) {
            SeededSampler s = sampler.split(static_cast<std::uint64_t>(trial));
            const JacobianPoint z = uniform_jacobian_sample(pm, s);
            const ThetaBoundReport rep =
                check_theta_upper_bound(z, pm, oracles::closed_form_hx(cd(0, 1)), 1e-9, 1.0);
            CHECK_FALSE(rep.violation);
        }
    }
}
